#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qest/bound.hpp"
#include "qest/partition.hpp"
#include "qest/selector.hpp"
#include "qest/simulator.hpp"
#include "qest/synthesis.hpp"

namespace qest {

struct SynthSettings {
  std::uint32_t m_per_depth = 2;
  std::uint32_t restarts = 4;
  std::uint32_t beam_width = 3;
  std::uint32_t reroot_every = 3;
  double exact_tol = 1e-5;
  int opt_iters = 200;
};

struct PipelineConfig {
  std::string input_path;
  std::uint32_t max_block_size = 4;
  double eps_per_block = 0.02;  // threshold = eps_per_block * block count
  std::size_t num_approximations = 16;
  SynthSettings synth;
  AnnealConfig anneal;
  std::vector<double> noise_levels = {0.01, 0.005, 0.001};
  std::size_t shots = 8192;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string cache_dir;  // empty: <out_dir>/cache
  unsigned workers = 0;   // 0: hardware concurrency; QEST_WORKERS caps
};

struct MemberReport {
  std::size_t index = 0;
  std::size_t cnots = 0;
  double reduction_percent = 0.0;
  double epsilon_sum = 0.0;
  std::optional<double> actual_hs;  // present when width fits the guard
  double ideal_tvd = 0.0;
};

struct NoisyReport {
  double level = 0.0;  // fraction, e.g. 0.01 for 1%
  double p1 = 0.0;
  double p2 = 0.0;
  std::size_t shots = 0;
  double baseline_tvd = 0.0;
  double averaged_tvd = 0.0;
};

struct RunReport {
  std::uint32_t width = 0;
  std::size_t baseline_cnots = 0;
  std::size_t block_count = 0;
  double eps_threshold = 0.0;
  bool infeasible = false;  // selection produced no members
  std::vector<MemberReport> members;
  bool bound_satisfied_all = true;
  double ideal_averaged_tvd = 0.0;
  double ideal_averaged_jsd = 0.0;
  std::vector<NoisyReport> noisy;
  // Minimum reachable epsilon sum, written even when selection is
  // infeasible so the bound diagnostics survive.
  double min_epsilon_sum = 0.0;
};

struct StageTimes {
  double parse_s = 0.0;
  double partition_s = 0.0;
  double synth_s = 0.0;
  double select_s = 0.0;
  double bound_s = 0.0;
  double simulate_s = 0.0;
  double total_s = 0.0;
};

/// Effective worker count: `requested` (0 = hardware), capped by the
/// QEST_WORKERS environment variable when set.
unsigned effective_workers(unsigned requested);

/// Synthesize all blocks of a partition on a bounded worker pool, with
/// content-hash caching when cache_dir is non-empty. cache_hits (optional)
/// reports how many blocks were served from cache.
std::vector<BlockSolutions> synthesize_partition(const Partition& partition,
                                                 const SynthSettings& synth,
                                                 std::uint64_t seed,
                                                 unsigned workers,
                                                 const std::string& cache_dir,
                                                 std::size_t* cache_hits = nullptr);

/// Full stage chain: parse, partition, synthesize, select, verify bound,
/// simulate; writes all artifacts under cfg.out_dir. An empty selection is
/// reported via RunReport::infeasible, not an exception.
RunReport run_pipeline(const PipelineConfig& cfg, StageTimes* times = nullptr);

}  // namespace qest
