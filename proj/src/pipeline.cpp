#include "qest/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "qest/error.hpp"
#include "qest/parallel.hpp"
#include "qest/qasm.hpp"
#include "qest/rng.hpp"
#include "qest/serialize.hpp"

namespace qest {

namespace fs = std::filesystem;
using nlohmann::json;

unsigned effective_workers(unsigned requested) {
  unsigned n = requested > 0 ? requested : std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("QEST_WORKERS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0 && static_cast<unsigned>(cap) < n)
      n = static_cast<unsigned>(cap);
  }
  return n;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

NoiseModel noise_from_level(double level) {
  // Two-qubit error sits an order of magnitude above one-qubit error.
  return NoiseModel{level / 10.0, level, 0.0};
}

std::uint64_t double_bits(double d) {
  std::uint64_t u;
  static_assert(sizeof(u) == sizeof(d));
  std::memcpy(&u, &d, sizeof(u));
  return u;
}

json member_to_json(const MemberReport& m) {
  json j{{"index", m.index},
         {"cnots", m.cnots},
         {"reduction_percent", m.reduction_percent},
         {"epsilon_sum", m.epsilon_sum},
         {"ideal_tvd", m.ideal_tvd}};
  if (m.actual_hs) j["actual_hs"] = *m.actual_hs;
  return j;
}

json report_to_json(const RunReport& r, const PipelineConfig& cfg) {
  json j;
  j["config"] = {{"input", cfg.input_path},
                 {"max_block_size", cfg.max_block_size},
                 {"eps_per_block", cfg.eps_per_block},
                 {"num_approximations", cfg.num_approximations},
                 {"shots", cfg.shots},
                 {"seed", cfg.seed},
                 {"noise_levels", cfg.noise_levels},
                 {"synth",
                  {{"m_per_depth", cfg.synth.m_per_depth},
                   {"restarts", cfg.synth.restarts},
                   {"beam_width", cfg.synth.beam_width},
                   {"reroot_every", cfg.synth.reroot_every},
                   {"exact_tol", cfg.synth.exact_tol},
                   {"opt_iters", cfg.synth.opt_iters}}},
                 {"anneal",
                  {{"initial_temperature", cfg.anneal.initial_temperature},
                   {"cooling", cfg.anneal.cooling},
                   {"steps", cfg.anneal.steps},
                   {"reanneal_every", cfg.anneal.reanneal_every}}}};
  j["width"] = r.width;
  j["baseline_cnots"] = r.baseline_cnots;
  j["block_count"] = r.block_count;
  j["eps_threshold"] = r.eps_threshold;
  j["min_epsilon_sum"] = r.min_epsilon_sum;
  j["infeasible"] = r.infeasible;
  j["bound_satisfied_all"] = r.bound_satisfied_all;
  j["members"] = json::array();
  for (const auto& m : r.members) j["members"].push_back(member_to_json(m));
  if (!r.infeasible) {
    j["ideal"] = {{"averaged_tvd", r.ideal_averaged_tvd},
                  {"averaged_jsd", r.ideal_averaged_jsd}};
    j["noisy"] = json::array();
    for (const auto& nr : r.noisy) {
      j["noisy"].push_back({{"level", nr.level},
                            {"p1", nr.p1},
                            {"p2", nr.p2},
                            {"shots", nr.shots},
                            {"baseline_tvd", nr.baseline_tvd},
                            {"averaged_tvd", nr.averaged_tvd}});
    }
  }
  return j;
}

}  // namespace

std::vector<BlockSolutions> synthesize_partition(const Partition& partition,
                                                 const SynthSettings& synth,
                                                 std::uint64_t seed,
                                                 unsigned workers,
                                                 const std::string& cache_dir,
                                                 std::size_t* cache_hits) {
  const std::size_t count = partition.blocks.size();
  std::vector<BlockSolutions> out(count);
  std::atomic<std::size_t> hits{0};
  if (!cache_dir.empty()) fs::create_directories(cache_dir);

  // Blocks are the parallel unit; leftover threads go into each block's
  // per-depth optimization batches (deterministic either way).
  const unsigned pool = effective_workers(workers);
  const unsigned across = static_cast<unsigned>(
      std::min<std::size_t>(pool, std::max<std::size_t>(count, 1)));
  const unsigned within = std::max(1u, across == 0 ? 1u : pool / across);

  parallel_for(count, across, [&](std::size_t k) {
    const Block& block = partition.blocks[k];
    BlockSolutions bs;
    bs.target = unitary_of(block.sub);

    SynthConfig cfg;
    cfg.beam_width = synth.beam_width;
    cfg.m_per_depth = synth.m_per_depth;
    cfg.restarts = synth.restarts;
    cfg.reroot_every = synth.reroot_every;
    cfg.exact_tol = synth.exact_tol;
    cfg.opt_iters = synth.opt_iters;
    cfg.max_layers = cnot_count(block.sub);
    cfg.seed = seed;
    cfg.block_index = k;
    cfg.workers = within;

    std::string cache_path;
    if (!cache_dir.empty()) {
      const std::string key = content_hash(
          bs.target,
          {seed, k, cfg.beam_width, cfg.m_per_depth, cfg.restarts,
           cfg.reroot_every, double_bits(cfg.exact_tol),
           static_cast<std::uint64_t>(cfg.opt_iters), cfg.max_layers});
      cache_path = (fs::path(cache_dir) / (key + ".json")).string();
      if (fs::exists(cache_path)) {
        bs.solutions.clear();
        const json j = json::parse(read_text_file(cache_path));
        for (const auto& sj : j.at("solutions"))
          bs.solutions.push_back(solution_from_json(sj));
        out[k] = std::move(bs);
        hits.fetch_add(1);
        return;
      }
    }

    bs.solutions = synthesize_block(bs.target, cfg);
    if (!cache_path.empty()) {
      json j;
      j["solutions"] = json::array();
      for (const auto& s : bs.solutions)
        j["solutions"].push_back(solution_to_json(s));
      write_text_file(cache_path, j.dump(2) + "\n");
    }
    out[k] = std::move(bs);
  });

  if (cache_hits) *cache_hits = hits.load();
  return out;
}

RunReport run_pipeline(const PipelineConfig& cfg, StageTimes* times) {
  const auto t_total = std::chrono::steady_clock::now();
  StageTimes st;
  RunReport report;

  fs::create_directories(cfg.out_dir);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out / "distributions");
  const std::string cache_dir =
      cfg.cache_dir.empty() ? (out / "cache").string() : cfg.cache_dir;

  // parse
  auto t0 = std::chrono::steady_clock::now();
  const Circuit source = parse_qasm_file(cfg.input_path);
  report.width = source.width;
  report.baseline_cnots = cnot_count(source);
  st.parse_s = seconds_since(t0);

  // partition
  t0 = std::chrono::steady_clock::now();
  const Partition partition = scan_partition(source, cfg.max_block_size);
  report.block_count = partition.blocks.size();
  report.eps_threshold =
      cfg.eps_per_block * static_cast<double>(partition.blocks.size());
  write_text_file((out / "partition.json").string(),
                  partition_to_json(partition).dump(2) + "\n");
  st.partition_s = seconds_since(t0);

  // synthesize (parallel over blocks)
  t0 = std::chrono::steady_clock::now();
  std::size_t cache_hits = 0;
  std::vector<BlockSolutions> solutions = synthesize_partition(
      partition, cfg.synth, cfg.seed, cfg.workers, cache_dir, &cache_hits);
  if (cache_hits > 0)
    std::cerr << "synth cache: " << cache_hits << "/" << partition.blocks.size()
              << " blocks from cache\n";
  {
    json j = json::array();
    for (const auto& bs : solutions) j.push_back(block_solutions_to_json(bs));
    write_text_file((out / "solutions.json").string(), j.dump(2) + "\n");
  }
  double min_eps_sum = 0.0;
  for (const auto& bs : solutions) {
    double best = bs.solutions.front().epsilon;
    for (const auto& s : bs.solutions) best = std::min(best, s.epsilon);
    min_eps_sum += best;
  }
  report.min_epsilon_sum = min_eps_sum;
  st.synth_s = seconds_since(t0);

  // select
  t0 = std::chrono::steady_clock::now();
  ApproximationSet set;
  if (partition.blocks.empty()) {
    // gate-free input: the only assembly is the trivial one
    set.selected.push_back(CandidateAssembly{});
    set.similarity = {{1.0}};
    set.eps_threshold = report.eps_threshold;
  } else {
    SolutionSpace space(solutions, report.baseline_cnots);
    set = select_approximations(space, cfg.num_approximations,
                                report.eps_threshold, cfg.anneal, cfg.seed);
  }
  write_text_file((out / "set.json").string(),
                  approximation_set_to_json(set).dump(2) + "\n");
  report.infeasible = set.selected.empty();
  st.select_s = seconds_since(t0);

  // reassemble members + bound checks
  t0 = std::chrono::steady_clock::now();
  std::vector<Circuit> member_circuits;
  for (std::size_t i = 0; i < set.selected.size(); ++i) {
    const auto& member = set.selected[i];
    std::vector<std::optional<Circuit>> repl;
    std::vector<SynthesisSolution> assembly;
    for (std::size_t k = 0; k < partition.blocks.size(); ++k) {
      const auto& sol = solutions[k].solutions[member.choice[k]];
      repl.emplace_back(sol.circuit);
      assembly.push_back(sol);
      assembly.back().block_index = k;
    }
    Circuit full = reassemble(partition, repl);
    char name[32];
    std::snprintf(name, sizeof(name), "member_%02zu.qasm", i);
    write_qasm_file(full, (out / name).string());

    MemberReport mr;
    mr.index = i;
    mr.cnots = member.cnots;
    mr.reduction_percent =
        report.baseline_cnots > 0
            ? 100.0 * (1.0 - static_cast<double>(member.cnots) /
                                 static_cast<double>(report.baseline_cnots))
            : 0.0;
    mr.epsilon_sum = member.epsilon_sum;
    if (source.width <= kMaxUnitaryWidth) {
      const BoundReport br = verify_bound(source, partition, assembly);
      mr.actual_hs = br.actual;
      report.bound_satisfied_all = report.bound_satisfied_all && br.satisfied;
    }
    report.members.push_back(mr);
    member_circuits.push_back(std::move(full));
  }
  st.bound_s = seconds_since(t0);

  // simulate
  t0 = std::chrono::steady_clock::now();
  const ProbabilityDistribution ground_truth = ideal_distribution(source);
  write_text_file((out / "distributions" / "ideal_baseline.csv").string(),
                  distribution_to_csv(ground_truth));
  if (!report.infeasible) {
    std::vector<ProbabilityDistribution> member_dists;
    for (std::size_t i = 0; i < member_circuits.size(); ++i) {
      member_dists.push_back(ideal_distribution(member_circuits[i]));
      report.members[i].ideal_tvd = tvd(member_dists.back(), ground_truth);
    }
    const ProbabilityDistribution averaged =
        average_distributions(member_dists);
    write_text_file((out / "distributions" / "ideal_averaged.csv").string(),
                    distribution_to_csv(averaged));
    report.ideal_averaged_tvd = tvd(averaged, ground_truth);
    report.ideal_averaged_jsd = jsd(averaged, ground_truth);

    for (std::size_t li = 0; li < cfg.noise_levels.size(); ++li) {
      const double level = cfg.noise_levels[li];
      const NoiseModel nm = noise_from_level(level);
      NoisyReport nr;
      nr.level = level;
      nr.p1 = nm.p1;
      nr.p2 = nm.p2;
      nr.shots = cfg.shots;

      const Rng stream = Rng(cfg.seed).derive(0x5107, li);
      const ProbabilityDistribution noisy_base = noisy_distribution(
          source, nm, cfg.shots, stream.derive(std::size_t(0xba5e)).next_u64());
      nr.baseline_tvd = tvd(noisy_base, ground_truth);

      std::vector<ProbabilityDistribution> noisy_members;
      for (std::size_t i = 0; i < member_circuits.size(); ++i) {
        noisy_members.push_back(noisy_distribution(
            member_circuits[i], nm, cfg.shots, stream.derive(i).next_u64()));
      }
      const ProbabilityDistribution noisy_avg =
          average_distributions(noisy_members);
      nr.averaged_tvd = tvd(noisy_avg, ground_truth);

      char lv[48];
      std::snprintf(lv, sizeof(lv), "noisy_baseline_%g.csv", level);
      write_text_file((out / "distributions" / lv).string(),
                      distribution_to_csv(noisy_base));
      std::snprintf(lv, sizeof(lv), "noisy_averaged_%g.csv", level);
      write_text_file((out / "distributions" / lv).string(),
                      distribution_to_csv(noisy_avg));
      report.noisy.push_back(nr);
    }
  }
  st.simulate_s = seconds_since(t0);

  // diagnostics scatter: epsilon sums vs actual process distance vs TVD
  {
    std::ostringstream diag;
    diag << "member,cnots,epsilon_sum,actual_hs,ideal_tvd\n";
    for (const auto& m : report.members) {
      diag << m.index << ',' << m.cnots << ',' << m.epsilon_sum << ',';
      if (m.actual_hs) diag << *m.actual_hs;
      diag << ',' << m.ideal_tvd << '\n';
    }
    write_text_file((out / "members_diagnostics.csv").string(), diag.str());
  }

  st.total_s = seconds_since(t_total);
  write_text_file((out / "report.json").string(),
                  report_to_json(report, cfg).dump(2) + "\n");
  {
    json tj{{"parse_s", st.parse_s},       {"partition_s", st.partition_s},
            {"synth_s", st.synth_s},       {"select_s", st.select_s},
            {"bound_s", st.bound_s},       {"simulate_s", st.simulate_s},
            {"total_s", st.total_s}};
    write_text_file((out / "timings.json").string(), tj.dump(2) + "\n");
  }
  if (times) *times = st;
  return report;
}

}  // namespace qest
