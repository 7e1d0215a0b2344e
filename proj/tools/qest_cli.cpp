// Command-line front end: the full pipeline plus per-stage subcommands that
// exchange JSON/QASM/CSV artifacts so any stage can be rerun in isolation.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qest/bound.hpp"
#include "qest/error.hpp"
#include "qest/pipeline.hpp"
#include "qest/qasm.hpp"
#include "qest/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIo = 4;

std::vector<double> parse_noise_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void add_synth_options(CLI::App* app, qest::SynthSettings& synth) {
  app->add_option("--m-per-depth", synth.m_per_depth,
                  "solutions kept per CNOT depth");
  app->add_option("--restarts", synth.restarts, "random synthesis restarts");
  app->add_option("--beam-width", synth.beam_width, "beam width");
  app->add_option("--reroot-every", synth.reroot_every,
                  "collapse beam to best branch every k layers");
  app->add_option("--exact-tol", synth.exact_tol,
                  "process distance treated as an exact solution");
  app->add_option("--opt-iters", synth.opt_iters,
                  "optimizer iteration budget per call");
}

int run_command(const qest::PipelineConfig& cfg) {
  qest::StageTimes times;
  const qest::RunReport report = qest::run_pipeline(cfg, &times);
  std::cout << "width " << report.width << ", baseline CNOTs "
            << report.baseline_cnots << ", blocks " << report.block_count
            << "\n";
  if (report.infeasible) {
    std::cerr << "no assembly satisfied epsilon threshold "
              << report.eps_threshold << " (min reachable epsilon sum "
              << report.min_epsilon_sum << ")\n";
    return kExitInfeasible;
  }
  for (const auto& m : report.members) {
    std::cout << "member " << m.index << ": " << m.cnots << " CNOTs ("
              << m.reduction_percent << "% reduction), epsilon sum "
              << m.epsilon_sum << "\n";
  }
  std::cout << "ideal averaged TVD " << report.ideal_averaged_tvd << ", JSD "
            << report.ideal_averaged_jsd << "\n";
  for (const auto& nr : report.noisy) {
    std::cout << "noise " << nr.level << ": baseline TVD " << nr.baseline_tvd
              << ", averaged TVD " << nr.averaged_tvd << "\n";
  }
  std::cout << "report written to " << cfg.out_dir << "/report.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partitioned approximate synthesis toolkit"};
  app.require_subcommand(1);

  // run
  qest::PipelineConfig cfg;
  auto* run = app.add_subcommand("run", "full pipeline");
  run->add_option("--in", cfg.input_path, "input QASM file")->required();
  run->add_option("--out", cfg.out_dir, "output directory")->required();
  run->add_option("--block-size", cfg.max_block_size, "max block size");
  run->add_option("--eps-per-block", cfg.eps_per_block,
                  "epsilon threshold per block");
  run->add_option("--num-approx", cfg.num_approximations,
                  "approximations to select");
  run->add_option("--shots", cfg.shots, "shots per noisy simulation");
  std::string noise_csv;
  run->add_option("--noise", noise_csv,
                  "comma separated noise levels, e.g. 0.01,0.005,0.001");
  run->add_option("--seed", cfg.seed, "master seed")->required();
  run->add_option("--workers", cfg.workers, "synthesis worker cap");
  run->add_option("--cache-dir", cfg.cache_dir, "synthesis cache directory");
  add_synth_options(run, cfg.synth);

  // parse
  std::string in_path, out_path;
  auto* parse = app.add_subcommand("parse", "validate and canonicalize QASM");
  parse->add_option("--in", in_path, "input QASM file")->required();
  parse->add_option("--out", out_path, "canonicalized QASM output");

  // partition
  std::uint32_t block_size = 4;
  auto* part = app.add_subcommand("partition", "scan-partition a circuit");
  part->add_option("--in", in_path, "input QASM file")->required();
  part->add_option("--out", out_path, "partition JSON output")->required();
  part->add_option("--block-size", block_size, "max block size");

  // synth
  qest::SynthSettings synth_settings;
  std::string target_path, partition_path, cache_dir;
  std::uint64_t seed = 0;
  auto* synth = app.add_subcommand("synth", "synthesize block approximations");
  synth->add_option("--target", target_path,
                    "single target unitary JSON ({dim, entries})");
  synth->add_option("--partition", partition_path, "partition JSON");
  synth->add_option("--out", out_path, "solutions JSON output")->required();
  synth->add_option("--seed", seed, "seed")->required();
  synth->add_option("--cache-dir", cache_dir, "cache directory");
  std::uint32_t workers = 0;
  synth->add_option("--workers", workers, "worker cap");
  std::size_t max_layers = 0;
  synth->add_option("--max-layers", max_layers,
                    "CNOT budget when synthesizing a raw target");
  add_synth_options(synth, synth_settings);

  // select
  std::string solutions_path;
  std::size_t num_approx = 16;
  double eps_per_block = 0.02;
  auto* select = app.add_subcommand("select", "anneal-select dissimilar set");
  select->add_option("--partition", partition_path, "partition JSON")
      ->required();
  select->add_option("--solutions", solutions_path, "solutions JSON")
      ->required();
  select->add_option("--out", out_path, "output directory")->required();
  select->add_option("--seed", seed, "seed")->required();
  select->add_option("--num-approx", num_approx, "approximations to select");
  select->add_option("--eps-per-block", eps_per_block,
                     "epsilon threshold per block");

  // verify-bound
  std::size_t random_instances = 0;
  std::uint32_t qubits = 4;
  std::size_t blocks = 3;
  std::string set_path;
  auto* verify = app.add_subcommand("verify-bound",
                                    "compare actual distance to epsilon sum");
  verify->add_option("--random", random_instances,
                     "run N random certification instances");
  verify->add_option("--qubits", qubits, "qubit count for random instances");
  verify->add_option("--blocks", blocks, "block count for random instances");
  verify->add_option("--seed", seed, "seed");
  verify->add_option("--out", out_path, "CSV output");
  verify->add_option("--partition", partition_path, "partition JSON");
  verify->add_option("--solutions", solutions_path, "solutions JSON");
  verify->add_option("--set", set_path, "approximation set JSON");
  verify->add_option("--in", in_path, "source QASM (for --set mode)");

  // simulate
  double noise_level = 0.0;
  std::size_t shots = 8192;
  auto* simulate = app.add_subcommand("simulate", "output distribution");
  simulate->add_option("--in", in_path, "input QASM file")->required();
  simulate->add_option("--out", out_path, "distribution CSV")->required();
  simulate->add_option("--noise", noise_level,
                       "noise level (0 = ideal, exact)");
  simulate->add_option("--shots", shots, "shots for noisy simulation");
  simulate->add_option("--seed", seed, "seed for noisy simulation");

  // metrics
  std::string p_path, q_path;
  auto* metrics = app.add_subcommand("metrics", "TVD/JSD between two CSVs");
  metrics->add_option("--p", p_path, "first distribution CSV")->required();
  metrics->add_option("--q", q_path, "second distribution CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!noise_csv.empty()) cfg.noise_levels = parse_noise_list(noise_csv);
      return run_command(cfg);
    }

    if (parse->parsed()) {
      const qest::Circuit c = qest::parse_qasm_file(in_path);
      std::cout << "width " << c.width << ", gates " << c.gates.size()
                << ", CNOTs " << qest::cnot_count(c) << "\n";
      if (!out_path.empty()) qest::write_qasm_file(c, out_path);
      return 0;
    }

    if (part->parsed()) {
      const qest::Circuit c = qest::parse_qasm_file(in_path);
      const qest::Partition p = qest::scan_partition(c, block_size);
      qest::write_text_file(out_path,
                            qest::partition_to_json(p).dump(2) + "\n");
      std::cout << p.blocks.size() << " blocks\n";
      return 0;
    }

    if (synth->parsed()) {
      if (!target_path.empty()) {
        const json tj = json::parse(qest::read_text_file(target_path));
        const qest::Unitary target = qest::unitary_from_json(tj);
        qest::SynthConfig sc;
        sc.beam_width = synth_settings.beam_width;
        sc.m_per_depth = synth_settings.m_per_depth;
        sc.restarts = synth_settings.restarts;
        sc.reroot_every = synth_settings.reroot_every;
        sc.exact_tol = synth_settings.exact_tol;
        sc.opt_iters = synth_settings.opt_iters;
        sc.max_layers = max_layers;
        sc.seed = seed;

        std::string cache_path;
        if (!cache_dir.empty()) {
          fs::create_directories(cache_dir);
          const std::string key = qest::content_hash(
              target, {seed, std::uint64_t(0), sc.beam_width, sc.m_per_depth,
                       sc.restarts, sc.reroot_every,
                       std::uint64_t(sc.exact_tol * 1e12),
                       std::uint64_t(sc.opt_iters), sc.max_layers});
          cache_path = (fs::path(cache_dir) / (key + ".json")).string();
        }
        json out;
        if (!cache_path.empty() && fs::exists(cache_path)) {
          out = json::parse(qest::read_text_file(cache_path));
          std::cerr << "synth cache: hit\n";
        } else {
          const auto solutions = qest::synthesize_block(target, sc);
          out["solutions"] = json::array();
          for (const auto& s : solutions)
            out["solutions"].push_back(qest::solution_to_json(s));
          if (!cache_path.empty())
            qest::write_text_file(cache_path, out.dump(2) + "\n");
          std::cerr << "synth cache: miss\n";
        }
        qest::write_text_file(out_path, out.dump(2) + "\n");
        return 0;
      }
      if (partition_path.empty())
        throw qest::IoError("synth: need --target or --partition");
      const qest::Partition p = qest::partition_from_json(
          json::parse(qest::read_text_file(partition_path)));
      std::size_t hits = 0;
      const auto solutions = qest::synthesize_partition(
          p, synth_settings, seed, workers, cache_dir, &hits);
      json out = json::array();
      for (const auto& bs : solutions)
        out.push_back(qest::block_solutions_to_json(bs));
      qest::write_text_file(out_path, out.dump(2) + "\n");
      std::cerr << "synth cache: " << hits << "/" << p.blocks.size()
                << " blocks from cache\n";
      return 0;
    }

    if (select->parsed()) {
      const qest::Partition p = qest::partition_from_json(
          json::parse(qest::read_text_file(partition_path)));
      std::vector<qest::BlockSolutions> solutions;
      for (const auto& bj : json::parse(qest::read_text_file(solutions_path)))
        solutions.push_back(qest::block_solutions_from_json(bj));
      const std::size_t baseline = qest::cnot_count(qest::reassemble(p));
      qest::SolutionSpace space(solutions, baseline);
      const double threshold =
          eps_per_block * static_cast<double>(p.blocks.size());
      const qest::ApproximationSet set = qest::select_approximations(
          space, num_approx, threshold, qest::AnnealConfig{}, seed);
      fs::create_directories(out_path);
      qest::write_text_file(
          (fs::path(out_path) / "set.json").string(),
          qest::approximation_set_to_json(set).dump(2) + "\n");
      for (std::size_t i = 0; i < set.selected.size(); ++i) {
        std::vector<std::optional<qest::Circuit>> repl;
        for (std::size_t k = 0; k < p.blocks.size(); ++k)
          repl.emplace_back(
              solutions[k].solutions[set.selected[i].choice[k]].circuit);
        char name[32];
        std::snprintf(name, sizeof(name), "member_%02zu.qasm", i);
        qest::write_qasm_file(qest::reassemble(p, repl),
                              (fs::path(out_path) / name).string());
      }
      if (set.selected.empty()) {
        std::cerr << "selection infeasible at threshold " << threshold << "\n";
        return kExitInfeasible;
      }
      std::cout << set.selected.size() << " members selected\n";
      return 0;
    }

    if (verify->parsed()) {
      std::ostringstream csv;
      csv << "instance,blocks,epsilon_sum,actual,ratio,satisfied\n";
      bool all_ok = true;
      if (random_instances > 0) {
        const std::size_t want = std::max<std::size_t>(blocks, 2);
        const auto rows = qest::certify_bound_random(random_instances, qubits,
                                                     qubits, want, want, seed);
        for (const auto& r : rows) {
          csv << r.instance << ',' << r.blocks << ',' << r.epsilon_sum << ','
              << r.actual << ',' << r.ratio << ',' << (r.satisfied ? 1 : 0)
              << '\n';
          all_ok = all_ok && r.satisfied;
        }
      } else {
        if (partition_path.empty() || solutions_path.empty() ||
            set_path.empty() || in_path.empty())
          throw qest::IoError(
              "verify-bound: need --random or all of --in/--partition/"
              "--solutions/--set");
        const qest::Circuit source = qest::parse_qasm_file(in_path);
        const qest::Partition p = qest::partition_from_json(
            json::parse(qest::read_text_file(partition_path)));
        std::vector<qest::BlockSolutions> solutions;
        for (const auto& bj :
             json::parse(qest::read_text_file(solutions_path)))
          solutions.push_back(qest::block_solutions_from_json(bj));
        const qest::ApproximationSet set = qest::approximation_set_from_json(
            json::parse(qest::read_text_file(set_path)));
        for (std::size_t i = 0; i < set.selected.size(); ++i) {
          std::vector<qest::SynthesisSolution> assembly;
          for (std::size_t k = 0; k < p.blocks.size(); ++k) {
            assembly.push_back(
                solutions[k].solutions[set.selected[i].choice[k]]);
            assembly.back().block_index = k;
          }
          const qest::BoundReport br = qest::verify_bound(source, p, assembly);
          csv << i << ',' << p.blocks.size() << ',' << br.epsilon_sum << ','
              << br.actual.value_or(-1.0) << ',' << br.ratio.value_or(-1.0)
              << ',' << (br.satisfied ? 1 : 0) << '\n';
          all_ok = all_ok && br.satisfied;
        }
      }
      if (out_path.empty())
        std::cout << csv.str();
      else
        qest::write_text_file(out_path, csv.str());
      std::cout << (all_ok ? "bound satisfied" : "BOUND VIOLATED") << "\n";
      return all_ok ? 0 : kExitInfeasible;
    }

    if (simulate->parsed()) {
      const qest::Circuit c = qest::parse_qasm_file(in_path);
      qest::ProbabilityDistribution dist;
      if (noise_level > 0.0) {
        const qest::NoiseModel nm{noise_level / 10.0, noise_level, 0.0};
        dist = qest::noisy_distribution(c, nm, shots, seed);
      } else {
        dist = qest::ideal_distribution(c);
      }
      qest::write_text_file(out_path, qest::distribution_to_csv(dist));
      return 0;
    }

    if (metrics->parsed()) {
      const auto p = qest::distribution_from_csv(qest::read_text_file(p_path));
      const auto q = qest::distribution_from_csv(qest::read_text_file(q_path));
      json out{{"tvd", qest::tvd(p, q)}, {"jsd", qest::jsd(p, q)}};
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const qest::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const qest::GuardError& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return kExitGuard;
  } catch (const qest::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const qest::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
