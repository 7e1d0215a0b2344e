// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero if any fails. Tolerances are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "helpers.hpp"
#include "qest/bound.hpp"
#include "qest/matrix.hpp"
#include "qest/pipeline.hpp"
#include "qest/qasm.hpp"
#include "qest/rng.hpp"
#include "qest/selector.hpp"
#include "qest/serialize.hpp"
#include "qest/simulator.hpp"
#include "qest/synthesis.hpp"

using namespace qest;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("[%2d] %s  %-34s (%.1fs)  %s\n", id, pass ? "PASS" : "FAIL",
              name, seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double gauss(Rng& rng) {
  const double u1 = std::max(rng.next_double(), 1e-300);
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Unitary haar_unitary(Rng& rng, Eigen::Index dim) {
  Unitary g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      g(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Unitary> qr(g);
  Unitary q = qr.householderQ();
  const Unitary r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

Unitary random_circuit_unitary(Rng& rng, std::uint32_t n) {
  return unitary_of(random_circuit(rng, n, 10 + rng.next_index(12)));
}

ProbabilityDistribution random_dist(Rng& rng, std::uint32_t width) {
  ProbabilityDistribution d;
  d.width = width;
  d.probs.resize(std::size_t(1) << width);
  double total = 0;
  for (double& v : d.probs) {
    v = rng.next_double();
    total += v;
  }
  for (double& v : d.probs) v /= total;
  return d;
}

class Timer {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// 1. Bound-theorem certification on 1000 random instances.
void criterion_bound_certification() {
  Timer t;
  const auto rows = certify_bound_random(1000, 3, 5, 2, 4, 20250808);
  std::size_t ok = 0;
  double worst_margin = 1.0;
  for (const auto& r : rows) {
    if (r.satisfied) ++ok;
    worst_margin = std::min(worst_margin, r.epsilon_sum + kBoundSlack - r.actual);
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%zu/1000 satisfied, worst margin %.2e",
                ok, worst_margin);
  report(1, "bound-theorem certification",
         ok == rows.size() && rows.size() == 1000 && t.seconds() < 120.0,
         t.seconds(), detail);
}

// 2. Extension-lemma equality on 500 random pairs.
void criterion_extension_lemma() {
  Timer t;
  Rng rng(0xe11e);
  double worst = 0.0;
  std::size_t ok = 0;
  for (int i = 0; i < 500; ++i) {
    const auto k = static_cast<std::uint32_t>(1 + rng.next_index(2));
    const auto extra = static_cast<std::uint32_t>(1 + rng.next_index(2));
    const Unitary u = random_circuit_unitary(rng, k);
    const Unitary v = random_circuit_unitary(rng, k);
    std::vector<std::uint32_t> front(k);
    for (std::uint32_t j = 0; j < k; ++j) front[j] = j;
    const double small = hs_distance(u, v);
    const double big = hs_distance(extend_to_full(u, front, k + extra),
                                   extend_to_full(v, front, k + extra));
    const double diff = std::abs(big - small);
    worst = std::max(worst, diff);
    if (diff <= 1e-12 && extension_lemma_check(u, v, extra)) ++ok;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "%zu/500 equal, worst |diff| %.2e", ok,
                worst);
  report(2, "extension-lemma equality", ok == 500 && t.seconds() < 10.0,
         t.seconds(), detail);
}

// 3. HS-distance properties and the closed-form RZ family.
void criterion_hs_properties() {
  Timer t;
  Rng rng(0x45d1);
  bool ok = true;

  const Unitary eye = Unitary::Identity(2, 2);
  for (int i = 0; i < 100; ++i) {
    const double theta = -M_PI + 2 * M_PI * (i + 0.5) / 100.0;
    const double d = hs_distance(eye, unitary_of(Circuit{1, {Gate::rz(0, theta)}}));
    ok = ok && std::abs(d - std::abs(std::sin(theta / 2))) <= 1e-10;
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::uint32_t>(1 + rng.next_index(3));
    const Unitary u = random_circuit_unitary(rng, n);
    const Unitary v = random_circuit_unitary(rng, n);
    const double d = hs_distance(u, v);
    ok = ok && d >= 0.0 && d <= 1.0;
    ok = ok && std::abs(hs_distance(v, u) - d) <= 1e-14;
    const Complex phase = std::exp(Complex(0, rng.next_angle()));
    ok = ok && std::abs(hs_distance(u, phase * v) - d) <= 1e-10;
    ok = ok && hs_distance(u, phase * u) <= 1e-9;  // zero iff phase-equal
  }
  report(3, "hs-distance properties", ok, t.seconds(),
         ok ? "range/symmetry/phase/closed-form hold" : "violation found");
}

// 4. Synthesis competence on Haar-random two-qubit targets + gradient check.
void criterion_synthesis_competence() {
  Timer t;
  Rng rng(0x4a12);
  std::size_t synth_ok = 0;
  double worst_eps = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Unitary target = haar_unitary(rng, 4);
    SynthConfig cfg;
    cfg.max_layers = 3;
    cfg.restarts = 6;
    cfg.opt_iters = 300;
    cfg.seed = 0x4a12;
    cfg.block_index = static_cast<std::size_t>(i);
    const auto sols = synthesize_block(target, cfg);
    double best = 1.0;
    for (const auto& s : sols) best = std::min(best, s.epsilon);
    worst_eps = std::max(worst_eps, best);
    if (best < 1e-3) ++synth_ok;
  }

  std::size_t grad_ok = 0;
  Rng grng(0x97ad);
  for (int pt = 0; pt < 100; ++pt) {
    const auto n = static_cast<std::uint32_t>(1 + grng.next_index(2));
    Ansatz a{n, {}};
    if (n == 2) {
      const std::size_t layers = 1 + grng.next_index(3);
      for (std::size_t l = 0; l < layers; ++l) {
        const auto c0 = static_cast<std::uint32_t>(grng.next_index(2));
        a.layers.emplace_back(c0, 1 - c0);
      }
    }
    const Unitary target = random_circuit_unitary(grng, n);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(a.param_count()));
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = grng.next_angle();
    Eigen::VectorXd grad;
    ansatz_cost_grad(a, target, theta, grad);
    bool all = true;
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd up = theta, dn = theta;
      up[i] += h;
      dn[i] -= h;
      const double fd =
          (ansatz_cost(a, target, up) - ansatz_cost(a, target, dn)) / (2 * h);
      const double rel =
          std::abs(fd - grad[i]) / std::max(std::abs(grad[i]), 1e-4);
      all = all && rel < 1e-5;
    }
    if (all) ++grad_ok;
  }

  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "%zu/50 targets < 1e-3 (worst %.2e), %zu/100 gradient points",
                synth_ok, worst_eps, grad_ok);
  report(4, "synthesis competence",
         synth_ok == 50 && grad_ok == 100 && t.seconds() < 300.0, t.seconds(),
         detail);
}

// 5. Algorithm-1 oracle equivalence on 20 exhaustively enumerable spaces.
void criterion_annealing_oracle() {
  Timer t;
  Rng rng(0xa19e);
  std::size_t ok = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto fx = testing::random_space(rng);
    const ApproximationSet set = select_approximations(
        fx.space, 2, fx.eps_threshold, AnnealConfig{}, 0xbeef + trial);

    bool match = true;
    const auto brute1 = testing::brute_force_best(fx.space, {}, fx.eps_threshold);
    if (!brute1.found) {
      match = set.selected.empty();
    } else if (set.selected.empty()) {
      match = false;
    } else {
      match = objective(set.selected[0], {}, fx.space, fx.eps_threshold) ==
              brute1.objective;
      const auto brute2 = testing::brute_force_best(fx.space, {set.selected[0]},
                                                    fx.eps_threshold);
      if (brute2.found) {
        match = match && set.selected.size() == 2 &&
                objective(set.selected[1], {set.selected[0]}, fx.space,
                          fx.eps_threshold) == brute2.objective;
      } else {
        match = match && set.selected.size() == 1;
      }
    }
    if (match) ++ok;
  }
  char detail[64];
  std::snprintf(detail, sizeof(detail), "%zu/20 spaces match at M=1 and M=2", ok);
  report(5, "algorithm-1 oracle equivalence", ok == 20 && t.seconds() < 120.0,
         t.seconds(), detail);
}

// 6. Metric oracles on 1000 random pairs plus the triangle inequality.
void criterion_metric_oracles() {
  Timer t;
  Rng rng(0x3e71);
  bool ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto width = static_cast<std::uint32_t>(1 + rng.next_index(4));
    const auto p = random_dist(rng, width);
    const auto q = random_dist(rng, width);
    double brute_tvd = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i)
      brute_tvd += std::fabs(p.probs[i] - q.probs[i]);
    brute_tvd *= 0.5;
    double kl_pm = 0.0, kl_qm = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
      const double m = 0.5 * (p.probs[i] + q.probs[i]);
      if (p.probs[i] > 0) kl_pm += p.probs[i] * std::log2(p.probs[i] / m);
      if (q.probs[i] > 0) kl_qm += q.probs[i] * std::log2(q.probs[i] / m);
    }
    const double brute_jsd = std::sqrt(0.5 * (kl_pm + kl_qm));
    ok = ok && std::abs(tvd(p, q) - brute_tvd) <= 1e-12;
    ok = ok && std::abs(jsd(p, q) - brute_jsd) <= 1e-12;
    ok = ok && tvd(p, q) >= 0 && tvd(p, q) <= 1;
    ok = ok && jsd(p, q) >= 0 && jsd(p, q) <= 1;
    ok = ok && tvd(p, q) == tvd(q, p);
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_dist(rng, 3);
    const auto q = random_dist(rng, 3);
    const auto r = random_dist(rng, 3);
    ok = ok && tvd(p, r) <= tvd(p, q) + tvd(q, r) + 1e-13;
  }
  report(6, "metric oracles", ok, t.seconds(),
         ok ? "1000 pairs + 1000 triangles" : "mismatch found");
}

// 7. Averaging convexity on 200 random sets.
void criterion_averaging_convexity() {
  Timer t;
  Rng rng(0xc0de);
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const auto width = static_cast<std::uint32_t>(1 + rng.next_index(3));
    const auto g = random_dist(rng, width);
    std::vector<ProbabilityDistribution> members;
    const std::size_t count = 2 + rng.next_index(8);
    double mean_tvd = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      members.push_back(random_dist(rng, width));
      mean_tvd += tvd(members.back(), g);
    }
    mean_tvd /= double(count);
    ok = ok && tvd(average_distributions(members), g) <= mean_tvd + 1e-12;
  }
  report(7, "averaging convexity", ok, t.seconds(),
         ok ? "200 random sets" : "violation found");
}

// 8. End-to-end scaled reproduction on the four-qubit trotterized input.
void criterion_end_to_end() {
  Timer t;
  const fs::path work = fs::temp_directory_path() / "qest_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  PipelineConfig cfg;
  cfg.input_path = std::string(QEST_TEST_DATA_DIR) + "/tfim_4.qasm";
  cfg.out_dir = (work / "run_full").string();
  cfg.seed = 42;
  cfg.workers = 2;
  const RunReport rep = run_pipeline(cfg);

  bool pass = !rep.infeasible;
  double mean_reduction = 0.0, noisy_base = 0.0, noisy_avg = 0.0;
  if (pass) {
    for (const auto& m : rep.members) mean_reduction += m.reduction_percent;
    mean_reduction /= double(rep.members.size());
    pass = pass && rep.baseline_cnots >= 24;
    pass = pass && mean_reduction >= 30.0;
    pass = pass && rep.ideal_averaged_tvd <= 0.1;
    bool found_1pct = false;
    for (const auto& nr : rep.noisy) {
      if (std::abs(nr.level - 0.01) < 1e-12) {
        found_1pct = true;
        noisy_base = nr.baseline_tvd;
        noisy_avg = nr.averaged_tvd;
        pass = pass && nr.shots == 8192 && nr.averaged_tvd < nr.baseline_tvd;
      }
    }
    pass = pass && found_1pct && rep.bound_satisfied_all;
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "mean reduction %.1f%%, ideal tvd %.4f, 1%% noise tvd %.4f vs "
                "baseline %.4f",
                mean_reduction, rep.ideal_averaged_tvd, noisy_avg, noisy_base);
  report(8, "end-to-end scaled reproduction", pass && t.seconds() < 900.0,
         t.seconds(), detail);
}

// 9. Determinism: identical config + seed twice, byte-identical artifacts.
void criterion_determinism() {
  Timer t;
  const fs::path work = fs::temp_directory_path() / "qest_acceptance";

  PipelineConfig cfg;
  cfg.input_path = std::string(QEST_TEST_DATA_DIR) + "/tfim_4.qasm";
  cfg.seed = 42;
  cfg.workers = 2;
  cfg.num_approximations = 8;
  cfg.synth.restarts = 2;
  cfg.synth.opt_iters = 150;

  cfg.out_dir = (work / "run_a").string();
  const RunReport rep_a = run_pipeline(cfg);
  cfg.out_dir = (work / "run_b").string();
  run_pipeline(cfg);

  bool pass = read_text_file((work / "run_a" / "report.json").string()) ==
              read_text_file((work / "run_b" / "report.json").string());
  std::size_t compared = 0;
  for (std::size_t i = 0; i < rep_a.members.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "member_%02zu.qasm", i);
    pass = pass && fs::exists(work / "run_b" / name) &&
           read_text_file((work / "run_a" / name).string()) ==
               read_text_file((work / "run_b" / name).string());
    ++compared;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "report.json + %zu member circuits byte-compared", compared);
  report(9, "pipeline determinism", pass && compared > 0, t.seconds(), detail);
}

// 10. Partition soundness on 200 random 5-qubit circuits.
void criterion_partition_soundness() {
  Timer t;
  Rng rng(0x9a97);
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const Circuit c = random_circuit(rng, 5, 5 + rng.next_index(35));
    const std::uint32_t mbs = 2 + static_cast<std::uint32_t>(rng.next_index(2));
    const Partition p = scan_partition(c, mbs);
    const Circuit back = reassemble(p);
    ok = ok && hs_distance(unitary_of(c), unitary_of(back)) <= 1e-9;

    std::map<std::string, int> count;
    auto key = [](const Gate& g) {
      std::string k = gate_name(g.kind);
      for (auto q : g.qubits) k += "," + std::to_string(q);
      for (auto a : g.params) k += ";" + std::to_string(a);
      return k;
    };
    for (const Gate& g : c.gates) ++count[key(g)];
    for (const Gate& g : back.gates) --count[key(g)];
    for (const auto& [k, v] : count) ok = ok && v == 0;
    ok = ok && back.gates.size() == c.gates.size();
  }
  report(10, "partition soundness", ok, t.seconds(),
         ok ? "200 circuits, unitary + multiset equal" : "violation found");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_bound_certification();
  criterion_extension_lemma();
  criterion_hs_properties();
  criterion_synthesis_competence();
  criterion_annealing_oracle();
  criterion_metric_oracles();
  criterion_averaging_convexity();
  criterion_end_to_end();
  criterion_determinism();
  criterion_partition_soundness();
  std::printf("summary: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
