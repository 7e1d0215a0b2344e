#include "qest/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qest/error.hpp"
#include "qest/parallel.hpp"
#include "qest/rng.hpp"

namespace qest {

namespace {

constexpr Complex kNegHalfI(0.0, -0.5);

// Flattened primitive sequence: every parameter drives exactly one
// single-axis rotation. U3(theta, phi, lambda) = RZ(phi) RY(theta) RZ(lambda)
// unrolls, in time order, to RZ(lambda), RY(theta), RZ(phi).
struct Prim {
  bool is_cnot = false;
  std::uint32_t q0 = 0, q1 = 0;  // cnot: control/target; rotation: q0 only
  int axis = 0;                  // 1 = X, 2 = Y, 3 = Z (rotation only)
  int pidx = -1;                 // parameter index (rotation only)
};

void push_u3_prims(std::vector<Prim>& prims, std::uint32_t q, int base) {
  prims.push_back({false, q, 0, 3, base + 2});  // RZ(lambda)
  prims.push_back({false, q, 0, 2, base + 0});  // RY(theta)
  prims.push_back({false, q, 0, 3, base + 1});  // RZ(phi)
}

std::vector<Prim> build_prims(const Ansatz& a) {
  std::vector<Prim> prims;
  prims.reserve(3u * a.width + 7u * a.layers.size());
  for (std::uint32_t q = 0; q < a.width; ++q) push_u3_prims(prims, q, 3 * q);
  int base = 3 * static_cast<int>(a.width);
  for (const auto& [c, t] : a.layers) {
    prims.push_back({true, c, t, 0, -1});
    push_u3_prims(prims, c, base);
    push_u3_prims(prims, t, base + 3);
    base += 6;
  }
  return prims;
}

Eigen::Matrix2cd rot_matrix(int axis, double angle) {
  switch (axis) {
    case 1:
      return mat_rx(angle);
    case 2:
      return mat_ry(angle);
    default:
      return mat_rz(angle);
  }
}

void check_sizes(const Ansatz& a, const Unitary& target,
                 const Eigen::VectorXd& theta) {
  if (static_cast<std::size_t>(theta.size()) != a.param_count())
    throw Error("ansatz: parameter vector has wrong length");
  if (target.rows() != (Eigen::Index(1) << a.width))
    throw Error("ansatz: target dimension does not match width");
}

// Tr(B sigma_q C) for a Pauli on qubit q, without materializing sigma_q C.
Complex pauli_trace(const Unitary& b, const Unitary& c, int axis,
                    std::uint32_t q, std::uint32_t n) {
  const std::uint32_t mask = 1u << (n - 1 - q);
  const auto dim = static_cast<std::uint32_t>(b.rows());
  Complex sum(0, 0);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const Complex* bcol = b.col(s).data();
    Complex dot(0, 0);
    if (axis == 3) {
      for (std::uint32_t r = 0; r < dim; ++r) dot += bcol[r] * c(s, r);
      sum += (s & mask) ? -dot : dot;
    } else {
      const std::uint32_t sf = s ^ mask;
      for (std::uint32_t r = 0; r < dim; ++r) dot += bcol[r] * c(sf, r);
      if (axis == 1) {
        sum += dot;
      } else {
        sum += (s & mask) ? Complex(0, 1) * dot : Complex(0, -1) * dot;
      }
    }
  }
  return sum;
}

// Prebuilt evaluation context so repeated cost/gradient calls skip setup.
struct CostContext {
  const Ansatz& ansatz;
  const Unitary& target;
  std::vector<Prim> prims;
  std::uint32_t n;
  double norm;

  CostContext(const Ansatz& a, const Unitary& t)
      : ansatz(a),
        target(t),
        prims(build_prims(a)),
        n(a.width),
        norm(static_cast<double>(Eigen::Index(1) << a.width)) {}

  Unitary forward(const Eigen::VectorXd& theta) const {
    const auto dim = Eigen::Index(1) << n;
    Unitary acc = Unitary::Identity(dim, dim);
    for (const Prim& p : prims) {
      if (p.is_cnot)
        apply_cnot_left(acc, p.q0, p.q1, n);
      else
        apply_1q_left(acc, rot_matrix(p.axis, theta[p.pidx]), p.q0, n);
    }
    return acc;
  }

  double cost(const Eigen::VectorXd& theta) const {
    const Unitary acc = forward(theta);
    const Complex trace = (target.conjugate().cwiseProduct(acc)).sum();
    return 1.0 - std::norm(trace) / (norm * norm);
  }

  double cost_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
    Unitary acc = forward(theta);
    const Complex trace = (target.conjugate().cwiseProduct(acc)).sum();
    const double cost = 1.0 - std::norm(trace) / (norm * norm);

    grad.setZero(theta.size());
    // Adjoint sweep: B = target^dag G_m..G_{j+1}, C = G_j..G_1; a rotation
    // primitive differentiates to (-i/2) sigma G, so dT/dtheta_j =
    // (-i/2) Tr(B sigma_q C).
    Unitary b = target.adjoint();
    Unitary& c = acc;
    const double scale = -2.0 / (norm * norm);
    for (auto it = prims.rbegin(); it != prims.rend(); ++it) {
      const Prim& p = *it;
      if (!p.is_cnot) {
        const Complex dtrace =
            kNegHalfI * pauli_trace(b, c, p.axis, p.q0, n);
        grad[p.pidx] = scale * (std::conj(trace) * dtrace).real();
        const Eigen::Matrix2cd r = rot_matrix(p.axis, theta[p.pidx]);
        apply_1q_left(c, r.adjoint(), p.q0, n);
        apply_1q_right(b, r, p.q0, n);
      } else {
        apply_cnot_left(c, p.q0, p.q1, n);
        apply_cnot_right(b, p.q0, p.q1, n);
      }
    }
    return cost;
  }
};

double distance_from_cost(double cost) {
  if (cost <= 0.0) return 0.0;
  const double d = std::sqrt(cost);
  return d > 1.0 ? 1.0 : d;
}

// Minimal L-BFGS with Armijo backtracking; gradients are computed only at
// accepted points, line-search probes use the cheap cost path.
struct LbfgsOutcome {
  Eigen::VectorXd x;
  double f = 0.0;
};

LbfgsOutcome lbfgs_minimize(const CostContext& ctx, Eigen::VectorXd x,
                            int max_iters, double grad_tol) {
  const int history = 10;
  Eigen::VectorXd grad;
  double f = ctx.cost_grad(x, grad);

  LbfgsOutcome best{x, f};
  std::vector<Eigen::VectorXd> s_hist, y_hist;
  std::vector<double> rho_hist;

  for (int iter = 0; iter < max_iters; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() < grad_tol) break;

    // Two-loop recursion.
    Eigen::VectorXd q = grad;
    const int k = static_cast<int>(s_hist.size());
    std::vector<double> alpha(k);
    for (int i = k - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (k > 0) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (int i = 0; i < k; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd dir = -q;
    double slope = grad.dot(dir);
    if (slope >= 0.0) {  // not a descent direction; fall back to steepest
      dir = -grad;
      slope = grad.dot(dir);
    }

    double step = 1.0;
    double new_f = f;
    Eigen::VectorXd new_x;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      new_x = x + step * dir;
      new_f = ctx.cost(new_x);
      if (new_f <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Eigen::VectorXd new_grad;
    new_f = ctx.cost_grad(new_x, new_grad);
    Eigen::VectorXd s = new_x - x;
    Eigen::VectorXd y = new_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > history) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }
    x = std::move(new_x);
    f = new_f;
    grad = std::move(new_grad);
    if (f < best.f) {
      best.f = f;
      best.x = x;
    }
    if (f <= 1e-13) break;  // distance ~3e-7, far below exact_tol
  }
  if (f < best.f) {
    best.f = f;
    best.x = x;
  }
  return best;
}

}  // namespace

Circuit ansatz_to_circuit(const Ansatz& a, const Eigen::VectorXd& theta) {
  if (static_cast<std::size_t>(theta.size()) != a.param_count())
    throw Error("ansatz: parameter vector has wrong length");
  Circuit c(a.width);
  for (std::uint32_t q = 0; q < a.width; ++q)
    c.add(Gate::u3(q, theta[3 * q], theta[3 * q + 1], theta[3 * q + 2]));
  int base = 3 * static_cast<int>(a.width);
  for (const auto& [ctl, tgt] : a.layers) {
    c.add(Gate::cnot(ctl, tgt));
    c.add(Gate::u3(ctl, theta[base], theta[base + 1], theta[base + 2]));
    c.add(Gate::u3(tgt, theta[base + 3], theta[base + 4], theta[base + 5]));
    base += 6;
  }
  return c;
}

double ansatz_cost(const Ansatz& a, const Unitary& target,
                   const Eigen::VectorXd& theta) {
  check_sizes(a, target, theta);
  return CostContext(a, target).cost(theta);
}

double ansatz_cost_grad(const Ansatz& a, const Unitary& target,
                        const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
  check_sizes(a, target, theta);
  return CostContext(a, target).cost_grad(theta, grad);
}

std::pair<Eigen::VectorXd, double> optimize_angles(const Ansatz& a,
                                                   const Unitary& target,
                                                   Eigen::VectorXd theta0,
                                                   int budget) {
  check_sizes(a, target, theta0);
  const CostContext ctx(a, target);
  LbfgsOutcome out = lbfgs_minimize(ctx, std::move(theta0), budget, 1e-10);
  return {out.x, distance_from_cost(out.f)};
}

namespace {

struct BeamBranch {
  Ansatz ansatz;
  Eigen::VectorXd theta;
  double dist = 1.0;
  std::uint64_t id = 0;
};

Eigen::VectorXd random_angles(Rng& rng, std::size_t count) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.next_angle();
  return v;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> all_ordered_pairs(
    std::uint32_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      if (a != b) pairs.emplace_back(a, b);
  return pairs;
}

}  // namespace

std::vector<SynthesisSolution> synthesize_block(const Unitary& target,
                                                const SynthConfig& cfg) {
  const auto dim = target.rows();
  std::uint32_t n = 0;
  while ((Eigen::Index(1) << n) < dim) ++n;
  if ((Eigen::Index(1) << n) != dim)
    throw Error("synthesize_block: target dimension is not a power of two");
  if (n == 0) throw Error("synthesize_block: empty target");

  const auto all_pairs = all_ordered_pairs(n);
  const std::uint32_t restarts = std::max(1u, cfg.restarts);
  const std::uint32_t beam_width = std::max(1u, cfg.beam_width);

  // depth -> candidate solutions (merged across restarts below)
  std::map<std::uint32_t, std::vector<SynthesisSolution>> by_depth;
  auto record = [&](const BeamBranch& br, std::uint32_t restart) {
    SynthesisSolution sol;
    sol.block_index = cfg.block_index;
    sol.circuit = ansatz_to_circuit(br.ansatz, br.theta);
    sol.epsilon = hs_distance(unitary_of(sol.circuit), target);
    sol.cnots = cnot_count(sol.circuit);
    sol.provenance = {restart, static_cast<std::uint32_t>(br.ansatz.layers.size()),
                      br.id};
    by_depth[sol.provenance.layers].push_back(std::move(sol));
  };

  for (std::uint32_t restart = 0; restart < restarts; ++restart) {
    Rng rng = Rng(cfg.seed).derive(cfg.block_index, restart);
    std::uint64_t next_id = 0;

    // Distance plateaus tie many layer placements; exploring pairs in a
    // restart-specific order makes each compiler start walk a different
    // branch of the tree, per the multiple-starts design.
    auto pairs = all_pairs;
    for (std::size_t i = pairs.size(); i > 1; --i)
      std::swap(pairs[i - 1], pairs[rng.next_index(i)]);

    Ansatz dressing{n, {}};
    auto [theta0, d0] = optimize_angles(dressing, target,
                                        random_angles(rng, dressing.param_count()),
                                        cfg.opt_iters);
    BeamBranch root{dressing, theta0, d0, next_id++};
    record(root, restart);

    std::vector<BeamBranch> beam{root};
    double best_dist = d0;
    for (std::size_t depth = 1;
         depth <= cfg.max_layers && best_dist >= cfg.exact_tol && !pairs.empty();
         ++depth) {
      // Every extension gets a warm start (parent angles, new layer at zero)
      // and a fresh random start so branch ranking reflects each pair
      // sequence's potential, not just the warm basin; the best branch also
      // gets a jittered hop out of its basin. Inits are drawn sequentially,
      // optimizations run on the worker pool, results merge by index.
      struct Job {
        Ansatz ansatz;
        Eigen::VectorXd init;
      };
      std::vector<Job> jobs;
      // Fresh multistarts per extension, more on small blocks where the
      // pair alphabet is narrow and plateaus tie many placements.
      const std::size_t fresh =
          std::clamp<std::size_t>(12 / pairs.size(), 1, 3);
      for (const BeamBranch& parent : beam) {
        for (const auto& pair : pairs) {
          Ansatz child = parent.ansatz;
          child.layers.push_back(pair);
          Eigen::VectorXd warm =
              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(child.param_count()));
          warm.head(parent.theta.size()) = parent.theta;
          jobs.push_back({child, std::move(warm)});
          for (std::size_t f = 0; f < fresh; ++f)
            jobs.push_back({child, random_angles(rng, child.param_count())});
        }
      }
      const BeamBranch& best_parent = beam.front();
      for (const auto& pair : pairs) {
        Ansatz child = best_parent.ansatz;
        child.layers.push_back(pair);
        Eigen::VectorXd jitter = random_angles(rng, child.param_count());
        jitter.head(best_parent.theta.size()) =
            best_parent.theta +
            0.3 * random_angles(rng, best_parent.theta.size());
        jobs.push_back({std::move(child), std::move(jitter)});
      }

      std::vector<BeamBranch> candidates(jobs.size());
      parallel_for(jobs.size(), std::max(1u, cfg.workers), [&](std::size_t j) {
        auto [theta, dist] =
            optimize_angles(jobs[j].ansatz, target, jobs[j].init, cfg.opt_iters);
        candidates[j] = {jobs[j].ansatz, std::move(theta), dist,
                         static_cast<std::uint64_t>(j)};
      });
      for (std::size_t j = 0; j < candidates.size(); ++j)
        candidates[j].id = next_id++;

      std::sort(candidates.begin(), candidates.end(),
                [](const BeamBranch& a, const BeamBranch& b) {
                  return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
                });
      const std::uint32_t keep =
          (cfg.reroot_every > 0 && depth % cfg.reroot_every == 0) ? 1u
                                                                  : beam_width;
      const std::size_t rec =
          std::min(candidates.size(),
                   static_cast<std::size_t>(std::max(keep, cfg.m_per_depth)));
      for (std::size_t i = 0; i < rec; ++i) record(candidates[i], restart);

      // Survivors favor distinct newest pairs: distance plateaus otherwise
      // fill the beam with clones of one structure and starve couplings
      // whose payoff only shows several layers later.
      std::vector<BeamBranch> survivors;
      std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;
      for (const BeamBranch& cand : candidates) {
        if (survivors.size() >= keep) break;
        const auto& last = cand.ansatz.layers.back();
        if (std::find(seen.begin(), seen.end(), last) == seen.end()) {
          seen.push_back(last);
          survivors.push_back(cand);
        }
      }
      for (const BeamBranch& cand : candidates) {
        if (survivors.size() >= keep) break;
        if (std::none_of(survivors.begin(), survivors.end(),
                         [&](const BeamBranch& s) { return s.id == cand.id; }))
          survivors.push_back(cand);
      }
      beam = std::move(survivors);
      best_dist = beam.front().dist;
    }
  }

  // Merge restarts: best m_per_depth distinct circuits per depth, then drop
  // depths past the first exact solution.
  std::vector<SynthesisSolution> merged;
  std::uint32_t exact_depth = 0;
  bool have_exact = false;
  for (auto& [depth, sols] : by_depth) {
    std::sort(sols.begin(), sols.end(),
              [](const SynthesisSolution& a, const SynthesisSolution& b) {
                if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
                if (a.provenance.restart != b.provenance.restart)
                  return a.provenance.restart < b.provenance.restart;
                return a.provenance.branch < b.provenance.branch;
              });
    std::vector<SynthesisSolution> kept;
    for (auto& s : sols) {
      bool dup = std::any_of(kept.begin(), kept.end(),
                             [&](const SynthesisSolution& k) {
                               return k.circuit == s.circuit;
                             });
      if (!dup) kept.push_back(std::move(s));
      if (kept.size() >= cfg.m_per_depth) break;
    }
    if (!have_exact && !kept.empty() && kept.front().epsilon < cfg.exact_tol) {
      have_exact = true;
      exact_depth = depth;
    }
    for (auto& s : kept) merged.push_back(std::move(s));
  }
  if (have_exact) {
    std::erase_if(merged, [&](const SynthesisSolution& s) {
      return s.provenance.layers > exact_depth;
    });
  }
  std::sort(merged.begin(), merged.end(),
            [](const SynthesisSolution& a, const SynthesisSolution& b) {
              if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
              if (a.cnots != b.cnots) return a.cnots < b.cnots;
              if (a.provenance.restart != b.provenance.restart)
                return a.provenance.restart < b.provenance.restart;
              return a.provenance.branch < b.provenance.branch;
            });
  return merged;
}

}  // namespace qest
