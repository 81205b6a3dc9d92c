#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pulearn/scorer.hpp"

namespace pulearn {

struct GradCheckConfig {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double fd_step = 1e-6;
  double tolerance = 1e-5;
  // 157 parameters; finite differences need a small network
  std::vector<std::size_t> dims = {3, 6, 6, 6, 6, 1};
  std::vector<double> gammas = {0.0, 1.0, 3.0, 5.0};
};

struct GradCheckReport {
  std::size_t trials = 0;
  std::size_t descent_trials = 0;
  std::size_t ascent_trials = 0;
  std::size_t redraws = 0;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  std::string worst;
  bool pass = false;

  std::string describe() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " max_rel_err=" << max_rel_err
       << " tolerance=" << tolerance << " trials=" << trials << " (descent "
       << descent_trials << ", ascent " << ascent_trials << ", redraws "
       << redraws << ")";
    if (!worst.empty()) os << " worst: " << worst;
    return os.str();
  }
};

namespace detail {

inline std::vector<double*> param_ptrs(ScorerParams& p) {
  std::vector<double*> out;
  out.reserve(p.param_count());
  for (std::size_t l = 0; l < p.depth(); ++l) {
    for (double& v : p.weights[l].data) out.push_back(&v);
    for (double& v : p.biases[l]) out.push_back(&v);
  }
  return out;
}

inline std::vector<double> grad_values(const ScorerGrad& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    for (double v : g.weights[l].data) out.push_back(v);
    for (double v : g.biases[l]) out.push_back(v);
  }
  return out;
}

// Objective value plus the hidden rectifier on/off pattern and the largest
// raw output. A finite-difference step is only trusted when the pattern is
// unchanged and raw outputs stay far from the probability clamp.
struct ObjectiveProbe {
  double objective = 0.0;
  std::uint64_t pattern = 0;
  double max_abs_raw = 0.0;
};

inline ObjectiveProbe probe_objective(const ScorerParams& p,
                                      const Matrix& batch_P,
                                      const Matrix& batch_U,
                                      const TrainConfig& cfg, Branch branch) {
  ObjectiveProbe pr;
  pr.pattern = 1469598103934665603ULL;
  auto run = [&](const Matrix& batch) {
    ForwardCache c = forward_cache(p, batch);
    for (std::size_t l = 1; l + 1 < c.acts.size(); ++l)
      for (double v : c.acts[l].data) {
        pr.pattern ^= static_cast<std::uint64_t>(v > 0.0);
        pr.pattern *= 1099511628211ULL;
      }
    std::vector<double> raw = raw_to_vector(c.raw_out());
    for (double v : raw)
      if (std::fabs(v) > pr.max_abs_raw) pr.max_abs_raw = std::fabs(v);
    if (cfg.loss.takes_probability())
      for (double& v : raw) v = squash(v);
    return raw;
  };
  const std::vector<double> scores_P = run(batch_P);
  const std::vector<double> scores_U = run(batch_U);
  // the unclamped decomposition is smooth in the parameters, so both
  // branch objectives can be read off it regardless of the sign of r
  RiskBreakdown rb = upu_risk(scores_P, scores_U, cfg.prior, cfg.loss);
  pr.objective = branch == Branch::descent
                     ? rb.total
                     : rb.unlabeled_term - rb.neg_correction;
  return pr;
}

}  // namespace detail

// Compares the analytic parameter gradient against central finite
// differences of the same branch objective over randomized draws of
// parameters, batches, estimator, loss, and prior. Draws that put a hidden
// unit on the rectifier kink or a score on the probability clamp between
// the two difference points are redrawn, as the objective is not
// differentiable across them.
inline GradCheckReport grad_check(const GradCheckConfig& cfg = {}) {
  GradCheckReport rep;
  rep.tolerance = cfg.tolerance;
  const double h = cfg.fd_step;
  constexpr double kRawLimit = 15.0;  // squash(15) is ~3e-7 from the clamp

  {
    ScorerParams probe = init_scorer_dims(cfg.dims, 0);
    if (probe.param_count() > 500)
      fail(Errc::invalid_argument,
           "grad_check network too large for finite differences");
  }

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const bool want_ascent = (t % 2) == 1;
    bool done = false;
    for (std::size_t attempt = 0; attempt < 1000 && !done; ++attempt) {
      Rng rng(mix_seed(cfg.seed, t * 1000003ULL + attempt));

      Estimator est;
      if (want_ascent)
        est = (t / 2) % 2 == 0 ? Estimator::nnpu : Estimator::ifpu;
      else
        est = static_cast<Estimator>((t / 2) % 3);

      if (cfg.gammas.empty()) fail(Errc::invalid_argument, "grad_check: empty gamma list");
      const auto draw_gamma = [&] { return cfg.gammas[rng.index(cfg.gammas.size())]; };
      LossKind loss;
      if (est == Estimator::ifpu) {
        loss = LossKind::Focal(draw_gamma());
      } else {
        switch (rng.index(3)) {
          case 0: loss = LossKind::Sigmoid(); break;
          case 1: loss = LossKind::Logistic(); break;
          default: loss = LossKind::Focal(draw_gamma()); break;
        }
      }

      TrainConfig tc;
      tc.estimator = est;
      tc.loss = loss;
      tc.prior = ClassPrior{want_ascent ? rng.uniform(0.55, 0.95)
                                        : rng.uniform(0.05, 0.60)};

      ScorerParams params = init_scorer_dims(cfg.dims, rng.u64());
      const std::size_t n_p = 2 + rng.index(5);
      const std::size_t n_u = 2 + rng.index(7);
      Matrix batch_P(n_p, cfg.dims.front());
      Matrix batch_U(n_u, cfg.dims.front());
      for (double& v : batch_P.data) v = 1.5 * rng.normal();
      for (double& v : batch_U.data) v = 1.5 * rng.normal();

      BackwardResult bw = backward(params, batch_P, batch_U, tc);
      if (want_ascent != (bw.branch == Branch::ascent)) {
        ++rep.redraws;
        continue;
      }
      detail::ObjectiveProbe base =
          detail::probe_objective(params, batch_P, batch_U, tc, bw.branch);
      if (base.max_abs_raw >= kRawLimit) {
        ++rep.redraws;
        continue;
      }

      auto ptrs = detail::param_ptrs(params);
      auto analytic = detail::grad_values(bw.grad);
      bool tainted = false;
      double trial_worst = -1.0;
      std::size_t trial_worst_idx = 0;
      double trial_worst_fd = 0.0;
      for (std::size_t i = 0; i < ptrs.size() && !tainted; ++i) {
        const double saved = *ptrs[i];
        *ptrs[i] = saved + h;
        auto up = detail::probe_objective(params, batch_P, batch_U, tc,
                                          bw.branch);
        *ptrs[i] = saved - h;
        auto dn = detail::probe_objective(params, batch_P, batch_U, tc,
                                          bw.branch);
        *ptrs[i] = saved;
        if (up.pattern != base.pattern || dn.pattern != base.pattern ||
            up.max_abs_raw >= kRawLimit || dn.max_abs_raw >= kRawLimit) {
          tainted = true;
          break;
        }
        const double fd = (up.objective - dn.objective) / (2.0 * h);
        const double rel = std::fabs(analytic[i] - fd) /
                           std::max({1.0, std::fabs(analytic[i]),
                                     std::fabs(fd)});
        if (rel > trial_worst) {
          trial_worst = rel;
          trial_worst_idx = i;
          trial_worst_fd = fd;
        }
      }
      if (tainted) {
        ++rep.redraws;
        continue;
      }

      if (trial_worst > rep.max_rel_err) {
        rep.max_rel_err = trial_worst;
        std::ostringstream os;
        os << "trial " << t << " " << estimator_name(est) << "/"
           << loss.name();
        if (loss.kind == LossKind::Kind::focal)
          os << "(gamma=" << loss.focal.gamma << ")";
        os << " prior=" << tc.prior.pi_p << " branch="
           << (bw.branch == Branch::ascent ? "ascent" : "descent")
           << " param " << trial_worst_idx << " analytic "
           << analytic[trial_worst_idx] << " fd " << trial_worst_fd;
        rep.worst = os.str();
      }
      if (bw.branch == Branch::ascent) ++rep.ascent_trials;
      else ++rep.descent_trials;
      ++rep.trials;
      done = true;
    }
    if (!done)
      fail(Errc::invalid_argument,
           "grad_check could not draw an acceptable configuration");
  }
  rep.pass = rep.max_rel_err < cfg.tolerance;
  return rep;
}

}  // namespace pulearn
