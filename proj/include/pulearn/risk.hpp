#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pulearn/error.hpp"
#include "pulearn/losses.hpp"
#include "pulearn/prior.hpp"

namespace pulearn {

enum class Estimator { upu, nnpu, ifpu };

inline const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::upu: return "upu";
    case Estimator::nnpu: return "nnpu";
    case Estimator::ifpu: return "ifpu";
  }
  return "?";
}

inline Estimator parse_estimator(std::string_view s) {
  if (s == "upu") return Estimator::upu;
  if (s == "nnpu") return Estimator::nnpu;
  if (s == "ifpu") return Estimator::ifpu;
  fail(Errc::invalid_argument, "unknown estimator: " + std::string(s));
}

// Loss each estimator was designed around: margin-based sigmoid loss for
// the unbiased and non-negative estimators, focal loss for the focused one.
inline LossKind default_loss_for(Estimator e, double gamma = 3.0) {
  if (e == Estimator::ifpu) return LossKind::Focal(gamma);
  return LossKind::Sigmoid();
}

// Empirical risk split into its three building blocks. For the PU
// estimators total = pos_term - neg_correction + unlabeled_term, except
// when the non-negative clamp fires (then total = pos_term and
// clamped = true). pn_risk repurposes neg_correction additively; see there.
struct RiskBreakdown {
  double pos_term = 0.0;        // prior * mean positive-label loss over P
  double neg_correction = 0.0;  // prior * mean negative-label loss over P
  double unlabeled_term = 0.0;  // mean negative-label loss over U
  double total = 0.0;
  bool clamped = false;
};

inline double mean_loss(const std::vector<double>& scores, int y,
                        const LossKind& loss) {
  if (scores.empty()) fail(Errc::empty_input, "mean_loss of empty vector");
  double acc = 0.0;
  for (double s : scores) acc += loss_value(s, y, loss);
  return acc / static_cast<double>(scores.size());
}

// Fully supervised risk: prior-weighted positive risk plus
// (1-prior)-weighted negative risk. neg_correction carries the weighted
// negative-class term and is added, not subtracted, so the generic
// total identity does not apply here.
inline RiskBreakdown pn_risk(const std::vector<double>& scores_P,
                             const std::vector<double>& scores_N,
                             const ClassPrior& prior, const LossKind& loss) {
  check_prior(prior);
  RiskBreakdown rb;
  rb.pos_term = prior.pi_p * mean_loss(scores_P, 1, loss);
  rb.neg_correction = prior.pi_n() * mean_loss(scores_N, -1, loss);
  rb.unlabeled_term = 0.0;
  rb.total = rb.pos_term + rb.neg_correction;
  rb.clamped = false;
  return rb;
}

// Unbiased PU risk. Treats all of U as negatives, then removes the
// positive contamination via the correction term. Can go below zero.
inline RiskBreakdown upu_risk(const std::vector<double>& scores_P,
                              const std::vector<double>& scores_U,
                              const ClassPrior& prior, const LossKind& loss) {
  check_prior(prior);
  RiskBreakdown rb;
  rb.pos_term = prior.pi_p * mean_loss(scores_P, 1, loss);
  rb.neg_correction = prior.pi_p * mean_loss(scores_P, -1, loss);
  rb.unlabeled_term = mean_loss(scores_U, -1, loss);
  rb.total = rb.pos_term - rb.neg_correction + rb.unlabeled_term;
  rb.clamped = false;
  return rb;
}

// Non-negative PU risk: the estimated negative-class risk
// r = unlabeled_term - neg_correction is floored at zero.
inline RiskBreakdown nnpu_risk(const std::vector<double>& scores_P,
                               const std::vector<double>& scores_U,
                               const ClassPrior& prior, const LossKind& loss) {
  RiskBreakdown rb = upu_risk(scores_P, scores_U, prior, loss);
  if (rb.unlabeled_term - rb.neg_correction < 0.0) {
    rb.total = rb.pos_term;
    rb.clamped = true;
  }
  return rb;
}

// Focused PU risk, unbiased form: the uPU decomposition evaluated with the
// focal loss on probability scores.
inline RiskBreakdown ifpu_risk_unclipped(const std::vector<double>& probs_P,
                                         const std::vector<double>& probs_U,
                                         const ClassPrior& prior,
                                         const FocalParams& fp = {}) {
  return upu_risk(probs_P, probs_U, prior,
                  LossKind::Focal(fp.gamma, fp.clamp_eps));
}

// Focused PU risk with the non-negative clamp. This is the training
// objective of the focused estimator.
inline RiskBreakdown ifpu_risk(const std::vector<double>& probs_P,
                               const std::vector<double>& probs_U,
                               const ClassPrior& prior,
                               const FocalParams& fp = {}) {
  return nnpu_risk(probs_P, probs_U, prior,
                   LossKind::Focal(fp.gamma, fp.clamp_eps));
}

enum class Branch { descent, ascent };

// Per-score derivatives of the current training objective. On the descent
// branch the objective is the full risk. When the clamp fires the
// objective switches to r = unlabeled_term - neg_correction and the tag
// flips to ascent: the caller must step along +gradient to grow r back
// above zero, i.e. negate before a minimizing update.
struct RiskGradient {
  std::vector<double> wrt_pos;  // d objective / d score of each P element
  std::vector<double> wrt_unl;  // d objective / d score of each U element
  Branch branch = Branch::descent;
  double value = 0.0;  // objective value the derivatives belong to
  RiskBreakdown risk;
};

inline RiskGradient risk_gradient(const std::vector<double>& scores_P,
                                  const std::vector<double>& scores_U,
                                  const ClassPrior& prior, Estimator estimator,
                                  const LossKind& loss) {
  check_prior(prior);
  if (scores_P.empty() || scores_U.empty())
    fail(Errc::empty_input, "risk gradient needs nonempty P and U batches");
  RiskGradient g;
  const std::size_t n_p = scores_P.size();
  const std::size_t n_u = scores_U.size();
  g.wrt_pos.resize(n_p);
  g.wrt_unl.resize(n_u);

  g.risk = (estimator == Estimator::upu)
               ? upu_risk(scores_P, scores_U, prior, loss)
               : nnpu_risk(scores_P, scores_U, prior, loss);
  g.branch = g.risk.clamped ? Branch::ascent : Branch::descent;

  const double w_p = prior.pi_p / static_cast<double>(n_p);
  const double w_u = 1.0 / static_cast<double>(n_u);
  if (g.branch == Branch::descent) {
    for (std::size_t i = 0; i < n_p; ++i)
      g.wrt_pos[i] = w_p * (loss_grad(scores_P[i], 1, loss) -
                            loss_grad(scores_P[i], -1, loss));
    for (std::size_t j = 0; j < n_u; ++j)
      g.wrt_unl[j] = w_u * loss_grad(scores_U[j], -1, loss);
    g.value = g.risk.total;
  } else {
    for (std::size_t i = 0; i < n_p; ++i)
      g.wrt_pos[i] = -w_p * loss_grad(scores_P[i], -1, loss);
    for (std::size_t j = 0; j < n_u; ++j)
      g.wrt_unl[j] = w_u * loss_grad(scores_U[j], -1, loss);
    g.value = g.risk.unlabeled_term - g.risk.neg_correction;
  }
  return g;
}

}  // namespace pulearn
