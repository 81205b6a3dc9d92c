#pragma once

#include <algorithm>
#include <cmath>

#include "pulearn/error.hpp"

namespace pulearn {

inline double squash(double t) {
  // numerically stable logistic 1/(1+exp(-t))
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Sigmoid loss on a margin z = y*g(x): 1/(1+exp(z)). Strictly decreasing,
// and symmetric: loss(z) + loss(-z) = 1.
inline double sigmoid_loss(double z) { return squash(-z); }

struct FocalParams {
  double gamma = 3.0;
  // probabilities are clamped to [clamp_eps, 1-clamp_eps] before any log
  double clamp_eps = 1e-7;
};

struct LossKind {
  enum class Kind { sigmoid, logistic, focal };
  Kind kind = Kind::logistic;
  FocalParams focal;  // gamma ignored for logistic, both ignored for sigmoid

  static LossKind Sigmoid() { return {Kind::sigmoid, FocalParams{}}; }
  static LossKind Logistic(double clamp_eps = 1e-7) {
    return {Kind::logistic, FocalParams{0.0, clamp_eps}};
  }
  static LossKind Focal(double gamma, double clamp_eps = 1e-7) {
    return {Kind::focal, FocalParams{gamma, clamp_eps}};
  }
  // true when the loss consumes probabilities; sigmoid loss takes margins
  bool takes_probability() const { return kind != Kind::sigmoid; }
  const char* name() const {
    switch (kind) {
      case Kind::sigmoid: return "sigmoid";
      case Kind::logistic: return "logistic";
      case Kind::focal: return "focal";
    }
    return "?";
  }
};

inline void check_focal_params(const FocalParams& fp) {
  if (!(fp.gamma >= 0.0))
    fail(Errc::invalid_argument, "focal gamma must be >= 0");
  if (!(fp.clamp_eps > 0.0 && fp.clamp_eps < 0.5))
    fail(Errc::invalid_argument, "clamp_eps must be in (0, 0.5)");
}

inline double clamp_prob(double p, double eps) {
  return std::min(std::max(p, eps), 1.0 - eps);
}

inline void check_label(int y) {
  if (y != 1 && y != -1) fail(Errc::invalid_label, "label must be +1 or -1");
}

// Focal loss as a composite of the +-1 label:
//   y = +1:  -(1-p)^gamma * log(p)
//   y = -1:  -p^gamma     * log(1-p)
// gamma = 0 reduces to plain cross-entropy. Evaluated on the clamped p.
inline double focal_pointwise(double p, int y, const FocalParams& fp) {
  check_label(y);
  check_focal_params(fp);
  if (!(p >= 0.0 && p <= 1.0))
    fail(Errc::score_out_of_range, "probability outside [0,1]");
  const double q = clamp_prob(p, fp.clamp_eps);
  if (y == 1) return -std::pow(1.0 - q, fp.gamma) * std::log(q);
  return -std::pow(q, fp.gamma) * std::log(1.0 - q);
}

// d(focal_pointwise)/dp, taken at the clamped point. The gamma-scaled
// term is dropped outright at gamma = 0 so no 0 * inf can appear.
inline double focal_grad(double p, int y, const FocalParams& fp) {
  check_label(y);
  check_focal_params(fp);
  if (!(p >= 0.0 && p <= 1.0))
    fail(Errc::score_out_of_range, "probability outside [0,1]");
  const double q = clamp_prob(p, fp.clamp_eps);
  const double g = fp.gamma;
  if (y == 1) {
    const double t = (g > 0.0) ? g * std::pow(1.0 - q, g - 1.0) * std::log(q)
                               : 0.0;
    return t - std::pow(1.0 - q, g) / q;
  }
  const double t = (g > 0.0) ? -g * std::pow(q, g - 1.0) * std::log(1.0 - q)
                             : 0.0;
  return t + std::pow(q, g) / (1.0 - q);
}

// Pointwise loss value for a score under the given loss kind. The score is
// a margin for the sigmoid loss and a probability otherwise.
inline double loss_value(double score, int y, const LossKind& loss) {
  switch (loss.kind) {
    case LossKind::Kind::sigmoid:
      check_label(y);
      return sigmoid_loss(static_cast<double>(y) * score);
    case LossKind::Kind::logistic: {
      FocalParams fp{0.0, loss.focal.clamp_eps};
      return focal_pointwise(score, y, fp);
    }
    case LossKind::Kind::focal:
      return focal_pointwise(score, y, loss.focal);
  }
  fail(Errc::invalid_argument, "unknown loss kind");
}

// d(loss_value)/d(score).
inline double loss_grad(double score, int y, const LossKind& loss) {
  switch (loss.kind) {
    case LossKind::Kind::sigmoid: {
      check_label(y);
      const double l = sigmoid_loss(static_cast<double>(y) * score);
      return -static_cast<double>(y) * l * (1.0 - l);
    }
    case LossKind::Kind::logistic: {
      FocalParams fp{0.0, loss.focal.clamp_eps};
      return focal_grad(score, y, fp);
    }
    case LossKind::Kind::focal:
      return focal_grad(score, y, loss.focal);
  }
  fail(Errc::invalid_argument, "unknown loss kind");
}

}  // namespace pulearn
