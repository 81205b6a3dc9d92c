#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "pulearn/error.hpp"
#include "pulearn/matrix.hpp"
#include "pulearn/risk.hpp"
#include "pulearn/rng.hpp"

namespace pulearn {

// Fully connected scorer. weights[l] has shape dims[l] x dims[l+1]
// (row-major, row = input unit), biases[l] has length dims[l+1]. Hidden
// layers are rectified-linear; the final layer is linear and its output is
// squashed to a probability where one is needed.
struct ScorerParams {
  std::vector<std::size_t> layer_dims;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  std::size_t depth() const { return weights.size(); }
  std::size_t input_dim() const { return layer_dims.front(); }
  std::size_t param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
      n += weights[l].data.size() + biases[l].size();
    return n;
  }
};

inline void check_scorer(const ScorerParams& p) {
  if (p.layer_dims.size() < 2)
    fail(Errc::invalid_argument, "scorer needs at least one layer");
  if (p.layer_dims.back() != 1)
    fail(Errc::invalid_argument, "output layer width must be 1");
  if (p.weights.size() != p.layer_dims.size() - 1 ||
      p.biases.size() != p.weights.size())
    fail(Errc::dimension_mismatch, "layer count mismatch");
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    if (p.weights[l].rows != p.layer_dims[l] ||
        p.weights[l].cols != p.layer_dims[l + 1] ||
        p.biases[l].size() != p.layer_dims[l + 1])
      fail(Errc::dimension_mismatch, "layer shape mismatch");
    for (double v : p.weights[l].data)
      if (!std::isfinite(v))
        fail(Errc::invalid_argument, "non-finite weight");
    for (double v : p.biases[l])
      if (!std::isfinite(v))
        fail(Errc::invalid_argument, "non-finite bias");
  }
}

// Scaled-uniform weight init with bound sqrt(6 / (fan_in + fan_out)),
// zero biases.
inline ScorerParams init_scorer_dims(const std::vector<std::size_t>& dims,
                                     std::uint64_t seed) {
  if (dims.size() < 2)
    fail(Errc::invalid_argument, "need at least input and output dims");
  for (std::size_t w : dims)
    if (w == 0) fail(Errc::invalid_argument, "zero-width layer");
  ScorerParams p;
  p.layer_dims = dims;
  Rng rng(mix_seed(seed, hash_str("init_scorer")));
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l], dims[l + 1]);
    const double bound =
        std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    for (double& v : w.data) v = rng.uniform(-bound, bound);
    p.weights.push_back(std::move(w));
    p.biases.emplace_back(dims[l + 1], 0.0);
  }
  check_scorer(p);
  return p;
}

// The 5-layer architecture: [d, hidden, hidden, hidden, hidden, 1].
inline ScorerParams init_scorer(std::size_t d, std::size_t hidden,
                                std::uint64_t seed) {
  if (d < 1 || hidden < 1)
    fail(Errc::invalid_argument, "d and hidden width must be >= 1");
  return init_scorer_dims({d, hidden, hidden, hidden, hidden, 1}, seed);
}

// acts[0] is the input batch; acts[l+1] is the output of layer l, already
// rectified for hidden layers and raw for the final layer.
// min_abs_hidden_pre tracks how close any hidden pre-activation came to
// the rectifier kink, for finite-difference test hygiene.
struct ForwardCache {
  std::vector<Matrix> acts;
  double min_abs_hidden_pre = std::numeric_limits<double>::infinity();
  const Matrix& raw_out() const { return acts.back(); }
};

inline ForwardCache forward_cache(const ScorerParams& p, const Matrix& batch) {
  if (batch.cols != p.input_dim())
    fail(Errc::dimension_mismatch, "batch width != scorer input dim");
  ForwardCache cache;
  cache.acts.reserve(p.depth() + 1);
  cache.acts.push_back(batch);
  for (std::size_t l = 0; l < p.depth(); ++l) {
    const Matrix& a = cache.acts.back();
    const Matrix& w = p.weights[l];
    Matrix out(a.rows, w.cols);
    for (std::size_t r = 0; r < a.rows; ++r) {
      double* orow = out.row(r);
      for (std::size_t j = 0; j < w.cols; ++j) orow[j] = p.biases[l][j];
      const double* arow = a.row(r);
      for (std::size_t k = 0; k < a.cols; ++k) {
        const double av = arow[k];
        if (av == 0.0) continue;
        const double* wrow = w.row(k);
        for (std::size_t j = 0; j < w.cols; ++j) orow[j] += av * wrow[j];
      }
    }
    if (l + 1 < p.depth()) {
      for (double& v : out.data) {
        const double av = std::fabs(v);
        if (av < cache.min_abs_hidden_pre) cache.min_abs_hidden_pre = av;
        v = v > 0.0 ? v : 0.0;
      }
    }
    cache.acts.push_back(std::move(out));
  }
  return cache;
}

inline std::vector<double> raw_to_vector(const Matrix& raw) {
  std::vector<double> v(raw.rows);
  for (std::size_t r = 0; r < raw.rows; ++r) v[r] = raw(r, 0);
  return v;
}

// Unsquashed scores g(x), one per batch row.
inline std::vector<double> forward_margin(const ScorerParams& p,
                                          const Matrix& batch) {
  return raw_to_vector(forward_cache(p, batch).raw_out());
}

// Probability scores in (0, 1): logistic squash of the raw output.
inline std::vector<double> forward(const ScorerParams& p,
                                   const Matrix& batch) {
  auto v = forward_margin(p, batch);
  for (double& x : v) x = squash(x);
  return v;
}

struct ScorerGrad {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

inline ScorerGrad zero_grad_like(const ScorerParams& p) {
  ScorerGrad g;
  for (std::size_t l = 0; l < p.depth(); ++l) {
    g.weights.emplace_back(p.weights[l].rows, p.weights[l].cols);
    g.biases.emplace_back(p.biases[l].size(), 0.0);
  }
  return g;
}

inline void scale_grad(ScorerGrad& g, double s) {
  for (auto& w : g.weights)
    for (double& v : w.data) v *= s;
  for (auto& b : g.biases)
    for (double& v : b) v *= s;
}

// Accumulate d(objective)/d(params) into grad, given d(objective)/d(raw
// output) for each row of a cached forward pass.
inline void backprop_into(const ScorerParams& p, const ForwardCache& cache,
                          const std::vector<double>& d_raw,
                          ScorerGrad& grad) {
  const std::size_t depth = p.depth();
  Matrix delta(cache.raw_out().rows, 1);
  for (std::size_t r = 0; r < delta.rows; ++r) delta(r, 0) = d_raw[r];

  for (std::size_t l = depth; l-- > 0;) {
    const Matrix& a = cache.acts[l];
    Matrix& gw = grad.weights[l];
    std::vector<double>& gb = grad.biases[l];
    for (std::size_t r = 0; r < a.rows; ++r) {
      const double* arow = a.row(r);
      const double* drow = delta.row(r);
      for (std::size_t j = 0; j < delta.cols; ++j) gb[j] += drow[j];
      for (std::size_t k = 0; k < a.cols; ++k) {
        const double av = arow[k];
        if (av == 0.0) continue;
        double* grow = gw.row(k);
        for (std::size_t j = 0; j < delta.cols; ++j)
          grow[j] += av * drow[j];
      }
    }
    if (l == 0) break;
    const Matrix& w = p.weights[l];
    Matrix prev(a.rows, a.cols);
    for (std::size_t r = 0; r < a.rows; ++r) {
      const double* arow = a.row(r);
      const double* drow = delta.row(r);
      double* prow = prev.row(r);
      for (std::size_t k = 0; k < a.cols; ++k) {
        if (arow[k] <= 0.0) {  // dead rectifier unit
          prow[k] = 0.0;
          continue;
        }
        const double* wrow = w.row(k);
        double dot = 0.0;
        for (std::size_t j = 0; j < delta.cols; ++j) dot += wrow[j] * drow[j];
        prow[k] = dot;
      }
    }
    delta = std::move(prev);
  }
}

struct TrainConfig {
  std::size_t max_epochs = 100;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::ifpu;
  LossKind loss = LossKind::Focal(3.0);
  ClassPrior prior{0.5};
  std::size_t hidden_width = 64;
};

inline void check_train_config(const TrainConfig& cfg) {
  if (cfg.max_epochs < 1) fail(Errc::invalid_argument, "max_epochs must be >= 1");
  if (cfg.batch_size < 2) fail(Errc::invalid_argument, "batch_size must be >= 2");
  if (!(cfg.learning_rate > 0.0))
    fail(Errc::invalid_argument, "learning_rate must be > 0");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) ||
      !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
    fail(Errc::invalid_argument, "moment decays must lie in [0, 1)");
  if (!(cfg.epsilon > 0.0)) fail(Errc::invalid_argument, "epsilon must be > 0");
  if (cfg.hidden_width < 1)
    fail(Errc::invalid_argument, "hidden_width must be >= 1");
  check_prior(cfg.prior);
}

struct BackwardResult {
  ScorerGrad grad;       // d(objective)/d(params)
  RiskBreakdown risk;    // batch risk under the configured estimator
  Branch branch = Branch::descent;
  double objective = 0.0;
};

// Chain rule of the configured risk estimator through the scorer. On the
// clamped branch the gradient is of the negative-risk surrogate only and
// comes back tagged ascent; the caller decides the step direction.
inline BackwardResult backward(const ScorerParams& p, const Matrix& batch_P,
                               const Matrix& batch_U,
                               const TrainConfig& cfg) {
  if (batch_P.rows == 0 || batch_U.rows == 0)
    fail(Errc::empty_input, "backward needs nonempty P and U batches");
  const ForwardCache cache_P = forward_cache(p, batch_P);
  const ForwardCache cache_U = forward_cache(p, batch_U);
  const std::vector<double> raw_P = raw_to_vector(cache_P.raw_out());
  const std::vector<double> raw_U = raw_to_vector(cache_U.raw_out());

  const bool squashed = cfg.loss.takes_probability();
  std::vector<double> scores_P = raw_P, scores_U = raw_U;
  if (squashed) {
    for (double& v : scores_P) v = squash(v);
    for (double& v : scores_U) v = squash(v);
  }

  RiskGradient rg =
      risk_gradient(scores_P, scores_U, cfg.prior, cfg.estimator, cfg.loss);

  // d(objective)/d(raw): through the squash when scores are probabilities
  std::vector<double> d_raw_P(raw_P.size()), d_raw_U(raw_U.size());
  for (std::size_t i = 0; i < raw_P.size(); ++i)
    d_raw_P[i] = squashed
                     ? rg.wrt_pos[i] * scores_P[i] * (1.0 - scores_P[i])
                     : rg.wrt_pos[i];
  for (std::size_t j = 0; j < raw_U.size(); ++j)
    d_raw_U[j] = squashed
                     ? rg.wrt_unl[j] * scores_U[j] * (1.0 - scores_U[j])
                     : rg.wrt_unl[j];

  BackwardResult out;
  out.grad = zero_grad_like(p);
  backprop_into(p, cache_P, d_raw_P, out.grad);
  backprop_into(p, cache_U, d_raw_U, out.grad);
  out.risk = rg.risk;
  out.branch = rg.branch;
  out.objective = rg.value;
  return out;
}

struct AdamState {
  std::vector<Matrix> m_w, v_w;
  std::vector<std::vector<double>> m_b, v_b;
  std::size_t step = 0;
};

inline AdamState init_adam(const ScorerParams& p) {
  AdamState s;
  for (std::size_t l = 0; l < p.depth(); ++l) {
    s.m_w.emplace_back(p.weights[l].rows, p.weights[l].cols);
    s.v_w.emplace_back(p.weights[l].rows, p.weights[l].cols);
    s.m_b.emplace_back(p.biases[l].size(), 0.0);
    s.v_b.emplace_back(p.biases[l].size(), 0.0);
  }
  return s;
}

// One adaptive-moment descent step along -grad, with bias correction.
inline void adam_step(ScorerParams& p, const ScorerGrad& grad,
                      AdamState& state, const TrainConfig& cfg) {
  if (state.m_w.size() != p.depth() || grad.weights.size() != p.depth())
    fail(Errc::dimension_mismatch, "optimizer state/gradient shape mismatch");
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double corr1 = 1.0 - std::pow(cfg.beta1, t);
  const double corr2 = 1.0 - std::pow(cfg.beta2, t);
  auto update = [&](double& theta, double g, double& m, double& v) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
    const double mhat = m / corr1;
    const double vhat = v / corr2;
    theta -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
  };
  for (std::size_t l = 0; l < p.depth(); ++l) {
    if (!p.weights[l].same_shape(grad.weights[l]))
      fail(Errc::dimension_mismatch, "gradient shape mismatch");
    for (std::size_t i = 0; i < p.weights[l].data.size(); ++i)
      update(p.weights[l].data[i], grad.weights[l].data[i],
             state.m_w[l].data[i], state.v_w[l].data[i]);
    for (std::size_t i = 0; i < p.biases[l].size(); ++i)
      update(p.biases[l][i], grad.biases[l][i], state.m_b[l][i],
             state.v_b[l][i]);
  }
}

}  // namespace pulearn
