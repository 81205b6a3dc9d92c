#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pulearn/dataset.hpp"
#include "pulearn/scorer.hpp"

namespace pulearn {

struct TraceRecord {
  std::size_t epoch = 0;  // 0-based
  std::size_t batch = 0;  // 0-based within the epoch
  double risk_total = 0.0;
  Branch branch = Branch::descent;
  bool clamped = false;
};

struct TrainTrace {
  std::vector<TraceRecord> records;  // max_epochs * batches_per_epoch
  ScorerParams final_params;
};

// Mini-batch training loop. Each epoch reshuffles P and U independently,
// slices U into N = ceil(n_U / batch_size) batches and pairs every U-batch
// with a proportional P-slice; when there are fewer labeled positives than
// batches an empty slice is replaced by one positive drawn with
// replacement. Clamp-branch batches take an ascending step.
inline std::pair<ScorerParams, TrainTrace> train(const PUView& pu,
                                                 const TrainConfig& cfg) {
  check_puview(pu);
  check_train_config(cfg);
  const std::size_t n_p = pu.n_labeled();
  const std::size_t n_u = pu.n_unlabeled();
  if (cfg.batch_size > n_u)
    fail(Errc::invalid_argument, "batch_size exceeds unlabeled pool");

  const Matrix feats_p = pu.base.features.gather_rows(pu.labeled_pos);
  const Matrix feats_u = pu.base.features.gather_rows(pu.unlabeled);

  ScorerParams params = init_scorer(pu.base.d(), cfg.hidden_width,
                                    mix_seed(cfg.seed, hash_str("init")));
  AdamState adam = init_adam(params);
  Rng rng(mix_seed(cfg.seed, hash_str("shuffle")));

  const std::size_t n_batches = (n_u + cfg.batch_size - 1) / cfg.batch_size;
  TrainTrace trace;
  trace.records.reserve(cfg.max_epochs * n_batches);

  std::vector<std::size_t> perm_p(n_p), perm_u(n_u);
  for (std::size_t i = 0; i < n_p; ++i) perm_p[i] = i;
  for (std::size_t i = 0; i < n_u; ++i) perm_u[i] = i;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(perm_p);
    rng.shuffle(perm_u);
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t u_lo = b * cfg.batch_size;
      const std::size_t u_hi = std::min(u_lo + cfg.batch_size, n_u);
      std::vector<std::size_t> u_slice(perm_u.begin() + u_lo,
                                       perm_u.begin() + u_hi);

      std::size_t p_lo = (b * n_p) / n_batches;
      std::size_t p_hi = ((b + 1) * n_p) / n_batches;
      std::vector<std::size_t> p_slice(perm_p.begin() + p_lo,
                                       perm_p.begin() + p_hi);
      if (p_slice.empty()) p_slice.push_back(perm_p[rng.index(n_p)]);

      const Matrix batch_p = feats_p.gather_rows(p_slice);
      const Matrix batch_u = feats_u.gather_rows(u_slice);

      BackwardResult bw = backward(params, batch_p, batch_u, cfg);
      if (bw.branch == Branch::ascent) scale_grad(bw.grad, -1.0);
      adam_step(params, bw.grad, adam, cfg);

      trace.records.push_back({epoch, b, bw.risk.total, bw.branch,
                               bw.risk.clamped});
    }
  }
  trace.final_params = params;
  return {std::move(params), std::move(trace)};
}

}  // namespace pulearn
