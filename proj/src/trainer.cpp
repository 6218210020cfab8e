#include "fedx/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fedx/rng.hpp"

namespace fedx {

void TrainConfig::validate() const {
  if (local_epochs < 1) throw std::invalid_argument("train: local_epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("train: lr must be > 0");
}

std::pair<double, Tensor> loss_and_grad(const Tensor& logits, const Tensor& labels,
                                        LossKind kind) {
  if (logits.shape != labels.shape) {
    throw std::invalid_argument("loss_and_grad: labels shape " + shape_to_string(labels.shape) +
                                " != logits shape " + shape_to_string(logits.shape));
  }
  if (logits.rank() != 2) {
    throw std::invalid_argument("loss_and_grad: logits must be (N, num_classes), got " +
                                shape_to_string(logits.shape));
  }
  size_t n = logits.shape[0], c = logits.shape[1];
  Tensor grad(logits.shape);
  double loss = 0.0;

  if (kind == LossKind::CategoricalCE) {
    double inv_n = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      const double* z = &logits.data[i * c];
      const double* y = &labels.data[i * c];
      double zmax = *std::max_element(z, z + c);
      double denom = 0.0;
      for (size_t j = 0; j < c; ++j) denom += std::exp(z[j] - zmax);
      double log_denom = std::log(denom);
      for (size_t j = 0; j < c; ++j) {
        double logp = z[j] - zmax - log_denom;
        loss -= y[j] * logp * inv_n;
        grad.data[i * c + j] = (std::exp(logp) - y[j]) * inv_n;
      }
    }
  } else {
    // Mean over all N*C sigmoid cross-entropy terms.
    double inv = 1.0 / static_cast<double>(n * c);
    for (size_t i = 0; i < n * c; ++i) {
      double z = logits.data[i];
      double y = labels.data[i];
      // log(1 + exp(-|z|)) form keeps everything finite.
      double softplus = std::log1p(std::exp(-std::abs(z)));
      loss += (std::max(z, 0.0) - z * y + softplus) * inv;
      double sig = 1.0 / (1.0 + std::exp(-z));
      grad.data[i] = (sig - y) * inv;
    }
  }
  return {loss, std::move(grad)};
}

std::pair<ParamVector, OptimizerState> adam_step(ParamVector params, const ParamVector& grads,
                                                 OptimizerState state, const TrainConfig& cfg) {
  size_t n = params.size();
  if (grads.size() != n || state.m.size() != n || state.v.size() != n) {
    throw std::invalid_argument("adam_step: length mismatch");
  }
  state.step += 1;
  double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
  double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (size_t i = 0; i < n; ++i) {
    double g = grads.data[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    double mhat = state.m[i] / bc1;
    double vhat = state.v[i] / bc2;
    double p = params.data[i];
    params.data[i] = p - cfg.lr * mhat / (std::sqrt(vhat) + cfg.adam_eps)
                       - cfg.lr * cfg.weight_decay * p;
  }
  return {std::move(params), std::move(state)};
}

LocalTrainResult local_training(const Network& net, const PruneMask& mask,
                                const DatasetView& data, const TrainConfig& cfg, uint64_t seed) {
  cfg.validate();
  if (data.size() == 0) throw std::invalid_argument("local_training: empty dataset");
  if (mask.param_mask.size() != net.params.size()) {
    throw std::invalid_argument("local_training: mask length " +
                                std::to_string(mask.param_mask.size()) +
                                " != parameter count " + std::to_string(net.params.size()));
  }

  Network model = net;
  OptimizerState opt = OptimizerState::zeros(model.params.size());
  double loss_sum = 0.0;
  size_t steps = 0;

  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (size_t epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    SplitMix64 rng(derive_seed(seed, epoch));
    rng.shuffle(order);
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      size_t end = std::min(start + cfg.batch_size, order.size());
      std::vector<size_t> rows(order.begin() + static_cast<long>(start),
                               order.begin() + static_cast<long>(end));
      auto [inputs, labels] = make_batch(data, rows);
      ForwardTrace trace = forward(model, inputs);
      auto [loss, lgrad] = loss_and_grad(trace.logits(), labels, cfg.loss_kind);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("local_training: non-finite loss at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(start / cfg.batch_size));
      }
      ParamVector grads = backward(model, trace, lgrad);
      auto [new_params, new_opt] = adam_step(std::move(model.params), grads, std::move(opt), cfg);
      model.params = std::move(new_params);
      opt = std::move(new_opt);
      if (cfg.mask_each_step) model.params = apply_mask(model.params, mask);
      loss_sum += loss;
      ++steps;
    }
  }

  // Algorithm contract: the mask is applied exactly once, after the final
  // epoch (weights on masked slices may drift during local epochs).
  LocalTrainResult res;
  res.params = apply_mask(model.params, mask);
  res.mean_loss = steps ? loss_sum / static_cast<double>(steps) : 0.0;
  res.steps = steps;
  return res;
}

}  // namespace fedx
