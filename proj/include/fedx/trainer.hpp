#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fedx/data_synth.hpp"
#include "fedx/network.hpp"
#include "fedx/pruning.hpp"
#include "fedx/tensor.hpp"

namespace fedx {

enum class LossKind { CategoricalCE, BinaryCE };

struct TrainConfig {
  size_t local_epochs = 3;
  size_t batch_size = 32;
  double lr = 1e-3;
  double weight_decay = 1e-4;  // decoupled (applied to params, not gradients)
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  LossKind loss_kind = LossKind::CategoricalCE;
  // Ablation knob: re-apply the mask after every optimizer step instead of
  // only once after the final epoch. Defaults off.
  bool mask_each_step = false;

  void validate() const;
};

struct OptimizerState {
  std::vector<double> m, v;
  size_t step = 0;

  static OptimizerState zeros(size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0}; }
};

// Mean loss over the batch and d(loss)/d(logits). CategoricalCE applies a
// row-wise softmax (one-hot labels); BinaryCE an element-wise sigmoid
// (multi-hot labels, mean over all N*C entries).
std::pair<double, Tensor> loss_and_grad(const Tensor& logits, const Tensor& labels,
                                        LossKind kind);

// One bias-corrected Adam update with decoupled weight decay.
std::pair<ParamVector, OptimizerState> adam_step(ParamVector params, const ParamVector& grads,
                                                 OptimizerState state, const TrainConfig& cfg);

struct LocalTrainResult {
  ParamVector params;      // w_i* (mask re-applied after the final epoch)
  double mean_loss = 0.0;  // mean batch loss over all local steps
  size_t steps = 0;
};

// E epochs of shuffled mini-batch Adam from the given global parameters,
// fresh optimizer state, followed by exactly one parameter-level mask
// application. Pure in all inputs; `seed` drives the epoch shuffles.
LocalTrainResult local_training(const Network& net, const PruneMask& mask,
                                const DatasetView& data, const TrainConfig& cfg, uint64_t seed);

}  // namespace fedx
