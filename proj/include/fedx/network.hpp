#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "fedx/tensor.hpp"

namespace fedx {

enum class LayerKind { Dense, Conv2D, ReLU, MaxPool2D, GlobalAvgPool, Flatten };

const char* layer_kind_name(LayerKind kind);

// One layer of the fixed layer set. Dense and Conv2D carry weights and a
// bias; the remaining kinds are parameter-free. `prunable` marks layers
// whose output units are structured-pruning components; it must be false
// on the classifier head and on parameter-free layers.
struct LayerSpec {
  LayerKind kind = LayerKind::Dense;

  size_t in_features = 0, out_features = 0;   // Dense
  size_t in_channels = 0, out_channels = 0;   // Conv2D
  size_t kernel = 0;                          // Conv2D / MaxPool2D
  size_t stride = 1;                          // Conv2D / MaxPool2D
  size_t padding = 0;                         // Conv2D

  bool prunable = false;

  bool has_params() const { return kind == LayerKind::Dense || kind == LayerKind::Conv2D; }
  size_t units() const;    // out_features / out_channels for weighted layers
  size_t fan_in() const;   // in_features / in_channels*k*k

  static LayerSpec dense(size_t in, size_t out, bool prunable = true);
  static LayerSpec conv2d(size_t in_c, size_t out_c, size_t kernel, size_t stride = 1,
                          size_t padding = 0, bool prunable = true);
  static LayerSpec relu();
  static LayerSpec maxpool2d(size_t kernel, size_t stride = 0);  // stride 0 -> kernel
  static LayerSpec global_avg_pool();
  static LayerSpec flatten();

  std::string describe() const;
};

struct ArchConfig {
  std::array<size_t, 3> input_shape{1, 1, 1};  // C, H, W
  size_t num_classes = 2;
  std::vector<LayerSpec> layers;
};

// Per-layer slice descriptors into the flat parameter buffer. Weighted
// layers own [weight_offset, weight_offset+weight_len) followed by
// [bias_offset, bias_offset+bias_len); parameter-free layers have
// zero-length entries. The slices partition the buffer exactly.
struct ParamLayout {
  size_t weight_offset = 0, weight_len = 0;
  size_t bias_offset = 0, bias_len = 0;
};

struct ParamVector {
  std::vector<double> data;
  std::vector<ParamLayout> layout;

  size_t size() const { return data.size(); }
};

// A structurally removable unit: one output channel of a prunable Conv2D
// or one output neuron of a prunable Dense layer.
struct ComponentId {
  size_t layer_index = 0;
  size_t unit_index = 0;
  auto operator<=>(const ComponentId&) const = default;
};

struct Network {
  ArchConfig arch;
  ParamVector params;
  uint64_t rng_seed = 0;

  // Per-sample shapes (no batch dim) derived at construction.
  std::vector<std::vector<size_t>> in_shapes;
  std::vector<std::vector<size_t>> out_shapes;

  size_t num_layers() const { return arch.layers.size(); }
};

// Everything forward stores for backward and relevance propagation:
// acts[0] is the input batch, acts[i+1] the output of layer i. MaxPool
// layers additionally record the flat input index that won each output
// element (first maximum wins on ties).
struct ForwardTrace {
  std::vector<Tensor> acts;
  std::vector<std::vector<size_t>> pool_argmax;

  const Tensor& logits() const { return acts.back(); }
};

struct BackwardResult {
  ParamVector param_grads;
  std::vector<Tensor> act_grads;  // shaped like trace.acts
};

Network build_network(const ArchConfig& arch, uint64_t seed);

ForwardTrace forward(const Network& net, const Tensor& batch);

// Gradient of a scalar loss w.r.t. all parameters, given d(loss)/d(logits).
ParamVector backward(const Network& net, const ForwardTrace& trace, const Tensor& loss_grad);

// Same, but also returns d(loss)/d(activation) for every stored activation
// (used by integrated gradients).
BackwardResult backward_full(const Network& net, const ForwardTrace& trace,
                             const Tensor& loss_grad);

std::vector<ComponentId> enumerate_components(const Network& net);

// Flat parameter indices owned by a component: its outgoing weight
// row/filter plus its bias entry. Slices of one layer's components are
// disjoint and cover that layer exactly.
std::vector<size_t> component_param_slice(const Network& net, ComponentId c);

// Checkpoint: one-line JSON header (specs, layout, seed, version) + '\n' +
// little-endian raw float64 parameter block.
void save_checkpoint(const Network& net, const std::string& path);
Network load_checkpoint(const std::string& path);

// Closed-form multiply-accumulate counts per sample; used for the
// operation counters reported in run manifests.
uint64_t forward_macs(const Network& net);
uint64_t backward_macs(const Network& net);

}  // namespace fedx
