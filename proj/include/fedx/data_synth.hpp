#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fedx/relevance.hpp"
#include "fedx/task.hpp"
#include "fedx/tensor.hpp"

namespace fedx {

// Synthetic stand-in for an image archive: each class is a fixed seeded
// sinusoid grating (distinct frequency/orientation per class) plus
// Gaussian pixel noise. The multi-label task superimposes 1-3 templates.
struct SyntheticSpec {
  TaskKind task = TaskKind::SingleLabel;
  size_t num_classes = 8;
  std::array<size_t, 3> image_shape{1, 16, 16};  // C, H, W
  size_t samples_per_class = 200;
  double noise_sigma = 0.25;
  uint64_t seed = 0;

  void validate() const;
};

struct Dataset {
  TaskKind task = TaskKind::SingleLabel;
  size_t num_classes = 0;
  std::array<size_t, 3> sample_shape{1, 1, 1};
  std::vector<double> inputs;        // size() * C*H*W, row-major
  std::vector<double> labels;        // size() * num_classes, one-/multi-hot
  std::vector<size_t> primary_label; // stratification key per sample

  size_t size() const { return primary_label.size(); }
  size_t sample_numel() const {
    return sample_shape[0] * sample_shape[1] * sample_shape[2];
  }
};

// A client shard or evaluation subset: indices into a shared dataset.
struct DatasetView {
  const Dataset* base = nullptr;
  std::vector<size_t> indices;

  size_t size() const { return indices.size(); }
};

DatasetView full_view(const Dataset& ds);

// Assembles (inputs, labels) batch tensors from positions `rows` of the view.
std::pair<Tensor, Tensor> make_batch(const DatasetView& view, const std::vector<size_t>& rows);

enum class PartitionMode { IID, LabelSkew };

struct PartitionPlan {
  PartitionMode mode = PartitionMode::IID;
  std::vector<std::vector<size_t>> shards;  // K disjoint index lists covering the set
};

Dataset generate(const SyntheticSpec& spec);

// IID: seeded shuffle into K near-equal shards. LabelSkew: labels are
// grouped into K disjoint contiguous groups (each at least
// labels_per_client wide) and every client receives all samples of its
// group; infeasible configurations (C < K*labels_per_client, or samples
// whose label sets cross groups) raise an error.
PartitionPlan partition(const Dataset& ds, size_t num_clients, PartitionMode mode, uint64_t seed,
                        size_t labels_per_client = 1);

// Stratified-by-label draw of m_ref samples from the server holdout;
// per-label counts differ by at most one, output in canonical (holdout
// index) order.
ReferenceSet make_reference_set(const Dataset& holdout, size_t m_ref, uint64_t seed);

Dataset subset(const Dataset& ds, const std::vector<size_t>& indices);

// Stratified split into train / server-holdout / test index groups.
struct DatasetSplit {
  Dataset train, holdout, test;
};
DatasetSplit split_train_holdout_test(const Dataset& ds, double holdout_fraction,
                                      double test_fraction, uint64_t seed);

// Writes <prefix>_inputs.npy (v1.0 header, '<f8', shape (n,C,H,W)) and
// <prefix>_labels.csv for cross-implementation comparison.
void dump_dataset(const Dataset& ds, const std::string& path_prefix);

}  // namespace fedx
