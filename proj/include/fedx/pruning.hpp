#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedx/network.hpp"
#include "fedx/relevance.hpp"

namespace fedx {

enum class PruneMode { LayerWise, Global };

inline const char* prune_mode_name(PruneMode m) {
  return m == PruneMode::LayerWise ? "layerwise" : "global";
}

enum class BaselineKind { Random, Magnitude };

// Binary pruning decision per component plus its expansion to a
// parameter-level multiplier. Immutable once built; recomputation
// produces a new mask with its own origin_round.
struct PruneMask {
  std::vector<ComponentId> components;  // enumeration order
  std::vector<uint8_t> component_bits;  // 1 = keep, aligned with components
  std::vector<uint8_t> param_mask;      // 1 = keep, aligned with ParamVector
  double q = 0.0;
  PruneMode mode = PruneMode::LayerWise;
  size_t origin_round = 0;

  size_t pruned_components() const;
  size_t pruned_params() const;
  double sparsity() const;  // pruned-parameter fraction
  bool keeps(ComponentId c) const;
};

PruneMask all_ones_mask(const Network& net);

// Prunes the floor(q*n_l) lowest-relevance components of each prunable
// layer; ties broken by ascending unit index.
PruneMask compute_mask_layerwise(const RelevanceMap& rel, const Network& net, double q,
                                 size_t origin_round = 0);

// Prunes the floor(q*p) lowest-relevance components pooled across all
// layers; ties broken by ascending (layer, unit).
PruneMask compute_mask_global(const RelevanceMap& rel, const Network& net, double q,
                              size_t origin_round = 0);

// Element-wise product with the parameter-level mask. Idempotent.
ParamVector apply_mask(const ParamVector& params, const PruneMask& mask);

// Random: uniformly samples floor(q*n_l) units per layer from the seeded
// generator. Magnitude: scores each component by the L1 norm of its slice
// and prunes per layer like compute_mask_layerwise.
PruneMask baseline_mask(const Network& net, double q, BaselineKind kind, uint64_t seed = 0,
                        size_t origin_round = 0);

// JSON export/import; bit-exact round trip.
std::string mask_to_json_string(const PruneMask& mask);
PruneMask mask_from_json_string(const std::string& text, const Network& net);

}  // namespace fedx
