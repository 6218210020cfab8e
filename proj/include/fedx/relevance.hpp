#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedx/network.hpp"
#include "fedx/task.hpp"
#include "fedx/tensor.hpp"

namespace fedx {

// Server-held proxy samples used solely for relevance estimation. Inputs
// are stored batch-1 (1, C, H, W) so they can be fed to forward directly.
struct ReferenceSet {
  TaskKind task = TaskKind::SingleLabel;
  std::vector<Tensor> inputs;
  std::vector<std::vector<double>> labels;

  size_t size() const { return inputs.size(); }
};

enum class RelevanceMethod { LRP, IG };

inline const char* relevance_method_name(RelevanceMethod m) {
  return m == RelevanceMethod::LRP ? "LRP" : "IG";
}

// Which output(s) seed the backward relevance / gradient pass.
//   Predicted: single-label tasks seed the argmax logit; multi-label tasks
//   seed every logit whose sigmoid exceeds 0.5 (argmax fallback if none).
//   ExplicitClass: seed exactly one chosen class (used by tests).
struct TargetSpec {
  enum class Mode { Predicted, ExplicitClass };
  Mode mode = Mode::Predicted;
  TaskKind task = TaskKind::SingleLabel;
  size_t class_index = 0;

  static TargetSpec predicted(TaskKind task) { return {Mode::Predicted, task, 0}; }
  static TargetSpec explicit_class(size_t idx) {
    return {Mode::ExplicitClass, TaskKind::SingleLabel, idx};
  }
};

// Classes selected by a TargetSpec for a single sample's logits.
std::vector<size_t> select_target_classes(const TargetSpec& target, const Tensor& logits);

// LRP propagation rule per weighted layer. Epsilon stabilizes the
// redistribution denominator by eps_rel * mean(|denominator|) per layer;
// Gamma reweights positive weights by (1 + gamma).
struct LrpRule {
  enum class Kind { Epsilon, Gamma };
  Kind kind = Kind::Epsilon;
  double epsilon_rel = 1e-6;
  double gamma = 0.25;

  static LrpRule epsilon(double eps_rel = 1e-6) { return {Kind::Epsilon, eps_rel, 0.0}; }
  static LrpRule gamma_rule(double gamma = 0.25) { return {Kind::Gamma, 0.0, gamma}; }
};

struct LrpRuleAssignment {
  // One entry per network layer; only weighted layers are consulted.
  std::vector<LrpRule> by_layer;

  // Splits the ordered weighted layers into four contiguous near-equal
  // parts: part 1 Epsilon, parts 2-3 Gamma, part 4 Epsilon.
  static LrpRuleAssignment four_part_composite(const Network& net, double eps_rel = 1e-6,
                                               double gamma = 0.25);
  // Epsilon everywhere (ViT-style assignment; also used by tests).
  static LrpRuleAssignment uniform_epsilon(const Network& net, double eps_rel = 1e-6);
};

// Mean relevance score per prunable component over a reference set.
struct RelevanceMap {
  std::vector<ComponentId> components;  // enumeration order
  std::vector<double> scores;           // aligned with components
  RelevanceMethod method = RelevanceMethod::LRP;
  size_t m_ref = 0;
  size_t round_computed = 0;
  uint64_t estimated_macs = 0;

  double score_of(ComponentId c) const;
  size_t size() const { return components.size(); }
};

// Relevance of every stored activation, propagated from output_relevance
// back to the input. Returned vector is aligned with trace.acts:
// result[i] is the relevance of acts[i], result.back() == output_relevance.
std::vector<Tensor> lrp_backward(const Network& net, const ForwardTrace& trace,
                                 const Tensor& output_relevance,
                                 const LrpRuleAssignment& rules);

// Signed per-pixel input attributions along the straight path from
// baseline to sample (right-endpoint Riemann sum with S steps). Sum over
// pixels approximates f(sample) - f(baseline).
Tensor integrated_gradients_input(const Network& net, const Tensor& sample,
                                  const TargetSpec& target, size_t steps,
                                  const Tensor& baseline);

// Per-component attribution: |mean activation difference| x averaged
// gradient of the target w.r.t. a uniform shift of the unit's activation
// map. Returns absolute scores aligned with enumerate_components(net).
std::vector<double> integrated_gradients_components(const Network& net, const Tensor& sample,
                                                    const TargetSpec& target, size_t steps,
                                                    const Tensor& baseline);

// Mean component relevance over the reference set (Predicted targets).
// LRP reduces a component as the sum of |relevance| over its activation
// map; IG uses the component attribution above. The per-sample reduction
// is sorted before summation so the result is independent of reference
// set order.
RelevanceMap component_relevance(const Network& net, const ReferenceSet& ref,
                                 RelevanceMethod method, const LrpRuleAssignment& rules,
                                 size_t ig_steps = 32, size_t round_computed = 0);

// JSON export: {"metadata": {...}, "scores": {"layer:unit": score}}.
std::string relevance_to_json_string(const RelevanceMap& map);

}  // namespace fedx
