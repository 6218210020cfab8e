#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fedx/data_synth.hpp"
#include "fedx/network.hpp"
#include "fedx/pruning.hpp"
#include "fedx/relevance.hpp"
#include "fedx/trainer.hpp"

namespace fedx {

enum class PruneMethod { LRP, IG, Random, Magnitude, NoPrune };

const char* prune_method_name(PruneMethod m);

struct RelevanceParams {
  double lrp_eps_rel = 1e-6;
  double lrp_gamma = 0.25;
  size_t ig_steps = 32;
};

struct FedConfig {
  size_t num_clients = 1;   // K
  size_t rounds = 1;        // R
  size_t warmup = 1;        // v: pruning triggers at the start of this round
  double prune_rate = 0.0;  // q
  PruneMode mode = PruneMode::LayerWise;
  PruneMethod method = PruneMethod::NoPrune;
  size_t recompute_period = 0;  // 0 = one-shot mask at r = warmup
  uint64_t seed = 0;
  TrainConfig train;
  RelevanceParams relevance;

  void validate() const;  // 1 <= warmup <= rounds, K >= 1, 0 <= q < 1
};

struct ClientHandle {
  size_t id = 0;
  DatasetView data;

  size_t sample_count() const { return data.size(); }
};

struct CommRecord {
  size_t round = 0;
  uint64_t uplink_bytes = 0;
  uint64_t downlink_bytes = 0;
  uint64_t mask_overhead_bytes = 0;
};

// Exact byte accounting of parameter traffic. Masked parameters are not
// transmitted in either direction once a mask is active; structured-mask
// metadata is tracked separately and never netted against savings.
struct CommLedger {
  uint64_t model_size_bytes = 0;
  size_t num_clients = 0;
  std::vector<CommRecord> rounds;
};

struct LedgerSummary {
  uint64_t unpruned_total_bytes = 0;  // model_size * 2 * R * K
  uint64_t actual_total_bytes = 0;
  uint64_t saved_bytes = 0;
  uint64_t mask_overhead_bytes = 0;

  double unpruned_total_mb() const { return static_cast<double>(unpruned_total_bytes) / 1e6; }
  double actual_total_mb() const { return static_cast<double>(actual_total_bytes) / 1e6; }
  double saved_mb() const { return static_cast<double>(saved_bytes) / 1e6; }
  // Paper-style whole-MB figures (truncated).
  uint64_t unpruned_total_mb_int() const { return unpruned_total_bytes / 1000000; }
  uint64_t saved_mb_int() const { return saved_bytes / 1000000; }
};

LedgerSummary ledger_totals(const CommLedger& ledger);

struct Metrics {
  TaskKind task = TaskKind::SingleLabel;
  double value = 0.0;  // overall accuracy (single-label) or micro-mAP (multi-label)
};

// SingleLabel: overall argmax accuracy. MultiLabel: micro mean average
// precision over the pooled (sample, class) score/label pairs.
Metrics evaluate_global(const Network& net, const DatasetView& testset, TaskKind task);

struct RoundRecord {
  size_t round = 0;
  double metric = 0.0;     // global eval metric (NaN when no test set given)
  double loss_mean = 0.0;  // mean client train loss
  double sparsity = 0.0;   // pruned-parameter fraction of the active mask
  uint64_t uplink_bytes = 0;
  uint64_t downlink_bytes = 0;
  uint64_t saved_bytes_cum = 0;
};

// Size-proportional FedAvg: w = sum(alpha_i * w_i). Weights must sum to 1
// within 1e-12.
ParamVector aggregate(const std::vector<std::pair<ParamVector, double>>& updates);

struct FederationResult {
  Network net;  // final global model
  std::vector<RoundRecord> rounds;
  CommLedger ledger;
  PruneMask mask;  // active mask at the end of the run
  std::optional<RelevanceMap> relevance;  // last computed map, if any
  uint64_t relevance_macs = 0;            // operation counters
  uint64_t mask_apply_ops = 0;
};

// Full-participation FedAvg loop with server-side pruning at the start of
// round `warmup` (and every recompute_period rounds after, if nonzero).
// Once created the mask persists and is re-applied every round, so all
// clients always train structurally identical models.
FederationResult run_federation(const FedConfig& cfg, const Network& net0,
                                const std::vector<ClientHandle>& clients,
                                const ReferenceSet& ref,
                                const DatasetView* testset = nullptr);

}  // namespace fedx
