#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dyncomm/config.hpp"
#include "dyncomm/random.hpp"
#include "dyncomm/types.hpp"

namespace dyncomm {

// Importance values l_n. Values only ever grow, so the running maximum is
// tracked incrementally and is always the current maximum.
class ImportanceState {
public:
    ImportanceState() = default;
    explicit ImportanceState(std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](NodeId n) const { return values_[n]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double max() const noexcept { return max_; }
    [[nodiscard]] double sum() const noexcept;

    void add(NodeId n, double amount);

    friend bool operator==(const ImportanceState& a, const ImportanceState& b) {
        return a.values_ == b.values_;
    }

private:
    std::vector<double> values_;
    double max_ = 0.0;
};

enum class PolarizationRegime : std::uint8_t { homogeneous, odd_even };

// Directed adjacency A^[k] for one step. Edges are unique, never self-loops,
// and kept sorted by (dst, src) so each node's in-edges are contiguous.
struct EdgeSnapshot {
    Step step = 0;
    std::vector<Edge> edges;

    // Senders with an edge toward `n`, ascending.
    [[nodiscard]] std::vector<NodeId> in_sources(NodeId n) const;

    friend bool operator==(const EdgeSnapshot&, const EdgeSnapshot&) = default;
};

struct StepOutcome {
    Step step = 0;
    std::vector<NodeId> responders;           // ascending
    std::vector<TriggerPair> trigger_pairs;   // sorted by (source, responder)

    friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
};

struct ImportanceSample {
    Step step = 0;
    std::vector<double> values;

    friend bool operator==(const ImportanceSample&, const ImportanceSample&) = default;
};

// Complete record of one run: snapshots[k-1] and outcomes[k-1] belong to step k.
// The importance trace always holds step 0, every multiple of the trace
// interval, and the final step.
struct EventLog {
    SimulationConfig config;
    std::vector<EdgeSnapshot> snapshots;
    std::vector<StepOutcome> outcomes;
    std::vector<ImportanceSample> importance_trace;

    [[nodiscard]] Step horizon() const noexcept { return static_cast<Step>(outcomes.size()); }

    friend bool operator==(const EventLog&, const EventLog&) = default;
};

ImportanceState init_importance(const SimulationConfig& config);

// Each node independently, with probability basal_rate, emits basal_fanout
// edges to distinct, uniformly chosen other nodes. Edges are returned in
// emission order.
std::vector<Edge> generate_basal_edges(const SimulationConfig& config, Rng& rng);

// Each responder emits response_fanout edges to distinct, uniformly chosen
// nodes other than itself.
std::vector<Edge> generate_response_edges(std::span<const NodeId> responders,
                                          const SimulationConfig& config, Rng& rng);

// v_i = l_i for nodes in `target`, -l_i for the opposite parity.
std::vector<double> signed_importance_view(const ImportanceState& importance, Parity target);

// Probability that `n` fires given the senders that reached it this step:
//   homogeneous  sum(l_i) / (1 + l_max * d)
//   odd-even     max(0, sum(+-l_i)) / (1 + l_max * d)
// where d is the in-degree and l_max the current maximum importance. The
// result lies in [0, 1) and is exactly 0 when d = 0.
double response_probability(NodeId n, std::span<const NodeId> in_sources,
                            const ImportanceState& importance, PolarizationRegime regime);

double response_probability(NodeId n, const EdgeSnapshot& snapshot,
                            const ImportanceState& importance, PolarizationRegime regime);

// Merge emissions into a snapshot: duplicate (src, dst) pairs collapse into a
// single edge and response provenance wins.
EdgeSnapshot merge_edges(Step step, std::vector<Edge> edges);

// One Bernoulli draw per node with in-degree >= 1, in ascending node order.
StepOutcome sample_responses(const EdgeSnapshot& snapshot, const ImportanceState& importance,
                             PolarizationRegime regime, Rng& rng);

// +1 to the source of every trigger pair. With in_group_only scope under the
// odd-even regime, opposite-parity sources are skipped.
void apply_increments(ImportanceState& importance, const StepOutcome& outcome,
                      IncrementScope scope = IncrementScope::all,
                      PolarizationRegime regime = PolarizationRegime::homogeneous);

PolarizationRegime regime_at(const SimulationConfig& config, Step k) noexcept;

// Stepwise driver. Owns the importance state, the random stream and the
// response edges pending for the next step.
class Simulator {
public:
    explicit Simulator(const SimulationConfig& config);

    struct StepResult {
        EdgeSnapshot snapshot;
        StepOutcome outcome;
    };

    // Advances one step. Precondition: !finished().
    StepResult step();

    [[nodiscard]] bool finished() const noexcept { return next_step_ > config_.horizon; }
    [[nodiscard]] Step next_step() const noexcept { return next_step_; }
    [[nodiscard]] const ImportanceState& importance() const noexcept { return importance_; }
    [[nodiscard]] const SimulationConfig& config() const noexcept { return config_; }
    [[nodiscard]] std::span<const Edge> pending() const noexcept { return pending_; }

private:
    SimulationConfig config_;
    ImportanceState importance_;
    Rng rng_;
    std::vector<Edge> pending_;
    Step next_step_ = 1;
};

// Runs steps 1..horizon. Throws ConfigError for an invalid config.
EventLog run(const SimulationConfig& config);

}  // namespace dyncomm
