#include "dyncomm/model.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <tuple>
#include <utility>

namespace dyncomm {

std::string_view to_string(Provenance p) noexcept {
    return p == Provenance::basal ? "basal" : "response";
}

ImportanceState::ImportanceState(std::vector<double> values) : values_(std::move(values)) {
    if (!values_.empty()) max_ = *std::max_element(values_.begin(), values_.end());
}

double ImportanceState::sum() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
}

void ImportanceState::add(NodeId n, double amount) {
    values_[n] += amount;
    max_ = std::max(max_, values_[n]);
}

std::vector<NodeId> EdgeSnapshot::in_sources(NodeId n) const {
    auto first = std::lower_bound(edges.begin(), edges.end(), n,
                                  [](const Edge& e, NodeId dst) { return e.dst < dst; });
    std::vector<NodeId> sources;
    for (; first != edges.end() && first->dst == n; ++first) sources.push_back(first->src);
    return sources;
}

ImportanceState init_importance(const SimulationConfig& config) {
    if (config.n_nodes < 2) throw ConfigError("n_nodes must be >= 2");
    if (config.importance_scheme == ImportanceScheme::explicit_list) {
        validate(config);
        return ImportanceState(config.importance_values);
    }
    std::vector<double> values(config.n_nodes);
    std::iota(values.begin(), values.end(), 1.0);
    return ImportanceState(std::move(values));
}

namespace {

// Appends `count` distinct destinations, uniform over all nodes except `src`,
// in ascending order. Floyd's subset sampling: exactly `count` draws.
void emit_to_distinct(NodeId src, std::uint32_t count, std::uint32_t n_nodes, Provenance provenance,
                      Rng& rng, std::vector<Edge>& out) {
    const std::uint32_t others = n_nodes - 1;
    const auto begin = out.size();
    auto chosen = [&](NodeId dst) {
        return std::any_of(out.begin() + static_cast<std::ptrdiff_t>(begin), out.end(),
                           [dst](const Edge& e) { return e.dst == dst; });
    };
    for (std::uint32_t j = others - count; j < others; ++j) {
        auto slot = static_cast<NodeId>(rng.below(std::uint64_t{j} + 1));
        if (chosen(slot >= src ? slot + 1 : slot)) slot = j;
        out.push_back({src, slot >= src ? slot + 1 : slot, provenance});
    }
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(begin), out.end(),
              [](const Edge& a, const Edge& b) { return a.dst < b.dst; });
}

}  // namespace

std::vector<Edge> generate_basal_edges(const SimulationConfig& config, Rng& rng) {
    std::vector<Edge> edges;
    for (NodeId n = 0; n < config.n_nodes; ++n) {
        if (rng.bernoulli(config.basal_rate)) {
            emit_to_distinct(n, config.basal_fanout, config.n_nodes, Provenance::basal, rng, edges);
        }
    }
    return edges;
}

std::vector<Edge> generate_response_edges(std::span<const NodeId> responders,
                                          const SimulationConfig& config, Rng& rng) {
    std::vector<Edge> edges;
    edges.reserve(responders.size() * config.response_fanout);
    for (NodeId n : responders) {
        emit_to_distinct(n, config.response_fanout, config.n_nodes, Provenance::response, rng,
                         edges);
    }
    return edges;
}

std::vector<double> signed_importance_view(const ImportanceState& importance, Parity target) {
    std::vector<double> view(importance.values().begin(), importance.values().end());
    for (NodeId i = 0; i < view.size(); ++i) {
        if (parity_of(i) != target) view[i] = -view[i];
    }
    return view;
}

double response_probability(NodeId n, std::span<const NodeId> in_sources,
                            const ImportanceState& importance, PolarizationRegime regime) {
    if (in_sources.empty()) return 0.0;
    const Parity group = parity_of(n);
    double numerator = 0.0;
    for (NodeId i : in_sources) {
        const double l = importance[i];
        numerator += (regime == PolarizationRegime::odd_even && parity_of(i) != group) ? -l : l;
    }
    const double denominator = 1.0 + importance.max() * static_cast<double>(in_sources.size());
    const double p = std::max(0.0, numerator) / denominator;
    assert(p >= 0.0 && p < 1.0);
    return p;
}

double response_probability(NodeId n, const EdgeSnapshot& snapshot,
                            const ImportanceState& importance, PolarizationRegime regime) {
    const auto sources = snapshot.in_sources(n);
    return response_probability(n, sources, importance, regime);
}

EdgeSnapshot merge_edges(Step step, std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.dst, a.src, a.provenance) < std::tie(b.dst, b.src, b.provenance);
    });
    EdgeSnapshot snapshot{step, {}};
    snapshot.edges.reserve(edges.size());
    for (const Edge& e : edges) {
        assert(e.src != e.dst);
        if (!snapshot.edges.empty() && snapshot.edges.back().dst == e.dst &&
            snapshot.edges.back().src == e.src) {
            // Sorted by provenance within a pair, so the later edge is the one to keep.
            snapshot.edges.back().provenance = e.provenance;
        } else {
            snapshot.edges.push_back(e);
        }
    }
    return snapshot;
}

StepOutcome sample_responses(const EdgeSnapshot& snapshot, const ImportanceState& importance,
                             PolarizationRegime regime, Rng& rng) {
    StepOutcome outcome{snapshot.step, {}, {}};
    std::vector<NodeId> sources;
    const auto& edges = snapshot.edges;
    for (std::size_t first = 0; first < edges.size();) {
        const NodeId n = edges[first].dst;
        std::size_t last = first;
        sources.clear();
        while (last < edges.size() && edges[last].dst == n) sources.push_back(edges[last++].src);

        const double p = response_probability(n, sources, importance, regime);
        if (rng.bernoulli(p)) {
            outcome.responders.push_back(n);
            for (NodeId src : sources) outcome.trigger_pairs.push_back({src, n});
        }
        first = last;
    }
    std::sort(outcome.trigger_pairs.begin(), outcome.trigger_pairs.end());
    return outcome;
}

void apply_increments(ImportanceState& importance, const StepOutcome& outcome,
                      IncrementScope scope, PolarizationRegime regime) {
    const bool in_group_only =
        scope == IncrementScope::in_group_only && regime == PolarizationRegime::odd_even;
    for (const auto& pair : outcome.trigger_pairs) {
        if (in_group_only && parity_of(pair.source) != parity_of(pair.responder)) continue;
        importance.add(pair.source, 1.0);
    }
}

PolarizationRegime regime_at(const SimulationConfig& config, Step k) noexcept {
    return config.polarization_onset && k > *config.polarization_onset
               ? PolarizationRegime::odd_even
               : PolarizationRegime::homogeneous;
}

Simulator::Simulator(const SimulationConfig& config)
    : config_(config), importance_((validate(config), init_importance(config))), rng_(config.seed) {}

Simulator::StepResult Simulator::step() {
    assert(!finished());
    const Step k = next_step_++;
    const PolarizationRegime regime = regime_at(config_, k);

    auto emitted = generate_basal_edges(config_, rng_);
    emitted.insert(emitted.end(), pending_.begin(), pending_.end());
    StepResult result{merge_edges(k, std::move(emitted)), {}};

    result.outcome = sample_responses(result.snapshot, importance_, regime, rng_);
    apply_increments(importance_, result.outcome, config_.increment_scope, regime);
    pending_ = generate_response_edges(result.outcome.responders, config_, rng_);
    return result;
}

EventLog run(const SimulationConfig& config) {
    Simulator sim(config);
    EventLog log;
    log.config = config;
    log.snapshots.reserve(config.horizon);
    log.outcomes.reserve(config.horizon);
    auto sample = [&](Step k) {
        const auto values = sim.importance().values();
        log.importance_trace.push_back({k, {values.begin(), values.end()}});
    };
    sample(0);
    while (!sim.finished()) {
        auto [snapshot, outcome] = sim.step();
        const Step k = outcome.step;
        log.snapshots.push_back(std::move(snapshot));
        log.outcomes.push_back(std::move(outcome));
        if (k % config.trace_interval == 0 || k == config.horizon) sample(k);
    }
    return log;
}

}  // namespace dyncomm
