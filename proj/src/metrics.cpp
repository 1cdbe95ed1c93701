#include "dyncomm/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dyncomm {

namespace {

void check_window(const EventLog& log, StepWindow window) {
    if (window.empty()) return;
    if (window.first < 1 || window.last > log.horizon()) {
        throw std::out_of_range("window " + std::to_string(window.first) + ".." +
                                std::to_string(window.last) + " outside log steps 1.." +
                                std::to_string(log.horizon()));
    }
}

// Outcomes for steps in a checked, non-empty window.
std::span<const StepOutcome> outcomes_in(const EventLog& log, StepWindow window) {
    if (window.empty()) return {};
    return std::span(log.outcomes).subspan(window.first - 1, window.length());
}

}  // namespace

std::uint64_t TriggerMatrix::total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

StepWindow full_window(const EventLog& log) noexcept { return {1, log.horizon()}; }

TriggerMatrix trigger_matrix(const EventLog& log, StepWindow window) {
    check_window(log, window);
    TriggerMatrix matrix(log.config.n_nodes, window);
    for (const auto& outcome : outcomes_in(log, window)) {
        for (const auto& pair : outcome.trigger_pairs) ++matrix.at(pair.source, pair.responder);
    }
    return matrix;
}

NodeScoreSeries node_scores(const EventLog& log, StepWindow window) {
    if (window.empty()) throw std::invalid_argument("node_scores needs a non-empty window");
    check_window(log, window);
    std::vector<std::uint64_t> counts(log.config.n_nodes, 0);
    for (const auto& outcome : outcomes_in(log, window)) {
        for (const auto& pair : outcome.trigger_pairs) ++counts[pair.source];
    }
    NodeScoreSeries series{window, std::vector<double>(counts.size())};
    const double length = window.length();
    std::transform(counts.begin(), counts.end(), series.scores.begin(),
                   [length](std::uint64_t c) { return static_cast<double>(c) / length; });
    return series;
}

std::vector<std::optional<double>> relative_scores(const NodeScoreSeries& scores, NodeId reference) {
    if (reference >= scores.scores.size()) throw std::out_of_range("reference node out of range");
    std::vector<std::optional<double>> ratios(scores.scores.size());
    const double denominator = scores.scores[reference];
    if (denominator == 0.0) return ratios;
    for (std::size_t i = 0; i < ratios.size(); ++i) ratios[i] = scores.scores[i] / denominator;
    return ratios;
}

std::vector<std::optional<double>> relative_scores(const EventLog& log, NodeId reference,
                                                   StepWindow window) {
    return relative_scores(node_scores(log, window), reference);
}

RatioSeries group_ratio_series(const EventLog& log, std::span<const NodeId> top,
                               std::span<const NodeId> bottom, Step interval, StepWindow window) {
    if (top.empty() || bottom.empty()) throw std::invalid_argument("top and bottom sets must be non-empty");
    if (interval < 1) throw std::invalid_argument("interval must be >= 1");
    check_window(log, window);

    enum : std::uint8_t { none, in_top, in_bottom };
    std::vector<std::uint8_t> group(log.config.n_nodes, none);
    auto assign = [&](std::span<const NodeId> nodes, std::uint8_t tag) {
        for (NodeId n : nodes) {
            if (n >= group.size()) throw std::out_of_range("group node out of range");
            if (group[n] != none) throw std::invalid_argument("top and bottom sets must be disjoint");
            group[n] = tag;
        }
    };
    assign(top, in_top);
    assign(bottom, in_bottom);

    RatioSeries series{{top.begin(), top.end()}, {bottom.begin(), bottom.end()}, window, interval, {}};
    std::uint64_t top_count = 0;
    std::uint64_t bottom_count = 0;
    for (const auto& outcome : outcomes_in(log, window)) {
        for (const auto& pair : outcome.trigger_pairs) {
            if (group[pair.source] == in_top) ++top_count;
            else if (group[pair.source] == in_bottom) ++bottom_count;
        }
        const Step elapsed = outcome.step - window.first + 1;
        if (elapsed % interval == 0 || outcome.step == window.last) {
            RatioPoint point{outcome.step, top_count, bottom_count, std::nullopt};
            if (bottom_count > 0) {
                point.ratio = static_cast<double>(top_count) / static_cast<double>(bottom_count);
            }
            series.points.push_back(point);
        }
    }
    return series;
}

RatioSeries group_ratio_series(const EventLog& log, std::span<const NodeId> top,
                               std::span<const NodeId> bottom, Step interval) {
    return group_ratio_series(log, top, bottom, interval, full_window(log));
}

std::optional<double> cross_group_fraction(const TriggerMatrix& matrix) {
    std::uint64_t cross = 0;
    std::uint64_t total = 0;
    for (NodeId i = 0; i < matrix.size(); ++i) {
        for (NodeId j = 0; j < matrix.size(); ++j) {
            const auto c = matrix.at(i, j);
            total += c;
            if (parity_of(i) != parity_of(j)) cross += c;
        }
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(cross) / static_cast<double>(total);
}

RankSplit split_by_initial_rank(const ImportanceState& initial) {
    std::vector<NodeId> order(initial.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return initial[a] < initial[b]; });
    const auto half = static_cast<std::ptrdiff_t>(order.size() / 2);
    RankSplit split{{order.begin() + half, order.end()}, {order.begin(), order.begin() + half}};
    std::sort(split.top.begin(), split.top.end());
    std::sort(split.bottom.begin(), split.bottom.end());
    return split;
}

}  // namespace dyncomm
