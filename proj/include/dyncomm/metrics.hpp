#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dyncomm/model.hpp"
#include "dyncomm/types.hpp"

namespace dyncomm {

// Counts of trigger pairs i -> j over a window. Row = source, column = responder.
class TriggerMatrix {
public:
    TriggerMatrix() = default;
    TriggerMatrix(std::size_t n, StepWindow window) : n_(n), window_(window), counts_(n * n, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] StepWindow window() const noexcept { return window_; }
    [[nodiscard]] std::uint64_t at(NodeId src, NodeId dst) const { return counts_[src * n_ + dst]; }
    std::uint64_t& at(NodeId src, NodeId dst) { return counts_[src * n_ + dst]; }
    [[nodiscard]] std::uint64_t total() const noexcept;

    friend bool operator==(const TriggerMatrix&, const TriggerMatrix&) = default;

private:
    std::size_t n_ = 0;
    StepWindow window_{};
    std::vector<std::uint64_t> counts_;
};

// score_i = (trigger pairs with source i in window) / window length.
struct NodeScoreSeries {
    StepWindow window;
    std::vector<double> scores;

    friend bool operator==(const NodeScoreSeries&, const NodeScoreSeries&) = default;
};

struct RatioPoint {
    Step step = 0;                 // T'
    std::uint64_t top_count = 0;   // cumulative from window start through T'
    std::uint64_t bottom_count = 0;
    std::optional<double> ratio;   // absent when bottom_count == 0

    friend bool operator==(const RatioPoint&, const RatioPoint&) = default;
};

struct RatioSeries {
    std::vector<NodeId> top;
    std::vector<NodeId> bottom;
    StepWindow window;
    Step interval = 1000;
    std::vector<RatioPoint> points;

    friend bool operator==(const RatioSeries&, const RatioSeries&) = default;
};

// Whole-run window 1..horizon.
StepWindow full_window(const EventLog& log) noexcept;

// Throws std::out_of_range if a non-empty window leaves 1..horizon. An empty
// window yields an all-zero matrix.
TriggerMatrix trigger_matrix(const EventLog& log, StepWindow window);

// Throws std::invalid_argument for an empty window, std::out_of_range if it
// leaves 1..horizon.
NodeScoreSeries node_scores(const EventLog& log, StepWindow window);

// score_i / score_reference for every node; every entry is absent when the
// reference node never triggered inside the window.
std::vector<std::optional<double>> relative_scores(const NodeScoreSeries& scores, NodeId reference);
std::vector<std::optional<double>> relative_scores(const EventLog& log, NodeId reference,
                                                   StepWindow window);

// Cumulative top/bottom trigger ratio sampled at window.first - 1 + interval,
// + 2 * interval, ... and always at window.last. top and bottom must be
// disjoint and non-empty (std::invalid_argument otherwise).
RatioSeries group_ratio_series(const EventLog& log, std::span<const NodeId> top,
                               std::span<const NodeId> bottom, Step interval, StepWindow window);
RatioSeries group_ratio_series(const EventLog& log, std::span<const NodeId> top,
                               std::span<const NodeId> bottom, Step interval);

// Share of the matrix total on cross-parity cells; absent when the total is 0.
std::optional<double> cross_group_fraction(const TriggerMatrix& matrix);

// Lowest floor(N/2) nodes by initial importance form the bottom set, the rest
// the top set. Ties keep index order.
struct RankSplit {
    std::vector<NodeId> top;
    std::vector<NodeId> bottom;
};
RankSplit split_by_initial_rank(const ImportanceState& initial);

}  // namespace dyncomm
