#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dyncomm/config.hpp"
#include "dyncomm/metrics.hpp"
#include "dyncomm/model.hpp"

namespace dyncomm {

struct MetricRequests {
    bool trigger_matrices = true;
    bool relative_scores = true;
    bool ratio_series = true;

    [[nodiscard]] bool any() const noexcept { return trigger_matrices || relative_scores || ratio_series; }
    friend bool operator==(const MetricRequests&, const MetricRequests&) = default;
};

struct ExperimentSpec {
    SimulationConfig base;
    std::vector<std::uint64_t> seeds;  // empty means {base.seed}
    MetricRequests metrics;
    Step interval = 1000;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

void validate(const ExperimentSpec& spec);

// Everything derived from one two-phase run. Pre and post windows split the
// run at the polarization onset (at horizon / 2 when polarization never
// starts). Relative scores use nodes 1 and 2 as references.
struct MetricBundle {
    StepWindow pre;
    StepWindow post;
    std::optional<TriggerMatrix> trigger_pre;
    std::optional<TriggerMatrix> trigger_post;
    std::optional<NodeScoreSeries> scores_pre;   // absent for an empty window
    std::optional<NodeScoreSeries> scores_post;
    std::vector<std::optional<double>> relative_to_1_pre;
    std::vector<std::optional<double>> relative_to_1_post;
    std::vector<std::optional<double>> relative_to_2_pre;
    std::vector<std::optional<double>> relative_to_2_post;
    std::optional<RatioSeries> ratio;

    friend bool operator==(const MetricBundle&, const MetricBundle&) = default;
};

struct TwoPhaseRun {
    EventLog log;
    MetricBundle metrics;
};

// Onset step that separates the pre and post windows.
Step phase_split(const SimulationConfig& config) noexcept;

MetricBundle compute_metrics(const EventLog& log, const ExperimentSpec& spec);

TwoPhaseRun run_two_phase(const ExperimentSpec& spec, std::uint64_t seed);

struct SweepSummary {
    std::vector<std::uint64_t> seeds;
    std::vector<RatioSeries> per_seed;            // empty unless ratio_series requested
    std::vector<Step> median_steps;
    std::vector<std::optional<double>> median;    // elementwise over defined values
    std::vector<MetricBundle> bundles;            // only with keep_bundles
};

struct SweepOptions {
    unsigned threads = 1;
    bool keep_bundles = false;
    // Called once per seed in seed-list order, after the run completes.
    std::function<void(std::uint64_t seed, const EventLog&, const MetricBundle&)> on_run;
};

SweepSummary run_sweep(const ExperimentSpec& spec, const SweepOptions& options = {});

// Median of the values; absent for an empty input. Even counts average the
// two middle values.
std::optional<double> median(std::vector<double> values);

}  // namespace dyncomm
