#include "dyncomm/experiment.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

namespace dyncomm {

void validate(const ExperimentSpec& spec) {
    validate(spec.base);
    if (!spec.metrics.any()) throw ConfigError("metrics must request at least one output");
    if (spec.interval < 1) throw ConfigError("interval must be >= 1");
}

Step phase_split(const SimulationConfig& config) noexcept {
    return config.polarization_onset.value_or(config.horizon / 2);
}

MetricBundle compute_metrics(const EventLog& log, const ExperimentSpec& spec) {
    MetricBundle bundle;
    const Step split = std::min(phase_split(log.config), log.horizon());
    bundle.pre = {1, split};
    bundle.post = {split + 1, log.horizon()};

    if (spec.metrics.trigger_matrices) {
        bundle.trigger_pre = trigger_matrix(log, bundle.pre);
        bundle.trigger_post = trigger_matrix(log, bundle.post);
    }
    if (spec.metrics.relative_scores) {
        auto relative = [](const std::optional<NodeScoreSeries>& scores, NodeId reference) {
            return scores ? relative_scores(*scores, reference) : std::vector<std::optional<double>>{};
        };
        if (!bundle.pre.empty()) bundle.scores_pre = node_scores(log, bundle.pre);
        if (!bundle.post.empty()) bundle.scores_post = node_scores(log, bundle.post);
        bundle.relative_to_1_pre = relative(bundle.scores_pre, 0);
        bundle.relative_to_1_post = relative(bundle.scores_post, 0);
        bundle.relative_to_2_pre = relative(bundle.scores_pre, 1);
        bundle.relative_to_2_post = relative(bundle.scores_post, 1);
    }
    if (spec.metrics.ratio_series) {
        const auto split_sets = split_by_initial_rank(init_importance(log.config));
        bundle.ratio = group_ratio_series(log, split_sets.top, split_sets.bottom, spec.interval);
    }
    return bundle;
}

TwoPhaseRun run_two_phase(const ExperimentSpec& spec, std::uint64_t seed) {
    validate(spec);
    SimulationConfig config = spec.base;
    config.seed = seed;
    TwoPhaseRun result{run(config), {}};
    result.metrics = compute_metrics(result.log, spec);
    return result;
}

std::optional<double> median(std::vector<double> values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

SweepSummary run_sweep(const ExperimentSpec& spec, const SweepOptions& options) {
    validate(spec);
    SweepSummary summary;
    summary.seeds = spec.seeds.empty() ? std::vector<std::uint64_t>{spec.base.seed} : spec.seeds;

    auto consume = [&](std::uint64_t seed, TwoPhaseRun&& result) {
        if (options.on_run) options.on_run(seed, result.log, result.metrics);
        if (result.metrics.ratio) summary.per_seed.push_back(*result.metrics.ratio);
        if (options.keep_bundles) summary.bundles.push_back(std::move(result.metrics));
    };

    const std::size_t batch = std::max(1u, options.threads);
    for (std::size_t start = 0; start < summary.seeds.size(); start += batch) {
        const std::size_t stop = std::min(summary.seeds.size(), start + batch);
        if (batch == 1) {
            consume(summary.seeds[start], run_two_phase(spec, summary.seeds[start]));
            continue;
        }
        std::vector<std::future<TwoPhaseRun>> pending;
        for (std::size_t i = start; i < stop; ++i) {
            pending.push_back(std::async(std::launch::async, run_two_phase, std::cref(spec),
                                         summary.seeds[i]));
        }
        for (std::size_t i = start; i < stop; ++i) consume(summary.seeds[i], pending[i - start].get());
    }

    if (!summary.per_seed.empty()) {
        for (const auto& point : summary.per_seed.front().points) summary.median_steps.push_back(point.step);
        for (std::size_t t = 0; t < summary.median_steps.size(); ++t) {
            std::vector<double> defined;
            for (const auto& series : summary.per_seed) {
                if (series.points[t].ratio) defined.push_back(*series.points[t].ratio);
            }
            summary.median.push_back(median(std::move(defined)));
        }
    }
    return summary;
}

}  // namespace dyncomm
