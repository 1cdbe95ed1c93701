#pragma once

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

#include "dyncomm/model.hpp"

namespace dyncomm::testing {

// Snapshot from 1-based (src, dst) label pairs.
inline EdgeSnapshot snapshot_of(Step step, std::initializer_list<std::pair<NodeId, NodeId>> labels,
                                Provenance provenance = Provenance::basal) {
    std::vector<Edge> edges;
    for (auto [src, dst] : labels) edges.push_back({src - 1, dst - 1, provenance});
    return merge_edges(step, std::move(edges));
}

// Labels (1-based) -> node ids.
inline std::vector<NodeId> ids(std::initializer_list<NodeId> labels) {
    std::vector<NodeId> out;
    for (NodeId l : labels) out.push_back(l - 1);
    return out;
}

inline SimulationConfig small_config(std::uint32_t n, double b, std::uint32_t cb, std::uint32_t cr,
                                     Step horizon, std::uint64_t seed) {
    SimulationConfig c;
    c.n_nodes = n;
    c.basal_rate = b;
    c.basal_fanout = cb;
    c.response_fanout = cr;
    c.horizon = horizon;
    c.polarization_onset = horizon / 2;
    c.seed = seed;
    return c;
}

// Hand-built log with explicit outcomes; snapshots hold exactly the trigger
// edges so the log stays self-consistent.
inline EventLog log_from_outcomes(std::uint32_t n, std::vector<std::vector<TriggerPair>> per_step) {
    EventLog log;
    log.config.n_nodes = n;
    log.config.basal_fanout = 1;
    log.config.response_fanout = 1;
    log.config.horizon = static_cast<Step>(per_step.size());
    log.config.polarization_onset = std::nullopt;
    for (Step k = 1; k <= per_step.size(); ++k) {
        std::vector<Edge> edges;
        StepOutcome outcome{k, {}, per_step[k - 1]};
        for (const auto& pair : per_step[k - 1]) {
            edges.push_back({pair.source, pair.responder, Provenance::basal});
            outcome.responders.push_back(pair.responder);
        }
        std::sort(outcome.responders.begin(), outcome.responders.end());
        outcome.responders.erase(std::unique(outcome.responders.begin(), outcome.responders.end()),
                                 outcome.responders.end());
        std::sort(outcome.trigger_pairs.begin(), outcome.trigger_pairs.end());
        log.snapshots.push_back(merge_edges(k, std::move(edges)));
        log.outcomes.push_back(std::move(outcome));
    }
    return log;
}

}  // namespace dyncomm::testing

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace dyncomm::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("dyncomm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace dyncomm::testing
