#include "dyncomm/config.hpp"

#include <cmath>

namespace dyncomm {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

void validate(const SimulationConfig& config) {
    require(config.n_nodes >= 2, "n_nodes must be >= 2");
    require(std::isfinite(config.basal_rate) && config.basal_rate >= 0.0 && config.basal_rate <= 1.0,
            "basal_rate must lie in [0, 1]");
    require(config.basal_fanout >= 1, "basal_fanout must be >= 1");
    require(config.basal_fanout <= config.n_nodes - 1, "basal_fanout must be <= n_nodes - 1");
    require(config.response_fanout >= 1, "response_fanout must be >= 1");
    require(config.response_fanout <= config.n_nodes - 1,
            "response_fanout must be <= n_nodes - 1");
    if (config.polarization_onset) {
        require(*config.polarization_onset <= config.horizon,
                "polarization_onset must be <= horizon");
    }
    require(config.trace_interval >= 1, "trace_interval must be >= 1");

    if (config.importance_scheme == ImportanceScheme::explicit_list) {
        const auto& values = config.importance_values;
        require(values.size() == config.n_nodes,
                "importance_values must have exactly n_nodes entries");
        for (std::size_t i = 0; i < values.size(); ++i) {
            require(std::isfinite(values[i]) && values[i] > 0.0,
                    "importance_values must be strictly positive");
            if (i > 0) {
                require(values[i - 1] <= values[i], "importance_values must be non-decreasing");
            }
        }
    } else {
        require(config.importance_values.empty(),
                "importance_values is only allowed with importance_scheme explicit-list");
    }
}

std::string to_string(ImportanceScheme scheme) {
    return scheme == ImportanceScheme::linear_rank ? "linear-rank" : "explicit-list";
}

std::string to_string(IncrementScope scope) {
    return scope == IncrementScope::all ? "all" : "in-group-only";
}

ImportanceScheme parse_importance_scheme(const std::string& text) {
    if (text == "linear-rank") return ImportanceScheme::linear_rank;
    if (text == "explicit-list") return ImportanceScheme::explicit_list;
    throw ConfigError("importance_scheme must be one of linear-rank, explicit-list (got '" + text +
                      "')");
}

IncrementScope parse_increment_scope(const std::string& text) {
    if (text == "all") return IncrementScope::all;
    if (text == "in-group-only") return IncrementScope::in_group_only;
    throw ConfigError("increment_scope must be one of all, in-group-only (got '" + text + "')");
}

}  // namespace dyncomm
