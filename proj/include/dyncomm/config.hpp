#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyncomm/types.hpp"

namespace dyncomm {

// Raised for any invalid model or experiment parameter. The message names the
// offending key and the violated constraint.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ImportanceScheme : std::uint8_t { linear_rank, explicit_list };

// Who is credited when a node responds. `all` credits every in-neighbour of
// the responder; `in_group_only` skips opposite-parity senders while the
// polarized regime is active.
enum class IncrementScope : std::uint8_t { all, in_group_only };

struct SimulationConfig {
    std::uint32_t n_nodes = 40;
    double basal_rate = 0.01;
    std::uint32_t basal_fanout = 3;
    std::uint32_t response_fanout = 3;
    Step horizon = 16000;
    // Steps 1..onset run homogeneous, steps onset+1..horizon run odd-even.
    // nullopt means the regime never switches.
    std::optional<Step> polarization_onset = 8000;
    std::uint64_t seed = 1;
    ImportanceScheme importance_scheme = ImportanceScheme::linear_rank;
    std::vector<double> importance_values;  // only for explicit_list
    IncrementScope increment_scope = IncrementScope::all;
    Step trace_interval = 1000;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

// Throws ConfigError on the first violated invariant.
void validate(const SimulationConfig& config);

std::string to_string(ImportanceScheme scheme);
std::string to_string(IncrementScope scope);
ImportanceScheme parse_importance_scheme(const std::string& text);
IncrementScope parse_increment_scope(const std::string& text);

}  // namespace dyncomm
