#pragma once

#include <compare>
#include <cstdint>
#include <string_view>

namespace dyncomm {

// Nodes are 0-based in memory. Every file format and the CLI use 1-based
// labels, so node 0 is written as "1" and parity is taken on the label.
using NodeId = std::uint32_t;

// Time steps are 1-based; step 0 denotes the initial state.
using Step = std::uint32_t;

inline constexpr NodeId node_label(NodeId node) noexcept { return node + 1; }

enum class Parity : std::uint8_t { odd, even };

inline constexpr Parity parity_of(NodeId node) noexcept {
    return node_label(node) % 2 == 0 ? Parity::even : Parity::odd;
}

enum class Provenance : std::uint8_t { basal, response };

std::string_view to_string(Provenance p) noexcept;

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    Provenance provenance = Provenance::basal;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Sender `source` had an edge toward `responder` in the step's snapshot and
// `responder` fired.
struct TriggerPair {
    NodeId source = 0;
    NodeId responder = 0;

    friend auto operator<=>(const TriggerPair&, const TriggerPair&) = default;
};

// Inclusive range of steps [first, last]. A window with last < first is empty.
struct StepWindow {
    Step first = 1;
    Step last = 0;

    [[nodiscard]] constexpr bool empty() const noexcept { return last < first; }
    [[nodiscard]] constexpr Step length() const noexcept { return empty() ? 0 : last - first + 1; }
    [[nodiscard]] constexpr bool contains(Step k) const noexcept { return k >= first && k <= last; }

    friend bool operator==(const StepWindow&, const StepWindow&) = default;
};

}  // namespace dyncomm
