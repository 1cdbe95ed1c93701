#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "dyncomm/types.hpp"

namespace dyncomm {

enum ExitCode : int { exit_ok = 0, exit_config_error = 2, exit_io_error = 3 };

// "a..b" with 1 <= a <= b. Throws ConfigError otherwise.
StepWindow parse_window(std::string_view text);

// "s1,s2,..." is an explicit list; a bare integer k is a count and expands to
// first_seed, first_seed + 1, ..., first_seed + k - 1.
std::vector<std::uint64_t> parse_seeds(std::string_view text, std::uint64_t first_seed);

struct MetricsRequest {
    std::filesystem::path log;
    StepWindow window;
    std::optional<StepWindow> top;      // 1-based node labels
    std::optional<StepWindow> bottom;
    Step interval = 1000;
    std::filesystem::path out;
};

int cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& out,
                 std::ostream& err);
int cmd_metrics(const MetricsRequest& request, std::ostream& err);
int cmd_sweep(const std::filesystem::path& config, std::optional<std::string_view> seeds,
              const std::filesystem::path& out, unsigned threads, bool include_logs,
              std::ostream& err);

// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dyncomm
