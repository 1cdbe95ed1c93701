#include "dyncomm/cli.hpp"

#include <charconv>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "dyncomm/experiment.hpp"
#include "dyncomm/io.hpp"

namespace dyncomm {

namespace fs = std::filesystem;

namespace {

template <typename T>
std::optional<T> parse_integer(std::string_view text) {
    T value{};
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_error;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_error;
    }
}

std::vector<NodeId> nodes_in(StepWindow labels, std::uint32_t n_nodes, const char* name) {
    if (labels.last > n_nodes) {
        throw ConfigError(std::string(name) + " range exceeds n_nodes = " + std::to_string(n_nodes));
    }
    std::vector<NodeId> nodes;
    for (auto label = labels.first; label <= labels.last; ++label) nodes.push_back(label - 1);
    return nodes;
}

// "top=a..b" -> window
StepWindow parse_group(std::string_view text, std::string_view key) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || text.substr(0, eq) != key) {
        throw ConfigError("--ratio expects " + std::string(key) + "=<a..b>, got '" +
                          std::string(text) + "'");
    }
    return parse_window(text.substr(eq + 1));
}

}  // namespace

StepWindow parse_window(std::string_view text) {
    const auto dots = text.find("..");
    if (dots != std::string_view::npos) {
        const auto first = parse_integer<Step>(text.substr(0, dots));
        const auto last = parse_integer<Step>(text.substr(dots + 2));
        if (first && last) {
            if (*first < 1) throw ConfigError("window must start at step >= 1");
            if (*last < *first) throw ConfigError("window '" + std::string(text) + "' is reversed");
            return {*first, *last};
        }
    }
    throw ConfigError("window must look like <a..b>, got '" + std::string(text) + "'");
}

std::vector<std::uint64_t> parse_seeds(std::string_view text, std::uint64_t first_seed) {
    std::vector<std::uint64_t> seeds;
    if (text.find(',') == std::string_view::npos) {
        const auto count = parse_integer<std::uint64_t>(text);
        if (!count || *count == 0) throw ConfigError("--seeds count must be a positive integer");
        for (std::uint64_t i = 0; i < *count; ++i) seeds.push_back(first_seed + i);
        return seeds;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        const auto item = text.substr(start, comma - start);
        if (!item.empty()) {
            const auto seed = parse_integer<std::uint64_t>(item);
            if (!seed) throw ConfigError("bad seed '" + std::string(item) + "'");
            seeds.push_back(*seed);
        }
        start = comma + 1;
    }
    if (seeds.empty()) throw ConfigError("--seeds list is empty");
    return seeds;
}

int cmd_simulate(const fs::path& config, const fs::path& out, std::ostream& err) {
    return guarded(err, [&] {
        const ExperimentSpec spec = parse_config(config);
        const auto result = run_two_phase(spec, spec.base.seed);
        write_bundle(out, spec, result.log, result.metrics);
        return static_cast<int>(exit_ok);
    });
}

int cmd_metrics(const MetricsRequest& request, std::ostream& err) {
    return guarded(err, [&] {
        if (request.window.empty()) throw ConfigError("window is empty");
        if (request.top.has_value() != request.bottom.has_value()) {
            throw ConfigError("--ratio needs both top and bottom ranges");
        }
        if (request.interval < 1) throw ConfigError("--interval must be >= 1");
        const EventLog log = read_event_log(request.log);
        if (request.window.last > log.horizon()) {
            throw ConfigError("window ends at step " + std::to_string(request.window.last) +
                              " but the log has " + std::to_string(log.horizon()) + " steps");
        }
        std::vector<NodeId> top;
        std::vector<NodeId> bottom;
        if (request.top) {
            top = nodes_in(*request.top, log.config.n_nodes, "top");
            bottom = nodes_in(*request.bottom, log.config.n_nodes, "bottom");
        }

        std::error_code ec;
        fs::create_directories(request.out, ec);
        if (ec || !fs::is_directory(request.out)) {
            throw IoError("cannot create output directory " + request.out.string());
        }
        std::vector<std::string> files;
        auto emit = [&](const std::string& name, std::string_view content) {
            write_file_atomic(request.out / name, content);
            files.push_back(name);
        };
        emit("trigger_matrix.csv", trigger_matrix_csv(trigger_matrix(log, request.window)));
        emit("node_scores.csv", node_scores_csv(node_scores(log, request.window)));
        if (request.top) {
            emit("ratio_series.csv",
                 ratio_series_csv(group_ratio_series(log, top, bottom, request.interval, request.window)));
        }
        ExperimentSpec spec;
        spec.base = log.config;
        spec.interval = request.interval;
        auto manifest = bundle_manifest(spec, "metrics", files);
        manifest["window"] = std::to_string(request.window.first) + ".." + std::to_string(request.window.last);
        write_file_atomic(request.out / "manifest.json", manifest.dump(2) + "\n");
        return static_cast<int>(exit_ok);
    });
}

int cmd_sweep(const fs::path& config, std::optional<std::string_view> seeds, const fs::path& out,
              unsigned threads, bool include_logs, std::ostream& err) {
    return guarded(err, [&] {
        ExperimentSpec spec = parse_config(config);
        if (seeds) spec.seeds = parse_seeds(*seeds, spec.base.seed);

        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory " + out.string());

        SweepOptions options;
        options.threads = threads;
        options.on_run = [&](std::uint64_t seed, const EventLog& log, const MetricBundle& metrics) {
            ExperimentSpec single = spec;
            single.base.seed = seed;
            single.seeds = {seed};
            write_bundle(out / ("seed_" + std::to_string(seed)), single, log, metrics, include_logs);
        };
        const SweepSummary summary = run_sweep(spec, options);

        std::vector<std::string> files;
        if (!summary.per_seed.empty()) {
            std::string by_seed = "step";
            for (auto seed : summary.seeds) by_seed += ",seed_" + std::to_string(seed);
            by_seed += '\n';
            std::string medians = "step,median_ratio\n";
            for (std::size_t t = 0; t < summary.median_steps.size(); ++t) {
                const auto step = std::to_string(summary.median_steps[t]);
                by_seed += step;
                for (const auto& series : summary.per_seed) {
                    by_seed += ',';
                    if (series.points[t].ratio) by_seed += format_number(*series.points[t].ratio);
                }
                by_seed += '\n';
                medians += step + ',';
                if (summary.median[t]) medians += format_number(*summary.median[t]);
                medians += '\n';
            }
            write_file_atomic(out / "ratio_by_seed.csv", by_seed);
            write_file_atomic(out / "ratio_median.csv", medians);
            files = {"ratio_by_seed.csv", "ratio_median.csv"};
        }
        for (auto seed : summary.seeds) files.push_back("seed_" + std::to_string(seed) + "/");
        files.push_back("manifest.json");
        write_file_atomic(out / "manifest.json", bundle_manifest(spec, "sweep", files).dump(2) + "\n");
        return static_cast<int>(exit_ok);
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamic communicators simulator with polarization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version()));

    std::string config_path;
    std::string out_dir;

    auto* simulate = app.add_subcommand("simulate", "Run one two-phase experiment and write a report bundle");
    simulate->add_option("--config", config_path, "JSON config file")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();

    std::string log_path;
    std::string window_text;
    std::vector<std::string> ratio_args;
    Step interval = 1000;
    auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a stored event log");
    metrics->add_option("--log", log_path, "Bundle directory or a file inside it")->required();
    metrics->add_option("--window", window_text, "Step window a..b")->required();
    metrics->add_option("--ratio", ratio_args, "top=<a..b> bottom=<c..d> node-label ranges")
        ->expected(2);
    metrics->add_option("--interval", interval, "Ratio series sampling interval");
    metrics->add_option("--out", out_dir, "Output directory")->required();

    std::string seeds_text;
    unsigned threads = 1;
    bool metrics_only = false;
    auto* sweep = app.add_subcommand("sweep", "Run one experiment per seed and aggregate medians");
    sweep->add_option("--config", config_path, "JSON config file")->required();
    sweep->add_option("--seeds", seeds_text, "Comma-separated seed list, or a seed count");
    sweep->add_option("--out", out_dir, "Output directory")->required();
    sweep->add_option("--threads", threads, "Concurrent runs")->check(CLI::PositiveNumber);
    sweep->add_flag("--metrics-only", metrics_only, "Skip per-seed event logs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config_error;
    }

    if (*simulate) return cmd_simulate(config_path, out_dir, err);
    if (*metrics) {
        MetricsRequest request;
        request.log = log_path;
        request.out = out_dir;
        request.interval = interval;
        const int status = guarded(err, [&] {
            request.window = parse_window(window_text);
            if (!ratio_args.empty()) {
                request.top = parse_group(ratio_args[0], "top");
                request.bottom = parse_group(ratio_args[1], "bottom");
            }
            return static_cast<int>(exit_ok);
        });
        if (status != exit_ok) return status;
        return cmd_metrics(request, err);
    }
    std::optional<std::string_view> seeds;
    if (!seeds_text.empty()) seeds = seeds_text;
    return cmd_sweep(config_path, seeds, out_dir, threads, !metrics_only, err);
}

}  // namespace dyncomm
