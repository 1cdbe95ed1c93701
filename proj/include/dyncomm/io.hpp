#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dyncomm/experiment.hpp"
#include "dyncomm/metrics.hpp"
#include "dyncomm/model.hpp"

namespace dyncomm {

// Unreadable/unwritable paths and malformed input files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string_view library_version() noexcept;

// Shortest text that parses back to the same double; '.' decimal separator
// regardless of locale.
std::string format_number(double value);

// --- configuration -----------------------------------------------------------
//
// A config file is a JSON object. Required keys: n_nodes, basal_rate,
// basal_fanout, response_fanout, horizon, polarization_onset (integer or
// "never"), seed. Optional: importance_scheme, importance_values,
// increment_scope, trace_interval, seeds, metrics, interval. Unknown keys are
// rejected.

ExperimentSpec parse_config_json(const nlohmann::json& document);
ExperimentSpec parse_config_text(std::string_view text);
ExperimentSpec parse_config(const std::filesystem::path& path);

// Fully resolved document; parse_config_json(config_to_json(s)) == s.
nlohmann::json config_to_json(const ExperimentSpec& spec);

// --- event log ---------------------------------------------------------------
//
// events.csv            step,src,dst,provenance   one row per edge
// responses.csv         step,node,event           one row per response
// importance_trace.csv  step,node,importance
// Nodes are written 1-based. The config travels separately (manifest.json).

struct EventLogText {
    std::string events;
    std::string responses;
    std::string importance_trace;
};

EventLogText serialize_event_log(const EventLog& log);

// Rebuilds snapshots and outcomes (trigger pairs are the responders'
// in-edges). Throws IoError on malformed text.
EventLog parse_event_log(const SimulationConfig& config, const EventLogText& text);

// Reads manifest.json, events.csv, responses.csv and importance_trace.csv from
// a bundle directory. `path` may also name a file inside that directory.
EventLog read_event_log(const std::filesystem::path& path);

// --- metrics -----------------------------------------------------------------

std::string trigger_matrix_csv(const TriggerMatrix& matrix);
std::string ratio_series_csv(const RatioSeries& series);
std::string relative_scores_csv(const MetricBundle& bundle, std::size_t n_nodes);
std::string node_scores_csv(const NodeScoreSeries& scores);

// --- bundles -----------------------------------------------------------------

// Writes via a temporary file and rename, so readers never see partial files.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

nlohmann::json bundle_manifest(const ExperimentSpec& spec, std::string_view command,
                               const std::vector<std::string>& files);

// Writes the report bundle for one run into `dir` (created if missing):
// the event log files (unless include_log is false), the requested metric
// files and manifest.json. Returns the file names written, manifest last.
std::vector<std::string> write_bundle(const std::filesystem::path& dir, const ExperimentSpec& spec,
                                      const EventLog& log, const MetricBundle& metrics,
                                      bool include_log = true);

}  // namespace dyncomm
