#include "dyncomm/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <system_error>
#include <tuple>

#ifndef DYNCOMM_VERSION
#define DYNCOMM_VERSION "0.0.0"
#endif

namespace dyncomm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view library_version() noexcept { return DYNCOMM_VERSION; }

std::string format_number(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return {buffer, result.ptr};
}

namespace {

template <typename Int>
void append_int(std::string& out, Int value) {
    char buffer[24];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    out.append(buffer, result.ptr);
}

// --- config helpers ---

const std::set<std::string, std::less<>> kConfigKeys = {
    "n_nodes",          "basal_rate",        "basal_fanout",    "response_fanout",
    "horizon",          "polarization_onset", "seed",           "importance_scheme",
    "importance_values", "increment_scope",  "trace_interval",  "seeds",
    "metrics",          "interval"};

const std::set<std::string, std::less<>> kRequiredKeys = {
    "n_nodes", "basal_rate", "basal_fanout", "response_fanout", "horizon", "polarization_onset",
    "seed"};

std::uint64_t as_unsigned(const json& value, const std::string& key, std::uint64_t max) {
    const bool negative = value.is_number_integer() && !value.is_number_unsigned() &&
                          value.get<std::int64_t>() < 0;
    if (!value.is_number_integer() || negative) {
        throw ConfigError(key + " must be a non-negative integer");
    }
    const auto v = value.get<std::uint64_t>();
    if (v > max) throw ConfigError(key + " must be <= " + std::to_string(max));
    return v;
}

std::uint32_t as_u32(const json& value, const std::string& key) {
    return static_cast<std::uint32_t>(
        as_unsigned(value, key, std::numeric_limits<std::uint32_t>::max()));
}

double as_real(const json& value, const std::string& key) {
    if (!value.is_number()) throw ConfigError(key + " must be a number");
    return value.get<double>();
}

std::string as_string(const json& value, const std::string& key) {
    if (!value.is_string()) throw ConfigError(key + " must be a string");
    return value.get<std::string>();
}

const json& array_at(const json& document, const std::string& key) {
    const json& value = document.at(key);
    if (!value.is_array()) throw ConfigError(key + " must be an array");
    return value;
}

// --- csv helpers ---

class CsvReader {
public:
    CsvReader(std::string_view text, std::string name) : text_(text), name_(std::move(name)) {}

    // Consumes the header line and checks it.
    void expect_header(std::string_view header) {
        std::string_view line;
        if (!next_line(line) || line != header) {
            fail("expected header '" + std::string(header) + "'");
        }
    }

    // Splits the next non-empty line into fields; false at end of input.
    bool next_row(std::vector<std::string_view>& fields) {
        std::string_view line;
        do {
            if (!next_line(line)) return false;
        } while (line.empty());
        fields.clear();
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return true;
    }

    template <typename T>
    T number(std::string_view field) const {
        T value{};
        const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
        if (result.ec != std::errc{} || result.ptr != field.data() + field.size()) {
            fail("bad number '" + std::string(field) + "'");
        }
        return value;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw IoError(name_ + ":" + std::to_string(line_number_) + ": " + message);
    }

private:
    bool next_line(std::string_view& line) {
        if (position_ >= text_.size()) return false;
        auto end = text_.find('\n', position_);
        if (end == std::string_view::npos) end = text_.size();
        line = text_.substr(position_, end - position_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        position_ = end + 1;
        ++line_number_;
        return true;
    }

    std::string_view text_;
    std::string name_;
    std::size_t position_ = 0;
    std::size_t line_number_ = 0;
};

void append_optional(std::string& out, const std::optional<double>& value) {
    if (value) out += format_number(*value);
}

}  // namespace

// --- configuration -----------------------------------------------------------

ExperimentSpec parse_config_json(const json& document) {
    if (!document.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : document.items()) {
        if (!kConfigKeys.contains(key)) throw ConfigError("unknown key '" + key + "'");
    }
    for (const auto& key : kRequiredKeys) {
        if (!document.contains(key)) throw ConfigError("missing required key '" + key + "'");
    }

    ExperimentSpec spec;
    SimulationConfig& c = spec.base;
    c.n_nodes = as_u32(document.at("n_nodes"), "n_nodes");
    c.basal_rate = as_real(document.at("basal_rate"), "basal_rate");
    c.basal_fanout = as_u32(document.at("basal_fanout"), "basal_fanout");
    c.response_fanout = as_u32(document.at("response_fanout"), "response_fanout");
    c.horizon = as_u32(document.at("horizon"), "horizon");
    const json& onset = document.at("polarization_onset");
    if (onset.is_string()) {
        if (onset.get<std::string>() != "never") {
            throw ConfigError("polarization_onset must be an integer or \"never\"");
        }
        c.polarization_onset = std::nullopt;
    } else {
        c.polarization_onset = as_u32(onset, "polarization_onset");
    }
    c.seed = as_unsigned(document.at("seed"), "seed", std::numeric_limits<std::uint64_t>::max());

    if (document.contains("importance_scheme")) {
        c.importance_scheme =
            parse_importance_scheme(as_string(document.at("importance_scheme"), "importance_scheme"));
    }
    if (document.contains("importance_values")) {
        for (const auto& v : array_at(document, "importance_values")) {
            c.importance_values.push_back(as_real(v, "importance_values"));
        }
    }
    if (document.contains("increment_scope")) {
        c.increment_scope =
            parse_increment_scope(as_string(document.at("increment_scope"), "increment_scope"));
    }
    if (document.contains("trace_interval")) {
        c.trace_interval = as_u32(document.at("trace_interval"), "trace_interval");
    }

    if (document.contains("seeds")) {
        for (const auto& v : array_at(document, "seeds")) {
            spec.seeds.push_back(as_unsigned(v, "seeds", std::numeric_limits<std::uint64_t>::max()));
        }
        if (spec.seeds.empty()) throw ConfigError("seeds must list at least one seed");
    } else {
        spec.seeds = {c.seed};
    }
    if (document.contains("metrics")) {
        spec.metrics = {false, false, false};
        for (const auto& v : array_at(document, "metrics")) {
            const auto name = as_string(v, "metrics");
            if (name == "trigger_matrices") spec.metrics.trigger_matrices = true;
            else if (name == "relative_scores") spec.metrics.relative_scores = true;
            else if (name == "ratio_series") spec.metrics.ratio_series = true;
            else throw ConfigError("metrics entry '" + name + "' is not one of trigger_matrices, relative_scores, ratio_series");
        }
    }
    if (document.contains("interval")) spec.interval = as_u32(document.at("interval"), "interval");

    validate(spec);
    return spec;
}

ExperimentSpec parse_config_text(std::string_view text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config_json(document);
}

ExperimentSpec parse_config(const fs::path& path) {
    return parse_config_text(read_file(path));
}

json config_to_json(const ExperimentSpec& spec) {
    const SimulationConfig& c = spec.base;
    json document = json::object();
    document["n_nodes"] = c.n_nodes;
    document["basal_rate"] = c.basal_rate;
    document["basal_fanout"] = c.basal_fanout;
    document["response_fanout"] = c.response_fanout;
    document["horizon"] = c.horizon;
    if (c.polarization_onset) document["polarization_onset"] = *c.polarization_onset;
    else document["polarization_onset"] = "never";
    document["seed"] = c.seed;
    document["importance_scheme"] = to_string(c.importance_scheme);
    if (c.importance_scheme == ImportanceScheme::explicit_list) {
        document["importance_values"] = c.importance_values;
    }
    document["increment_scope"] = to_string(c.increment_scope);
    document["trace_interval"] = c.trace_interval;
    document["seeds"] = spec.seeds.empty() ? std::vector<std::uint64_t>{c.seed} : spec.seeds;
    json metrics = json::array();
    if (spec.metrics.trigger_matrices) metrics.push_back("trigger_matrices");
    if (spec.metrics.relative_scores) metrics.push_back("relative_scores");
    if (spec.metrics.ratio_series) metrics.push_back("ratio_series");
    document["metrics"] = metrics;
    document["interval"] = spec.interval;
    return document;
}

// --- event log ---------------------------------------------------------------

EventLogText serialize_event_log(const EventLog& log) {
    EventLogText text;
    text.events = "step,src,dst,provenance\n";
    for (const auto& snapshot : log.snapshots) {
        for (const auto& e : snapshot.edges) {
            append_int(text.events, snapshot.step);
            text.events += ',';
            append_int(text.events, node_label(e.src));
            text.events += ',';
            append_int(text.events, node_label(e.dst));
            text.events += ',';
            text.events += to_string(e.provenance);
            text.events += '\n';
        }
    }
    text.responses = "step,node,event\n";
    for (const auto& outcome : log.outcomes) {
        for (NodeId n : outcome.responders) {
            append_int(text.responses, outcome.step);
            text.responses += ',';
            append_int(text.responses, node_label(n));
            text.responses += ",response\n";
        }
    }
    text.importance_trace = "step,node,importance\n";
    for (const auto& sample : log.importance_trace) {
        for (NodeId n = 0; n < sample.values.size(); ++n) {
            append_int(text.importance_trace, sample.step);
            text.importance_trace += ',';
            append_int(text.importance_trace, node_label(n));
            text.importance_trace += ',';
            text.importance_trace += format_number(sample.values[n]);
            text.importance_trace += '\n';
        }
    }
    return text;
}

EventLog parse_event_log(const SimulationConfig& config, const EventLogText& text) {
    const Step horizon = config.horizon;
    const std::uint32_t n_nodes = config.n_nodes;
    EventLog log;
    log.config = config;
    log.snapshots.resize(horizon);
    log.outcomes.resize(horizon);
    for (Step k = 1; k <= horizon; ++k) {
        log.snapshots[k - 1].step = k;
        log.outcomes[k - 1].step = k;
    }
    std::vector<std::string_view> fields;

    auto read_node = [&](const CsvReader& reader, std::string_view field) {
        const auto label = reader.number<std::uint32_t>(field);
        if (label < 1 || label > n_nodes) reader.fail("node " + std::string(field) + " out of range");
        return static_cast<NodeId>(label - 1);
    };
    auto read_step = [&](const CsvReader& reader, std::string_view field, Step previous, Step lowest) {
        const auto k = reader.number<Step>(field);
        if (k < lowest || k > horizon) reader.fail("step " + std::string(field) + " out of range");
        if (k < previous) reader.fail("steps must be non-decreasing");
        return k;
    };

    {
        CsvReader reader(text.events, "events.csv");
        reader.expect_header("step,src,dst,provenance");
        Step previous = 1;
        while (reader.next_row(fields)) {
            if (fields.size() != 4) reader.fail("expected 4 fields");
            const Step k = read_step(reader, fields[0], previous, 1);
            previous = k;
            Edge e{read_node(reader, fields[1]), read_node(reader, fields[2]), Provenance::basal};
            if (e.src == e.dst) reader.fail("self-loop");
            if (fields[3] == "response") e.provenance = Provenance::response;
            else if (fields[3] != "basal") reader.fail("unknown provenance '" + std::string(fields[3]) + "'");
            log.snapshots[k - 1].edges.push_back(e);
        }
        for (auto& snapshot : log.snapshots) {
            auto& edges = snapshot.edges;
            std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
                return std::tie(a.dst, a.src) < std::tie(b.dst, b.src);
            });
            const auto dup = std::adjacent_find(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
                return a.src == b.src && a.dst == b.dst;
            });
            if (dup != edges.end()) {
                throw IoError("events.csv: duplicate edge at step " + std::to_string(snapshot.step));
            }
        }
    }
    {
        CsvReader reader(text.responses, "responses.csv");
        reader.expect_header("step,node,event");
        Step previous = 1;
        while (reader.next_row(fields)) {
            if (fields.size() != 3 || fields[2] != "response") reader.fail("expected step,node,response");
            const Step k = read_step(reader, fields[0], previous, 1);
            previous = k;
            const NodeId n = read_node(reader, fields[1]);
            auto& outcome = log.outcomes[k - 1];
            if (!outcome.responders.empty() && outcome.responders.back() >= n) {
                reader.fail("responders must be ascending and unique within a step");
            }
            const auto sources = log.snapshots[k - 1].in_sources(n);
            if (sources.empty()) reader.fail("responder without in-edges");
            outcome.responders.push_back(n);
            for (NodeId src : sources) outcome.trigger_pairs.push_back({src, n});
        }
        for (auto& outcome : log.outcomes) {
            std::sort(outcome.trigger_pairs.begin(), outcome.trigger_pairs.end());
        }
    }
    {
        CsvReader reader(text.importance_trace, "importance_trace.csv");
        reader.expect_header("step,node,importance");
        Step previous = 0;
        while (reader.next_row(fields)) {
            if (fields.size() != 3) reader.fail("expected 3 fields");
            const Step k = read_step(reader, fields[0], previous, 0);
            const NodeId n = read_node(reader, fields[1]);
            auto& trace = log.importance_trace;
            if (n == 0) {
                if (!trace.empty() && trace.back().values.size() != n_nodes) {
                    reader.fail("incomplete trace sample");
                }
                if (!trace.empty() && trace.back().step == k) reader.fail("repeated trace step");
                trace.push_back({k, {}});
            } else if (trace.empty() || trace.back().step != k || trace.back().values.size() != n) {
                reader.fail("trace nodes must run 1..n_nodes in order");
            }
            auto& values = trace.back().values;
            values.push_back(reader.number<double>(fields[2]));
            previous = k;
        }
        if (!log.importance_trace.empty() && log.importance_trace.back().values.size() != n_nodes) {
            reader.fail("incomplete trace sample");
        }
    }
    return log;
}

EventLog read_event_log(const fs::path& path) {
    const fs::path dir = fs::is_directory(path) ? path : path.parent_path();
    json manifest;
    try {
        manifest = json::parse(read_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw IoError((dir / "manifest.json").string() + ": " + e.what());
    }
    if (!manifest.is_object() || !manifest.contains("config")) {
        throw IoError((dir / "manifest.json").string() + ": missing config");
    }
    const SimulationConfig config = parse_config_json(manifest.at("config")).base;
    EventLogText text{read_file(dir / "events.csv"), read_file(dir / "responses.csv"),
                      read_file(dir / "importance_trace.csv")};
    return parse_event_log(config, text);
}

// --- metrics -----------------------------------------------------------------

std::string trigger_matrix_csv(const TriggerMatrix& matrix) {
    std::string out = "source";
    for (NodeId j = 0; j < matrix.size(); ++j) {
        out += ',';
        append_int(out, node_label(j));
    }
    out += '\n';
    for (NodeId i = 0; i < matrix.size(); ++i) {
        append_int(out, node_label(i));
        for (NodeId j = 0; j < matrix.size(); ++j) {
            out += ',';
            append_int(out, matrix.at(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string ratio_series_csv(const RatioSeries& series) {
    std::string out = "step,top_count,bottom_count,ratio\n";
    for (const auto& point : series.points) {
        append_int(out, point.step);
        out += ',';
        append_int(out, point.top_count);
        out += ',';
        append_int(out, point.bottom_count);
        out += ',';
        append_optional(out, point.ratio);
        out += '\n';
    }
    return out;
}

std::string relative_scores_csv(const MetricBundle& bundle, std::size_t n_nodes) {
    std::string out = "node,score_pre,score_post,rel1_pre,rel1_post,rel2_pre,rel2_post\n";
    auto cell = [&](const std::vector<std::optional<double>>& column, std::size_t i) {
        out += ',';
        if (i < column.size()) append_optional(out, column[i]);
    };
    auto score = [&](const std::optional<NodeScoreSeries>& scores, std::size_t i) {
        out += ',';
        if (scores) out += format_number(scores->scores[i]);
    };
    for (std::size_t i = 0; i < n_nodes; ++i) {
        append_int(out, i + 1);
        score(bundle.scores_pre, i);
        score(bundle.scores_post, i);
        cell(bundle.relative_to_1_pre, i);
        cell(bundle.relative_to_1_post, i);
        cell(bundle.relative_to_2_pre, i);
        cell(bundle.relative_to_2_post, i);
        out += '\n';
    }
    return out;
}

std::string node_scores_csv(const NodeScoreSeries& scores) {
    std::string out = "node,score\n";
    for (std::size_t i = 0; i < scores.scores.size(); ++i) {
        append_int(out, i + 1);
        out += ',';
        out += format_number(scores.scores[i]);
        out += '\n';
    }
    return out;
}

// --- bundles -----------------------------------------------------------------

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + temp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write failed for " + temp.string());
    }
    std::error_code ec;
    fs::rename(temp, path, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw IoError("cannot rename " + temp.string() + " to " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

json bundle_manifest(const ExperimentSpec& spec, std::string_view command,
                     const std::vector<std::string>& files) {
    json manifest = json::object();
    manifest["format"] = "dyncomm-bundle";
    manifest["format_version"] = 1;
    manifest["generator"] = "dyncomm " + std::string(library_version());
    manifest["command"] = std::string(command);
    manifest["rng"] = "mt19937_64";
    manifest["node_labels"] = "1-based";
    manifest["config"] = config_to_json(spec);
    manifest["files"] = files;
    return manifest;
}

std::vector<std::string> write_bundle(const fs::path& dir, const ExperimentSpec& spec,
                                      const EventLog& log, const MetricBundle& metrics,
                                      bool include_log) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());

    std::vector<std::string> files;
    auto emit = [&](const std::string& name, std::string_view content) {
        write_file_atomic(dir / name, content);
        files.push_back(name);
    };
    if (include_log) {
        const auto text = serialize_event_log(log);
        emit("events.csv", text.events);
        emit("responses.csv", text.responses);
        emit("importance_trace.csv", text.importance_trace);
    }
    if (metrics.trigger_pre) emit("trigger_pre.csv", trigger_matrix_csv(*metrics.trigger_pre));
    if (metrics.trigger_post) emit("trigger_post.csv", trigger_matrix_csv(*metrics.trigger_post));
    if (spec.metrics.relative_scores) {
        emit("relative_scores.csv", relative_scores_csv(metrics, log.config.n_nodes));
    }
    if (metrics.ratio) emit("ratio_series.csv", ratio_series_csv(*metrics.ratio));

    ExperimentSpec resolved = spec;
    resolved.base = log.config;
    files.push_back("manifest.json");
    write_file_atomic(dir / "manifest.json", bundle_manifest(resolved, "simulate", files).dump(2) + "\n");
    return files;
}

}  // namespace dyncomm
