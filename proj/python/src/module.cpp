// Python bindings. Node arguments and results use 1-based labels, the same
// numbering as the bundle files and the CLI; array index i holds label i + 1.

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "dyncomm/cli.hpp"
#include "dyncomm/config.hpp"
#include "dyncomm/experiment.hpp"
#include "dyncomm/io.hpp"
#include "dyncomm/metrics.hpp"
#include "dyncomm/model.hpp"

namespace py = pybind11;
using namespace dyncomm;

namespace {

NodeId from_label(std::int64_t label, std::uint32_t n) {
    if (label < 1 || label > static_cast<std::int64_t>(n)) {
        throw py::index_error("node label " + std::to_string(label) + " outside 1.." + std::to_string(n));
    }
    return static_cast<NodeId>(label - 1);
}

std::vector<NodeId> from_labels(const std::vector<std::int64_t>& labels, std::uint32_t n) {
    std::vector<NodeId> out;
    out.reserve(labels.size());
    for (auto l : labels) out.push_back(from_label(l, n));
    return out;
}

std::vector<NodeId> to_labels(const std::vector<NodeId>& nodes) {
    std::vector<NodeId> out;
    out.reserve(nodes.size());
    for (auto n : nodes) out.push_back(node_label(n));
    return out;
}

const StepOutcome& outcome_at(const EventLog& log, Step step) {
    if (step < 1 || step > log.horizon()) throw py::index_error("step outside 1..horizon");
    return log.outcomes[step - 1];
}

StepWindow window_of(const EventLog& log, std::optional<Step> first, std::optional<Step> last) {
    return {first.value_or(1), last.value_or(log.horizon())};
}

py::array_t<std::uint64_t> matrix_array(const TriggerMatrix& m) {
    const auto n = static_cast<py::ssize_t>(m.size());
    py::array_t<std::uint64_t> out({n, n});
    auto view = out.mutable_unchecked<2>();
    for (NodeId i = 0; i < m.size(); ++i) {
        for (NodeId j = 0; j < m.size(); ++j) view(i, j) = m.at(i, j);
    }
    return out;
}

py::array_t<double> vector_array(const std::vector<double>& values) {
    const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(values.size())};
    const std::vector<py::ssize_t> strides{static_cast<py::ssize_t>(sizeof(double))};
    py::array_t<double> out(shape, strides);
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

py::list ratio_points(const RatioSeries& series) {
    py::list out;
    for (const auto& p : series.points) {
        out.append(py::make_tuple(p.step, p.top_count, p.bottom_count, p.ratio));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dynamic communicators simulation core";
    m.attr("__version__") = std::string(library_version());

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<ImportanceScheme>(m, "ImportanceScheme")
        .value("linear_rank", ImportanceScheme::linear_rank)
        .value("explicit_list", ImportanceScheme::explicit_list);
    py::enum_<IncrementScope>(m, "IncrementScope")
        .value("all", IncrementScope::all)
        .value("in_group_only", IncrementScope::in_group_only);

    py::class_<SimulationConfig>(m, "SimulationConfig")
        .def(py::init<>())
        .def_readwrite("n_nodes", &SimulationConfig::n_nodes)
        .def_readwrite("basal_rate", &SimulationConfig::basal_rate)
        .def_readwrite("basal_fanout", &SimulationConfig::basal_fanout)
        .def_readwrite("response_fanout", &SimulationConfig::response_fanout)
        .def_readwrite("horizon", &SimulationConfig::horizon)
        .def_readwrite("polarization_onset", &SimulationConfig::polarization_onset)
        .def_readwrite("seed", &SimulationConfig::seed)
        .def_readwrite("importance_scheme", &SimulationConfig::importance_scheme)
        .def_readwrite("importance_values", &SimulationConfig::importance_values)
        .def_readwrite("increment_scope", &SimulationConfig::increment_scope)
        .def_readwrite("trace_interval", &SimulationConfig::trace_interval)
        .def("validate", [](const SimulationConfig& c) { validate(c); })
        .def(py::self == py::self)
        .def("__repr__", [](const SimulationConfig& c) {
            ExperimentSpec spec{c, {}, {}, 1000};
            return "SimulationConfig(" + config_to_json(spec).dump() + ")";
        });

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("base", &ExperimentSpec::base)
        .def_readwrite("seeds", &ExperimentSpec::seeds)
        .def_readwrite("interval", &ExperimentSpec::interval)
        .def("to_json", [](const ExperimentSpec& s) { return config_to_json(s).dump(2); });

    m.def("parse_config", [](const std::filesystem::path& path) { return parse_config(path); },
          py::arg("path"));
    m.def("parse_config_text", [](const std::string& text) { return parse_config_text(text); },
          py::arg("text"));

    py::class_<EventLog>(m, "EventLog")
        .def_readonly("config", &EventLog::config)
        .def_property_readonly("horizon", &EventLog::horizon)
        .def("responders",
             [](const EventLog& log, Step step) { return to_labels(outcome_at(log, step).responders); },
             py::arg("step"))
        .def("trigger_pairs",
             [](const EventLog& log, Step step) {
                 std::vector<std::pair<NodeId, NodeId>> out;
                 for (const auto& p : outcome_at(log, step).trigger_pairs) {
                     out.emplace_back(node_label(p.source), node_label(p.responder));
                 }
                 return out;
             },
             py::arg("step"))
        .def("edges",
             [](const EventLog& log, Step step) {
                 outcome_at(log, step);
                 std::vector<std::tuple<NodeId, NodeId, std::string>> out;
                 for (const auto& e : log.snapshots[step - 1].edges) {
                     out.emplace_back(node_label(e.src), node_label(e.dst), to_string(e.provenance));
                 }
                 return out;
             },
             py::arg("step"))
        .def("importance_trace",
             [](const EventLog& log) {
                 py::list out;
                 for (const auto& s : log.importance_trace) {
                     out.append(py::make_tuple(s.step, vector_array(s.values)));
                 }
                 return out;
             })
        .def(py::self == py::self);

    m.def("run", [](const SimulationConfig& c) {
              py::gil_scoped_release release;
              return run(c);
          },
          py::arg("config"), "Runs steps 1..horizon and returns the event log.");

    m.def("response_probability",
          [](std::int64_t node, const std::vector<std::int64_t>& sources, std::vector<double> importance,
             bool polarized) {
              const auto n = static_cast<std::uint32_t>(importance.size());
              auto ids = from_labels(sources, n);
              std::sort(ids.begin(), ids.end());
              const NodeId target = from_label(node, n);
              if (std::adjacent_find(ids.begin(), ids.end()) != ids.end() ||
                  std::binary_search(ids.begin(), ids.end(), target)) {
                  throw py::value_error("sources must be distinct and exclude the node itself");
              }
              return response_probability(target, ids, ImportanceState(std::move(importance)),
                                          polarized ? PolarizationRegime::odd_even
                                                    : PolarizationRegime::homogeneous);
          },
          py::arg("node"), py::arg("sources"), py::arg("importance"), py::arg("polarized") = false);

    m.def("trigger_matrix",
          [](const EventLog& log, std::optional<Step> first, std::optional<Step> last) {
              return matrix_array(trigger_matrix(log, window_of(log, first, last)));
          },
          py::arg("log"), py::arg("first") = py::none(), py::arg("last") = py::none(),
          "Trigger counts over steps first..last; row = source, column = responder.");

    m.def("node_scores",
          [](const EventLog& log, std::optional<Step> first, std::optional<Step> last) {
              return vector_array(node_scores(log, window_of(log, first, last)).scores);
          },
          py::arg("log"), py::arg("first") = py::none(), py::arg("last") = py::none());

    m.def("cross_group_fraction",
          [](const EventLog& log, std::optional<Step> first, std::optional<Step> last) {
              return cross_group_fraction(trigger_matrix(log, window_of(log, first, last)));
          },
          py::arg("log"), py::arg("first") = py::none(), py::arg("last") = py::none());

    m.def("group_ratio_series",
          [](const EventLog& log, const std::vector<std::int64_t>& top, const std::vector<std::int64_t>& bottom,
             Step interval, std::optional<Step> first, std::optional<Step> last) {
              const auto n = log.config.n_nodes;
              return ratio_points(group_ratio_series(log, from_labels(top, n), from_labels(bottom, n), interval,
                                                     window_of(log, first, last)));
          },
          py::arg("log"), py::arg("top"), py::arg("bottom"), py::arg("interval") = 1000,
          py::arg("first") = py::none(), py::arg("last") = py::none(),
          "List of (step, top_count, bottom_count, ratio or None).");

    m.def("run_sweep",
          [](const ExperimentSpec& spec, unsigned threads) {
              SweepOptions options;
              options.threads = threads;
              SweepSummary summary;
              {
                  py::gil_scoped_release release;
                  summary = run_sweep(spec, options);
              }
              py::dict out;
              out["seeds"] = summary.seeds;
              out["median_steps"] = summary.median_steps;
              out["median"] = summary.median;
              py::list per_seed;
              for (const auto& s : summary.per_seed) per_seed.append(ratio_points(s));
              out["per_seed"] = per_seed;
              return out;
          },
          py::arg("spec"), py::arg("threads") = 1,
          "Median top/bottom ratio series over the spec's seeds.");

    m.def("serialize_event_log",
          [](const EventLog& log) {
              auto text = serialize_event_log(log);
              py::dict out;
              out["events"] = text.events;
              out["responses"] = text.responses;
              out["importance_trace"] = text.importance_trace;
              return out;
          },
          py::arg("log"));
    m.def("parse_event_log",
          [](const SimulationConfig& config, std::string events, std::string responses,
             std::string importance_trace) {
              return parse_event_log(config, {std::move(events), std::move(responses),
                                              std::move(importance_trace)});
          },
          py::arg("config"), py::arg("events"), py::arg("responses"), py::arg("importance_trace"));
    m.def("read_event_log", [](const std::filesystem::path& path) { return read_event_log(path); },
          py::arg("path"));

    m.def("cli",
          [](const std::vector<std::string>& args) {
              std::vector<const char*> argv{"dyncomm"};
              for (const auto& a : args) argv.push_back(a.c_str());
              std::ostringstream out;
              std::ostringstream err;
              int code = 0;
              {
                  py::gil_scoped_release release;
                  code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
              }
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the command-line interface in-process; returns (code, stdout, stderr).");
}
