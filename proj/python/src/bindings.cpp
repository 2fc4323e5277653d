#include "diafair/errors.hpp"
#include "diafair/oracle.hpp"
#include "diafair/reference_tables.hpp"
#include "diafair/pipeline.hpp"
#include "diafair/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace diafair;

namespace {

py::dict record_dict(const UtteranceRecord& r) {
    py::dict d;
    d["utterance_id"] = r.utterance_id;
    d["audio_path"] = r.audio_path;
    d["sentence"] = r.sentence;
    d["sentence_length"] = r.sentence_length;
    d["gender"] = std::string(to_string(r.gender));
    d["age"] = std::string(to_string(r.age));
    d["accent"] = std::string(to_string(r.accent));
    d["length_bin"] = std::string(to_string(r.length_bin));
    return d;
}

py::dict counts_dict(const OutcomeCounts& c) {
    py::dict d;
    d["n0"] = c.n0;
    d["n1"] = c.n1;
    d["nplus"] = c.nplus;
    return d;
}

MissingPolicy parse_policy(const std::string& name) {
    if (name == "error") return MissingPolicy::Error;
    if (name == "zero") return MissingPolicy::TreatAsZero;
    throw InvalidConfig("missing policy must be 'error' or 'zero', got '" + name + "'");
}

using Segments = std::vector<std::tuple<double, double, std::string>>;

Hypothesis to_hypothesis(const std::string& id, const Segments& segments) {
    Hypothesis h{id, {}};
    for (const auto& [onset, duration, speaker] : segments) h.segments.push_back({onset, duration, speaker});
    return h;
}

}  // namespace

PYBIND11_MODULE(_diafair, m) {
    m.doc() = "Native core of diafair: diarization outcome rates by demographic group";
    m.attr("__version__") = std::string(kVersion);

    py::register_exception<Error>(m, "DiafairError", PyExc_ValueError);

    m.def(
        "parse_manifest",
        [](const std::string& text) {
            std::istringstream in(text);
            py::list out;
            for (const auto& r : parse_manifest(in)) out.append(record_dict(r));
            return out;
        },
        py::arg("text"), "Parse tab-separated manifest text into normalized records.");

    m.def(
        "parse_rttm",
        [](const std::string& text) {
            std::map<std::string, Segments> out;
            for (const auto& [id, h] : parse_rttm_string(text)) {
                auto& segs = out[id];
                for (const auto& s : h.segments) segs.emplace_back(s.onset, s.duration, s.speaker);
            }
            return out;
        },
        py::arg("text"), "Parse RTTM text into {file_id: [(onset, duration, speaker), ...]}.");

    m.def(
        "serialize_rttm",
        [](const std::map<std::string, Segments>& hyps) {
            HypothesisMap map;
            for (const auto& [id, segs] : hyps) map.emplace(id, to_hypothesis(id, segs));
            return serialize_rttm(map);
        },
        py::arg("hypotheses"));

    m.def(
        "count_speakers", [](const Segments& segments) { return count_speakers(to_hypothesis("", segments)); },
        py::arg("segments"), "Number of distinct speaker labels (case-sensitive).");

    m.def(
        "classify_outcome", [](std::size_t count) { return std::string(to_string(classify_outcome(count).kind)); },
        py::arg("speaker_count"), "'p0', 'p1' or 'pplus'.");

    m.def("margin", &margin, py::arg("p"), py::arg("n"), py::arg("z") = 2.58);
    m.def(
        "confidence_interval",
        [](double p, double eps) {
            const auto ci = confidence_interval(p, eps);
            return std::make_pair(ci.lower, ci.upper);
        },
        py::arg("p"), py::arg("eps"));
    m.def("invert_margin", &invert_margin, py::arg("p"), py::arg("eps"), py::arg("z") = 2.58);
    m.def(
        "dfr", [](std::int64_t n0, std::int64_t n1, std::int64_t nplus) { return dfr(estimate_proportions({n0, n1, nplus})); },
        py::arg("n0"), py::arg("n1"), py::arg("nplus"));

    m.def(
        "simulate",
        [](double p0, double p1, double pplus, std::int64_t n, std::uint64_t seed) {
            const SimulationSpec spec{p0, p1, pplus, n, seed};
            OutcomeCounts counts;
            {
                py::gil_scoped_release release;
                counts = tally(simulate_outcomes(spec));
            }
            return counts_dict(counts);
        },
        py::arg("p0"), py::arg("p1"), py::arg("pplus"), py::arg("n"), py::arg("seed"),
        "Simulate n outcomes and return their counts.");

    m.def("coverage_experiment", &coverage_experiment, py::arg("p"), py::arg("n"), py::arg("trials"),
          py::arg("z") = 2.58, py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());

    m.def(
        "evaluate",
        [](const std::string& manifest, const std::string& hypotheses, std::int64_t min_group_n, double z,
           const std::string& missing, const std::optional<std::vector<std::string>>& criteria,
           const std::optional<std::string>& timestamp) {
            EvaluateRequest req;
            req.manifest = manifest;
            req.hypotheses = hypotheses;
            req.config.min_group_n = min_group_n;
            req.config.z_value = z;
            req.config.missing_policy = parse_policy(missing);
            if (criteria) {
                req.config.criteria.clear();
                for (const auto& name : *criteria) {
                    const auto c = parse_criterion(name);
                    if (!c) throw InvalidConfig("unknown criterion '" + name + "'");
                    req.config.criteria.push_back(*c);
                }
            }
            req.timestamp = timestamp;
            py::gil_scoped_release release;
            return emit_json(evaluate(req));
        },
        py::arg("manifest"), py::arg("hypotheses"), py::arg("min_group_n") = 10, py::arg("z") = 2.58,
        py::arg("missing") = "error", py::arg("criteria") = py::none(), py::arg("timestamp") = py::none(),
        "Evaluate hypotheses against a manifest; returns the JSON report text.");

    m.def(
        "render_table",
        [](const std::string& report_json, const std::string& format) {
            const auto report = parse_report_json(report_json);
            if (format == "md") return render_table(report, TableFormat::Markdown);
            if (format == "csv") return render_table(report, TableFormat::Csv);
            if (format == "plotdata") return emit_plot_data(report);
            throw Error("format must be md, csv or plotdata");
        },
        py::arg("report_json"), py::arg("format") = "md");

    m.def(
        "validate_tables",
        [](double z) {
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const auto& c : validate_tables(published_columns(), z)) out.emplace_back(c.name, c.passed, c.detail);
            return out;
        },
        py::arg("z") = 2.58, "Consistency checks on the bundled reference tables: [(name, passed, detail)].");
}
