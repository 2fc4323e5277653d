#include "diafair/report.hpp"

#include "diafair/errors.hpp"
#include "diafair/version.hpp"

#include "json.hpp"

#include <cstdio>
#include <sstream>

namespace diafair {

using nlohmann::json;

const CriterionReport* FairnessReport::find(Criterion c) const {
    for (const auto& cr : criteria) {
        if (cr.criterion == c) return &cr;
    }
    return nullptr;
}

FairnessReport build_report(std::span<const JoinedOutcome> outcomes, const EvaluationConfig& config) {
    config.validate();
    if (outcomes.empty()) throw EmptyEvaluation();

    FairnessReport report;
    for (Criterion c : config.criteria) {
        GroupPartition partition;
        for (const auto& o : outcomes) {
            if (auto key = group_key(o.record, c)) partition[*key].push_back(o);
        }
        report.criteria.push_back({c, group_stats(partition, config, c)});
    }

    auto& meta = report.metadata;
    meta.z_value = config.z_value;
    meta.min_group_n = config.min_group_n;
    meta.total_utterances = static_cast<std::int64_t>(outcomes.size());
    meta.missing_policy = std::string(to_string(config.missing_policy));
    meta.tool_version = std::string(kVersion);
    meta.overall = make_group_stats("all", tally(outcomes), config);
    meta.degenerate_single_speaker = meta.overall.counts.n0 == 0 && meta.overall.counts.nplus == 0;
    if (meta.degenerate_single_speaker) {
        meta.caveats.push_back(
            "every utterance received exactly one speaker (p0 = p+ = 0 overall): DFR is 1.0 for "
            "every group, which a system that never splits speakers also achieves; pair with DER");
    }
    return report;
}

std::string format_percent(double proportion) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", proportion * 100.0);
    return buf;
}

namespace {

std::string margin_cell(double eps) { return eps == 0.0 ? "-" : format_percent(eps); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct Row {
    const char* label;
    Ratio Proportions::*proportion;
    double Margins::*margin;
};

constexpr Row kRows[] = {
    {"p0", &Proportions::p0, &Margins::eps_p0},
    {"p1", &Proportions::p1, &Margins::eps_p1},
    {"p+", &Proportions::pplus, &Margins::eps_pplus},
};

constexpr const char* kMarginLabels[] = {"ε(p0)", "ε(p1)", "ε(p+)"};

void markdown_block(std::ostringstream& out, const CriterionReport& cr, const char* z) {
    const std::string name(to_string(cr.criterion));
    out << "## " << name << "\n\n";
    if (cr.groups.empty()) {
        out << "_no labeled utterances_\n\n";
        return;
    }
    const auto header = [&] {
        out << "| |";
        for (const auto& g : cr.groups) out << ' ' << g.group_key << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < cr.groups.size(); ++i) out << "---:|";
        out << '\n';
    };

    out << "Outcome rates (%)\n\n";
    header();
    out << "| N |";
    for (const auto& g : cr.groups) {
        out << ' ' << g.counts.total() << (g.excluded ? " (excluded)" : "") << " |";
    }
    out << '\n';
    for (const auto& row : kRows) {
        out << "| " << row.label << " |";
        for (const auto& g : cr.groups) out << ' ' << format_percent((g.proportions.*row.proportion).value()) << " |";
        out << '\n';
    }

    out << "\nMargins of error (%, z = " << z << ")\n\n";
    header();
    for (std::size_t r = 0; r < 3; ++r) {
        out << "| " << kMarginLabels[r] << " |";
        for (const auto& g : cr.groups) {
            out << ' ' << (g.margins ? margin_cell((*g.margins).*kRows[r].margin) : "excluded") << " |";
        }
        out << '\n';
    }
    out << '\n';
}

}  // namespace

std::string render_table(const FairnessReport& report, TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::Markdown) {
        char z[32];
        std::snprintf(z, sizeof z, "%g", report.metadata.z_value);
        out << "# Diarization fairness\n\n";
        out << "Utterances: " << report.metadata.total_utterances << ", z = " << z
            << ", minimum group size: " << report.metadata.min_group_n << "\n\n";
        for (const auto& cr : report.criteria) markdown_block(out, cr, z);
        for (const auto& caveat : report.metadata.caveats) out << "> " << caveat << "\n\n";
        return out.str();
    }

    out << "criterion,group,n,excluded,p0,p1,pplus,eps_p0,eps_p1,eps_pplus\n";
    for (const auto& cr : report.criteria) {
        for (const auto& g : cr.groups) {
            out << to_string(cr.criterion) << ',' << csv_field(g.group_key) << ',' << g.counts.total() << ','
                << (g.excluded ? "true" : "false");
            for (const auto& row : kRows) out << ',' << format_percent((g.proportions.*row.proportion).value());
            for (const auto& row : kRows) {
                out << ',' << (g.margins ? margin_cell((*g.margins).*row.margin) : "");
            }
            out << '\n';
        }
    }
    return out.str();
}

namespace {

json interval_json(const ConfidenceInterval& ci) { return json::array({ci.lower, ci.upper}); }

ConfidenceInterval interval_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json group_json(const GroupStats& g) {
    json j;
    j["group"] = g.group_key;
    j["n"] = g.counts.total();
    j["counts"] = {{"n0", g.counts.n0}, {"n1", g.counts.n1}, {"nplus", g.counts.nplus}};
    j["proportions"] = {{"p0", g.proportions.p0.value()},
                        {"p1", g.proportions.p1.value()},
                        {"pplus", g.proportions.pplus.value()}};
    j["dfr"] = g.dfr;
    j["excluded"] = g.excluded;
    if (g.margins) {
        j["margins"] = {{"eps_p0", g.margins->eps_p0},
                        {"eps_p1", g.margins->eps_p1},
                        {"eps_pplus", g.margins->eps_pplus}};
    } else {
        j["margins"] = nullptr;
    }
    if (g.intervals) {
        j["intervals"] = {{"p0", interval_json(g.intervals->p0)},
                          {"p1", interval_json(g.intervals->p1)},
                          {"pplus", interval_json(g.intervals->pplus)}};
    } else {
        j["intervals"] = nullptr;
    }
    return j;
}

GroupStats group_from(const json& j) {
    GroupStats g;
    g.group_key = j.at("group").get<std::string>();
    const auto& c = j.at("counts");
    g.counts = {c.at("n0").get<std::int64_t>(), c.at("n1").get<std::int64_t>(), c.at("nplus").get<std::int64_t>()};
    if (g.counts.total() != j.at("n").get<std::int64_t>()) {
        throw Error("report group '" + g.group_key + "': n does not match counts");
    }
    // Counts are authoritative; the stored doubles are for consumers.
    g.proportions = estimate_proportions(g.counts);
    g.dfr = dfr(g.proportions);
    g.excluded = j.at("excluded").get<bool>();
    if (const auto& m = j.at("margins"); !m.is_null()) {
        g.margins = Margins{m.at("eps_p0").get<double>(), m.at("eps_p1").get<double>(),
                            m.at("eps_pplus").get<double>()};
    }
    if (const auto& iv = j.at("intervals"); !iv.is_null()) {
        g.intervals = Intervals{interval_from(iv.at("p0")), interval_from(iv.at("p1")),
                                interval_from(iv.at("pplus"))};
    }
    return g;
}

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

}  // namespace

std::string emit_group_json(const GroupStats& group) { return group_json(group).dump(2) + "\n"; }

std::string emit_json(const FairnessReport& report) {
    json root;
    root["schema_version"] = 1;
    json criteria = json::array();
    for (const auto& cr : report.criteria) {
        json groups = json::array();
        for (const auto& g : cr.groups) groups.push_back(group_json(g));
        criteria.push_back({{"name", std::string(to_string(cr.criterion))}, {"groups", std::move(groups)}});
    }
    root["criteria"] = std::move(criteria);

    const auto& m = report.metadata;
    root["metadata"] = {
        {"z_value", m.z_value},
        {"min_group_n", m.min_group_n},
        {"total_utterances", m.total_utterances},
        {"missing_policy", m.missing_policy},
        {"tool_version", m.tool_version},
        {"timestamp", optional_string(m.timestamp)},
        {"diarizer_command", optional_string(m.diarizer_command)},
        {"overall", group_json(m.overall)},
        {"degenerate_single_speaker", m.degenerate_single_speaker},
        {"caveats", m.caveats},
    };
    return root.dump(2) + "\n";
}

FairnessReport parse_report_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("report is not valid JSON: ") + e.what());
    }
    try {
        FairnessReport report;
        for (const auto& cj : root.at("criteria")) {
            const auto name = cj.at("name").get<std::string>();
            const auto c = parse_criterion(name);
            if (!c) throw Error("report has unknown criterion '" + name + "'");
            CriterionReport cr{*c, {}};
            for (const auto& gj : cj.at("groups")) cr.groups.push_back(group_from(gj));
            report.criteria.push_back(std::move(cr));
        }
        const auto& mj = root.at("metadata");
        auto& m = report.metadata;
        m.z_value = mj.at("z_value").get<double>();
        m.min_group_n = mj.at("min_group_n").get<std::int64_t>();
        m.total_utterances = mj.at("total_utterances").get<std::int64_t>();
        m.missing_policy = mj.at("missing_policy").get<std::string>();
        m.tool_version = mj.at("tool_version").get<std::string>();
        if (const auto& t = mj.at("timestamp"); !t.is_null()) m.timestamp = t.get<std::string>();
        if (const auto& d = mj.at("diarizer_command"); !d.is_null()) m.diarizer_command = d.get<std::string>();
        m.overall = group_from(mj.at("overall"));
        m.degenerate_single_speaker = mj.at("degenerate_single_speaker").get<bool>();
        m.caveats = mj.at("caveats").get<std::vector<std::string>>();
        return report;
    } catch (const json::exception& e) {
        throw Error(std::string("report JSON does not match the schema: ") + e.what());
    }
}

std::string emit_plot_data(const FairnessReport& report) {
    std::ostringstream out;
    out << "criterion,group,class,value,margin,n,excluded\n";
    for (const auto& cr : report.criteria) {
        for (const auto& g : cr.groups) {
            for (const auto& row : kRows) {
                out << to_string(cr.criterion) << ',' << csv_field(g.group_key) << ','
                    << (row.label == std::string_view("p+") ? "pplus" : row.label) << ','
                    << format_percent((g.proportions.*row.proportion).value()) << ','
                    << (g.margins ? format_percent((*g.margins).*row.margin) : "") << ',' << g.counts.total()
                    << ',' << (g.excluded ? "true" : "false") << '\n';
            }
        }
    }
    return out.str();
}

std::string summary_line(const FairnessReport& report) {
    std::ostringstream out;
    out << "N=" << report.metadata.total_utterances;
    for (const auto& cr : report.criteria) {
        std::size_t excluded = 0;
        for (const auto& g : cr.groups) excluded += g.excluded ? 1 : 0;
        out << ' ' << to_string(cr.criterion) << '=' << cr.groups.size() << " groups";
        if (excluded) out << " (" << excluded << " excluded)";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", report.metadata.overall.dfr);
    out << " overall DFR=" << buf;
    return out.str();
}

}  // namespace diafair
