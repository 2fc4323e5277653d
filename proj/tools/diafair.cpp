// diafair: score speaker diarization fairness across demographic groups.

#include "diafair/errors.hpp"
#include "diafair/manifest.hpp"
#include "diafair/oracle.hpp"
#include "diafair/reference_tables.hpp"
#include "diafair/pipeline.hpp"
#include "diafair/report.hpp"
#include "diafair/runner.hpp"
#include "diafair/version.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace diafair;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_text(out_path, text);
    }
}

MissingPolicy parse_policy(const std::string& s) {
    if (s == "error") return MissingPolicy::Error;
    if (s == "zero") return MissingPolicy::TreatAsZero;
    throw Error("--missing must be 'error' or 'zero'");
}

std::vector<Criterion> parse_criteria(const std::string& list) {
    std::vector<Criterion> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto c = parse_criterion(item);
        if (!c) throw Error("unknown criterion '" + item + "'");
        out.push_back(*c);
    }
    return out;
}

// Default for `run`: CommonVoice keeps clips in <manifest dir>/clips.
fs::path default_audio_root(const fs::path& manifest) {
    const fs::path dir = manifest.parent_path().empty() ? fs::path(".") : manifest.parent_path();
    std::error_code ec;
    if (fs::is_directory(dir / "clips", ec)) return dir / "clips";
    return dir;
}

struct EvaluateArgs {
    std::string manifest;
    std::string hypotheses;
    std::string criteria = "gender,age,accent,length";
    std::int64_t min_n = 10;
    double z = kDefaultZ;
    std::string missing = "error";
    std::string out;
    std::string table;
    std::string table_out;
    std::string plot_data;
    std::string timestamp;
};

int cmd_evaluate(const EvaluateArgs& a) {
    EvaluateRequest req;
    req.manifest = a.manifest;
    req.hypotheses = a.hypotheses;
    req.config.z_value = a.z;
    req.config.min_group_n = a.min_n;
    req.config.missing_policy = parse_policy(a.missing);
    req.config.criteria = parse_criteria(a.criteria);
    if (!a.timestamp.empty()) {
        req.timestamp = a.timestamp;
    } else if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        req.timestamp = std::string(epoch);
    }

    const FairnessReport report = evaluate(req);
    write_text(a.out, emit_json(report));
    if (!a.table.empty()) {
        const bool md = a.table == "md" || a.table == "markdown";
        if (!md && a.table != "csv") throw Error("--table must be 'md' or 'csv'");
        fs::path table_path = a.table_out;
        if (table_path.empty()) table_path = fs::path(a.out).replace_extension(md ? ".md" : ".csv");
        write_text(table_path, render_table(report, md ? TableFormat::Markdown : TableFormat::Csv));
    }
    if (!a.plot_data.empty()) write_text(a.plot_data, emit_plot_data(report));

    std::cout << summary_line(report) << '\n';
    for (const auto& caveat : report.metadata.caveats) std::cerr << "warning: " << caveat << '\n';
    return kExitOk;
}

struct RunArgs {
    std::string manifest;
    std::string command;
    std::string cache;
    std::string audio_dir;
    std::string missing = "error";
    std::string out;
    std::size_t workers = 1;
    int timeout = 600;
};

int cmd_run(const RunArgs& a) {
    const auto records = parse_manifest_file(a.manifest);
    RunnerConfig config;
    config.command_template = a.command;
    config.cache_dir = a.cache;
    config.audio_root = a.audio_dir.empty() ? default_audio_root(a.manifest) : fs::path(a.audio_dir);
    config.timeout_seconds = a.timeout;
    config.workers = a.workers;
    config.missing_policy = parse_policy(a.missing);

    RunStats stats;
    const auto hyps = run_diarizer(records, config, &stats);
    if (!a.out.empty()) write_text(a.out, serialize_rttm(hyps));
    std::cout << "utterances=" << records.size() << " executed=" << stats.executed << " cached=" << stats.cache_hits
              << " failed=" << stats.failures << '\n';
    return kExitOk;
}

int cmd_report(const std::string& in, const std::string& format, const std::string& out) {
    const auto report = parse_report_json(read_text(in));
    if (format == "md" || format == "markdown") {
        emit(render_table(report, TableFormat::Markdown), out);
    } else if (format == "csv") {
        emit(render_table(report, TableFormat::Csv), out);
    } else if (format == "plotdata") {
        emit(emit_plot_data(report), out);
    } else {
        throw Error("--format must be md, csv or plotdata");
    }
    return kExitOk;
}

struct SimulateArgs {
    SimulationSpec spec;
    double z = kDefaultZ;
    std::int64_t min_n = 10;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
    const auto outcomes = simulate_outcomes(a.spec);
    EvaluationConfig config;
    config.z_value = a.z;
    config.min_group_n = a.min_n;
    config.validate();
    const GroupStats stats = make_group_stats("simulated", tally(outcomes), config);

    nlohmann::json j;
    j["spec"] = {{"p0", a.spec.p0}, {"p1", a.spec.p1}, {"pplus", a.spec.pplus}, {"n", a.spec.n}, {"seed", a.spec.seed}};
    j["z_value"] = a.z;
    j["stats"] = nlohmann::json::parse(emit_group_json(stats));
    emit(j.dump(2) + "\n", a.out);
    return kExitOk;
}

int cmd_coverage(double p, std::int64_t n, std::int64_t trials, double z, std::uint64_t seed) {
    const double coverage = coverage_experiment(p, n, trials, z, seed);
    std::printf("coverage=%.6f p=%g n=%lld trials=%lld z=%g seed=%llu\n", coverage, p, static_cast<long long>(n),
                static_cast<long long>(trials), z, static_cast<unsigned long long>(seed));
    return kExitOk;
}

int cmd_validate_tables(const std::string& tables_path, double z) {
    std::vector<PublishedColumn> columns;
    if (tables_path.empty()) {
        columns = published_columns();
    } else {
        std::ifstream in(tables_path);
        if (!in) throw Error("cannot read " + tables_path);
        columns = parse_published_tables(in);
    }
    const auto checks = validate_tables(columns, z);
    std::size_t failed = 0;
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        failed += c.passed ? 0 : 1;
    }
    std::cout << checks.size() - failed << "/" << checks.size() << " checks passed over " << columns.size()
              << " columns\n";
    if (failed) {
        std::cerr << "failing columns:";
        for (const auto& c : checks) {
            if (!c.passed) std::cerr << ' ' << c.name;
        }
        std::cerr << '\n';
        return kExitUser;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Speaker diarization fairness scoring"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score hypotheses against a demographic manifest");
    evaluate_cmd->add_option("--manifest", ev.manifest, "Tab-separated manifest")->required();
    evaluate_cmd->add_option("--hypotheses", ev.hypotheses, "RTTM file or directory of .rttm files")->required();
    evaluate_cmd->add_option("--criteria", ev.criteria, "Comma-separated subset of gender,age,accent,length");
    evaluate_cmd->add_option("--min-n", ev.min_n, "Groups smaller than this are flagged excluded");
    evaluate_cmd->add_option("--z", ev.z, "Normal quantile for margins (2.58 = 99%)");
    evaluate_cmd->add_option("--missing", ev.missing, "Utterances without hypothesis: error|zero");
    evaluate_cmd->add_option("--out", ev.out, "JSON report path")->required();
    evaluate_cmd->add_option("--table", ev.table, "Also write a table: md|csv");
    evaluate_cmd->add_option("--table-out", ev.table_out, "Table path (default: next to --out)");
    evaluate_cmd->add_option("--plot-data", ev.plot_data, "Write plot-data CSV here");
    evaluate_cmd->add_option("--timestamp", ev.timestamp, "Timestamp recorded in metadata");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run an external diarizer over a manifest, with caching");
    run_cmd->add_option("--manifest", run.manifest, "Tab-separated manifest")->required();
    run_cmd->add_option("--command", run.command, "Command template with {audio} and {out}")->required();
    run_cmd->add_option("--cache", run.cache, "Cache directory")->required();
    run_cmd->add_option("--workers", run.workers, "Parallel diarizer processes");
    run_cmd->add_option("--timeout", run.timeout, "Per-utterance timeout in seconds");
    run_cmd->add_option("--audio-dir", run.audio_dir, "Root for relative audio paths (default: <manifest dir>/clips)");
    run_cmd->add_option("--missing", run.missing, "On diarizer failure: error|zero");
    run_cmd->add_option("--out", run.out, "Also write all hypotheses as one RTTM file");

    std::string report_in, report_format, report_out;
    auto* report_cmd = app.add_subcommand("report", "Render a JSON report as tables or plot data");
    report_cmd->add_option("--in", report_in, "JSON report")->required();
    report_cmd->add_option("--format", report_format, "md|csv|plotdata")->required();
    report_cmd->add_option("--out", report_out, "Output path (default: stdout)");

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate outcomes from known class probabilities");
    simulate_cmd->add_option("--p0", sim.spec.p0)->required();
    simulate_cmd->add_option("--p1", sim.spec.p1)->required();
    simulate_cmd->add_option("--pplus", sim.spec.pplus)->required();
    simulate_cmd->add_option("--n", sim.spec.n)->required();
    simulate_cmd->add_option("--seed", sim.spec.seed)->required();
    simulate_cmd->add_option("--z", sim.z);
    simulate_cmd->add_option("--min-n", sim.min_n);
    simulate_cmd->add_option("--out", sim.out, "Output path (default: stdout)");

    double cov_p = 0.0, cov_z = kDefaultZ;
    std::int64_t cov_n = 0, cov_trials = 0;
    std::uint64_t cov_seed = 0;
    auto* coverage_cmd = app.add_subcommand("coverage", "Monte Carlo coverage of the margin-of-error interval");
    coverage_cmd->add_option("--p", cov_p)->required();
    coverage_cmd->add_option("--n", cov_n)->required();
    coverage_cmd->add_option("--trials", cov_trials)->required();
    coverage_cmd->add_option("--z", cov_z);
    coverage_cmd->add_option("--seed", cov_seed);

    std::string tables_path;
    double tables_z = kDefaultZ;
    auto* validate_cmd = app.add_subcommand("validate-tables", "Check the published result tables for consistency");
    validate_cmd->add_option("--tables", tables_path, "Alternative tables TSV (default: embedded copy)");
    validate_cmd->add_option("--z", tables_z);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUser;
    }

    try {
        if (evaluate_cmd->parsed()) return cmd_evaluate(ev);
        if (run_cmd->parsed()) return cmd_run(run);
        if (report_cmd->parsed()) return cmd_report(report_in, report_format, report_out);
        if (simulate_cmd->parsed()) return cmd_simulate(sim);
        if (coverage_cmd->parsed()) return cmd_coverage(cov_p, cov_n, cov_trials, cov_z, cov_seed);
        if (validate_cmd->parsed()) return cmd_validate_tables(tables_path, tables_z);
    } catch (const StageError& e) {
        std::cerr << "diafair: " << e.what() << '\n';
        return kExitUser;
    } catch (const Error& e) {
        std::cerr << "diafair: " << e.what() << '\n';
        return kExitUser;
    } catch (const std::exception& e) {
        std::cerr << "diafair: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
