#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdmaseq/interference.hpp"
#include "cdmaseq/metrics.hpp"
#include "cdmaseq/optimizer.hpp"
#include "cdmaseq/sequence_io.hpp"
#include "cdmaseq/sequences.hpp"
#include "cdmaseq/simulator.hpp"
#include "cdmaseq/spectral.hpp"

namespace cdmaseq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for failures that map to kNumericalFailure.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

// Everything needed to rerun a command; the timestamp is informational only
// and lives outside the structured outputs so those stay byte-identical.
void write_manifest(const fs::path& path, const std::vector<std::string>& args,
                    std::optional<std::uint64_t> seed) {
    json m;
    m["command"] = args.size() > 1 ? args[1] : "";
    m["args"] = std::vector<std::string>(args.begin() + (args.empty() ? 0 : 1), args.end());
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["version"] = kVersion;
    m["timestamp"] = utc_timestamp();
    write_text(path, m.dump(2) + "\n");
}

fs::path sibling_manifest(const fs::path& file) {
    fs::path p = file;
    p.replace_extension(".manifest.json");
    return p;
}

std::vector<ChipSequence> select_users(const SequenceSet& set, const std::vector<int>& users) {
    if (users.empty()) return set.sequences;
    std::vector<ChipSequence> out;
    for (int u : users) {
        if (u < 0 || u >= static_cast<int>(set.sequences.size()))
            throw std::domain_error("user index " + std::to_string(u) + " not in file (" +
                                    std::to_string(set.sequences.size()) + " sequences)");
        out.push_back(set.sequences[static_cast<std::size_t>(u)]);
    }
    return out;
}

std::vector<SpectralCoeffs> coefficients(const std::vector<ChipSequence>& seqs) {
    std::vector<SpectralCoeffs> out;
    out.reserve(seqs.size());
    for (const auto& s : seqs) out.push_back(decompose(s));
    return out;
}

json peaks_json(const CorrelationPeaks& p) {
    return {{"theta_a", p.theta_a},
            {"theta_c", p.theta_c},
            {"theta_hat_a", p.theta_hat_a},
            {"theta_hat_c", p.theta_hat_c},
            {"has_cross", p.has_cross}};
}

json snr_json(int user, const SnrBreakdown& b) {
    json j{{"user", user},
           {"s_m_sum", b.s_m_sum},
           {"interference_variance", b.interference_variance},
           {"noise_variance", b.noise_variance},
           {"unbounded", b.unbounded()}};
    j["snr"] = b.snr ? json(*b.snr) : json(nullptr);
    return j;
}

json stacked_json(const RealStackedVector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

struct PhysicalOptions {
    double power = 1.0;
    double symbol_duration = 1.0;
    double noise = 0.0;

    void attach(CLI::App* app) {
        app->add_option("--power", power, "Common signal power P")->check(CLI::PositiveNumber);
        app->add_option("--symbol-duration", symbol_duration, "Symbol duration T")->check(CLI::PositiveNumber);
        app->add_option("--noise", noise, "Noise density N_0")->check(CLI::NonNegativeNumber);
    }

    [[nodiscard]] CdmaConfig config(int n_chips, int users) const {
        return CdmaConfig(n_chips, users, power, symbol_duration, noise);
    }
};

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string family;
    int degree = 5;
    int n = 31;
    std::vector<int> m_params{1};
    std::vector<int> k_params{1};
    std::string out_path;
};

int cmd_generate(const GenerateArgs& a, const std::vector<std::string>& args, std::ostream& out) {
    std::vector<ChipSequence> seqs;
    if (a.family == "gold") {
        seqs = gold_family(a.degree);
    } else if (a.family == "fzc") {
        for (int m : a.m_params) seqs.push_back(fzc_sequence(a.n, m));
    } else if (a.family == "tone") {
        for (int k : a.k_params) seqs.push_back(single_tone_sequence(a.n, k));
    } else {
        throw std::invalid_argument("unknown family '" + a.family + "'");
    }
    const SequenceSet set = make_sequence_set(std::move(seqs));
    const fs::path path(a.out_path);
    write_text(path, serialize(set));
    write_manifest(sibling_manifest(path), args, std::nullopt);
    out << "n_chips " << set.n_chips << "\n" << "count " << set.sequences.size() << "\n";
    return kSuccess;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string set_file;
    std::vector<int> users;
    PhysicalOptions phys;
    std::string csv_path;
    std::string out_dir;
};

json evaluate_json(const SequenceSet& set, const std::vector<int>& user_ids,
                   const PhysicalOptions& phys) {
    const auto seqs = select_users(set, user_ids);
    const int k = static_cast<int>(seqs.size());
    const CdmaConfig cfg = phys.config(set.n_chips, k);
    json report;
    report["n_chips"] = set.n_chips;
    std::vector<int> ids = user_ids;
    if (ids.empty())
        for (int u = 0; u < k; ++u) ids.push_back(u);
    report["users"] = ids;
    json labels = json::array();
    for (const auto& s : seqs) labels.push_back(s.label);
    report["labels"] = labels;
    report["parameters"] = {{"power", phys.power},
                            {"symbol_duration", phys.symbol_duration},
                            {"noise_density", phys.noise}};
    json snrs = json::array();
    for (int u = 0; u < k; ++u) snrs.push_back(snr_json(ids[static_cast<std::size_t>(u)], snr(cfg, seqs, u)));
    report["snr"] = snrs;
    const auto coeffs = coefficients(seqs);
    const CorrelationPeaks peaks = correlation_peaks(coeffs);
    report["peaks"] = peaks_json(peaks);
    if (k >= 2) {
        const SarwateReport s = sarwate_check(peaks, set.n_chips, k);
        report["sarwate"] = {{"lhs_periodic", s.lhs_periodic},
                             {"lhs_aperiodic", s.lhs_aperiodic},
                             {"periodic_satisfied", s.periodic_satisfied},
                             {"aperiodic_satisfied", s.aperiodic_satisfied}};
    } else {
        report["sarwate"] = nullptr;
    }
    return report;
}

int cmd_evaluate(const EvaluateArgs& a, const std::vector<std::string>& args, std::ostream& out) {
    const SequenceSet set = read_sequence_set(a.set_file);
    const json report = evaluate_json(set, a.users, a.phys);
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!a.csv_path.empty()) {
        std::ostringstream csv;
        csv << "user,label,snr,s_m_sum,interference_variance\n";
        for (std::size_t u = 0; u < report["snr"].size(); ++u) {
            const auto& row = report["snr"][u];
            csv << row["user"].get<int>() << "," << report["labels"][u].get<std::string>() << ","
                << (row["unbounded"].get<bool>() ? std::string("unbounded")
                                                 : format_double(row["snr"].get<double>()))
                << "," << format_double(row["s_m_sum"].get<double>()) << ","
                << format_double(row["interference_variance"].get<double>()) << "\n";
        }
        write_text(a.csv_path, csv.str());
    }
    if (!a.out_dir.empty()) {
        write_text(fs::path(a.out_dir) / "evaluation.json", text);
        write_manifest(fs::path(a.out_dir) / "manifest.json", args, std::nullopt);
    }
    return kSuccess;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
    int n = 31;
    SolverConfig solver;
    std::string out_dir;
};

json solve_report_json(const SolveReport& r, int n_chips, const SolverConfig& cfg) {
    json j;
    j["n_chips"] = n_chips;
    j["restarts"] = cfg.restarts;
    j["seed"] = cfg.seed;
    j["kkt_tolerance"] = cfg.kkt_tolerance;
    j["constraint_tolerance"] = cfg.constraint_tolerance;
    j["max_iterations"] = cfg.max_iterations;
    j["status"] = to_string(r.status);
    j["best_restart"] = r.best_restart;
    j["converged_restarts"] = r.converged_restarts;
    j["objective"] = r.objective;
    j["snr"] = r.snr;
    j["e1"] = r.e1;
    j["e2"] = r.e2;
    j["reverse_coupling_error"] = r.reverse_coupling;
    j["kkt_residual"] = r.kkt_residual;
    j["iterations"] = r.iterations;
    j["best_alpha"] = {stacked_json(r.best_alpha[0]), stacked_json(r.best_alpha[1])};
    j["best_beta"] = {stacked_json(r.best_beta[0]), stacked_json(r.best_beta[1])};
    j["restart_snrs"] = r.restart_snrs;
    j["restart_converged"] = r.restart_converged;
    json feas = json::array();
    for (const auto& f : r.restart_feasibility) feas.push_back({{"e1", f.e1}, {"e2", f.e2}});
    j["restart_feasibility"] = feas;
    return j;
}

int cmd_optimize(const OptimizeArgs& a, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
    if (a.n < 2) throw std::invalid_argument("--n must be >= 2");
    const SolveReport r = solve_multistart(a.n, a.solver);
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);

    write_text(dir / "best_sequences.json",
               serialize(make_sequence_set({r.best_sequences[0], r.best_sequences[1]})));
    write_text(dir / "solve_report.json", solve_report_json(r, a.n, a.solver).dump(2) + "\n");
    std::ostringstream csv;
    csv << "snr\n";
    for (double s : r.restart_snrs) csv << format_double(s) << "\n";
    write_text(dir / "restart_snrs.csv", csv.str());
    write_manifest(dir / "manifest.json", args, a.solver.seed);

    out << "status " << to_string(r.status) << "\n"
        << "converged " << r.converged_restarts << "/" << a.solver.restarts << "\n"
        << "best_snr " << format_double(r.snr) << "\n"
        << "e1 " << format_double(r.e1) << "\n"
        << "e2 " << format_double(r.e2) << "\n";
    if (!r.converged()) {
        err << "no restart converged (best KKT residual " << r.kkt_residual << " after "
            << r.iterations << " iterations)\n";
        return kNumericalFailure;
    }
    return kSuccess;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string set_file;
    std::vector<int> users;
    int user = 0;
    long trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    PhysicalOptions phys;
    std::string out_dir;
};

int cmd_simulate(const SimulateArgs& a, const std::vector<std::string>& args, std::ostream& out) {
    const SequenceSet set = read_sequence_set(a.set_file);
    const auto seqs = select_users(set, a.users);
    const CdmaConfig cfg = a.phys.config(set.n_chips, static_cast<int>(seqs.size()));
    if (a.user < 0 || a.user >= static_cast<int>(seqs.size()))
        throw std::domain_error("--user must index into the selected users");

    SimulationOptions opts;
    opts.trials = a.trials;
    opts.seed = a.seed;
    opts.threads = a.threads;
    const SimulationEstimate est = estimate_snr(cfg, seqs, a.user, opts);
    const SnrBreakdown analytic = snr(cfg, seqs, a.user);

    json j;
    j["n_chips"] = set.n_chips;
    j["user"] = a.user;
    j["users"] = static_cast<int>(seqs.size());
    j["trials"] = est.trials;
    j["seed"] = est.seed;
    j["estimate"] = {{"var_interference_mean", est.var_interference_mean},
                     {"var_interference_stderr", est.var_interference_stderr}};
    j["estimate"]["snr"] = est.snr_estimate ? json(*est.snr_estimate) : json(nullptr);
    j["analytic"] = {{"var_interference", analytic.interference_variance}};
    j["analytic"]["snr"] = analytic.snr ? json(*analytic.snr) : json(nullptr);
    const double diff = est.var_interference_mean - analytic.interference_variance;
    double z = 0.0;
    if (est.var_interference_stderr > 0.0)
        z = diff / est.var_interference_stderr;
    else if (diff != 0.0)
        z = std::copysign(std::numeric_limits<double>::infinity(), diff);
    j["z_score"] = std::isfinite(z) ? json(z) : json(nullptr);

    const std::string text = j.dump(2) + "\n";
    out << text;
    if (!a.out_dir.empty()) {
        write_text(fs::path(a.out_dir) / "simulation.json", text);
        write_manifest(fs::path(a.out_dir) / "manifest.json", args, a.seed);
    }
    return kSuccess;
}

// ---------------------------------------------------------------- scatter

struct ScatterArgs {
    std::vector<std::string> files;
    std::vector<int> users;
    std::string out_path;
};

int cmd_scatter(const ScatterArgs& a, const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
    if (a.files.empty()) throw std::invalid_argument("scatter needs at least one input file");
    std::ostringstream csv;
    csv << "label,theta_a,theta_c,theta_hat_a,theta_hat_c,snr\n";
    int rows = 0;
    for (const auto& file : a.files) {
        try {
            const SequenceSet set = read_sequence_set(file);
            std::vector<int> ids = a.users;
            if (ids.empty()) {
                ids.push_back(0);
                if (set.sequences.size() > 1) ids.push_back(1);
            }
            const auto seqs = select_users(set, ids);
            const auto peaks = correlation_peaks(coefficients(seqs));
            const CdmaConfig cfg(set.n_chips, static_cast<int>(seqs.size()));
            const SnrBreakdown b = snr(cfg, seqs, 0);
            csv << fs::path(file).stem().string() << "," << format_double(peaks.theta_a) << ","
                << format_double(peaks.theta_c) << "," << format_double(peaks.theta_hat_a) << ","
                << format_double(peaks.theta_hat_c) << ","
                << (b.snr ? format_double(*b.snr) : std::string("unbounded")) << "\n";
            ++rows;
        } catch (const std::exception& e) {
            err << "warning: skipping " << file << ": " << e.what() << "\n";
        }
    }
    if (rows == 0) throw FormatError("no usable input files");
    const fs::path path(a.out_path);
    write_text(path, csv.str());
    write_manifest(sibling_manifest(path), args, std::nullopt);
    out << "rows " << rows << "\n";
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spreading-sequence design for asynchronous DS-CDMA"};
    app.name(args.empty() ? "cdmaseq" : args[0]);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a baseline sequence family to a file");
    g->add_option("family", gen.family, "gold | fzc | tone")->required()->check(CLI::IsMember({"gold", "fzc", "tone"}));
    g->add_option("--degree", gen.degree, "Gold LFSR degree (5, 6 or 7)");
    g->add_option("--n", gen.n, "Sequence length for fzc/tone");
    g->add_option("--m", gen.m_params, "FZC parameter(s), comma separated")->delimiter(',');
    g->add_option("--k", gen.k_params, "Tone index(es), comma separated")->delimiter(',');
    g->add_option("--out", gen.out_path, "Output sequence file")->required();

    EvaluateArgs ev;
    auto* e = app.add_subcommand("evaluate", "SNR, correlation peaks and Sarwate limit of a set");
    e->add_option("set_file", ev.set_file)->required();
    e->add_option("--users", ev.users, "0-based sequence indices (default: all)")->delimiter(',');
    ev.phys.attach(e);
    e->add_option("--csv", ev.csv_path, "Also write per-user rows as CSV");
    e->add_option("--out", ev.out_dir, "Directory for evaluation.json and manifest.json");

    OptimizeArgs op;
    auto* o = app.add_subcommand("optimize", "Multi-restart SQP for the two-user problem");
    o->add_option("--n", op.n, "Sequence length")->required();
    o->add_option("--restarts", op.solver.restarts)->check(CLI::PositiveNumber);
    o->add_option("--seed", op.solver.seed);
    o->add_option("--tol", op.solver.kkt_tolerance, "KKT tolerance")->check(CLI::PositiveNumber);
    o->add_option("--constraint-tol", op.solver.constraint_tolerance)->check(CLI::PositiveNumber);
    o->add_option("--max-iterations", op.solver.max_iterations)->check(CLI::NonNegativeNumber);
    o->add_option("--threads", op.solver.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    o->add_option("--out", op.out_dir, "Output directory")->required();

    SimulateArgs si;
    auto* s = app.add_subcommand("simulate", "Monte Carlo estimate of the interference variance");
    s->add_option("set_file", si.set_file)->required();
    s->add_option("--users", si.users, "0-based sequence indices (default: all)")->delimiter(',');
    s->add_option("--user", si.user, "Desired user, indexing the selected users");
    s->add_option("--trials", si.trials);
    s->add_option("--seed", si.seed);
    s->add_option("--threads", si.threads)->check(CLI::NonNegativeNumber);
    si.phys.attach(s);
    s->add_option("--out", si.out_dir, "Directory for simulation.json and manifest.json");

    ScatterArgs sc;
    auto* c = app.add_subcommand("scatter", "CSV of correlation peaks and SNR per sequence set");
    c->add_option("files", sc.files)->required();
    c->add_option("--users", sc.users, "Indices used from every file (default: 0,1)")->delimiter(',');
    c->add_option("--out", sc.out_path, "Output CSV")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*g) return cmd_generate(gen, args, out);
        if (*e) return cmd_evaluate(ev, args, out);
        if (*o) return cmd_optimize(op, args, out, err);
        if (*s) return cmd_simulate(si, args, out);
        if (*c) return cmd_scatter(sc, args, out, err);
    } catch (const NumericalFailure& ex) {
        err << "error: " << ex.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace cdmaseq::cli
