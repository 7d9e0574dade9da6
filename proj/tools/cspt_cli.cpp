// cspt: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 domain or numeric error, 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cspt/cspt.hpp"

namespace {

using cspt::io::Json;

enum class Format { csv, json };

struct Common {
    Format format = Format::csv;
    std::string out;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return cspt::io::format_number(v); }

// ---------------------------------------------------------------- grids

struct GridFlags {
    std::vector<double> list;
    std::vector<double> lin;
    std::vector<double> log;

    void add(CLI::App* app, const std::string& name, const std::string& what) {
        app->add_option("--" + name, list, what + " values, comma separated")->delimiter(',');
        app->add_option("--" + name + "-linspace", lin, "lo,hi,count: linearly spaced " + what)
            ->delimiter(',')
            ->expected(3);
        app->add_option("--" + name + "-logspace", log, "lo,hi,count: log-spaced " + what)
            ->delimiter(',')
            ->expected(3);
    }

    std::vector<double> values(const std::string& name,
                               const std::optional<std::vector<double>>& fallback) const {
        const int given = !list.empty() + !lin.empty() + !log.empty();
        if (given > 1) throw UsageError("give only one of --" + name + ", --" + name + "-linspace, --" + name + "-logspace");
        if (!list.empty()) return list;
        auto spaced = [&](const std::vector<double>& s, bool logarithmic) {
            const double n = s[2];
            if (!(n >= 1.0 && n == std::floor(n))) throw UsageError("--" + name + " grid count must be a positive integer");
            if (logarithmic && !(s[0] > 0.0 && s[1] > 0.0)) throw UsageError("--" + name + "-logspace needs positive bounds");
            return logarithmic ? cspt::logspace(s[0], s[1], static_cast<int>(n))
                               : cspt::linspace(s[0], s[1], static_cast<int>(n));
        };
        if (!lin.empty()) return spaced(lin, false);
        if (!log.empty()) return spaced(log, true);
        if (fallback) return *fallback;
        throw UsageError("missing --" + name + " (or --" + name + "-linspace / --" + name + "-logspace)");
    }
};

// ---------------------------------------------------------------- output

Json parameters_of(const CLI::App* sub, const Common& common) {
    Json p = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string key = opt->get_single_name();
        if (key.empty() || key == "help") continue;
        if (opt->get_expected_max() == 0) {
            p[key] = opt->count() > 0;
            continue;
        }
        const auto results = opt->results();
        if (!results.empty()) {
            p[key] = results.size() == 1 ? Json(results[0]) : Json(results);
        } else if (!opt->get_default_str().empty()) {
            p[key] = opt->get_default_str();
        }
    }
    p["format"] = common.format == Format::csv ? "csv" : "json";
    if (!common.out.empty()) p["out"] = common.out;
    return p;
}

void emit_text(const Common& common, const std::string& text) {
    if (common.out.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw cspt::IoError("write to stdout failed");
    } else {
        cspt::io::write_text(common.out, text);
    }
}

// CSV goes out bare with its envelope beside it in <out>.meta.json; JSON
// payloads go out wrapped in the envelope.
void emit(const Common& common, const std::string& command, const Json& params,
          const std::string& csv, const Json& json_payload) {
    if (common.format == Format::json) {
        emit_text(common, cspt::io::envelope(command, cspt::kVersion, params, json_payload).dump(2) + "\n");
        return;
    }
    emit_text(common, csv);
    if (!common.out.empty()) {
        Json meta = Json::object();
        meta["command"] = command;
        meta["version"] = cspt::kVersion;
        meta["parameters"] = params;
        meta["payload"] = std::filesystem::path(common.out).filename().string();
        meta["checksum"] = cspt::io::checksum(csv);
        cspt::io::write_text(common.out + ".meta.json", meta.dump(2) + "\n");
    }
}

void emit_table(const Common& common, const std::string& command, const Json& params,
                const cspt::io::Table& t) {
    emit(common, command, params, t.csv(), t.json());
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
    GridFlags delta, rho;
};

int run_bounds(const BoundsArgs& a, const Common& common, const Json& params) {
    const auto deltas = a.delta.values("delta", std::nullopt);
    const auto rhos = a.rho.values("rho", std::nullopt);
    cspt::io::Table t;
    t.header = {"delta", "rho", "L", "U"};
    for (double d : deltas) {
        for (double r : rhos) {
            const cspt::AsymptoticBounds b = cspt::asymptotic_bounds(cspt::PhasePoint(d, r));
            t.add({fmt(d), fmt(r), fmt(b.L), fmt(b.U)});
        }
    }
    emit_table(common, "bounds", params, t);
    return 0;
}

// ---------------------------------------------------------------- transition

struct TransitionArgs {
    std::vector<std::string> algs{"cosamp", "sp", "iht", "l1"};
    GridFlags delta;
    double target = 1.0;
    std::string kind = "mu";
    double epsilon = 0.0;
};

cspt::io::Table transition_table(const cspt::TransitionTable& tt) {
    cspt::io::Table t;
    t.header = {"delta", "rho_star", "oversampling", "residual"};
    for (const auto& p : tt.points) {
        if (p.error) {
            t.add({fmt(p.delta), "undefined", "undefined", "undefined"});
        } else {
            t.add({fmt(p.delta), fmt(p.rho_star), fmt(p.oversampling), fmt(p.residual)});
        }
    }
    return t;
}

int run_transition(const TransitionArgs& a, const Common& common, const Json& params) {
    const auto deltas = a.delta.values("delta", cspt::default_delta_grid());
    cspt::TransitionOptions opt;
    opt.epsilon = a.epsilon;
    if (!(a.epsilon >= 0.0)) throw cspt::DomainError("--epsilon must be >= 0");
    std::vector<cspt::AlgorithmId> algs;
    for (const auto& s : a.algs) algs.push_back(cspt::parse_algorithm(s));

    std::vector<cspt::TransitionTable> tables;
    for (auto alg : algs) {
        tables.push_back(a.kind == "mu" ? cspt::transition_curve(alg, deltas, a.target, opt)
                                        : cspt::stability_level_curve(alg, deltas, a.target, opt));
    }

    bool failed = false;
    for (const auto& tt : tables) {
        for (const auto& p : tt.points) {
            if (p.error) {
                std::cerr << "error: " << cspt::to_string(tt.algorithm) << " at delta=" << fmt(p.delta)
                          << ": " << *p.error << "\n";
                failed = true;
            }
        }
    }

    if (common.format == Format::json) {
        Json payload = Json::object();
        for (const auto& tt : tables) {
            Json entry = Json::object();
            entry["kind"] = cspt::to_string(tt.kind);
            entry["target"] = tt.target;
            entry["points"] = transition_table(tt).json();
            entry["max_root_residual"] = cspt::io::number(tt.roots().max_residual);
            entry["roots"] = tt.roots().roots;
            payload[std::string(cspt::to_string(tt.algorithm))] = entry;
        }
        emit(common, "transition", params, "", payload);
    } else if (tables.size() == 1) {
        emit_table(common, "transition", params, transition_table(tables[0]));
    } else if (common.out.empty()) {
        std::string text;
        for (const auto& tt : tables) {
            text += "# algorithm=" + std::string(cspt::to_string(tt.algorithm)) + "\n";
            text += transition_table(tt).csv();
        }
        emit(common, "transition", params, text, Json());
    } else {
        const std::filesystem::path base(common.out);
        for (const auto& tt : tables) {
            std::filesystem::path p = base;
            p.replace_filename(base.stem().string() + "_" + std::string(cspt::to_string(tt.algorithm)) +
                               (base.has_extension() ? base.extension().string() : ".csv"));
            Common one = common;
            one.out = p.string();
            emit_table(one, "transition", params, transition_table(tt));
        }
    }
    return failed ? 2 : 0;
}

// ---------------------------------------------------------------- factors

struct FactorsArgs {
    std::string alg;
    std::optional<double> delta, rho;
    std::vector<double> uniform;
    std::string matrix;
    long k = 0;
    std::string mode = "exact";
    int trials = 1000;
    std::uint64_t seed = 0;
    std::optional<double> omega;
    double epsilon = 0.0;
    std::optional<long> n;
};

template <class P>
cspt::io::Table factor_table(cspt::AlgorithmId alg, const P& b, const FactorsArgs& a) {
    cspt::io::Table t;
    if (alg == cspt::AlgorithmId::romp) {
        if (!a.n) throw UsageError("--alg romp needs --n");
        const auto c = cspt::romp_factor(b, *a.n);
        t.header = {"algorithm", "n", "mu_r", "threshold", "satisfied"};
        t.add({"romp", std::to_string(*a.n), fmt(c.mu_r), fmt(c.threshold), c.satisfied ? "true" : "false"});
        return t;
    }
    cspt::FactorSet f;
    if (alg == cspt::AlgorithmId::iht && a.omega) {
        f = cspt::iht_factors(b, *a.omega);
        f.omega_star = *a.omega;
    } else {
        f = cspt::factors(alg, b);
    }
    t.header = {"algorithm", "mu", "xi", "kappa", "omega", "stability_ratio"};
    t.add({std::string(cspt::to_string(alg)), fmt(f.mu), fmt(f.xi),
           f.kappa ? fmt(*f.kappa) : "undefined", f.omega_star ? fmt(*f.omega_star) : "undefined",
           f.mu < 1.0 ? fmt(cspt::stability_ratio(f)) : "undefined"});
    return t;
}

int run_factors(const FactorsArgs& a, const Common& common, const Json& params) {
    const cspt::AlgorithmId alg = cspt::parse_algorithm(a.alg);
    const int sources = (a.delta || a.rho) + !a.uniform.empty() + !a.matrix.empty();
    if (sources > 1) throw UsageError("give one bounds source: --delta/--rho, --uniform-bounds, or --matrix");
    if (a.omega && alg != cspt::AlgorithmId::iht) throw UsageError("--omega applies to --alg iht only");

    cspt::io::Table t;
    if (sources == 0) {
        if (alg != cspt::AlgorithmId::romp || !a.n) {
            throw UsageError("missing bounds source: --delta/--rho, --uniform-bounds, or --matrix");
        }
        t.header = {"algorithm", "n", "threshold"};
        t.add({"romp", std::to_string(*a.n), fmt(cspt::romp_threshold(*a.n))});
    } else if (a.delta || a.rho) {
        if (!a.delta || !a.rho) throw UsageError("--delta and --rho go together");
        if (!(a.epsilon >= 0.0)) throw cspt::DomainError("--epsilon must be >= 0");
        t = factor_table(alg, cspt::AsymptoticProvider(*a.delta, *a.rho, {}, nullptr, a.epsilon), a);
    } else if (!a.uniform.empty()) {
        if (a.uniform.size() != 2) throw UsageError("--uniform-bounds takes L,U");
        t = factor_table(alg, cspt::TableProvider::uniform(a.uniform[0], a.uniform[1]), a);
    } else {
        if (a.k < 1) throw UsageError("--matrix needs --k >= 1");
        const cspt::Matrix m = cspt::io::read_matrix(a.matrix);
        const auto mode = a.mode == "exact" ? cspt::FiniteMode::exact : cspt::FiniteMode::estimate;
        t = factor_table(alg, cspt::FiniteProvider(m, a.k, mode, a.trials, a.seed), a);
    }
    emit_table(common, "factors", params, t);
    return 0;
}

// ---------------------------------------------------------------- recover

struct RecoverArgs {
    std::string matrix, y;
    long k = 0;
    std::string alg = "cosamp";
    std::optional<int> max_iterations;
    std::optional<double> tol;
    double stall = 0.999;
    std::optional<double> omega;
    bool no_debias = false;
};

int run_recover(const RecoverArgs& a, const Common& common, const Json& params) {
    const cspt::Matrix m = cspt::io::read_matrix(a.matrix);
    const cspt::Vector y = cspt::io::read_vector(a.y);
    cspt::RecoveryOptions opt;
    opt.max_iterations = a.max_iterations;
    opt.residual_tolerance = a.tol;
    opt.stall_factor = a.stall;
    opt.omega = a.omega;
    opt.debias = !a.no_debias;
    const auto alg = cspt::parse_algorithm(a.alg);
    const cspt::RecoveryResult r = cspt::run_algorithm(alg, m, y, a.k, opt);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";

    cspt::io::Table t;
    t.header = {"index", "estimate"};
    for (cspt::Index i = 0; i < r.estimate.size(); ++i) t.add({std::to_string(i), fmt(r.estimate(i))});

    Json payload = Json::object();
    payload["algorithm"] = cspt::to_string(alg);
    Json est = Json::array();
    for (cspt::Index i = 0; i < r.estimate.size(); ++i) est.push_back(cspt::io::number(r.estimate(i)));
    payload["estimate"] = est;
    payload["support"] = r.support;
    payload["iterations"] = r.iterations;
    Json trace = Json::array();
    for (double v : r.residual_trace) trace.push_back(cspt::io::number(v));
    payload["residual_trace"] = trace;
    payload["termination"] = cspt::to_string(r.termination);
    payload["warnings"] = r.warnings;
    emit(common, "recover", params, t.csv(), payload);
    return 0;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string alg = "cosamp";
    GridFlags delta, rho;
    long n = 100;
    int trials = 10;
    std::uint64_t seed = 0;
    std::string signal = "sign";
    double noise = 0.0;
    std::optional<double> success_tol;
    std::optional<int> max_iterations;
    double stall = 0.999;
    std::optional<double> omega;
    bool no_debias = false;
};

int run_experiment(const ExperimentArgs& a, const Common& common, const Json& params) {
    const auto deltas = a.delta.values("delta", std::nullopt);
    const auto rhos = a.rho.values("rho", std::nullopt);
    cspt::GridOptions opt;
    opt.signal_kind = cspt::parse_signal_kind(a.signal);
    opt.noise_level = a.noise;
    opt.success_tolerance = a.success_tol;
    opt.recovery.max_iterations = a.max_iterations;
    opt.recovery.stall_factor = a.stall;
    opt.recovery.omega = a.omega;
    opt.recovery.debias = !a.no_debias;
    const auto alg = cspt::parse_algorithm(a.alg);
    const cspt::SuccessGrid g = cspt::success_grid(alg, deltas, rhos, a.n, a.trials, a.seed, opt);
    for (const auto& s : g.skipped) {
        std::cerr << "skipped: delta=" << fmt(s.delta) << " rho=" << fmt(s.rho) << ": " << s.reason << "\n";
    }

    cspt::io::Table t;
    t.header = {"delta", "rho", "k", "n", "N", "trials", "successes"};
    for (const auto& c : g.cells) {
        t.add({fmt(c.delta), fmt(c.rho), std::to_string(c.k), std::to_string(c.n),
               std::to_string(c.N), std::to_string(c.trials), std::to_string(c.successes)});
    }
    Json payload = Json::object();
    payload["algorithm"] = cspt::to_string(alg);
    payload["cells"] = t.json();
    Json skipped = Json::array();
    for (const auto& s : g.skipped) {
        skipped.push_back({{"delta", s.delta}, {"rho", s.rho}, {"reason", s.reason}});
    }
    payload["skipped"] = skipped;
    emit(common, "experiment", params, t.csv(), payload);
    return 0;
}

// ---------------------------------------------------------------- rip

struct RipArgs {
    std::string matrix;
    std::vector<long> orders;
    int trials = 1000;
    std::uint64_t seed = 0;
};

int run_rip(bool exact, const RipArgs& a, const Common& common, const Json& params) {
    const cspt::Matrix m = cspt::io::read_matrix(a.matrix);
    cspt::io::Table t;
    t.header = {"order", "L", "U", "provenance"};
    for (long order : a.orders) {
        const cspt::FiniteAripBounds b =
            exact ? cspt::exact_arip(m, order)
                  : cspt::estimate_arip_lower(m, order, a.trials, cspt::derive_seed(a.seed, order));
        t.add({std::to_string(order), fmt(b.L), fmt(b.U), cspt::to_string(b.provenance)});
    }
    emit_table(common, exact ? "rip-exact" : "rip-estimate", params, t);
    return 0;
}

// ---------------------------------------------------------------- main

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "output format")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}}))
        ->default_str("csv");
    sub->add_option("--out", c.out, "write output to this file instead of stdout");
}

void add_recovery_flags(CLI::App* sub, std::optional<int>& max_it, double& stall,
                        std::optional<double>& omega, bool& no_debias) {
    sub->add_option("--max-iterations", max_it, "iteration cap (default min(100k, 3000))")
        ->check(CLI::PositiveNumber);
    sub->add_option("--stall", stall, "stop when the residual fails to shrink by this factor")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--omega", omega, "IHT step size in (0,2) (default 0.65)");
    sub->add_flag("--no-debias", no_debias, "IHT: return the thresholded iterate");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase transitions and recovery factors for greedy compressed sensing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cspt::kVersion);
    app.footer("Environment: CSPT_THREADS sets the worker count for grid subcommands.\n"
               "Exit codes: 0 success, 1 usage, 2 domain or numeric error, 3 I/O error.");
    Common common;
    const auto algs_check = CLI::IsMember({"cosamp", "csp", "sp", "iht", "l1", "romp"});
    const auto solver_check = CLI::IsMember({"cosamp", "csp", "sp", "iht"});

    BoundsArgs bounds;
    auto* s_bounds = app.add_subcommand("bounds", "asymptotic aRIP bounds L(delta,rho), U(delta,rho)");
    bounds.delta.add(s_bounds, "delta", "delta");
    bounds.rho.add(s_bounds, "rho", "rho");
    add_common(s_bounds, common);

    TransitionArgs trans;
    auto* s_trans = app.add_subcommand("transition", "phase-transition curves rho*(delta)");
    s_trans->add_option("--alg", trans.algs, "algorithms, comma separated")
        ->delimiter(',')
        ->check(CLI::IsMember({"cosamp", "csp", "sp", "iht", "l1"}))
        ->capture_default_str();
    trans.delta.add(s_trans, "delta", "delta (default: 50 log-spaced points on [1e-3,1])");
    s_trans->add_option("--target", trans.target, "level to solve for")->capture_default_str();
    s_trans->add_option("--kind", trans.kind, "level function: mu or stability (xi/(1-mu))")
        ->check(CLI::IsMember({"mu", "stability"}))
        ->capture_default_str();
    s_trans->add_option("--epsilon", trans.epsilon, "evaluate bounds at (1+epsilon) rho")
        ->capture_default_str();
    add_common(s_trans, common);

    FactorsArgs fac;
    auto* s_fac = app.add_subcommand("factors", "convergence and stability factors");
    s_fac->add_option("--alg", fac.alg, "algorithm")->required()->check(algs_check);
    s_fac->add_option("--delta", fac.delta, "asymptotic bounds at this delta");
    s_fac->add_option("--rho", fac.rho, "asymptotic bounds at this rho");
    s_fac->add_option("--epsilon", fac.epsilon, "evaluate asymptotic bounds at (1+epsilon) rho")
        ->capture_default_str();
    s_fac->add_option("--uniform-bounds", fac.uniform, "L,U used at every sparsity multiple")
        ->delimiter(',')
        ->expected(2);
    s_fac->add_option("--matrix", fac.matrix, "matrix file for finite bounds");
    s_fac->add_option("--k", fac.k, "sparsity for --matrix");
    s_fac->add_option("--mode", fac.mode, "finite bounds: exact or estimate")
        ->check(CLI::IsMember({"exact", "estimate"}))
        ->capture_default_str();
    s_fac->add_option("--trials", fac.trials, "random subsets for --mode estimate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_fac->add_option("--seed", fac.seed, "seed for --mode estimate")->capture_default_str();
    s_fac->add_option("--omega", fac.omega, "IHT step size (default: balancing step omega*)");
    s_fac->add_option("--n", fac.n, "problem size n for the ROMP threshold");
    add_common(s_fac, common);

    RecoverArgs rec;
    auto* s_rec = app.add_subcommand("recover", "recover a k-sparse signal from y = Ax");
    s_rec->add_option("--matrix", rec.matrix, "matrix file")->required();
    s_rec->add_option("--y", rec.y, "measurement vector file")->required();
    s_rec->add_option("--k", rec.k, "sparsity")->required();
    s_rec->add_option("--alg", rec.alg, "algorithm")->check(solver_check)->capture_default_str();
    s_rec->add_option("--tol", rec.tol, "residual tolerance (default 1e-10 ||y||)");
    add_recovery_flags(s_rec, rec.max_iterations, rec.stall, rec.omega, rec.no_debias);
    add_common(s_rec, common);

    ExperimentArgs exp;
    auto* s_exp = app.add_subcommand("experiment", "empirical success rates over a (delta, rho) grid");
    s_exp->add_option("--alg", exp.alg, "algorithm")->check(solver_check)->capture_default_str();
    exp.delta.add(s_exp, "delta", "delta");
    exp.rho.add(s_exp, "rho", "rho");
    s_exp->add_option("--n", exp.n, "measurements per trial")->capture_default_str();
    s_exp->add_option("--trials", exp.trials, "trials per cell")->capture_default_str();
    s_exp->add_option("--seed", exp.seed, "base seed")->capture_default_str();
    s_exp->add_option("--signal", exp.signal, "nonzero distribution: sign or gaussian")
        ->check(CLI::IsMember({"sign", "gaussian"}))
        ->capture_default_str();
    s_exp->add_option("--noise", exp.noise, "||e|| as a fraction of ||Ax||")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    s_exp->add_option("--success-tol", exp.success_tol,
                      "relative error threshold (default 1e-6, or 10*noise when noisy)");
    add_recovery_flags(s_exp, exp.max_iterations, exp.stall, exp.omega, exp.no_debias);
    add_common(s_exp, common);

    RipArgs rip;
    bool rip_exact = true;
    auto add_rip_flags = [&](CLI::App* sub) {
        sub->add_option("--matrix", rip.matrix, "matrix file")->required();
        sub->add_option("--order", rip.orders, "subset sizes, comma separated")
            ->required()
            ->delimiter(',')
            ->check(CLI::PositiveNumber);
        sub->add_option("--trials", rip.trials, "random subsets (estimate)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seed", rip.seed, "seed (estimate)")->capture_default_str();
        add_common(sub, common);
    };
    auto* s_rip = app.add_subcommand("rip", "finite aRIP constants of a matrix file");
    auto* s_rip_exact = s_rip->add_subcommand("exact", "exhaustive enumeration");
    auto* s_rip_est = s_rip->add_subcommand("estimate", "Monte Carlo lower estimate");
    s_rip->require_subcommand(1);
    auto* s_rip_exact_alias = app.add_subcommand("rip-exact", "same as 'rip exact'");
    auto* s_rip_est_alias = app.add_subcommand("rip-estimate", "same as 'rip estimate'");
    for (auto* sub : {s_rip_exact, s_rip_est, s_rip_exact_alias, s_rip_est_alias}) add_rip_flags(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (s_bounds->parsed()) return run_bounds(bounds, common, parameters_of(s_bounds, common));
        if (s_trans->parsed()) return run_transition(trans, common, parameters_of(s_trans, common));
        if (s_fac->parsed()) return run_factors(fac, common, parameters_of(s_fac, common));
        if (s_rec->parsed()) return run_recover(rec, common, parameters_of(s_rec, common));
        if (s_exp->parsed()) return run_experiment(exp, common, parameters_of(s_exp, common));
        for (auto* sub : {s_rip_exact, s_rip_est, s_rip_exact_alias, s_rip_est_alias}) {
            if (sub->parsed()) {
                rip_exact = sub == s_rip_exact || sub == s_rip_exact_alias;
                return run_rip(rip_exact, rip, common, parameters_of(sub, common));
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const cspt::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const cspt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
