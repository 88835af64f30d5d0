// Command-line front end: select, simulate, bench, path.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "trex/augment.hpp"
#include "trex/grouping.hpp"
#include "trex/io.hpp"
#include "trex/lars.hpp"
#include "trex/parallel.hpp"
#include "trex/simulate.hpp"
#include "trex/trex.hpp"

namespace fs = std::filesystem;
using namespace trex;

namespace {

enum ExitCode { ok = 0, input_error = 2, config_error = 3, numerical_error = 4 };

struct SelectorFlags {
    std::string base = "lasso";
    std::string mode = "lasso";
    std::optional<double> rho_cut;
    std::string groups_file;
    std::optional<double> lambda2;
    bool absolute_corr = false;
    Index k = 20;
    Index l = 0;
    Index l_multiplier = 1;
    Index t_max = 0;
    std::string estimator = "deflated";
    std::string dummy = "normal";
    std::string dummy_policy = "none";
    std::uint64_t seed = 0;

    void add_to(CLI::App& cmd, bool with_groups_file) {
        cmd.add_option("--base", base, "Base selector: lasso, en or ien")->capture_default_str();
        cmd.add_option("--mode", mode, "Path mode: lasso or lar")->capture_default_str();
        cmd.add_option("--rho-cut", rho_cut, "Correlation cutoff for group discovery (ien)");
        if (with_groups_file) cmd.add_option("--groups-file", groups_file, "Group partition JSON (ien)");
        cmd.add_option("--lambda2", lambda2, "Ridge level; cross-validated when omitted (en, ien)");
        cmd.add_flag("--absolute-corr", absolute_corr, "Cluster on |correlation|");
        cmd.add_option("--k", k, "Number of random experiments")->capture_default_str();
        cmd.add_option("--l", l, "Dummies per experiment (default: multiplier * p)");
        cmd.add_option("--l-multiplier", l_multiplier, "L = multiplier * p when --l is not given")->capture_default_str();
        cmd.add_option("--t-max", t_max, "Largest dummy count (default: ceil(L / 20))");
        cmd.add_option("--estimator", estimator, "FDP estimator: deflated or binomial")->capture_default_str();
        cmd.add_option("--dummy", dummy, "Dummy distribution: normal or uniform")->capture_default_str();
        cmd.add_option("--dummy-policy", dummy_policy, "Dummy rows under ien: none or singleton")->capture_default_str();
        cmd.add_option("--seed", seed, "Master seed")->capture_default_str();
    }

    TrexConfig config(double alpha, unsigned threads) const {
        TrexConfig c;
        c.K = k;
        c.L = l;
        c.L_multiplier = l_multiplier;
        c.T_max = t_max;
        c.alpha = alpha;
        try {
            c.base = parse_base_selector(base);
        } catch (const ConfigError&) {
            throw ConfigError("--base: unknown selector '" + base + "' (expected lasso, en or ien)");
        }
        if (mode == "lasso") c.mode = LarsMode::lasso;
        else if (mode == "lar") c.mode = LarsMode::lar;
        else throw ConfigError("--mode: expected lasso or lar, got '" + mode + "'");
        if (estimator == "deflated") c.estimator = FdpEstimatorKind::deflated;
        else if (estimator == "binomial") c.estimator = FdpEstimatorKind::binomial_tail;
        else throw ConfigError("--estimator: expected deflated or binomial, got '" + estimator + "'");
        if (dummy == "normal") c.dummy_distribution = DummyDistribution::normal;
        else if (dummy == "uniform") c.dummy_distribution = DummyDistribution::uniform;
        else throw ConfigError("--dummy: expected normal or uniform, got '" + dummy + "'");
        if (dummy_policy == "none") c.dummy_policy = DummyPenalty::none;
        else if (dummy_policy == "singleton") c.dummy_policy = DummyPenalty::singleton_groups;
        else throw ConfigError("--dummy-policy: expected none or singleton, got '" + dummy_policy + "'");
        if (k < 2) throw ConfigError("--k must be at least 2");
        if (l < 0) throw ConfigError("--l must be positive");
        if (l_multiplier < 1) throw ConfigError("--l-multiplier must be at least 1");
        if (t_max < 0) throw ConfigError("--t-max must be positive");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("--alpha must lie in [0, 1]");
        if (rho_cut && !(*rho_cut > 0.0 && *rho_cut < 1.0)) throw ConfigError("--rho-cut must lie in (0, 1)");
        if (lambda2 && !(*lambda2 > 0.0)) throw ConfigError("--lambda2 must be positive");
        if (rho_cut && !groups_file.empty()) throw ConfigError("--rho-cut and --groups-file are mutually exclusive");
        if (c.base == BaseSelector::ien && !rho_cut && groups_file.empty())
            throw ConfigError("--base ien requires --rho-cut or --groups-file");
        if (c.base != BaseSelector::ien && !groups_file.empty())
            throw ConfigError("--groups-file is only used with --base ien");
        if (c.base == BaseSelector::lasso && lambda2) throw ConfigError("--lambda2 is only used with --base en or ien");
        c.rho_cut = rho_cut;
        c.lambda2 = lambda2;
        c.absolute_correlation = absolute_corr;
        c.seed = seed;
        c.threads = threads;
        if (!groups_file.empty()) c.partition = partition_from_json(io::read_json(groups_file));
        return c;
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long long parse_integer(const std::string& s, const std::string& flag) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw ConfigError(flag + ": '" + s + "' is not an integer");
    return v;
}

double parse_real(const std::string& s, const std::string& flag) {
    double v = 0.0;
    if (!io::detail::parse_number(s, v)) throw ConfigError(flag + ": '" + s + "' is not a number");
    return v;
}

/// Items "S" (one block of size S) or "NxS" (N blocks of size S), comma separated.
std::vector<Index> parse_blocks(const std::string& spec) {
    std::vector<Index> out;
    for (const auto& item : split_list(spec)) {
        const auto x = item.find('x');
        const long long count = x == std::string::npos ? 1 : parse_integer(item.substr(0, x), "--blocks");
        const long long size = parse_integer(x == std::string::npos ? item : item.substr(x + 1), "--blocks");
        if (count < 1 || size < 1) throw ConfigError("--blocks: counts and sizes must be positive in '" + item + "'");
        for (long long i = 0; i < count; ++i) out.push_back(static_cast<Index>(size));
    }
    return out;
}

/// A bare integer N selects columns 0..N-1; otherwise 0-based indices and ranges "a-b".
std::vector<Index> parse_actives(const std::string& spec) {
    std::vector<Index> out;
    if (spec.find_first_of(",-") == std::string::npos) {
        const long long n = parse_integer(spec, "--actives");
        if (n < 0) throw ConfigError("--actives: count must be nonnegative");
        for (long long j = 0; j < n; ++j) out.push_back(static_cast<Index>(j));
        return out;
    }
    for (const auto& item : split_list(spec)) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(static_cast<Index>(parse_integer(item, "--actives")));
            continue;
        }
        const long long a = parse_integer(item.substr(0, dash), "--actives");
        const long long b = parse_integer(item.substr(dash + 1), "--actives");
        if (a > b) throw ConfigError("--actives: empty range '" + item + "'");
        for (long long j = a; j <= b; ++j) out.push_back(static_cast<Index>(j));
    }
    return out;
}

std::string join_indices(const std::vector<Index>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
    return s;
}

std::string occurrences_csv(const SelectionReport& rep) {
    std::ostringstream out;
    out << "index,name,phi\n";
    const Index t = std::min(rep.calibration.T_star, rep.occurrences.T());
    for (Index j = 0; j < rep.p; ++j)
        out << j << ',' << rep.names[static_cast<std::size_t>(j)] << ',' << io::format_double(rep.occurrences.phi(t, j))
            << '\n';
    return out.str();
}

int cmd_select(const std::string& x, const std::string& y, double alpha, const SelectorFlags& f, const std::string& out,
               unsigned threads) {
    const TrexConfig cfg = f.config(alpha, threads);
    const Dataset d = io::read_dataset(x, y);
    spdlog::info("event=data_loaded n={} p={}", d.n(), d.p());
    TrexSelector selector(d, cfg);
    if (selector.lambda2()) spdlog::info("event=lambda2 value={}", *selector.lambda2());
    if (const auto* part = selector.partition()) spdlog::info("event=groups count={}", part->size());
    const SelectionReport rep = selector.select();
    spdlog::info("event=selected count={} v_star={} T_star={} fdp_hat={} feasible={}", rep.selected().size(),
                 rep.calibration.v_star, rep.calibration.T_star, rep.calibration.fdp_hat, rep.calibration.feasible);
    const fs::path dir(out);
    fs::create_directories(dir);
    io::write_json(dir / "selection.json", report_to_json(rep));
    io::write_text(dir / "occurrences.csv", occurrences_csv(rep));
    io::write_json(dir / "timings.json", timings_to_json(rep.timings));
    if (const auto* part = selector.partition()) io::write_json(dir / "groups.json", partition_to_json(*part, rep.names));
    return ok;
}

struct SimulateFlags {
    std::string design = "gaussian";
    Index p = 100;
    Index n = 150;
    std::string blocks;
    double rho = 0.0;
    std::string actives = "0";
    std::string beta;
    double snr = 3.0;
    Index runs = 100;
    std::string alpha = "0.1";
    double maf_min = 0.05;
    double maf_max = 0.5;
    double case_fraction = 0.5;
};

DesignSpec design_from(const SimulateFlags& s) {
    DesignSpec spec;
    if (s.design == "gaussian") spec.family = DesignFamily::gaussian;
    else if (s.design == "snp") spec.family = DesignFamily::snp;
    else throw ConfigError("--design: expected gaussian or snp, got '" + s.design + "'");
    spec.n = s.n;
    spec.p = s.p;
    spec.blocks = parse_blocks(s.blocks);
    spec.rho = s.rho;
    spec.active = parse_actives(s.actives);
    if (!s.beta.empty()) {
        const auto vals = split_list(s.beta);
        if (vals.size() == 1) spec.beta.assign(spec.active.size(), parse_real(vals[0], "--beta"));
        else
            for (const auto& v : vals) spec.beta.push_back(parse_real(v, "--beta"));
    }
    spec.snr = s.snr;
    spec.maf_min = s.maf_min;
    spec.maf_max = s.maf_max;
    spec.case_fraction = s.case_fraction;
    spec.validate();
    return spec;
}

nlohmann::json design_json(const DesignSpec& s) {
    nlohmann::json j = {{"family", to_string(s.family)}, {"n", s.n},     {"p", s.p},
                        {"blocks", s.blocks},            {"rho", s.rho}, {"active", s.active},
                        {"snr", s.snr}};
    std::vector<double> beta;
    const Vector b = s.coefficients();
    for (Index a : s.active) beta.push_back(b[a]);
    j["beta"] = beta;
    if (s.family == DesignFamily::snp) {
        j["maf_min"] = s.maf_min;
        j["maf_max"] = s.maf_max;
        j["case_fraction"] = s.case_fraction;
    }
    return j;
}

int cmd_simulate(const SimulateFlags& s, const std::string& bases_flag, const SelectorFlags& f, const std::string& out,
                 unsigned threads) {
    const DesignSpec spec = design_from(s);
    if (s.runs < 1) throw ConfigError("--runs must be at least 1");
    std::vector<double> alphas;
    for (const auto& a : split_list(s.alpha)) alphas.push_back(parse_real(a, "--alpha"));
    if (alphas.empty()) throw ConfigError("--alpha: no values");
    std::vector<BaseSelector> bases;
    for (const auto& b : split_list(bases_flag)) {
        SelectorFlags probe = f;
        probe.base = b;
        bases.push_back(probe.config(alphas[0], 1).base);
    }
    if (bases.empty()) throw ConfigError("--base: no values");
    SelectorFlags first = f;
    first.base = to_string(bases[0]);
    for (double a : alphas) first.config(a, 1);
    TrexConfig cfg = first.config(alphas[0], 1);
    spdlog::info("event=simulate_start runs={} arms={}", s.runs, bases.size() * alphas.size());
    const MonteCarloSummary mc = monte_carlo(spec, cfg, s.runs, f.seed, threads, bases, alphas);

    std::ostringstream trials, timings;
    trials << "trial,seed,base,alpha,fdp,tpp,n_selected,v_star,T_star,selected\n";
    timings << "trial,base,alpha,standardize,grouping,lambda2_cv,experiments,calibration\n";
    for (Index t = 0; t < s.runs; ++t)
        for (const auto& arm : mc.arms) {
            const auto& o = arm.outcomes[static_cast<std::size_t>(t)];
            trials << o.trial << ',' << o.seed << ',' << to_string(o.base) << ',' << io::format_double(o.alpha) << ','
                   << io::format_double(o.fdp) << ',' << io::format_double(o.tpp) << ',' << o.selected.size() << ','
                   << io::format_double(o.v_star) << ',' << o.T_star << ',' << join_indices(o.selected, ';') << '\n';
            timings << o.trial << ',' << to_string(o.base) << ',' << io::format_double(o.alpha) << ','
                    << io::format_double(o.timings.standardize) << ',' << io::format_double(o.timings.grouping) << ','
                    << io::format_double(o.timings.lambda2_cv) << ',' << io::format_double(o.timings.experiments) << ','
                    << io::format_double(o.timings.calibration) << '\n';
        }

    nlohmann::json summary;
    summary["schema_version"] = 1;
    summary["design"] = design_json(spec);
    summary["runs"] = s.runs;
    summary["seed"] = f.seed;
    summary["K"] = cfg.K;
    summary["estimator"] = to_string(cfg.estimator);
    if (cfg.rho_cut) summary["rho_cut"] = *cfg.rho_cut;
    summary["arms"] = nlohmann::json::array();
    for (const auto& arm : mc.arms)
        summary["arms"].push_back({{"base", to_string(arm.base)},
                                   {"alpha", arm.alpha},
                                   {"mean_fdp", arm.mean_fdp},
                                   {"median_fdp", arm.median_fdp},
                                   {"mean_tpp", arm.mean_tpp},
                                   {"median_tpp", arm.median_tpp},
                                   {"mean_selected", arm.mean_selected}});
    if (bases.size() > 1) {
        summary["paired"] = nlohmann::json::array();
        for (double a : alphas)
            for (std::size_t i = 0; i < bases.size(); ++i)
                for (std::size_t k = i + 1; k < bases.size(); ++k) {
                    const auto& A = mc.arm(bases[i], a);
                    const auto& B = mc.arm(bases[k], a);
                    int a_wins = 0, b_wins = 0;
                    for (std::size_t t = 0; t < A.outcomes.size(); ++t) {
                        a_wins += A.outcomes[t].tpp > B.outcomes[t].tpp;
                        b_wins += B.outcomes[t].tpp > A.outcomes[t].tpp;
                    }
                    summary["paired"].push_back({{"alpha", a},
                                                 {"first", to_string(bases[i])},
                                                 {"second", to_string(bases[k])},
                                                 {"mean_tpp_difference", A.mean_tpp - B.mean_tpp},
                                                 {"mean_fdp_difference", A.mean_fdp - B.mean_fdp},
                                                 {"runs_first_higher_tpp", a_wins},
                                                 {"runs_second_higher_tpp", b_wins}});
                }
    }
    const fs::path dir(out);
    fs::create_directories(dir);
    io::write_text(dir / "trials.csv", trials.str());
    io::write_json(dir / "summary.json", summary);
    io::write_text(dir / "trial_timings.csv", timings.str());
    for (const auto& arm : mc.arms)
        spdlog::info("event=arm base={} alpha={} mean_fdp={} mean_tpp={}", to_string(arm.base), arm.alpha,
                     arm.mean_fdp, arm.mean_tpp);
    return ok;
}

int cmd_bench(const std::string& p_grid, BenchConfig bc, const std::string& out) {
    bc.p_grid.clear();
    for (const auto& v : split_list(p_grid)) bc.p_grid.push_back(static_cast<Index>(parse_integer(v, "--p-grid")));
    const auto rows = bench_relative_time(bc);
    std::ostringstream csv;
    csv << "p,selector,mean_seconds,ratio,rows,mean_groups\n";
    for (const auto& r : rows) {
        csv << r.p << ',' << to_string(r.base) << ',' << io::format_double(r.mean_seconds) << ','
            << io::format_double(r.ratio) << ',' << r.augmented_rows << ',' << io::format_double(r.mean_groups) << '\n';
        spdlog::info("event=bench p={} selector={} mean_seconds={} ratio={}", r.p, to_string(r.base), r.mean_seconds,
                     r.ratio);
    }
    const fs::path dir(out);
    fs::create_directories(dir);
    io::write_text(dir / "bench.csv", csv.str());
    return ok;
}

int cmd_path(const std::string& x, const std::string& y, const SelectorFlags& f, Index steps, const std::string& out) {
    const TrexConfig cfg = f.config(0.1, 1);
    if (steps < 0) throw ConfigError("--steps must be nonnegative");
    const Dataset d = io::read_dataset(x, y);
    const StandardizedDataset sd = standardize(d);
    const StopRule stop = steps > 0 ? StopRule::steps(steps) : StopRule::full();
    LarsOptions opts;
    opts.excluded = sd.constant;
    SolutionPath path;
    if (cfg.base == BaseSelector::lasso) {
        path = lars_path(sd.Xs, sd.ys, cfg.mode, stop, opts);
    } else {
        PenaltyConfig pen;
        pen.lambda2 = cfg.lambda2 ? *cfg.lambda2 : ridge_cv_lambda2(sd.Xs, sd.ys, cfg.lambda2_grid, cfg.cv_folds);
        if (cfg.base == BaseSelector::ien)
            pen.partition = cfg.partition ? *cfg.partition : discover_groups(sd.Xs, *cfg.rho_cut, cfg.absolute_correlation);
        spdlog::info("event=augment lambda2={} extra_rows={}", pen.lambda2,
                     pen.partition ? pen.partition->size() : sd.p());
        const AugmentedProblem aug = augment(sd.Xs, sd.ys, pen);
        opts.validate_standardized = false;
        path = lars_path(aug.X, aug.y, cfg.mode, stop, opts);
    }
    std::ostringstream csv;
    write_path_csv(csv, path, sd.names);
    io::write_text(out, csv.str());
    spdlog::info("event=path events={} reason={}", path.events.size(), to_string(path.reason));
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"T-Rex variable selection with lasso, elastic net and informed elastic net base selectors"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = default_thread_count();
    std::string log_level = "info";
    app.add_option("--threads", threads, "Worker threads (default: available cores)");
    app.add_option("--log-level", log_level, "error, info or debug")->capture_default_str();

    std::string x_path, y_path, out;
    double alpha = 0.1;
    SelectorFlags sel;
    auto* select = app.add_subcommand("select", "Select variables with FDR control");
    select->add_option("--x", x_path, "Predictor CSV")->required();
    select->add_option("--y", y_path, "Response CSV (single column)")->required();
    select->add_option("--alpha", alpha, "Target FDR")->capture_default_str();
    select->add_option("--out", out, "Output directory")->required();
    sel.add_to(*select, true);

    SimulateFlags sim;
    SelectorFlags sim_sel;
    std::string sim_base = "lasso";
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo FDP / TPP study");
    simulate->add_option("--design", sim.design, "gaussian or snp")->capture_default_str();
    simulate->add_option("--p", sim.p, "Predictors")->capture_default_str();
    simulate->add_option("--n", sim.n, "Samples")->capture_default_str();
    simulate->add_option("--blocks", sim.blocks, "Correlated blocks: sizes or NxS items, comma separated");
    simulate->add_option("--rho", sim.rho, "Within-block correlation")->capture_default_str();
    simulate->add_option("--actives", sim.actives, "Count N (columns 0..N-1) or 0-based indices / ranges a-b")
        ->capture_default_str();
    simulate->add_option("--beta", sim.beta, "Active coefficients: one value or one per active (default 1)");
    simulate->add_option("--snr", sim.snr, "Signal-to-noise ratio")->capture_default_str();
    simulate->add_option("--runs", sim.runs, "Monte-Carlo runs")->capture_default_str();
    simulate->add_option("--alpha", sim.alpha, "Target FDR, comma list allowed")->capture_default_str();
    simulate->add_option("--maf-min", sim.maf_min, "Smallest minor-allele frequency (snp)")->capture_default_str();
    simulate->add_option("--maf-max", sim.maf_max, "Largest minor-allele frequency (snp)")->capture_default_str();
    simulate->add_option("--case-fraction", sim.case_fraction, "Fraction of cases (snp)")->capture_default_str();
    simulate->add_option("--out", sim_out, "Output directory")->required();
    sim_sel.add_to(*simulate, false);
    simulate->get_option("--base")->description("Base selectors, comma list for a paired comparison");

    BenchConfig bench_cfg;
    std::string p_grid = "100,500,1000";
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Relative time of one experiment per base selector");
    bench->add_option("--p-grid", p_grid, "Comma-separated p values")->capture_default_str();
    bench->add_option("--n", bench_cfg.n, "Samples")->capture_default_str();
    bench->add_option("--rho-cut", bench_cfg.rho_cut, "Correlation cutoff for groups")->capture_default_str();
    bench->add_option("--reps", bench_cfg.reps, "Repetitions per p")->capture_default_str();
    bench->add_option("--block-size", bench_cfg.block_size, "Correlated block size")->capture_default_str();
    bench->add_option("--rho", bench_cfg.rho, "Within-block correlation")->capture_default_str();
    bench->add_option("--lambda2", bench_cfg.lambda2, "Ridge level")->capture_default_str();
    bench->add_option("--seed", bench_cfg.seed, "Master seed")->capture_default_str();
    bench->add_option("--out", bench_out, "Output directory")->required();

    std::string px, py, path_out;
    Index steps = 0;
    SelectorFlags path_sel;
    auto* path = app.add_subcommand("path", "Dump the solution path of a base selector");
    path->add_option("--x", px, "Predictor CSV")->required();
    path->add_option("--y", py, "Response CSV (single column)")->required();
    path->add_option("--steps", steps, "Maximum path events (0: full path)")->capture_default_str();
    path->add_option("--out", path_out, "Output CSV file")->required();
    path_sel.add_to(*path, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    }

    auto logger = spdlog::stderr_color_mt("trex");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e level=%l %v");
    if (log_level == "error") spdlog::set_level(spdlog::level::err);
    else if (log_level == "info") spdlog::set_level(spdlog::level::info);
    else if (log_level == "debug") spdlog::set_level(spdlog::level::debug);
    else {
        std::cerr << "error: --log-level: expected error, info or debug, got '" << log_level << "'\n";
        return config_error;
    }
    if (threads < 1) {
        spdlog::error("event=config_error msg=\"--threads must be at least 1\"");
        return config_error;
    }
    spdlog::debug("event=start threads={}", threads);

    try {
        if (*select) return cmd_select(x_path, y_path, alpha, sel, out, threads);
        if (*simulate) return cmd_simulate(sim, sim_sel.base, sim_sel, sim_out, threads);
        if (*bench) return cmd_bench(p_grid, bench_cfg, bench_out);
        if (*path) return cmd_path(px, py, path_sel, steps, path_out);
    } catch (const InputError& e) {
        spdlog::error("event=input_error msg=\"{}\"", e.what());
        return input_error;
    } catch (const ConfigError& e) {
        spdlog::error("event=config_error msg=\"{}\"", e.what());
        return config_error;
    } catch (const NumericalError& e) {
        spdlog::error("event=numerical_error msg=\"{}\"", e.what());
        return numerical_error;
    } catch (const std::exception& e) {
        spdlog::error("event=internal_error msg=\"{}\"", e.what());
        return numerical_error;
    }
    return ok;
}
