#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/binomial.hpp>
#include <nlohmann/json.hpp>

#include "trex/augment.hpp"
#include "trex/core.hpp"
#include "trex/error.hpp"
#include "trex/grouping.hpp"
#include "trex/lars.hpp"
#include "trex/parallel.hpp"
#include "trex/rng.hpp"

namespace trex {

enum class BaseSelector { lasso, en, ien };
enum class DummyDistribution { normal, uniform };
enum class FdpEstimatorKind { deflated, binomial_tail };

inline const char* to_string(BaseSelector b) {
    switch (b) {
        case BaseSelector::lasso: return "lasso";
        case BaseSelector::en: return "en";
        case BaseSelector::ien: return "ien";
    }
    return "unknown";
}

inline BaseSelector parse_base_selector(const std::string& s) {
    if (s == "lasso") return BaseSelector::lasso;
    if (s == "en") return BaseSelector::en;
    if (s == "ien") return BaseSelector::ien;
    throw ConfigError("unknown base selector '" + s + "' (expected lasso, en or ien)");
}

inline const char* to_string(DummyDistribution d) { return d == DummyDistribution::normal ? "normal" : "uniform"; }

inline const char* to_string(FdpEstimatorKind e) {
    return e == FdpEstimatorKind::deflated ? "deflated" : "binomial_tail";
}

struct TrexConfig {
    Index K = 20;
    Index L = 0;             // 0: L_multiplier * p
    Index L_multiplier = 1;
    Index T_max = 0;         // 0: max(1, ceil(L / 20))
    double alpha = 0.1;
    BaseSelector base = BaseSelector::lasso;
    LarsMode mode = LarsMode::lasso;
    std::vector<double> voting_grid;  // empty: {0.5 + i / (2K)}
    DummyDistribution dummy_distribution = DummyDistribution::normal;
    FdpEstimatorKind estimator = FdpEstimatorKind::deflated;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    // EN / IEN
    std::optional<double> lambda2;  // unset: ridge cross-validation over lambda2_grid
    std::vector<double> lambda2_grid = default_lambda2_grid();
    Index cv_folds = 5;
    std::optional<double> rho_cut;
    bool absolute_correlation = false;
    std::optional<GroupPartition> partition;
    DummyPenalty dummy_policy = DummyPenalty::none;

    Index resolved_L(Index p) const { return L > 0 ? L : L_multiplier * p; }

    Index resolved_T_max(Index p) const {
        const Index l = resolved_L(p);
        return T_max > 0 ? std::min(T_max, l) : std::max<Index>(1, (l + 19) / 20);
    }

    std::vector<double> resolved_voting_grid() const {
        if (!voting_grid.empty()) return voting_grid;
        std::vector<double> v;
        for (Index i = 0; i < K; ++i) v.push_back(0.5 + static_cast<double>(i) / (2.0 * static_cast<double>(K)));
        return v;
    }

    void validate(Index p) const {
        if (K < 2) throw ConfigError("K must be at least 2");
        if (L < 0 || L_multiplier < 1 || resolved_L(p) < 1) throw ConfigError("L must be at least 1");
        if (T_max < 0) throw ConfigError("T_max must be nonnegative");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
        for (double v : voting_grid)
            if (!(v >= 0.5 && v < 1.0)) throw ConfigError("voting thresholds must lie in [0.5, 1)");
        if (base == BaseSelector::ien && !partition && !rho_cut)
            throw ConfigError("base ien needs a group partition or rho_cut");
        if (partition && partition->p() != p) throw ConfigError("group partition does not cover the predictors");
        if (rho_cut && !(*rho_cut > 0.0 && *rho_cut < 1.0)) throw ConfigError("rho_cut must lie in (0, 1)");
        if (lambda2 && !(*lambda2 > 0.0)) throw ConfigError("lambda2 must be positive");
    }
};

/// n x L matrix of i.i.d. draws from `dist` (standard normal or uniform(-1, 1)).
inline Matrix draw_dummies(Index n, Index L, DummyDistribution dist, RngStream rng) {
    if (n < 1 || L < 1) throw ConfigError("dummy matrix needs n, L >= 1");
    Matrix D(n, L);
    for (Index j = 0; j < L; ++j)
        for (Index i = 0; i < n; ++i)
            D(i, j) = dist == DummyDistribution::normal ? rng.normal() : rng.uniform(-1.0, 1.0);
    return D;
}

/// draw_dummies with columns standardized like the real predictors.
inline Matrix generate_dummies(Index n, Index L, DummyDistribution dist, RngStream rng) {
    Matrix D = draw_dummies(n, L, dist, rng);
    standardize_columns(D);
    return D;
}

/// One terminated random experiment: first-entry order of real variables and dummies.
struct ExperimentRecord {
    struct Inclusion {
        Index variable;  // real index in [0, p), or dummy index in [0, L)
        bool dummy;
    };
    Index k = 0;
    Index p = 0;
    std::vector<Inclusion> inclusions;
    Index dummy_count = 0;
    bool exhausted = false;  // path ended before the requested dummy count
};

/// Everything an experiment needs apart from its dummies.
struct ExperimentInputs {
    const Matrix* Xs = nullptr;
    const Vector* ys = nullptr;
    BaseSelector base = BaseSelector::lasso;
    std::optional<PenaltyConfig> penalty;  // required for en / ien
    LarsMode mode = LarsMode::lasso;
    std::vector<bool> excluded;            // real columns that may not enter
};

/// Path solve on [Xs dummies] (augmented for EN / IEN), stopped at the T-th dummy.
inline ExperimentRecord run_experiment(const ExperimentInputs& in, const Matrix& dummies, Index T, Index k = 0) {
    const Matrix& Xs = *in.Xs;
    const Index n = Xs.rows();
    const Index p = Xs.cols();
    if (dummies.rows() != n) throw InputError("dummy matrix row count does not match the data");
    if (T < 1) throw ConfigError("T must be at least 1");
    Matrix Xt(n, p + dummies.cols());
    Xt << Xs, dummies;

    LarsOptions opts;
    opts.record_coefficients = false;
    if (!in.excluded.empty()) {
        opts.excluded = in.excluded;
        opts.excluded.resize(static_cast<std::size_t>(Xt.cols()), false);
    }
    const StopRule stop = StopRule::dummies(p, T);
    SolutionPath path;
    switch (in.base) {
        case BaseSelector::lasso:
            opts.validate_standardized = false;
            path = lars_path(Xt, *in.ys, in.mode, stop, opts);
            break;
        case BaseSelector::en:
        case BaseSelector::ien: {
            if (!in.penalty) throw ConfigError("en / ien experiments need a penalty configuration");
            if (in.base == BaseSelector::ien && !in.penalty->partition)
                throw ConfigError("ien experiments need a group partition");
            const AugmentedProblem aug = in.base == BaseSelector::en ? en_augment(Xt, *in.ys, in.penalty->lambda2)
                                                                     : augment(Xt, *in.ys, *in.penalty);
            opts.validate_standardized = false;
            path = lars_path(aug.X, aug.y, in.mode, stop, opts);
            break;
        }
    }

    ExperimentRecord rec;
    rec.k = k;
    rec.p = p;
    std::vector<char> seen(static_cast<std::size_t>(Xt.cols()), 0);
    for (const auto& ev : path.events) {
        if (ev.kind != EventKind::enter || seen[static_cast<std::size_t>(ev.variable)]) continue;
        seen[static_cast<std::size_t>(ev.variable)] = 1;
        const bool dummy = ev.variable >= p;
        rec.inclusions.push_back({dummy ? ev.variable - p : ev.variable, dummy});
        rec.dummy_count += dummy;
    }
    rec.exhausted = rec.dummy_count < T;
    return rec;
}

/// Counts of candidate-set membership: counts(t-1, j) = #{k : j in C_k(t)}.
struct OccurrenceTable {
    Index K = 0;
    Index p = 0;
    Eigen::MatrixXi counts;  // T x p

    Index T() const noexcept { return counts.rows(); }
    double phi(Index t, Index j) const { return static_cast<double>(counts(t - 1, j)) / static_cast<double>(K); }
    Vector phi_row(Index t) const { return counts.row(t - 1).cast<double>().transpose() / static_cast<double>(K); }

    /// Variables with relative occurrence strictly above v at level t.
    std::vector<Index> selected(Index t, double v) const {
        std::vector<Index> out;
        const double threshold = v * static_cast<double>(K) + 1e-9;
        for (Index j = 0; j < p; ++j)
            if (static_cast<double>(counts(t - 1, j)) > threshold) out.push_back(j);
        return out;
    }
    Index n_selected(Index t, double v) const { return static_cast<Index>(selected(t, v).size()); }
};

/**
 * Fuses experiment records into relative occurrences for t = 1..T.
 * A record that ran out of path before its t-th dummy contributes everything
 * it included.
 */
inline OccurrenceTable fuse(const std::vector<ExperimentRecord>& records, Index p, Index T) {
    if (records.empty()) throw ConfigError("no experiment records to fuse");
    OccurrenceTable occ;
    occ.K = static_cast<Index>(records.size());
    occ.p = p;
    occ.counts = Eigen::MatrixXi::Zero(T, p);
    for (const auto& rec : records) {
        if (rec.p != p)
            throw InputError("experiment record " + std::to_string(rec.k) + " has p = " + std::to_string(rec.p) +
                             ", expected " + std::to_string(p));
        Index dummies = 0;
        std::vector<Index> first_level(static_cast<std::size_t>(p), T + 1);
        for (const auto& inc : rec.inclusions) {
            if (inc.dummy) {
                ++dummies;
                if (dummies >= T) break;
                continue;
            }
            if (inc.variable < 0 || inc.variable >= p)
                throw InputError("experiment record refers to variable " + std::to_string(inc.variable) +
                                 " outside [0, " + std::to_string(p) + ")");
            auto& lvl = first_level[static_cast<std::size_t>(inc.variable)];
            lvl = std::min(lvl, dummies + 1);
        }
        if (!rec.exhausted && rec.dummy_count < T)
            throw ConfigError("experiment record holds fewer dummy entries than requested");
        for (Index j = 0; j < p; ++j) {
            const Index lvl = first_level[static_cast<std::size_t>(j)];
            for (Index t = lvl; t <= T; ++t) ++occ.counts(t - 1, j);
        }
    }
    return occ;
}

/// Estimated false discovery proportion of the selection {j : Phi_T(j) > v}.
class FdpEstimator {
public:
    virtual ~FdpEstimator() = default;
    virtual double estimate(double v, Index T, const OccurrenceTable& occ, Index L) const = 0;
    virtual const char* name() const = 0;
};

/**
 * Treats each null as included independently in each experiment with
 * probability T / L, so a null's occurrence count is Binomial(K, T / L), and
 * uses p as the null count: V = p * P[Bin(K, T/L) > vK].
 */
class BinomialTailEstimator final : public FdpEstimator {
public:
    static double expected_false(double v, Index T, Index K, Index L, Index p) {
        if (T > L) throw ConfigError("T cannot exceed the number of dummies L");
        const double prob = static_cast<double>(T) / static_cast<double>(L);
        const double threshold = std::floor(v * static_cast<double>(K) + 1e-9);
        if (threshold >= static_cast<double>(K)) return 0.0;
        const boost::math::binomial_distribution<double> dist(static_cast<double>(K), prob);
        return static_cast<double>(p) * boost::math::cdf(boost::math::complement(dist, threshold));
    }

    double estimate(double v, Index T, const OccurrenceTable& occ, Index L) const override {
        const double vhat = expected_false(v, T, occ.K, L, occ.p);
        const Index r = occ.n_selected(T, v);
        if (r == 0) return 0.0;
        return std::min(1.0, vhat / static_cast<double>(r));
    }
    const char* name() const override { return "binomial_tail"; }
};

/**
 * Deflated relative occurrences. At each level t the average number of real
 * variables that entered with the t-th dummy is split into an expected null
 * share, (p - sum Phi_t) / (L - t + 1), and the remainder. Phi' keeps only
 * the non-null share of each variable's increments, and each selected
 * variable contributes 1 - Phi'_T(j) expected false discoveries.
 */
class DeflatedEstimator final : public FdpEstimator {
public:
    static Vector deflated_occurrences(const OccurrenceTable& occ, Index T, Index L) {
        if (T > L) throw ConfigError("T cannot exceed the number of dummies L");
        Vector deflated = Vector::Zero(occ.p);
        Vector prev = Vector::Zero(occ.p);
        for (Index t = 1; t <= T; ++t) {
            const Vector cur = occ.phi_row(t);
            const Vector delta = cur - prev;
            const double total_delta = delta.sum();
            if (total_delta > 0.0) {
                const double nulls = (static_cast<double>(occ.p) - cur.sum()) / static_cast<double>(L - t + 1);
                deflated += (1.0 - nulls / total_delta) * delta;
            }
            prev = cur;
        }
        return deflated;
    }

    double estimate(double v, Index T, const OccurrenceTable& occ, Index L) const override {
        const auto sel = occ.selected(T, v);
        if (sel.empty()) return 0.0;
        const Vector deflated = deflated_occurrences(occ, T, L);
        double vhat = 0.0;
        for (Index j : sel) vhat += 1.0 - deflated[j];
        return std::clamp(vhat / static_cast<double>(sel.size()), 0.0, 1.0);
    }
    const char* name() const override { return "deflated"; }
};

inline std::unique_ptr<FdpEstimator> make_estimator(FdpEstimatorKind kind) {
    if (kind == FdpEstimatorKind::binomial_tail) return std::make_unique<BinomialTailEstimator>();
    return std::make_unique<DeflatedEstimator>();
}

inline double estimate_fdp(double v, Index T, const TrexConfig& cfg, const OccurrenceTable& occ) {
    if (T < 1 || T > occ.T()) throw ConfigError("T outside the evaluated range");
    return make_estimator(cfg.estimator)->estimate(v, T, occ, cfg.resolved_L(occ.p));
}

struct SurfacePoint {
    Index T = 0;
    double v = 0.0;
    double fdp_hat = 0.0;
    Index n_selected = 0;
};

struct Calibration {
    double v_star = 0.0;
    Index T_star = 1;
    double fdp_hat = 0.0;
    bool feasible = false;
    bool stopped = false;  // FDP estimate at max(V) exceeded alpha at T = T_stop
    Index T_stop = 0;      // last level evaluated
    std::vector<Index> selected;
    std::vector<SurfacePoint> surface;
};

/**
 * Scans T = 1.. and every v in the voting grid; stops raising T once the
 * estimate at the largest v exceeds alpha. Among pairs with estimate <= alpha
 * picks the largest selection, then the smaller estimate, larger v, smaller T.
 */
inline Calibration calibrate(const OccurrenceTable& occ, const TrexConfig& cfg, double alpha,
                             const FdpEstimator& estimator) {
    const Index L = cfg.resolved_L(occ.p);
    auto grid = cfg.resolved_voting_grid();
    std::sort(grid.begin(), grid.end());
    const Index t_limit = std::min(occ.T(), std::min(cfg.resolved_T_max(occ.p), L));
    Calibration cal;
    cal.v_star = grid.back();
    cal.T_star = 1;
    bool have = false;
    SurfacePoint best;
    for (Index T = 1; T <= t_limit; ++T) {
        cal.T_stop = T;
        for (double v : grid) {
            SurfacePoint pt{T, v, estimator.estimate(v, T, occ, L), occ.n_selected(T, v)};
            cal.surface.push_back(pt);
            if (pt.fdp_hat > alpha) continue;
            const bool better = !have || pt.n_selected > best.n_selected ||
                                (pt.n_selected == best.n_selected &&
                                 (pt.fdp_hat < best.fdp_hat ||
                                  (pt.fdp_hat == best.fdp_hat && (pt.v > best.v || (pt.v == best.v && pt.T < best.T)))));
            if (better) {
                best = pt;
                have = true;
            }
        }
        if (cal.surface.back().fdp_hat > alpha) {
            cal.stopped = true;
            break;
        }
    }
    if (have) {
        cal.feasible = true;
        cal.v_star = best.v;
        cal.T_star = best.T;
        cal.fdp_hat = best.fdp_hat;
        cal.selected = occ.selected(best.T, best.v);
    }
    return cal;
}

inline Calibration calibrate(const OccurrenceTable& occ, const TrexConfig& cfg) {
    return calibrate(occ, cfg, cfg.alpha, *make_estimator(cfg.estimator));
}

struct PhaseTimings {
    double standardize = 0.0;
    double grouping = 0.0;
    double lambda2_cv = 0.0;
    double experiments = 0.0;
    double calibration = 0.0;
};

struct SelectionReport {
    double alpha = 0.0;
    Calibration calibration;
    OccurrenceTable occurrences;
    std::vector<ExperimentRecord> experiments;
    std::vector<std::string> names;
    TrexConfig config;
    Index p = 0;
    Index n = 0;
    Index L = 0;
    std::optional<double> lambda2;
    Index n_groups = 0;
    PhaseTimings timings;

    const std::vector<Index>& selected() const { return calibration.selected; }
};

/**
 * Stateful selector over one dataset. Experiments are rerun to a doubled
 * dummy count whenever calibration needs a larger T than has been evaluated;
 * paths are deterministic, so the lower levels are unchanged by a rerun.
 */
class TrexSelector {
public:
    TrexSelector(const Dataset& d, TrexConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate(d.p());
        auto t0 = clock::now();
        std_ = standardize(d);
        timings_.standardize = seconds_since(t0);
        L_ = cfg_.resolved_L(d.p());
        T_max_ = cfg_.resolved_T_max(d.p());

        inputs_.Xs = &std_.Xs;
        inputs_.ys = &std_.ys;
        inputs_.base = cfg_.base;
        inputs_.mode = cfg_.mode;
        inputs_.excluded = std_.constant;

        if (cfg_.base != BaseSelector::lasso) {
            PenaltyConfig pen;
            pen.dummy_policy = cfg_.dummy_policy;
            if (cfg_.base == BaseSelector::ien) {
                t0 = clock::now();
                pen.partition = cfg_.partition ? *cfg_.partition
                                               : discover_groups(std_.Xs, *cfg_.rho_cut, cfg_.absolute_correlation);
                n_groups_ = pen.partition->size();
                timings_.grouping = seconds_since(t0);
            }
            t0 = clock::now();
            pen.lambda2 = cfg_.lambda2 ? *cfg_.lambda2
                                       : ridge_cv_lambda2(std_.Xs, std_.ys, cfg_.lambda2_grid, cfg_.cv_folds);
            timings_.lambda2_cv = seconds_since(t0);
            inputs_.penalty = pen;
        }
    }

    const StandardizedDataset& standardized() const noexcept { return std_; }
    const ExperimentInputs& inputs() const noexcept { return inputs_; }
    const TrexConfig& config() const noexcept { return cfg_; }
    Index L() const noexcept { return L_; }
    Index T_max() const noexcept { return T_max_; }
    std::optional<double> lambda2() const {
        return inputs_.penalty ? std::optional<double>(inputs_.penalty->lambda2) : std::nullopt;
    }
    Index n_groups() const noexcept { return n_groups_; }
    const GroupPartition* partition() const {
        return inputs_.penalty && inputs_.penalty->partition ? &*inputs_.penalty->partition : nullptr;
    }

    Matrix dummies(Index k) const {
        return generate_dummies(std_.n(), L_, cfg_.dummy_distribution, RngStream(cfg_.seed, static_cast<std::uint64_t>(k)));
    }

    /// Runs (or reruns) all K experiments up to T dummy entries.
    void ensure_level(Index T) {
        T = std::min(T, T_max_);
        if (T <= T_evaluated_) return;
        const auto t0 = clock::now();
        records_.assign(static_cast<std::size_t>(cfg_.K), {});
        parallel_for(static_cast<std::size_t>(cfg_.K), cfg_.threads, [&](std::size_t k) {
            records_[k] = run_experiment(inputs_, dummies(static_cast<Index>(k)), T, static_cast<Index>(k));
        });
        T_evaluated_ = T;
        occ_ = fuse(records_, std_.p(), T);
        timings_.experiments += seconds_since(t0);
    }

    SelectionReport select(double alpha) {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
        const auto estimator = make_estimator(cfg_.estimator);
        Index level = std::max<Index>(T_evaluated_, std::min<Index>(2, T_max_));
        Calibration cal;
        while (true) {
            ensure_level(level);
            const auto t0 = clock::now();
            cal = calibrate(occ_, cfg_, alpha, *estimator);
            timings_.calibration += seconds_since(t0);
            if (cal.stopped || T_evaluated_ >= T_max_) break;
            level = std::min(T_max_, 2 * T_evaluated_);
        }
        SelectionReport rep;
        rep.alpha = alpha;
        rep.calibration = std::move(cal);
        rep.occurrences = occ_;
        rep.experiments = records_;
        rep.names = std_.names;
        rep.config = cfg_;
        rep.config.alpha = alpha;
        rep.p = std_.p();
        rep.n = std_.n();
        rep.L = L_;
        rep.lambda2 = lambda2();
        rep.n_groups = n_groups_;
        rep.timings = timings_;
        return rep;
    }

    SelectionReport select() { return select(cfg_.alpha); }

private:
    using clock = std::chrono::steady_clock;
    static double seconds_since(clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    }

    TrexConfig cfg_;
    StandardizedDataset std_;
    ExperimentInputs inputs_;
    Index L_ = 0;
    Index T_max_ = 1;
    Index n_groups_ = 0;
    Index T_evaluated_ = 0;
    std::vector<ExperimentRecord> records_;
    OccurrenceTable occ_;
    PhaseTimings timings_;
};

inline SelectionReport trex_select(const Dataset& d, const TrexConfig& cfg) { return TrexSelector(d, cfg).select(); }

/// Deterministic report serialization (wall-clock timings are kept out; see timings_to_json).
inline nlohmann::json report_to_json(const SelectionReport& rep) {
    using nlohmann::json;
    const auto& cal = rep.calibration;
    json j;
    j["schema_version"] = 1;
    j["selected"] = json::array();
    for (Index v : cal.selected)
        j["selected"].push_back({{"index", v}, {"name", rep.names[static_cast<std::size_t>(v)]}});
    j["v_star"] = cal.v_star;
    j["T_star"] = cal.T_star;
    j["fdp_hat"] = cal.fdp_hat;
    j["feasible"] = cal.feasible;
    j["T_evaluated"] = rep.occurrences.T();
    j["alpha"] = rep.alpha;
    j["surface"] = json::array();
    for (const auto& pt : cal.surface)
        j["surface"].push_back({{"T", pt.T}, {"v", pt.v}, {"fdp_hat", pt.fdp_hat}, {"n_selected", pt.n_selected}});
    std::vector<double> phi;
    const Vector row = rep.occurrences.phi_row(std::min(cal.T_star, rep.occurrences.T()));
    phi.assign(row.data(), row.data() + row.size());
    j["phi_at_T_star"] = phi;
    const auto& c = rep.config;
    j["config"] = {{"K", c.K},
                   {"L", rep.L},
                   {"T_max", c.resolved_T_max(rep.p)},
                   {"alpha", rep.alpha},
                   {"base", to_string(c.base)},
                   {"mode", c.mode == LarsMode::lasso ? "lasso" : "lar"},
                   {"voting_grid", c.resolved_voting_grid()},
                   {"dummy_distribution", to_string(c.dummy_distribution)},
                   {"estimator", to_string(c.estimator)},
                   {"dummy_policy", c.dummy_policy == DummyPenalty::none ? "none" : "singleton_groups"},
                   {"n", rep.n},
                   {"p", rep.p}};
    if (rep.lambda2) j["config"]["lambda2"] = *rep.lambda2;
    if (c.rho_cut) j["config"]["rho_cut"] = *c.rho_cut;
    if (c.base == BaseSelector::ien) j["config"]["n_groups"] = rep.n_groups;
    j["seed"] = c.seed;
    j["experiments"] = json::array();
    for (const auto& rec : rep.experiments) {
        Index candidates = 0;
        Index dummies = 0;
        for (const auto& inc : rec.inclusions) {
            if (inc.dummy && ++dummies >= cal.T_star) break;
            if (!inc.dummy) ++candidates;
        }
        j["experiments"].push_back({{"k", rec.k},
                                    {"dummy_count", rec.dummy_count},
                                    {"exhausted", rec.exhausted},
                                    {"candidates_at_T_star", candidates}});
    }
    return j;
}

inline nlohmann::json timings_to_json(const PhaseTimings& t) {
    return {{"standardize", t.standardize},
            {"grouping", t.grouping},
            {"lambda2_cv", t.lambda2_cv},
            {"experiments", t.experiments},
            {"calibration", t.calibration}};
}

}  // namespace trex
