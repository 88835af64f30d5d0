#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "trex/augment.hpp"
#include "trex/core.hpp"
#include "trex/error.hpp"
#include "trex/grouping.hpp"
#include "trex/lars.hpp"
#include "trex/parallel.hpp"
#include "trex/rng.hpp"
#include "trex/trex.hpp"

namespace trex {

enum class DesignFamily { gaussian, snp };

inline const char* to_string(DesignFamily f) { return f == DesignFamily::gaussian ? "gaussian" : "snp"; }

/**
 * Simulation design. Correlated blocks occupy the leading columns in order;
 * the remaining columns are independent. Active coefficients default to 1.
 */
struct DesignSpec {
    DesignFamily family = DesignFamily::gaussian;
    Index n = 150;
    Index p = 100;
    std::vector<Index> blocks;
    double rho = 0.0;
    std::vector<Index> active;
    std::vector<double> beta;  // empty: all ones
    double snr = 3.0;
    // snp only
    double maf_min = 0.05;
    double maf_max = 0.5;
    double case_fraction = 0.5;

    Index blocked_columns() const { return std::accumulate(blocks.begin(), blocks.end(), Index{0}); }

    void validate() const {
        if (n < 2 || p < 1) throw ConfigError("design needs n >= 2 and p >= 1");
        for (Index b : blocks)
            if (b < 1) throw ConfigError("block sizes must be positive");
        if (blocked_columns() > p) throw ConfigError("blocks cover more columns than p");
        if (!(rho > -1.0 && rho < 1.0)) throw ConfigError("rho must lie in (-1, 1)");
        for (Index b : blocks)
            if (b > 1 && rho < -1.0 / static_cast<double>(b - 1))
                throw ConfigError("rho is not a feasible equicorrelation for a block of size " + std::to_string(b));
        if (!(snr > 0.0)) throw ConfigError("snr must be positive");
        std::vector<Index> a = active;
        std::sort(a.begin(), a.end());
        if (std::adjacent_find(a.begin(), a.end()) != a.end()) throw ConfigError("duplicate active index");
        for (Index j : a)
            if (j < 0 || j >= p) throw ConfigError("active index " + std::to_string(j) + " outside [0, p)");
        if (!beta.empty() && beta.size() != active.size())
            throw ConfigError("beta values must match the number of actives");
        if (family == DesignFamily::snp) {
            if (!(maf_min > 0.0 && maf_max <= 0.5 && maf_min <= maf_max))
                throw ConfigError("minor allele frequencies must lie in (0, 0.5]");
            if (!(case_fraction > 0.0 && case_fraction < 1.0)) throw ConfigError("case fraction must lie in (0, 1)");
        }
    }

    Vector coefficients() const {
        Vector b = Vector::Zero(p);
        for (std::size_t i = 0; i < active.size(); ++i) b[active[i]] = beta.empty() ? 1.0 : beta[i];
        return b;
    }

    std::vector<Index> truth() const {
        std::vector<Index> t;
        const Vector b = coefficients();
        for (Index j = 0; j < p; ++j)
            if (b[j] != 0.0) t.push_back(j);
        return t;
    }

    /// Two equicorrelated triples at 0.75 among 100 columns, signs +1 / -1.
    static DesignSpec two_triples() {
        DesignSpec s;
        s.n = 150;
        s.p = 100;
        s.blocks = {3, 3};
        s.rho = 0.75;
        s.active = {0, 1, 2, 3, 4, 5};
        s.beta = {1, 1, 1, -1, -1, -1};
        s.snr = 3.0;
        return s;
    }
};

struct SimulatedData {
    Dataset data;
    std::vector<Index> truth;
};

namespace detail {

/// Symmetric square root of the b x b equicorrelation matrix.
inline Matrix equicorrelation_root(Index b, double rho) {
    Matrix C = Matrix::Constant(b, b, rho);
    C.diagonal().setOnes();
    Eigen::SelfAdjointEigenSolver<Matrix> es(C);
    const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

/// n x p latent Gaussian matrix with the block layout of `spec`.
inline Matrix latent_gaussian(const DesignSpec& spec, RngStream& rng) {
    Matrix Z(spec.n, spec.p);
    for (Index j = 0; j < spec.p; ++j)
        for (Index i = 0; i < spec.n; ++i) Z(i, j) = rng.normal();
    Index col = 0;
    for (Index b : spec.blocks) {
        if (b > 1 && spec.rho != 0.0) Z.middleCols(col, b) = Z.middleCols(col, b) * equicorrelation_root(b, spec.rho);
        col += b;
    }
    return Z;
}

// Unit noise when beta = 0 (no signal to scale against).
inline Vector add_noise(const Matrix& X, const Vector& beta, double snr, RngStream& rng) {
    const double sigma = beta.isZero(0.0) ? 1.0 : std::sqrt(snr_noise_variance(X, beta, snr));
    Vector y = X * beta;
    for (Index i = 0; i < y.size(); ++i) y[i] += sigma * rng.normal();
    return y;
}

}  // namespace detail

/// Equicorrelated Gaussian blocks, independent standard normal remainder, y = X beta + noise at the given SNR.
inline SimulatedData gen_grouped_gaussian(const DesignSpec& spec, RngStream rng) {
    spec.validate();
    if (spec.family != DesignFamily::gaussian) throw ConfigError("design family is not gaussian");
    Matrix X = detail::latent_gaussian(spec, rng);
    Vector y = detail::add_noise(X, spec.coefficients(), spec.snr, rng);
    return {Dataset(std::move(X), std::move(y)), spec.truth()};
}

/**
 * Genotypes in {0, 1, 2}: each of two haplotypes thresholds a latent block
 * Gaussian at its minor-allele quantile. The phenotype is 1 for the cases,
 * i.e. the samples with the largest liability X beta + noise.
 */
inline SimulatedData gen_snp_blocks(const DesignSpec& spec, RngStream rng) {
    spec.validate();
    if (spec.family != DesignFamily::snp) throw ConfigError("design family is not snp");
    Vector cut(spec.p);
    const boost::math::normal_distribution<double> std_normal;
    for (Index j = 0; j < spec.p; ++j)
        cut[j] = boost::math::quantile(boost::math::complement(std_normal, rng.uniform(spec.maf_min, spec.maf_max)));
    Matrix X = Matrix::Zero(spec.n, spec.p);
    for (int hap = 0; hap < 2; ++hap) {
        const Matrix Z = detail::latent_gaussian(spec, rng);
        for (Index j = 0; j < spec.p; ++j)
            for (Index i = 0; i < spec.n; ++i) X(i, j) += Z(i, j) > cut[j] ? 1.0 : 0.0;
    }
    const Vector beta = spec.coefficients();
    const Vector liability = detail::add_noise(X, beta, spec.snr, rng);
    const Index cases = std::clamp<Index>(static_cast<Index>(std::llround(spec.case_fraction * static_cast<double>(spec.n))),
                                          1, spec.n - 1);
    std::vector<Index> order(static_cast<std::size_t>(spec.n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return liability[a] > liability[b]; });
    Vector y = Vector::Zero(spec.n);
    for (Index i = 0; i < cases; ++i) y[order[static_cast<std::size_t>(i)]] = 1.0;
    return {Dataset(std::move(X), std::move(y)), spec.truth()};
}

inline SimulatedData generate(const DesignSpec& spec, RngStream rng) {
    return spec.family == DesignFamily::gaussian ? gen_grouped_gaussian(spec, rng) : gen_snp_blocks(spec, rng);
}

struct FdpTpp {
    double fdp = 0.0;
    double tpp = 0.0;
};

inline FdpTpp fdp_tpp(std::vector<Index> selected, std::vector<Index> truth) {
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    std::sort(truth.begin(), truth.end());
    truth.erase(std::unique(truth.begin(), truth.end()), truth.end());
    std::vector<Index> hit;
    std::set_intersection(selected.begin(), selected.end(), truth.begin(), truth.end(), std::back_inserter(hit));
    const double tp = static_cast<double>(hit.size());
    const double sel = static_cast<double>(selected.size());
    return {(sel - tp) / std::max(1.0, sel), tp / std::max(1.0, static_cast<double>(truth.size()))};
}

struct TrialOutcome {
    Index trial = 0;
    std::uint64_t seed = 0;  // trex master seed of this trial
    BaseSelector base = BaseSelector::lasso;
    double alpha = 0.0;
    std::vector<Index> selected;
    std::vector<Index> truth;
    double fdp = 0.0;
    double tpp = 0.0;
    double v_star = 0.0;
    Index T_star = 0;
    PhaseTimings timings;
};

struct ArmSummary {
    BaseSelector base = BaseSelector::lasso;
    double alpha = 0.0;
    double mean_fdp = 0.0;
    double median_fdp = 0.0;
    double mean_tpp = 0.0;
    double median_tpp = 0.0;
    double mean_selected = 0.0;
    std::vector<TrialOutcome> outcomes;
};

struct MonteCarloSummary {
    Index runs = 0;
    std::uint64_t seed = 0;
    std::vector<ArmSummary> arms;  // base-major, then alpha

    const ArmSummary& arm(BaseSelector base, double alpha) const {
        for (const auto& a : arms)
            if (a.base == base && a.alpha == alpha) return a;
        throw ConfigError("no Monte-Carlo arm for the requested base selector and alpha");
    }
};

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace detail

/// Data stream and selector seed of trial t; both depend only on (master seed, t).
inline RngStream trial_data_stream(std::uint64_t master, Index trial) {
    return RngStream(master, static_cast<std::uint64_t>(trial)).split(0);
}
inline std::uint64_t trial_selector_seed(std::uint64_t master, Index trial) {
    return RngStream(master, static_cast<std::uint64_t>(trial)).split(1)();
}

/**
 * Runs `runs` independent trials. Every trial draws one dataset and applies
 * each base selector to it (paired comparison); experiments are shared across
 * the alpha levels of a base selector. Trials run on `threads` workers; each
 * trial is single-threaded.
 */
inline MonteCarloSummary monte_carlo(const DesignSpec& spec, const TrexConfig& cfg, Index runs, std::uint64_t seed,
                                     unsigned threads, std::vector<BaseSelector> bases = {},
                                     std::vector<double> alphas = {}) {
    spec.validate();
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (bases.empty()) bases = {cfg.base};
    if (alphas.empty()) alphas = {cfg.alpha};
    const std::size_t n_arms = bases.size() * alphas.size();
    std::vector<std::vector<TrialOutcome>> per_trial(static_cast<std::size_t>(runs));
    parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t t) {
        const Index trial = static_cast<Index>(t);
        const SimulatedData sim = generate(spec, trial_data_stream(seed, trial));
        auto& out = per_trial[t];
        for (BaseSelector base : bases) {
            TrexConfig c = cfg;
            c.base = base;
            c.seed = trial_selector_seed(seed, trial);
            c.threads = 1;
            TrexSelector selector(sim.data, c);
            for (double alpha : alphas) {
                const SelectionReport rep = selector.select(alpha);
                TrialOutcome o;
                o.trial = trial;
                o.seed = c.seed;
                o.base = base;
                o.alpha = alpha;
                o.selected = rep.selected();
                o.truth = sim.truth;
                const FdpTpp m = fdp_tpp(o.selected, o.truth);
                o.fdp = m.fdp;
                o.tpp = m.tpp;
                o.v_star = rep.calibration.v_star;
                o.T_star = rep.calibration.T_star;
                o.timings = rep.timings;
                out.push_back(std::move(o));
            }
        }
    });

    MonteCarloSummary summary;
    summary.runs = runs;
    summary.seed = seed;
    for (std::size_t a = 0; a < n_arms; ++a) {
        ArmSummary arm;
        arm.base = bases[a / alphas.size()];
        arm.alpha = alphas[a % alphas.size()];
        std::vector<double> fdp, tpp;
        double selected = 0.0;
        for (const auto& trial : per_trial) {
            const TrialOutcome& o = trial[a];
            arm.outcomes.push_back(o);
            fdp.push_back(o.fdp);
            tpp.push_back(o.tpp);
            selected += static_cast<double>(o.selected.size());
        }
        const double r = static_cast<double>(runs);
        arm.mean_fdp = std::accumulate(fdp.begin(), fdp.end(), 0.0) / r;
        arm.mean_tpp = std::accumulate(tpp.begin(), tpp.end(), 0.0) / r;
        arm.median_fdp = detail::median(fdp);
        arm.median_tpp = detail::median(tpp);
        arm.mean_selected = selected / r;
        summary.arms.push_back(std::move(arm));
    }
    return summary;
}

/// Settings of the one-experiment timing benchmark.
struct BenchConfig {
    std::vector<Index> p_grid{100, 500, 1000};
    Index n = 50;
    double rho_cut = 0.5;
    Index reps = 50;
    Index block_size = 10;
    double rho = 0.75;
    double lambda2 = 1.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (p_grid.empty()) throw ConfigError("p grid is empty");
        for (Index p : p_grid)
            if (p < 1) throw ConfigError("p grid values must be positive");
        if (n < 2) throw ConfigError("n must be at least 2");
        if (!(rho_cut > 0.0 && rho_cut < 1.0)) throw ConfigError("rho_cut must lie in (0, 1)");
        if (reps < 1) throw ConfigError("reps must be at least 1");
        if (block_size < 1) throw ConfigError("block size must be positive");
        if (!(lambda2 > 0.0)) throw ConfigError("lambda2 must be positive");
    }
};

struct BenchRow {
    Index p = 0;
    BaseSelector base = BaseSelector::lasso;
    double mean_seconds = 0.0;
    double ratio = 0.0;           // relative to the lasso experiment at the same p
    Index augmented_rows = 0;     // rows of the solved design
    double mean_groups = 0.0;
};

/**
 * Mean wall-clock of one experiment (L = p, T = 1) per base selector. Only
 * the augmentation and the path solve are timed; data, dummies and grouping
 * are prepared beforehand. Runs serially.
 */
inline std::vector<BenchRow> bench_relative_time(const BenchConfig& bc) {
    bc.validate();
    using clock = std::chrono::steady_clock;
    const BaseSelector bases[] = {BaseSelector::lasso, BaseSelector::en, BaseSelector::ien};
    std::vector<BenchRow> rows;
    for (std::size_t gi = 0; gi < bc.p_grid.size(); ++gi) {
        const Index p = bc.p_grid[gi];
        DesignSpec spec;
        spec.n = bc.n;
        spec.p = p;
        spec.rho = bc.rho;
        for (Index left = p; left > 0; left -= std::min(left, bc.block_size)) spec.blocks.push_back(std::min(left, bc.block_size));
        spec.active = {0};
        double seconds[3] = {0, 0, 0};
        Index rows_used[3] = {0, 0, 0};
        double groups = 0.0;
        for (Index r = 0; r < bc.reps; ++r) {
            RngStream rng = RngStream(bc.seed, static_cast<std::uint64_t>(gi)).split(static_cast<std::uint64_t>(r));
            const SimulatedData sim = gen_grouped_gaussian(spec, rng.split(0));
            const StandardizedDataset sd = standardize(sim.data);
            const Matrix dummies = generate_dummies(bc.n, p, DummyDistribution::normal, rng.split(1));
            const GroupPartition part = discover_groups(sd.Xs, bc.rho_cut);
            groups += static_cast<double>(part.size());
            Matrix Xt(bc.n, 2 * p);
            Xt << sd.Xs, dummies;
            LarsOptions opts;
            opts.record_coefficients = false;
            opts.validate_standardized = false;
            opts.excluded = sd.constant;
            opts.excluded.resize(static_cast<std::size_t>(2 * p), false);
            const StopRule stop = StopRule::dummies(p, 1);
            for (int b = 0; b < 3; ++b) {
                const auto t0 = clock::now();
                if (b == 0) {
                    const SolutionPath path = lars_path(Xt, sd.ys, LarsMode::lasso, stop, opts);
                    rows_used[b] = Xt.rows();
                } else {
                    const AugmentedProblem aug =
                        b == 1 ? en_augment(Xt, sd.ys, bc.lambda2) : ien_augment(Xt, sd.ys, bc.lambda2, part);
                    const SolutionPath path = lars_path(aug.X, aug.y, LarsMode::lasso, stop, opts);
                    rows_used[b] = aug.X.rows();
                }
                seconds[b] += std::chrono::duration<double>(clock::now() - t0).count();
            }
        }
        for (int b = 0; b < 3; ++b) {
            BenchRow row;
            row.p = p;
            row.base = bases[b];
            row.mean_seconds = seconds[b] / static_cast<double>(bc.reps);
            row.ratio = seconds[0] > 0.0 ? seconds[b] / seconds[0] : 0.0;
            row.augmented_rows = rows_used[b];
            row.mean_groups = groups / static_cast<double>(bc.reps);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace trex
