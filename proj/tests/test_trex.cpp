#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trex/simulate.hpp"
#include "trex/trex.hpp"

namespace {

using namespace trex;
using trex::testing::binomial_upper_tail;
using trex::testing::deflated_fdp_from_counts;
using trex::testing::mann_whitney_p;

OccurrenceTable table_from(int K, const std::vector<std::vector<int>>& counts) {
    OccurrenceTable occ;
    occ.K = K;
    occ.p = static_cast<Index>(counts[0].size());
    occ.counts.resize(static_cast<Index>(counts.size()), occ.p);
    for (std::size_t t = 0; t < counts.size(); ++t)
        for (std::size_t j = 0; j < counts[t].size(); ++j)
            occ.counts(static_cast<Index>(t), static_cast<Index>(j)) = counts[t][j];
    return occ;
}

ExperimentRecord record(Index p, std::vector<std::pair<Index, bool>> seq, bool exhausted = false) {
    ExperimentRecord r;
    r.p = p;
    for (auto [v, d] : seq) {
        r.inclusions.push_back({v, d});
        r.dummy_count += d;
    }
    r.exhausted = exhausted;
    return r;
}

DesignSpec null_design() {
    DesignSpec s = DesignSpec::two_triples();
    s.active.clear();
    s.beta.clear();
    return s;
}

TEST(Dummies, NormalDrawsMatchMoments) {
    const Matrix D = draw_dummies(1000, 1, DummyDistribution::normal, RngStream(7, 0));
    const double mean = D.col(0).mean();
    const double var = (D.col(0).array() - mean).square().sum() / 999.0;
    EXPECT_NEAR(mean, 0.0, 0.1);
    EXPECT_NEAR(var, 1.0, 0.15);
}

TEST(Dummies, StandardizedAndDeterministic) {
    const Matrix A = generate_dummies(50, 4, DummyDistribution::normal, RngStream(3, 5));
    const Matrix B = generate_dummies(50, 4, DummyDistribution::normal, RngStream(3, 5));
    EXPECT_EQ(A, B);
    for (Index j = 0; j < 4; ++j) {
        EXPECT_NEAR(A.col(j).mean(), 0.0, 1e-12);
        EXPECT_NEAR(A.col(j).norm(), 1.0, 1e-12);
    }
    EXPECT_NE(A, generate_dummies(50, 4, DummyDistribution::normal, RngStream(3, 6)));
}

TEST(Dummies, UniformAccepted) {
    const Matrix U = draw_dummies(200, 3, DummyDistribution::uniform, RngStream(1, 1));
    EXPECT_LE(U.maxCoeff(), 1.0);
    EXPECT_GE(U.minCoeff(), -1.0);
    EXPECT_NO_THROW(generate_dummies(200, 3, DummyDistribution::uniform, RngStream(1, 1)));
    EXPECT_THROW(generate_dummies(0, 3, DummyDistribution::normal, RngStream(1, 1)), ConfigError);
}

TEST(Experiment, SingleDummyTerminatesAtItsEntry) {
    const auto sim = gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(11, 0));
    const auto sd = standardize(sim.data);
    ExperimentInputs in;
    in.Xs = &sd.Xs;
    in.ys = &sd.ys;
    const Matrix d = generate_dummies(sd.n(), 1, DummyDistribution::normal, RngStream(11, 1));
    const auto rec = run_experiment(in, d, 1);
    ASSERT_FALSE(rec.inclusions.empty());
    EXPECT_TRUE(rec.inclusions.back().dummy);
    EXPECT_EQ(rec.dummy_count, 1);
    EXPECT_FALSE(rec.exhausted);
    for (std::size_t i = 0; i + 1 < rec.inclusions.size(); ++i) EXPECT_FALSE(rec.inclusions[i].dummy);
}

TEST(Experiment, EnAndIenRequirePenalty) {
    const auto sim = gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(12, 0));
    const auto sd = standardize(sim.data);
    ExperimentInputs in;
    in.Xs = &sd.Xs;
    in.ys = &sd.ys;
    in.base = BaseSelector::en;
    const Matrix d = generate_dummies(sd.n(), 10, DummyDistribution::normal, RngStream(12, 1));
    EXPECT_THROW(run_experiment(in, d, 1), ConfigError);
    in.base = BaseSelector::ien;
    in.penalty = PenaltyConfig{1.0, std::nullopt, DummyPenalty::none};
    EXPECT_THROW(run_experiment(in, d, 1), ConfigError);
}

TEST(Experiment, NullsRarelyPrecedeFirstDummy) {
    double total = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
        const auto sim = gen_grouped_gaussian(null_design(), RngStream(seed, 0));
        const auto sd = standardize(sim.data);
        ExperimentInputs in;
        in.Xs = &sd.Xs;
        in.ys = &sd.ys;
        const auto rec = run_experiment(in, generate_dummies(sd.n(), sd.p(), DummyDistribution::normal, RngStream(seed, 1)), 1);
        total += static_cast<double>(rec.inclusions.size() - 1);
    }
    EXPECT_LT(total / 100.0, 100.0 / 10.0);
}

TEST(Experiment, ActivesPrecedeFirstDummyMostly) {
    int all_six = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const auto sim = gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(seed, 0));
        const auto sd = standardize(sim.data);
        ExperimentInputs in;
        in.Xs = &sd.Xs;
        in.ys = &sd.ys;
        const auto rec = run_experiment(in, generate_dummies(sd.n(), sd.p(), DummyDistribution::normal, RngStream(seed, 1)), 1);
        std::set<Index> c1;
        for (const auto& inc : rec.inclusions)
            if (!inc.dummy) c1.insert(inc.variable);
        all_six += std::all_of(sim.truth.begin(), sim.truth.end(), [&](Index j) { return c1.count(j) > 0; });
    }
    EXPECT_GT(all_six, 50);
}

TEST(Experiment, DummiesExchangeableWithNulls) {
    // Entry rank of the independent null column 50 vs dummy 0 on pure noise; never entering ranks last.
    std::vector<double> real_rank, dummy_rank;
    for (int seed = 0; seed < 200; ++seed) {
        const auto sim = gen_grouped_gaussian(null_design(), RngStream(seed, 0));
        const auto sd = standardize(sim.data);
        const Matrix d = generate_dummies(sd.n(), sd.p(), DummyDistribution::normal, RngStream(seed, 1));
        Matrix Xt(sd.n(), 2 * sd.p());
        Xt << sd.Xs, d;
        LarsOptions opts;
        opts.record_coefficients = false;
        const auto path = lars_path(Xt, sd.ys, LarsMode::lasso, StopRule::full(), opts);
        double r_real = 1e6, r_dummy = 1e6;
        for (std::size_t i = 0; i < path.events.size(); ++i) {
            const auto& ev = path.events[i];
            if (ev.kind != EventKind::enter) continue;
            if (ev.variable == 50) r_real = std::min(r_real, double(i));
            if (ev.variable == sd.p()) r_dummy = std::min(r_dummy, double(i));
        }
        real_rank.push_back(r_real);
        dummy_rank.push_back(r_dummy);
    }
    EXPECT_GT(mann_whitney_p(real_rank, dummy_rank), 0.01);
}

TEST(Fuse, UnanimityAbsenceAndHalf) {
    // K = 2, p = 3: variable 0 in both, 1 in neither, 2 in exactly one.
    const std::vector<ExperimentRecord> recs = {record(3, {{0, false}, {2, false}, {0, true}}),
                                                record(3, {{0, false}, {0, true}, {2, false}})};
    const auto occ = fuse(recs, 3, 1);
    EXPECT_EQ(occ.phi(1, 0), 1.0);
    EXPECT_EQ(occ.phi(1, 1), 0.0);
    EXPECT_EQ(occ.phi(1, 2), 0.5);
}

TEST(Fuse, CandidateSetsStrictlyBeforeTthDummy) {
    const std::vector<ExperimentRecord> recs = {
        record(4, {{3, false}, {0, true}, {1, false}, {1, true}, {2, false}, {2, true}}),
        record(4, {{0, true}, {3, false}, {1, true}, {0, false}, {2, true}})};
    const auto occ = fuse(recs, 4, 3);
    EXPECT_EQ(occ.counts.row(0), (Eigen::RowVector4i() << 0, 0, 0, 1).finished());
    EXPECT_EQ(occ.counts.row(1), (Eigen::RowVector4i() << 0, 1, 0, 2).finished());
    EXPECT_EQ(occ.counts.row(2), (Eigen::RowVector4i() << 1, 1, 1, 2).finished());
}

TEST(Fuse, RejectsInconsistentRecords) {
    std::vector<ExperimentRecord> recs = {record(3, {{0, true}}), record(4, {{0, true}})};
    EXPECT_THROW(fuse(recs, 3, 1), InputError);
    recs = {record(3, {{0, true}}), record(3, {{0, true}})};
    EXPECT_THROW(fuse(recs, 3, 2), ConfigError);
    recs = {record(3, {{1, false}}, true), record(3, {{0, true}})};
    EXPECT_NO_THROW(fuse(recs, 3, 1));
}

TEST(BinomialEstimator, TailMatchesExactSummation) {
    const Index p = 100;
    const double vhat = BinomialTailEstimator::expected_false(0.5, 1, 20, 100, p);
    EXPECT_NEAR(vhat, p * binomial_upper_tail(20, 0.01, 10.0), 1e-12 * p);
    for (int T : {1, 3, 7, 20})
        for (double v : {0.5, 0.65, 0.9})
            EXPECT_NEAR(BinomialTailEstimator::expected_false(v, T, 20, 40, 50),
                        50 * binomial_upper_tail(20, T / 40.0, std::floor(v * 20 + 1e-9)), 1e-10);
}

TEST(BinomialEstimator, DegenerateLimits) {
    EXPECT_LT(BinomialTailEstimator::expected_false(0.5, 1, 20, 1000000, 100), 1e-40);
    EXPECT_DOUBLE_EQ(BinomialTailEstimator::expected_false(0.5, 10, 20, 10, 100), 100.0);
    // All 4 variables always included at T = L = 1: FDP estimate min(1, p / |A|) = 1.
    const auto occ = table_from(20, {{20, 20, 20, 20}});
    EXPECT_DOUBLE_EQ(BinomialTailEstimator().estimate(0.5, 1, occ, 1), 1.0);
    EXPECT_THROW(BinomialTailEstimator::expected_false(0.5, 3, 20, 2, 10), ConfigError);
}

TEST(BinomialEstimator, MonotoneInVAndT) {
    for (int T = 1; T < 10; ++T)
        for (int i = 0; i + 1 < 20; ++i) {
            const double v = 0.5 + i / 40.0;
            const double here = BinomialTailEstimator::expected_false(v, T, 20, 30, 100);
            EXPECT_GE(here + 1e-15, BinomialTailEstimator::expected_false(v + 1 / 40.0, T, 20, 30, 100));
            EXPECT_LE(here, BinomialTailEstimator::expected_false(v, T + 1, 20, 30, 100) + 1e-15);
        }
}

TEST(DeflatedEstimator, MatchesLoopOracle) {
    RngStream rng(21, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const int K = 10, p = 15, T = 4, L = 15;
        std::vector<std::vector<int>> counts(T, std::vector<int>(p, 0));
        for (int j = 0; j < p; ++j) {
            int c = 0;
            for (int t = 0; t < T; ++t) {
                c = std::min(K, c + static_cast<int>(rng.below(4)));
                counts[t][j] = c;
            }
        }
        const auto occ = table_from(K, counts);
        for (int t = 1; t <= T; ++t)
            for (double v : {0.5, 0.7, 0.9})
                EXPECT_NEAR(DeflatedEstimator().estimate(v, t, occ, L), deflated_fdp_from_counts(counts, K, L, t, v), 1e-12);
    }
}

TEST(DeflatedEstimator, HandComputedCase) {
    // K = 2, p = 3, L = 3, T = 1: counts (2, 1, 0).
    // sum Phi = 1.5, nulls = (3 - 1.5) / 3 = 0.5, scale = 1 - 0.5 / 1.5 = 2/3.
    // v = 0.5 selects only variable 0: FDP estimate = 1 - 2/3 = 1/3.
    const auto occ = table_from(2, {{2, 1, 0}});
    EXPECT_NEAR(DeflatedEstimator().estimate(0.5, 1, occ, 3), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(DeflatedEstimator().estimate(0.99, 1, table_from(2, {{0, 0, 0}}), 3), 0.0);
}

TEST(Calibrate, AlphaZeroOnlyZeroEstimates) {
    const auto occ = table_from(4, {{4, 3, 1, 0}, {4, 4, 2, 1}});
    TrexConfig cfg;
    cfg.K = 4;
    cfg.L = 4;
    cfg.T_max = 2;
    const auto cal = calibrate(occ, cfg, 0.0, DeflatedEstimator());
    for (const auto& pt : cal.surface)
        if (pt.fdp_hat > 0.0) EXPECT_FALSE(cal.feasible && pt.T == cal.T_star && pt.v == cal.v_star);
    if (cal.feasible) EXPECT_EQ(cal.fdp_hat, 0.0);
    else {
        EXPECT_TRUE(cal.selected.empty());
        EXPECT_EQ(cal.T_star, 1);
        EXPECT_EQ(cal.v_star, cfg.resolved_voting_grid().back());
    }
}

TEST(Calibrate, AlphaOnePicksLargestSelection) {
    const auto occ = table_from(4, {{4, 3, 1, 0}, {4, 4, 3, 1}, {4, 4, 4, 3}});
    TrexConfig cfg;
    cfg.K = 4;
    cfg.L = 6;
    cfg.T_max = 3;
    const auto cal = calibrate(occ, cfg, 1.0, DeflatedEstimator());
    EXPECT_TRUE(cal.feasible);
    EXPECT_EQ(cal.T_star, 3);
    EXPECT_EQ(cal.selected, (std::vector<Index>{0, 1, 2, 3}));
    EXPECT_EQ(cal.surface.size(), 3u * 4u);
}

TEST(Calibrate, StopsRaisingTOnceLargestVoteInfeasible) {
    const auto occ = table_from(2, {{2, 2, 0, 0}, {2, 2, 2, 2}, {2, 2, 2, 2}});
    TrexConfig cfg;
    cfg.K = 2;
    cfg.L = 3;
    cfg.T_max = 3;
    const auto cal = calibrate(occ, cfg, 0.2, BinomialTailEstimator());
    EXPECT_TRUE(cal.stopped);
    EXPECT_LT(cal.T_stop, 3);
}

TEST(Calibrate, SurfaceMonotoneInSelectionSize) {
    const auto sim = gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(31, 0));
    TrexConfig cfg;
    cfg.T_max = 5;
    TrexSelector sel(sim.data, cfg);
    sel.ensure_level(5);
    const auto rep = sel.select(1.0);
    const auto& occ = rep.occurrences;
    for (Index t = 1; t <= occ.T(); ++t)
        for (Index j = 0; j < occ.p; ++j) {
            if (t > 1) {
                EXPECT_GE(occ.counts(t - 1, j), occ.counts(t - 2, j));
            }
            EXPECT_GE(occ.counts(t - 1, j), 0);
            EXPECT_LE(occ.counts(t - 1, j), occ.K);
        }
    const auto grid = cfg.resolved_voting_grid();
    for (Index t = 1; t <= occ.T(); ++t)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (i + 1 < grid.size()) {
                EXPECT_GE(occ.n_selected(t, grid[i]), occ.n_selected(t, grid[i + 1]));
            }
            if (t < occ.T()) {
                EXPECT_LE(occ.n_selected(t, grid[i]), occ.n_selected(t + 1, grid[i]));
            }
        }
}

TEST(Config, Validation) {
    TrexConfig cfg;
    EXPECT_NO_THROW(cfg.validate(10));
    cfg.K = 1;
    EXPECT_THROW(cfg.validate(10), ConfigError);
    cfg = {};
    cfg.alpha = 1.5;
    EXPECT_THROW(cfg.validate(10), ConfigError);
    cfg = {};
    cfg.voting_grid = {0.4};
    EXPECT_THROW(cfg.validate(10), ConfigError);
    cfg = {};
    cfg.base = BaseSelector::ien;
    EXPECT_THROW(cfg.validate(10), ConfigError);
    cfg.rho_cut = 0.5;
    EXPECT_NO_THROW(cfg.validate(10));
    cfg = {};
    EXPECT_EQ(cfg.resolved_L(40), 40);
    EXPECT_EQ(cfg.resolved_T_max(40), 2);
    EXPECT_EQ(cfg.resolved_T_max(10), 1);
    cfg.L_multiplier = 3;
    EXPECT_EQ(cfg.resolved_L(40), 120);
    cfg.K = 4;
    EXPECT_EQ(cfg.resolved_voting_grid(), (std::vector<double>{0.5, 0.625, 0.75, 0.875}));
}

TEST(Select, ReportInvariants) {
    const auto sim = gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(41, 0));
    for (BaseSelector base : {BaseSelector::lasso, BaseSelector::en, BaseSelector::ien}) {
        TrexConfig cfg;
        cfg.base = base;
        cfg.rho_cut = 0.2;
        cfg.alpha = 0.2;
        const auto rep = trex_select(sim.data, cfg);
        const auto& cal = rep.calibration;
        EXPECT_EQ(cal.selected, rep.occurrences.selected(cal.T_star, cal.v_star));
        if (cal.feasible) EXPECT_LE(cal.fdp_hat, 0.2);
        EXPECT_EQ(static_cast<Index>(rep.experiments.size()), cfg.K);
        EXPECT_EQ(rep.lambda2.has_value(), base != BaseSelector::lasso);
    }
}

TEST(Select, AlphaZeroOnNoiseIsEmpty) {
    const auto sim = gen_grouped_gaussian(null_design(), RngStream(42, 0));
    TrexConfig cfg;
    cfg.alpha = 0.0;
    const auto rep = trex_select(sim.data, cfg);
    EXPECT_TRUE(rep.selected().empty());
}

TEST(Select, DeterministicAcrossThreadCounts) {
    const auto sim = gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(43, 0));
    TrexConfig cfg;
    cfg.base = BaseSelector::ien;
    cfg.rho_cut = 0.2;
    cfg.seed = 99;
    cfg.threads = 1;
    const auto a = report_to_json(trex_select(sim.data, cfg)).dump();
    cfg.threads = 4;
    const auto b = report_to_json(trex_select(sim.data, cfg)).dump();
    EXPECT_EQ(a, b);
    cfg.seed = 100;
    EXPECT_NE(a, report_to_json(trex_select(sim.data, cfg)).dump());
}

TEST(Select, ReusedExperimentsMatchFreshRuns) {
    const auto sim = gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(44, 0));
    TrexConfig cfg;
    cfg.seed = 5;
    TrexSelector shared(sim.data, cfg);
    const auto loose = shared.select(0.5);
    const auto strict = shared.select(0.1);
    cfg.alpha = 0.1;
    const auto fresh = trex_select(sim.data, cfg);
    EXPECT_EQ(strict.selected(), fresh.selected());
    EXPECT_EQ(strict.calibration.T_star, fresh.calibration.T_star);
    EXPECT_GE(loose.selected().size(), strict.selected().size());
}

TEST(MonteCarlo, FdrControlOnNoise) {
    TrexConfig cfg;
    cfg.alpha = 0.1;
    const auto mc = monte_carlo(null_design(), cfg, 100, 2024, default_thread_count());
    EXPECT_LE(mc.arms[0].mean_fdp, 0.15);
    EXPECT_EQ(mc.arms[0].mean_tpp, 0.0);
}

TEST(MonteCarlo, FdrControlTwoTriples) {
    TrexConfig cfg;
    cfg.alpha = 0.2;
    cfg.rho_cut = 0.2;
    const auto mc = monte_carlo(DesignSpec::two_triples(), cfg, 100, 2025, default_thread_count(),
                                {BaseSelector::lasso, BaseSelector::en, BaseSelector::ien});
    for (const auto& arm : mc.arms) EXPECT_LE(arm.mean_fdp, 0.25) << to_string(arm.base);
}

TEST(MonteCarlo, IenCoSelectsDetectedGroups) {
    TrexConfig cfg;
    cfg.alpha = 0.2;
    cfg.rho_cut = 0.2;
    cfg.base = BaseSelector::ien;
    const auto mc = monte_carlo(DesignSpec::two_triples(), cfg, 100, 2026, default_thread_count());
    int detected = 0, whole = 0;
    for (const auto& o : mc.arms[0].outcomes) {
        const std::set<Index> sel(o.selected.begin(), o.selected.end());
        for (Index g = 0; g < 2; ++g) {
            int hits = 0;
            for (Index j = 3 * g; j < 3 * g + 3; ++j) hits += static_cast<int>(sel.count(j));
            if (hits == 0) continue;
            ++detected;
            whole += hits == 3;
        }
    }
    ASSERT_GT(detected, 0);
    EXPECT_GE(static_cast<double>(whole) / detected, 0.8) << whole << " of " << detected;
}

TEST(Report, JsonFields) {
    const auto sim = gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(45, 0));
    TrexConfig cfg;
    cfg.alpha = 0.2;
    const auto rep = trex_select(sim.data, cfg);
    const auto j = report_to_json(rep);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["selected"].size(), rep.selected().size());
    EXPECT_EQ(j["phi_at_T_star"].size(), 100u);
    EXPECT_EQ(j["config"]["base"], "lasso");
    EXPECT_EQ(j["experiments"].size(), 20u);
    EXPECT_FALSE(j.contains("timings"));
    const auto t = timings_to_json(rep.timings);
    EXPECT_TRUE(t.contains("experiments"));
}

}  // namespace
