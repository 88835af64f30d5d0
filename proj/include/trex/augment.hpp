#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "trex/core.hpp"
#include "trex/error.hpp"
#include "trex/grouping.hpp"

namespace trex {

/// Whether dummy columns (beyond the partition) get their own ridge rows under IEN.
enum class DummyPenalty { none, singleton_groups };

struct PenaltyConfig {
    double lambda2 = 1.0;
    std::optional<GroupPartition> partition;  // present for IEN
    DummyPenalty dummy_policy = DummyPenalty::none;
};

/// Design with appended penalty rows; the trailing `extra_rows` entries of y are zero.
struct AugmentedProblem {
    Matrix X;
    Vector y;
    Index original_rows = 0;
    Index extra_rows = 0;
};

namespace detail {

inline void check_lambda2(double lambda2) {
    if (!(lambda2 > 0.0) || !std::isfinite(lambda2)) throw ConfigError("lambda2 must be positive and finite");
}

inline AugmentedProblem allocate_augmented(const Matrix& X, const Vector& y, Index extra) {
    if (y.size() != X.rows()) throw InputError("response length does not match design rows");
    AugmentedProblem aug;
    aug.original_rows = X.rows();
    aug.extra_rows = extra;
    aug.X = Matrix::Zero(X.rows() + extra, X.cols());
    aug.X.topRows(X.rows()) = X;
    aug.y = Vector::Zero(X.rows() + extra);
    aug.y.head(X.rows()) = y;
    return aug;
}

}  // namespace detail

/**
 * Ridge augmentation: sqrt(lambda2) * I appended below X, zeros below y.
 * Lasso on the result equals the elastic net on (X, y).
 */
inline AugmentedProblem en_augment(const Matrix& X, const Vector& y, double lambda2) {
    detail::check_lambda2(lambda2);
    AugmentedProblem aug = detail::allocate_augmented(X, y, X.cols());
    const double s = std::sqrt(lambda2);
    for (Index j = 0; j < X.cols(); ++j) aug.X(X.rows() + j, j) = s;
    return aug;
}

/**
 * Group-mean augmentation: one row sqrt(lambda2) * 1_m' / sqrt(p_m) per group.
 *
 * The partition covers the leading columns of X. Any trailing columns are
 * dummies; they get one singleton row each under DummyPenalty::singleton_groups
 * and no rows otherwise.
 */
inline AugmentedProblem ien_augment(const Matrix& X, const Vector& y, double lambda2, const GroupPartition& part,
                                    DummyPenalty dummies = DummyPenalty::none) {
    detail::check_lambda2(lambda2);
    if (part.p() > X.cols())
        throw InputError("partition covers " + std::to_string(part.p()) + " variables but the design has " +
                         std::to_string(X.cols()) + " columns");
    const Index trailing = X.cols() - part.p();
    const Index extra = part.size() + (dummies == DummyPenalty::singleton_groups ? trailing : 0);
    AugmentedProblem aug = detail::allocate_augmented(X, y, extra);
    const double s = std::sqrt(lambda2);
    Index row = X.rows();
    for (Index m = 0; m < part.size(); ++m, ++row) {
        const double v = s / std::sqrt(static_cast<double>(part.group_size(m)));
        for (Index j : part.members(m)) aug.X(row, j) = v;
    }
    if (dummies == DummyPenalty::singleton_groups)
        for (Index j = part.p(); j < X.cols(); ++j, ++row) aug.X(row, j) = s;
    return aug;
}

inline AugmentedProblem augment(const Matrix& X, const Vector& y, const PenaltyConfig& cfg) {
    if (cfg.partition) return ien_augment(X, y, cfg.lambda2, *cfg.partition, cfg.dummy_policy);
    return en_augment(X, y, cfg.lambda2);
}

/// ||y' - X' b||^2 + lambda1 ||b||_1 on an augmented problem.
inline double augmented_objective(const AugmentedProblem& aug, const Vector& beta, double lambda1) {
    return (aug.y - aug.X * beta).squaredNorm() + lambda1 * beta.lpNorm<1>();
}

inline double en_lagrangian(const Vector& beta, const Matrix& X, const Vector& y, double lambda1, double lambda2) {
    return (y - X * beta).squaredNorm() + lambda1 * beta.lpNorm<1>() + lambda2 * beta.squaredNorm();
}

inline double ien_lagrangian(const Vector& beta, const Matrix& X, const Vector& y, double lambda1, double lambda2,
                             const GroupPartition& part) {
    if (part.p() != beta.size()) throw InputError("partition does not match coefficient length");
    double group_term = 0.0;
    for (Index m = 0; m < part.size(); ++m) {
        double sum = 0.0;
        for (Index j : part.members(m)) sum += beta[j];
        group_term += sum * sum / static_cast<double>(part.group_size(m));
    }
    return (y - X * beta).squaredNorm() + lambda1 * beta.lpNorm<1>() + lambda2 * group_term;
}

/// Group mean 1_m' b / p_m.
inline double group_mean(const Vector& beta, const GroupPartition& part, Index m) {
    double sum = 0.0;
    for (Index j : part.members(m)) sum += beta[j];
    return sum / static_cast<double>(part.group_size(m));
}

/**
 * Largest violation of the IEN stationarity conditions over nonzero coefficients:
 * -2 x_j' r + lambda1 sign(b_j) + 2 lambda2 (1_m' b) / p_m = 0.
 */
inline double ien_stationarity_residual(const Vector& beta, const Matrix& X, const Vector& y, double lambda1,
                                        double lambda2, const GroupPartition& part) {
    const Vector corr = X.transpose() * (y - X * beta);
    double worst = 0.0;
    for (Index j = 0; j < beta.size(); ++j) {
        if (beta[j] == 0.0) continue;
        const double sg = beta[j] > 0.0 ? 1.0 : -1.0;
        const double g = group_mean(beta, part, part.group_of(j));
        worst = std::max(worst, std::abs(-2.0 * corr[j] + lambda1 * sg + 2.0 * lambda2 * g));
    }
    return worst;
}

struct GroupingBound {
    double lhs = 0.0;  // |1_a'b/p_a - 1_b'b/p_b| / ||y||
    double rhs = 0.0;  // sqrt(2 (1 - rho_max)) / lambda2 over pairs with b_j b_j' > 0
    double rho_max = 0.0;
    double rhs_all_pairs = 0.0;  // same with rho maximized over every inter-group pair
    double rho_max_all_pairs = 0.0;
};

/**
 * Normalized gap between the averaged coefficients of two groups and the
 * grouping-effect bound. The bound follows from subtracting the stationarity
 * conditions of a pair (j in G_a, j' in G_b) with b_j b_j' > 0, so rho is
 * maximized over such pairs; the all-pairs variant is reported alongside.
 */
inline GroupingBound grouping_gap_and_bound(const Vector& beta, const GroupPartition& part, Index group_a,
                                            Index group_b, double lambda2, const Matrix& Xs, const Vector& ys) {
    detail::check_lambda2(lambda2);
    if (group_a == group_b) throw ConfigError("grouping bound needs two distinct groups");
    const double ynorm = ys.norm();
    if (!(ynorm > 0.0)) throw InputError("response has zero norm");
    double rho_q = -std::numeric_limits<double>::infinity();
    double rho_all = -std::numeric_limits<double>::infinity();
    for (Index j : part.members(group_a)) {
        for (Index k : part.members(group_b)) {
            const double rho = std::clamp(Xs.col(j).dot(Xs.col(k)), -1.0, 1.0);
            rho_all = std::max(rho_all, rho);
            if (beta[j] * beta[k] > 0.0) rho_q = std::max(rho_q, rho);
        }
    }
    if (rho_q == -std::numeric_limits<double>::infinity())
        throw ConfigError("bound inapplicable: no pair across the groups has same-sign nonzero coefficients");
    GroupingBound out;
    out.lhs = std::abs(group_mean(beta, part, group_a) - group_mean(beta, part, group_b)) / ynorm;
    out.rho_max = rho_q;
    out.rhs = std::sqrt(std::max(0.0, 2.0 * (1.0 - rho_q))) / lambda2;
    out.rho_max_all_pairs = rho_all;
    out.rhs_all_pairs = std::sqrt(std::max(0.0, 2.0 * (1.0 - rho_all))) / lambda2;
    return out;
}

/// `count` logarithmically spaced values in [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g;
    if (count == 1) return {lo};
    for (int i = 0; i < count; ++i)
        g.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (count - 1)));
    return g;
}

inline std::vector<double> default_lambda2_grid() { return log_grid(1e-4, 1e4, 10); }

/**
 * K-fold cross-validated ridge penalty. Row i belongs to fold i mod `folds`.
 * Each fold is solved once through an eigendecomposition of the smaller of
 * X'X and XX', so the whole grid costs one factorization per fold.
 * Ties go to the smaller penalty.
 */
inline double ridge_cv_lambda2(const Matrix& Xs, const Vector& ys, std::vector<double> grid, Index folds = 5) {
    if (grid.empty()) throw ConfigError("lambda2 grid is empty");
    if (folds < 2) throw ConfigError("ridge cross-validation needs at least 2 folds");
    if (Xs.rows() < folds) throw InputError("fewer samples than cross-validation folds");
    for (double g : grid) detail::check_lambda2(g);
    std::sort(grid.begin(), grid.end());
    if (grid.size() == 1) return grid.front();

    const Index n = Xs.rows();
    const Index p = Xs.cols();
    std::vector<double> sse(grid.size(), 0.0);
    for (Index f = 0; f < folds; ++f) {
        std::vector<Index> train, test;
        for (Index i = 0; i < n; ++i) (i % folds == f ? test : train).push_back(i);
        const Matrix Xt = Xs(train, Eigen::all);
        const Vector yt = ys(train);
        const Matrix Xv = Xs(test, Eigen::all);
        const Vector yv = ys(test);
        const Index nt = Xt.rows();
        if (p <= nt) {
            Matrix G = Matrix::Zero(p, p);
            G.selfadjointView<Eigen::Lower>().rankUpdate(Xt.transpose());
            Eigen::SelfAdjointEigenSolver<Matrix> eig(G.selfadjointView<Eigen::Lower>());
            const Vector proj = eig.eigenvectors().transpose() * (Xt.transpose() * yt);
            const Matrix XvV = Xv * eig.eigenvectors();
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const Vector coef = (proj.array() / (eig.eigenvalues().array().max(0.0) + grid[g])).matrix();
                sse[g] += (yv - XvV * coef).squaredNorm();
            }
        } else {
            Matrix K = Matrix::Zero(nt, nt);
            K.selfadjointView<Eigen::Lower>().rankUpdate(Xt);
            Eigen::SelfAdjointEigenSolver<Matrix> eig(K.selfadjointView<Eigen::Lower>());
            const Vector proj = eig.eigenvectors().transpose() * yt;
            const Matrix cross = (Xv * Xt.transpose()) * eig.eigenvectors();
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const Vector coef = (proj.array() / (eig.eigenvalues().array().max(0.0) + grid[g])).matrix();
                sse[g] += (yv - cross * coef).squaredNorm();
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (sse[g] < sse[best]) best = g;
    return grid[best];
}

}  // namespace trex
