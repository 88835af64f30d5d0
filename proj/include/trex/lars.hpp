#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trex/core.hpp"
#include "trex/error.hpp"

namespace trex {

enum class LarsMode { lar, lasso };

enum class EventKind { enter, drop };

struct PathEvent {
    Index step = 0;  // breakpoint index at which the event happens
    EventKind kind = EventKind::enter;
    Index variable = 0;
    double penalty = 0.0;  // max |x_j' r| at the breakpoint
};

/// When to stop tracing the path. Disabled criteria are zero / negative.
struct StopRule {
    Index max_steps = 0;        // number of events (enter + drop); 0 = unlimited
    Index dummy_boundary = -1;  // columns >= boundary are dummies
    Index max_dummies = 0;      // distinct dummy entries; 0 = disabled
    double penalty_floor = 0.0;

    static StopRule full() { return {}; }
    static StopRule steps(Index n) {
        StopRule r;
        r.max_steps = n;
        return r;
    }
    static StopRule dummies(Index boundary, Index count) {
        if (boundary < 0) throw ConfigError("dummy-count stop rule needs the dummy region boundary");
        if (count < 1) throw ConfigError("dummy-count stop rule needs a positive count");
        StopRule r;
        r.dummy_boundary = boundary;
        r.max_dummies = count;
        return r;
    }
    static StopRule floor(double lambda) {
        if (!(lambda > 0.0)) throw ConfigError("penalty floor must be positive");
        StopRule r;
        r.penalty_floor = lambda;
        return r;
    }
};

enum class StopReason { max_steps, dummy_count, penalty_floor, exhausted };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::max_steps: return "max_steps";
        case StopReason::dummy_count: return "dummy_count";
        case StopReason::penalty_floor: return "penalty_floor";
        case StopReason::exhausted: return "exhausted";
    }
    return "unknown";
}

struct SolutionPath {
    Index n_variables = 0;
    std::vector<PathEvent> events;
    std::vector<double> breakpoint_penalties;
    Matrix coefficients;  // n_variables x breakpoints; empty unless recorded
    Vector final_coefficients;
    double final_penalty = 0.0;
    std::vector<Index> active;  // active set at the end, in entry order
    std::vector<Index> excluded;  // entrants skipped for collinearity
    StopReason reason = StopReason::exhausted;
    Index dummy_entries = 0;

    bool has_coefficients() const noexcept { return coefficients.cols() > 0; }
};

struct LarsOptions {
    bool record_coefficients = true;
    bool validate_standardized = true;
    std::vector<bool> excluded;  // columns that may never enter; empty = none
    double rcond_tol = 1e-12;
    double step_tol = 1e-12;
};

namespace detail {

template <class Derived>
void check_standardized(const Eigen::MatrixBase<Derived>& X, const Vector& y) {
    constexpr double tol = 1e-8;
    for (Index j = 0; j < X.cols(); ++j) {
        const double mu = X.col(j).mean();
        const double nrm = X.col(j).norm();
        if (std::abs(mu) > tol || (nrm != 0.0 && std::abs(nrm - 1.0) > tol))
            throw InputError("column " + std::to_string(j) + " is not standardized (mean " + std::to_string(mu) +
                             ", norm " + std::to_string(nrm) + ")");
    }
    if (std::abs(y.mean()) > tol * std::max(1.0, y.norm())) throw InputError("response is not centered");
}

/// Upper-triangular R with R'R equal to the Gram matrix of the active columns.
class ActiveCholesky {
public:
    explicit ActiveCholesky(Index capacity = 8) : R_(capacity, capacity) {}

    Index size() const noexcept { return k_; }

    /// Returns false (leaving the factor untouched) if the column is numerically dependent.
    bool append(const Vector& cross, double sq_norm, double rcond_tol) {
        if (k_ == R_.rows()) {
            Matrix grown = Matrix::Zero(2 * k_ + 1, 2 * k_ + 1);
            grown.topLeftCorner(k_, k_) = R_.topLeftCorner(k_, k_);
            R_.swap(grown);
        }
        Vector z = cross;
        if (k_ > 0) R_.topLeftCorner(k_, k_).transpose().triangularView<Eigen::Lower>().solveInPlace(z);
        const double d2 = sq_norm - (k_ > 0 ? z.squaredNorm() : 0.0);
        double max_diag2 = sq_norm;
        double min_diag2 = d2;
        for (Index i = 0; i < k_; ++i) {
            const double di = R_(i, i) * R_(i, i);
            max_diag2 = std::max(max_diag2, di);
            min_diag2 = std::min(min_diag2, di);
        }
        if (!(d2 > 0.0) || min_diag2 < rcond_tol * max_diag2) return false;
        if (k_ > 0) R_.col(k_).head(k_) = z;
        R_.row(k_).head(k_ + 1).setZero();
        R_(k_, k_) = std::sqrt(d2);
        ++k_;
        return true;
    }

    /// Delete position `pos` and restore triangularity with Givens rotations.
    void remove(Index pos) {
        for (Index c = pos; c + 1 < k_; ++c) R_.col(c).head(k_) = R_.col(c + 1).head(k_);
        for (Index i = pos; i + 1 < k_; ++i) {
            const double a = R_(i, i);
            const double b = R_(i + 1, i);
            const double r = std::hypot(a, b);
            if (r == 0.0) continue;
            const double c = a / r;
            const double s = b / r;
            for (Index col = i; col + 1 < k_; ++col) {
                const double t1 = R_(i, col);
                const double t2 = R_(i + 1, col);
                R_(i, col) = c * t1 + s * t2;
                R_(i + 1, col) = -s * t1 + c * t2;
            }
            R_(i + 1, i) = 0.0;
        }
        --k_;
        R_.col(k_).setZero();
        R_.row(k_).setZero();
    }

    /// Solves (R'R) w = rhs.
    Vector solve(const Vector& rhs) const {
        Vector w = rhs;
        auto Rk = R_.topLeftCorner(k_, k_);
        Rk.transpose().triangularView<Eigen::Lower>().solveInPlace(w);
        Rk.triangularView<Eigen::Upper>().solveInPlace(w);
        return w;
    }

private:
    Matrix R_;
    Index k_ = 0;
};

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace detail

/**
 * Least-angle regression path with optional Lasso modification.
 *
 * Traces the piecewise-linear path of min 1/2 ||y - X b||^2 + lambda ||b||_1
 * (lasso mode) from lambda = max|X'y| downward. Correlations are updated
 * incrementally; the active Gram matrix is held as a Cholesky factor that
 * is updated on entry and downdated on drop. An entrant whose column is
 * numerically dependent on the active set is excluded for the rest of the
 * path. Simultaneous events are broken by lowest column index.
 */
template <class Derived>
SolutionPath lars_path(const Eigen::MatrixBase<Derived>& X, const Vector& y, LarsMode mode, const StopRule& stop,
                       const LarsOptions& opts = {}) {
    const Index m = X.rows();
    const Index q = X.cols();
    if (y.size() != m) throw InputError("response length does not match design rows");
    if (q < 1) throw InputError("design has no columns");
    if (opts.validate_standardized) detail::check_standardized(X, y);
    if (!opts.excluded.empty() && static_cast<Index>(opts.excluded.size()) != q)
        throw ConfigError("exclusion mask length does not match column count");

    SolutionPath path;
    path.n_variables = q;

    Vector c = X.transpose() * y;
    Vector beta = Vector::Zero(q);
    const Vector sq_norms = X.colwise().squaredNorm().transpose();

    std::vector<char> excluded(static_cast<std::size_t>(q), 0);
    std::vector<char> active_flag(static_cast<std::size_t>(q), 0);
    std::vector<char> entered_ever(static_cast<std::size_t>(q), 0);
    for (Index j = 0; j < q; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if ((!opts.excluded.empty() && opts.excluded[uj]) || !(sq_norms[j] > 0.0)) excluded[uj] = 1;
    }

    std::vector<Index> active;
    std::vector<double> signs;
    detail::ActiveCholesky chol(std::min<Index>(std::max<Index>(m, 1), 64));
    std::vector<Vector> coef_cols;

    auto record_breakpoint = [&](double penalty) {
        path.breakpoint_penalties.push_back(penalty);
        if (opts.record_coefficients) coef_cols.push_back(beta);
    };
    auto overwrite_breakpoint = [&](double penalty) {
        path.breakpoint_penalties.back() = penalty;
        if (opts.record_coefficients) coef_cols.back() = beta;
    };
    auto current_step = [&]() { return static_cast<Index>(path.breakpoint_penalties.size()) - 1; };
    auto steps_exhausted = [&]() {
        return stop.max_steps > 0 && static_cast<Index>(path.events.size()) >= stop.max_steps;
    };

    // First entrant: largest |c_j|, lowest index on ties.
    double C = 0.0;
    Index entrant = -1;
    for (Index j = 0; j < q; ++j) {
        if (excluded[static_cast<std::size_t>(j)]) continue;
        if (std::abs(c[j]) > C) {
            C = std::abs(c[j]);
            entrant = j;
        }
    }
    const double C0 = C;
    record_breakpoint(C);
    if (entrant < 0 || C <= 0.0) {
        path.reason = StopReason::exhausted;
        path.final_coefficients = beta;
        path.final_penalty = C;
        return path;
    }

    Index just_dropped = -1;
    Vector u(m);
    Vector a(q);
    Vector cross;
    path.reason = StopReason::exhausted;

    while (true) {
        if (entrant >= 0) {
            const auto ue = static_cast<std::size_t>(entrant);
            const Index k = static_cast<Index>(active.size());
            cross.resize(k);
            for (Index i = 0; i < k; ++i) cross[i] = X.col(active[static_cast<std::size_t>(i)]).dot(X.col(entrant));
            if (chol.append(cross, sq_norms[entrant], opts.rcond_tol)) {
                active.push_back(entrant);
                signs.push_back(detail::sign_of(c[entrant]));
                active_flag[ue] = 1;
                path.events.push_back({current_step(), EventKind::enter, entrant, C});
                if (!entered_ever[ue]) {
                    entered_ever[ue] = 1;
                    if (stop.max_dummies > 0 && entrant >= stop.dummy_boundary) ++path.dummy_entries;
                }
                if (stop.max_dummies > 0 && path.dummy_entries >= stop.max_dummies) {
                    path.reason = StopReason::dummy_count;
                    break;
                }
                if (steps_exhausted()) {
                    path.reason = StopReason::max_steps;
                    break;
                }
            } else {
                excluded[ue] = 1;
                path.excluded.push_back(entrant);
            }
            entrant = -1;
        }
        if (active.empty()) break;

        // Equiangular direction.
        const Index k = static_cast<Index>(active.size());
        Vector s(k);
        for (Index i = 0; i < k; ++i) s[i] = signs[static_cast<std::size_t>(i)];
        Vector w = chol.solve(s);
        const double sw = s.dot(w);
        if (!(sw > 0.0)) throw NumericalError("active Gram matrix lost positive definiteness");
        const double AA = 1.0 / std::sqrt(sw);
        w *= AA;
        u.setZero();
        for (Index i = 0; i < k; ++i) u.noalias() += w[i] * X.col(active[static_cast<std::size_t>(i)]);
        a.noalias() = X.transpose() * u;

        // Next entrant.
        double gamma = C / AA;
        Index next = -1;
        if (k < m) {
            double best = std::numeric_limits<double>::infinity();
            const double tie = C * (1.0 - 1e-12);
            for (Index j = 0; j < q; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                if (active_flag[uj] || excluded[uj]) continue;
                double g;
                if (j == just_dropped) {
                    // Sits on the boundary it just left; only the opposite boundary can be reached.
                    g = std::numeric_limits<double>::infinity();
                    if (c[j] >= 0.0 && AA + a[j] > 0.0) g = (C + c[j]) / (AA + a[j]);
                    if (c[j] < 0.0 && AA - a[j] > 0.0) g = (C - c[j]) / (AA - a[j]);
                    if (!(g < std::numeric_limits<double>::infinity())) continue;
                } else if (std::abs(c[j]) >= tie) {
                    g = 0.0;
                } else {
                    g = std::numeric_limits<double>::infinity();
                    const double d1 = AA - a[j];
                    const double d2 = AA + a[j];
                    if (d1 > 0.0) g = std::min(g, (C - c[j]) / d1);
                    if (d2 > 0.0) g = std::min(g, (C + c[j]) / d2);
                    if (!(g >= 0.0)) continue;
                }
                if (next < 0 || g < best - opts.step_tol * std::max(1.0, best)) {
                    best = g;
                    next = j;
                }
            }
            if (next >= 0 && best < gamma) {
                gamma = best;
            } else {
                next = -1;
            }
        }

        // Lasso modification: a coefficient reaching zero leaves the active set.
        Index drop_pos = -1;
        if (mode == LarsMode::lasso) {
            double best = gamma;
            for (Index i = 0; i < k; ++i) {
                const double bi = beta[active[static_cast<std::size_t>(i)]];
                if (bi == 0.0 || w[i] == 0.0) continue;
                const double z = -bi / w[i];
                if (z > 0.0 && z < best) {
                    best = z;
                    drop_pos = i;
                }
            }
            if (drop_pos >= 0) {
                gamma = best;
                next = -1;
            }
        }

        bool floor_hit = false;
        if (stop.penalty_floor > 0.0 && C - gamma * AA <= stop.penalty_floor) {
            gamma = std::max(0.0, (C - stop.penalty_floor) / AA);
            floor_hit = true;
            next = -1;
            drop_pos = -1;
        }

        for (Index i = 0; i < k; ++i) beta[active[static_cast<std::size_t>(i)]] += gamma * w[i];
        c.noalias() -= gamma * a;
        C = floor_hit ? stop.penalty_floor : C - gamma * AA;
        const bool reached_zero = next < 0 && drop_pos < 0 && !floor_hit;
        if (reached_zero) C = 0.0;

        if (gamma >= opts.step_tol || reached_zero || floor_hit)
            record_breakpoint(C);
        else
            overwrite_breakpoint(C);

        just_dropped = -1;
        if (drop_pos >= 0) {
            const Index j = active[static_cast<std::size_t>(drop_pos)];
            beta[j] = 0.0;
            chol.remove(drop_pos);
            active.erase(active.begin() + drop_pos);
            signs.erase(signs.begin() + drop_pos);
            active_flag[static_cast<std::size_t>(j)] = 0;
            if (opts.record_coefficients) coef_cols.back()[j] = 0.0;
            path.events.push_back({current_step(), EventKind::drop, j, C});
            just_dropped = j;
            if (steps_exhausted()) {
                path.reason = StopReason::max_steps;
                break;
            }
            continue;
        }
        if (floor_hit) {
            path.reason = StopReason::penalty_floor;
            break;
        }
        if (reached_zero || C <= 1e-13 * C0) {
            path.reason = StopReason::exhausted;
            break;
        }
        entrant = next;
    }

    path.final_coefficients = beta;
    path.final_penalty = C;
    path.active = active;
    if (opts.record_coefficients) {
        path.coefficients.resize(q, static_cast<Index>(coef_cols.size()));
        for (std::size_t b = 0; b < coef_cols.size(); ++b) path.coefficients.col(static_cast<Index>(b)) = coef_cols[b];
    }
    return path;
}

/**
 * Cumulative candidate sets read off an entry log: element t-1 holds the
 * variables below `boundary` that entered strictly before the t-th distinct
 * dummy entry. Re-entries count once.
 */
inline std::vector<std::vector<Index>> entries_until(const SolutionPath& path, Index boundary, Index T) {
    if (T < 1) throw ConfigError("T must be at least 1");
    std::vector<std::vector<Index>> sets;
    sets.reserve(static_cast<std::size_t>(T));
    std::vector<char> seen(static_cast<std::size_t>(path.n_variables), 0);
    std::vector<Index> current;
    for (const auto& ev : path.events) {
        if (ev.kind != EventKind::enter) continue;
        auto& flag = seen[static_cast<std::size_t>(ev.variable)];
        if (flag) continue;
        flag = 1;
        if (ev.variable >= boundary) {
            std::vector<Index> snapshot = current;
            std::sort(snapshot.begin(), snapshot.end());
            sets.push_back(std::move(snapshot));
            if (static_cast<Index>(sets.size()) == T) return sets;
        } else {
            current.push_back(ev.variable);
        }
    }
    throw NumericalError("path contains only " + std::to_string(sets.size()) + " dummy entries, " +
                         std::to_string(T) + " requested");
}

/// Plot-ready dump: one row per event with the coefficients at its breakpoint.
inline void write_path_csv(std::ostream& out, const SolutionPath& path, const std::vector<std::string>& names = {}) {
    if (!path.has_coefficients()) throw ConfigError("path was traced without recording coefficients");
    out.precision(17);
    out << "step,event,variable,penalty";
    for (Index j = 0; j < path.n_variables; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        out << ',' << (uj < names.size() ? names[uj] : "b" + std::to_string(j));
    }
    out << '\n';
    auto row = [&](Index step, const char* kind, const std::string& var, double penalty) {
        out << step << ',' << kind << ',' << var << ',' << penalty;
        for (Index j = 0; j < path.n_variables; ++j) out << ',' << path.coefficients(j, step);
        out << '\n';
    };
    for (const auto& ev : path.events)
        row(ev.step, ev.kind == EventKind::enter ? "enter" : "drop", std::to_string(ev.variable), ev.penalty);
    const Index last = static_cast<Index>(path.breakpoint_penalties.size()) - 1;
    if ((path.reason == StopReason::exhausted || path.reason == StopReason::penalty_floor) &&
        (path.events.empty() || path.events.back().step != last))
        row(last, "end", "", path.breakpoint_penalties.back());
}

}  // namespace trex
