#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "trex/core.hpp"
#include "trex/error.hpp"

namespace trex {

/// Pairwise correlations of standardized columns, rho(j, j') = x_j' x_j'.
inline Matrix correlation_matrix(const Matrix& Xs) {
    Matrix R = Matrix::Zero(Xs.cols(), Xs.cols());
    R.selfadjointView<Eigen::Lower>().rankUpdate(Xs.transpose());
    R = R.selfadjointView<Eigen::Lower>();
    R = R.cwiseMax(-1.0).cwiseMin(1.0);
    R.diagonal().setOnes();
    return R;
}

/// d(j, j') = 1 - rho, or 1 - |rho| when `absolute` is set.
inline Matrix correlation_distance(const Matrix& corr, bool absolute = false) {
    Matrix D = absolute ? Matrix((1.0 - corr.array().abs()).matrix()) : Matrix((1.0 - corr.array()).matrix());
    D.diagonal().setZero();
    return D;
}

struct Merge {
    Index a = 0;  // cluster ids: leaves are 0..p-1, merge i creates p + i
    Index b = 0;
    double height = 0.0;
    Index size = 0;
};

struct Dendrogram {
    Index n_leaves = 0;
    std::vector<Merge> merges;
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), Index{0});
    }
    Index find(Index x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            auto& px = parent_[static_cast<std::size_t>(x)];
            px = parent_[static_cast<std::size_t>(px)];
            x = px;
        }
        return x;
    }
    // Root is the smaller index so that merged roots stay deterministic.
    Index unite(Index x, Index y) {
        x = find(x);
        y = find(y);
        if (x == y) return x;
        if (y < x) std::swap(x, y);
        parent_[static_cast<std::size_t>(y)] = x;
        return x;
    }

private:
    std::vector<Index> parent_;
};

}  // namespace detail

/**
 * Single-linkage agglomerative clustering.
 *
 * Builds the minimum spanning tree with Prim's algorithm (O(p^2)) and replays
 * its edges in ascending weight order; each edge merges two clusters at the
 * edge weight, which is the minimum pairwise distance between them.
 */
inline Dendrogram single_linkage(const Matrix& dist) {
    const Index p = dist.rows();
    if (dist.cols() != p) throw InputError("distance matrix must be square");
    for (Index i = 0; i < p; ++i) {
        if (dist(i, i) != 0.0) throw InputError("distance matrix must have a zero diagonal");
        for (Index j = 0; j < i; ++j) {
            const double dij = dist(i, j);
            if (!std::isfinite(dij) || dij < 0.0) throw InputError("distances must be finite and nonnegative");
            if (std::abs(dij - dist(j, i)) > 1e-12 * std::max(1.0, std::abs(dij)))
                throw InputError("distance matrix is not symmetric");
        }
    }

    struct Edge {
        double w;
        Index u, v;
    };
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(std::max<Index>(p - 1, 0)));
    if (p > 1) {
        std::vector<char> in_tree(static_cast<std::size_t>(p), 0);
        std::vector<double> best(static_cast<std::size_t>(p), std::numeric_limits<double>::infinity());
        std::vector<Index> from(static_cast<std::size_t>(p), 0);
        Index cur = 0;
        in_tree[0] = 1;
        for (Index it = 1; it < p; ++it) {
            Index next = -1;
            double next_w = std::numeric_limits<double>::infinity();
            for (Index j = 0; j < p; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                if (in_tree[uj]) continue;
                const double d = dist(cur, j);
                if (d < best[uj]) {
                    best[uj] = d;
                    from[uj] = cur;
                }
                if (next < 0 || best[uj] < next_w) {
                    next_w = best[uj];
                    next = j;
                }
            }
            in_tree[static_cast<std::size_t>(next)] = 1;
            edges.push_back({next_w, std::min(from[static_cast<std::size_t>(next)], next),
                             std::max(from[static_cast<std::size_t>(next)], next)});
            cur = next;
        }
    }
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (x.w != y.w) return x.w < y.w;
        if (x.u != y.u) return x.u < y.u;
        return x.v < y.v;
    });

    Dendrogram dend;
    dend.n_leaves = p;
    detail::DisjointSets sets(p);
    std::vector<Index> cluster_id(static_cast<std::size_t>(p));
    std::vector<Index> cluster_size(static_cast<std::size_t>(p), 1);
    std::iota(cluster_id.begin(), cluster_id.end(), Index{0});
    for (const auto& e : edges) {
        const Index ru = sets.find(e.u);
        const Index rv = sets.find(e.v);
        const Index ca = cluster_id[static_cast<std::size_t>(ru)];
        const Index cb = cluster_id[static_cast<std::size_t>(rv)];
        const Index size = cluster_size[static_cast<std::size_t>(ru)] + cluster_size[static_cast<std::size_t>(rv)];
        const Index root = sets.unite(ru, rv);
        dend.merges.push_back({std::min(ca, cb), std::max(ca, cb), e.w, size});
        cluster_id[static_cast<std::size_t>(root)] = p + static_cast<Index>(dend.merges.size()) - 1;
        cluster_size[static_cast<std::size_t>(root)] = size;
    }
    return dend;
}

/// Disjoint, exhaustive groups over {0..p-1}; members sorted, groups ordered by first member.
class GroupPartition {
public:
    GroupPartition() = default;

    GroupPartition(Index p, std::vector<std::vector<Index>> groups) : p_(p), groups_(std::move(groups)) {
        group_of_.assign(static_cast<std::size_t>(p_), -1);
        for (auto& g : groups_) {
            if (g.empty()) throw InputError("empty group in partition");
            std::sort(g.begin(), g.end());
        }
        std::sort(groups_.begin(), groups_.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
        for (std::size_t m = 0; m < groups_.size(); ++m) {
            for (Index j : groups_[m]) {
                if (j < 0 || j >= p_) throw InputError("group member " + std::to_string(j) + " out of range");
                auto& slot = group_of_[static_cast<std::size_t>(j)];
                if (slot >= 0) throw InputError("variable " + std::to_string(j) + " appears in two groups");
                slot = static_cast<Index>(m);
            }
        }
        for (Index j = 0; j < p_; ++j)
            if (group_of_[static_cast<std::size_t>(j)] < 0)
                throw InputError("variable " + std::to_string(j) + " is not covered by the partition");
    }

    static GroupPartition singletons(Index p) {
        std::vector<std::vector<Index>> g(static_cast<std::size_t>(p));
        for (Index j = 0; j < p; ++j) g[static_cast<std::size_t>(j)] = {j};
        return GroupPartition(p, std::move(g));
    }

    Index p() const noexcept { return p_; }
    Index size() const noexcept { return static_cast<Index>(groups_.size()); }
    const std::vector<Index>& members(Index m) const { return groups_[static_cast<std::size_t>(m)]; }
    const std::vector<std::vector<Index>>& groups() const noexcept { return groups_; }
    Index group_size(Index m) const { return static_cast<Index>(members(m).size()); }
    Index group_of(Index j) const { return group_of_[static_cast<std::size_t>(j)]; }

    /// Binary support vector of group m.
    Vector support(Index m) const {
        Vector s = Vector::Zero(p_);
        for (Index j : members(m)) s[j] = 1.0;
        return s;
    }

private:
    Index p_ = 0;
    std::vector<std::vector<Index>> groups_;
    std::vector<Index> group_of_;
};

/// Groups obtained by keeping only merges below height 1 - rho_cut.
inline GroupPartition cut_by_correlation(const Dendrogram& dend, double rho_cut) {
    if (!(rho_cut > 0.0 && rho_cut < 1.0)) throw ConfigError("rho_cut must lie in (0, 1)");
    const Index p = dend.n_leaves;
    const double height = 1.0 - rho_cut;
    // Merge ids refer to earlier merges, so track the representative leaf of each cluster.
    std::vector<Index> leaf_of(static_cast<std::size_t>(p + static_cast<Index>(dend.merges.size())));
    std::iota(leaf_of.begin(), leaf_of.begin() + p, Index{0});
    detail::DisjointSets sets(p);
    for (std::size_t i = 0; i < dend.merges.size(); ++i) {
        const auto& mg = dend.merges[i];
        const Index la = leaf_of[static_cast<std::size_t>(mg.a)];
        const Index lb = leaf_of[static_cast<std::size_t>(mg.b)];
        leaf_of[static_cast<std::size_t>(p) + i] = la;
        if (mg.height < height) sets.unite(la, lb);
    }
    std::vector<std::vector<Index>> groups;
    std::vector<Index> slot(static_cast<std::size_t>(p), -1);
    for (Index j = 0; j < p; ++j) {
        const Index r = sets.find(j);
        auto& s = slot[static_cast<std::size_t>(r)];
        if (s < 0) {
            s = static_cast<Index>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(s)].push_back(j);
    }
    return GroupPartition(p, std::move(groups));
}

/// Largest correlation between members of different groups (-inf for one group).
inline double max_intergroup_correlation(const GroupPartition& part, const Matrix& corr, bool absolute = false) {
    double best = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < part.p(); ++i)
        for (Index j = i + 1; j < part.p(); ++j)
            if (part.group_of(i) != part.group_of(j))
                best = std::max(best, absolute ? std::abs(corr(i, j)) : corr(i, j));
    return best;
}

/// Cut and verify the single-linkage guarantee against the correlation matrix.
inline GroupPartition cut_by_correlation(const Dendrogram& dend, double rho_cut, const Matrix& corr,
                                         bool absolute = false) {
    GroupPartition part = cut_by_correlation(dend, rho_cut);
    if (max_intergroup_correlation(part, corr, absolute) > rho_cut + 1e-12)
        throw NumericalError("single-linkage cut left an inter-group correlation above the cutoff");
    return part;
}

/// Correlation clustering of standardized columns in one call.
inline GroupPartition discover_groups(const Matrix& Xs, double rho_cut, bool absolute = false) {
    const Matrix corr = correlation_matrix(Xs);
    return cut_by_correlation(single_linkage(correlation_distance(corr, absolute)), rho_cut, corr, absolute);
}

inline nlohmann::json partition_to_json(const GroupPartition& part, const std::vector<std::string>& names = {}) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["p"] = part.p();
    j["groups"] = nlohmann::json::array();
    for (Index m = 0; m < part.size(); ++m) {
        nlohmann::json g;
        g["id"] = m;
        g["members"] = part.members(m);
        if (!names.empty()) {
            std::vector<std::string> gn;
            for (Index v : part.members(m)) gn.push_back(names[static_cast<std::size_t>(v)]);
            g["names"] = gn;
        }
        j["groups"].push_back(std::move(g));
    }
    return j;
}

inline GroupPartition partition_from_json(const nlohmann::json& j) {
    try {
        const Index p = j.at("p").get<Index>();
        std::vector<std::vector<Index>> groups;
        for (const auto& g : j.at("groups")) groups.push_back(g.at("members").get<std::vector<Index>>());
        return GroupPartition(p, std::move(groups));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed partition JSON: ") + e.what());
    }
}

}  // namespace trex
