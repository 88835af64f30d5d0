#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "trex/error.hpp"
#include "trex/rng.hpp"

namespace trex {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Predictor matrix (rows = samples) and response, validated on construction.
class Dataset {
public:
    Dataset(Matrix X, Vector y, std::vector<std::string> names = {})
        : X_(std::move(X)), y_(std::move(y)), names_(std::move(names)) {
        if (X_.rows() < 2) throw InputError("dataset needs at least 2 samples");
        if (X_.cols() < 1) throw InputError("dataset needs at least 1 predictor");
        if (y_.size() != X_.rows())
            throw InputError("response length " + std::to_string(y_.size()) + " does not match " +
                             std::to_string(X_.rows()) + " predictor rows");
        if (!X_.allFinite()) throw InputError("predictor matrix contains non-finite entries");
        if (!y_.allFinite()) throw InputError("response contains non-finite entries");
        if (names_.empty()) {
            names_.reserve(static_cast<std::size_t>(X_.cols()));
            for (Index j = 0; j < X_.cols(); ++j) names_.push_back("V" + std::to_string(j + 1));
        } else if (static_cast<Index>(names_.size()) != X_.cols()) {
            throw InputError("column name count does not match predictor count");
        }
    }

    const Matrix& X() const noexcept { return X_; }
    const Vector& y() const noexcept { return y_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    Index n() const noexcept { return X_.rows(); }
    Index p() const noexcept { return X_.cols(); }

private:
    Matrix X_;
    Vector y_;
    std::vector<std::string> names_;
};

/**
 * Columns centered and scaled to unit Euclidean norm, response centered.
 *
 * Constant columns are kept as all-zero columns with `constant[j] == true`
 * and scale 0; downstream selectors never let them enter.
 */
struct StandardizedDataset {
    Matrix Xs;
    Vector ys;
    Vector offsets;  // column means of the original X
    Vector scales;   // norms of the centered columns (0 for constant columns)
    double y_offset = 0.0;
    std::vector<bool> constant;
    std::vector<std::string> names;

    Index n() const noexcept { return Xs.rows(); }
    Index p() const noexcept { return Xs.cols(); }

    /// Coefficients on the standardized scale -> (intercept, original-scale slopes).
    std::pair<double, Vector> back_transform(const Vector& beta_std) const {
        Vector beta(beta_std.size());
        for (Index j = 0; j < beta.size(); ++j)
            beta[j] = scales[j] > 0.0 ? beta_std[j] / scales[j] : 0.0;
        return {y_offset - offsets.dot(beta), beta};
    }
};

namespace detail {

inline bool is_constant_column(double centered_norm, double raw_norm) {
    return centered_norm <= 1e-10 * std::max(1.0, raw_norm);
}

}  // namespace detail

/// Center and unit-norm scale every column in place; returns (means, norms, constant flags).
template <class Derived>
void standardize_columns(Eigen::MatrixBase<Derived>& X, Vector* means = nullptr, Vector* norms = nullptr,
                         std::vector<bool>* constant = nullptr) {
    const Index p = X.cols();
    if (means) means->resize(p);
    if (norms) norms->resize(p);
    if (constant) constant->assign(static_cast<std::size_t>(p), false);
    for (Index j = 0; j < p; ++j) {
        auto col = X.col(j);
        const double raw = col.norm();
        const double mu = col.mean();
        col.array() -= mu;
        // A second centering pass removes the rounding left by the first.
        col.array() -= col.mean();
        double nrm = col.norm();
        const bool flat = detail::is_constant_column(nrm, raw);
        if (flat) {
            col.setZero();
            nrm = 0.0;
        } else {
            col /= nrm;
        }
        if (means) (*means)[j] = mu;
        if (norms) (*norms)[j] = nrm;
        if (constant) (*constant)[static_cast<std::size_t>(j)] = flat;
    }
}

inline StandardizedDataset standardize(const Dataset& d) {
    StandardizedDataset s;
    s.Xs = d.X();
    standardize_columns(s.Xs, &s.offsets, &s.scales, &s.constant);
    s.y_offset = d.y().mean();
    s.ys = d.y().array() - s.y_offset;
    s.ys.array() -= s.ys.mean();
    s.names = d.names();
    return s;
}

/// Unbiased sample variance of a vector.
inline double sample_variance(const Vector& v) {
    if (v.size() < 2) return 0.0;
    const double mu = v.mean();
    return (v.array() - mu).square().sum() / static_cast<double>(v.size() - 1);
}

/// Noise variance giving Var(X beta) / sigma^2 == snr for the empirical signal variance.
inline double snr_noise_variance(const Matrix& X, const Vector& beta, double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr)) throw ConfigError("snr must be positive and finite");
    if (beta.size() != X.cols()) throw InputError("coefficient length does not match predictor count");
    const Vector signal = X * beta;
    const double var = sample_variance(signal);
    const double scale = std::max(1.0, signal.cwiseAbs().maxCoeff());
    if (!(var > 1e-24 * scale * scale)) throw InputError("X*beta is constant; SNR undefined");
    return var / snr;
}

}  // namespace trex
