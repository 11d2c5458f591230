#ifndef HPEZ_MD_WEIGHTS_HPP
#define HPEZ_MD_WEIGHTS_HPP

#include <span>
#include <vector>

namespace hpez {

/// Weights for combining per-axis 1D interpolations into one multi-dimensional
/// prediction. With independent unbiased per-axis errors of variance
/// sigma_sq[i], alpha minimises the variance of sum(alpha[i] * X_i) subject to
/// sum(alpha) == 1; combined_variance is that minimum.
struct MdWeights {
    std::vector<double> sigma_sq;
    std::vector<double> alpha;
    double combined_variance = 0.0;
};

// Variances at or below this are treated as an exact predictor.
inline constexpr double kZeroVariance = 1e-30;

/// alpha_i = pi_i / sum(pi), pi_i = prod(sigma_sq) / sigma_sq_i. A zero
/// variance axis takes all of the weight (the first one if several).
MdWeights md_weights(std::span<const double> sigma_sq);

}  // namespace hpez

#endif
