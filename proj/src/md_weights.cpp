#include "hpez/md_weights.hpp"

#include <cmath>
#include <string>

#include "hpez/error.hpp"

namespace hpez {

MdWeights md_weights(std::span<const double> sigma_sq) {
    const std::size_t n = sigma_sq.size();
    if (n < 1 || n > 4) throw Error(ErrorCode::InvalidArgument, "md_weights needs 1-4 axes, got " + std::to_string(n));

    MdWeights w;
    w.sigma_sq.assign(sigma_sq.begin(), sigma_sq.end());
    w.alpha.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sigma_sq[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative or NaN variance");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (sigma_sq[i] <= kZeroVariance) {
            w.alpha[i] = 1.0;
            w.combined_variance = sigma_sq[i];
            return w;
        }
    }

    // pi_i / sum(pi) == (1/s_i) / sum(1/s_j); the reciprocal form avoids
    // under/overflow of the full product for extreme variances. Infinite
    // variances (axes without an estimate) get zero weight.
    double inv_sum = 0.0;
    for (double s : sigma_sq) inv_sum += 1.0 / s;
    if (inv_sum == 0.0) {
        for (auto &a : w.alpha) a = 1.0 / static_cast<double>(n);
        w.combined_variance = sigma_sq[0];
        return w;
    }
    for (std::size_t i = 0; i < n; ++i) w.alpha[i] = (1.0 / sigma_sq[i]) / inv_sum;
    w.combined_variance = 1.0 / inv_sum;
    return w;
}

}  // namespace hpez
