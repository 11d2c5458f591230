#ifndef HPEZ_QUANTIZER_HPP
#define HPEZ_QUANTIZER_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hpez/grid.hpp"

namespace hpez {

inline constexpr std::uint32_t kDefaultRadius = 32768;

/// Linear error quantizer with 2*radius bins of width 2*bound. Code 0 is the
/// outlier escape: the original value is stored verbatim.
struct LinearQuantizer {
    double bound;
    std::uint32_t radius = kDefaultRadius;
    // Values are snapped to this representation before the bound is checked.
    ElementKind kind = ElementKind::Float64;
};

struct Quantized {
    std::uint32_t code;
    double reconstructed;
};

inline double reconstruct(double prediction, std::int64_t k, double bound, ElementKind kind) {
    return snap_to_kind(prediction + (2.0 * bound) * static_cast<double>(k), kind);
}

inline Quantized quantize(double original, double prediction, const LinearQuantizer &q) {
    const double scaled = (original - prediction) / (2.0 * q.bound);
    const double r = static_cast<double>(q.radius);
    if (std::fabs(scaled) < r) {
        const auto k = static_cast<std::int64_t>(std::round(scaled));
        if (k > -static_cast<std::int64_t>(q.radius) && k < static_cast<std::int64_t>(q.radius)) {
            const double rec = reconstruct(prediction, k, q.bound, q.kind);
            if (std::fabs(rec - original) <= q.bound) {
                return {static_cast<std::uint32_t>(k + q.radius), rec};
            }
        }
    }
    return {0, original};
}

/// Reads outliers in order; throws OutlierUnderflow when exhausted.
class OutlierCursor {
public:
    explicit OutlierCursor(std::span<const double> values) : values_(values) {}
    double next();
    std::size_t consumed() const { return pos_; }

private:
    std::span<const double> values_;
    std::size_t pos_ = 0;
};

/// Inverse of quantize: code 0 takes the next outlier, otherwise
/// prediction + 2*bound*(code - radius).
double dequantize(double prediction, std::uint32_t code, OutlierCursor &outliers, const LinearQuantizer &q);

/// Quantization codes plus the verbatim outliers; count(codes == 0) == outliers.size().
struct QuantStream {
    std::vector<std::uint32_t> codes;
    std::vector<double> outliers;
};

}  // namespace hpez

#endif
