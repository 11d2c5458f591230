#ifndef HPEZ_LORENZO_HPP
#define HPEZ_LORENZO_HPP

#include <cstddef>
#include <cstdint>
#include <span>

#include "hpez/grid.hpp"
#include "hpez/interpolation.hpp"
#include "hpez/quantizer.hpp"

namespace hpez {

struct LorenzoConfig {
    std::uint8_t order = 1;  // 1 or 2
};

/// Inclusion-exclusion prediction of the point at `index` from already
/// reconstructed neighbours at offsets -1 (order 1) or -1, -2 (order 2) per
/// axis. Neighbours outside the grid contribute 0.
double lorenzo_predict(std::uint8_t order, const Shape &shape, std::span<const double> values,
                       std::span<const std::size_t> index);

struct LorenzoStats {
    double abs_error_sum = 0.0;
    std::size_t count = 0;
};

/// Raster-scan predict/quantize/replace over the whole grid. Codes are one per
/// point in row-major order. Decompress expects outliers pre-placed in `work`
/// at their code-0 positions.
LorenzoStats lorenzo_pass(const Shape &shape, std::span<double> work, std::span<std::uint32_t> codes,
                          double bound, std::uint8_t order, Direction dir, const EngineOptions &opts);

}  // namespace hpez

#endif
