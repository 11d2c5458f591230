#ifndef HPEZ_CONFIG_HPP
#define HPEZ_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hpez/grid.hpp"
#include "hpez/interpolation.hpp"
#include "hpez/level_plan.hpp"
#include "hpez/quantizer.hpp"

namespace hpez {

/// Verbatim stores every value losslessly; it exists for debugging and for
/// lossless round-trip checks.
enum class PredictorKind : std::uint8_t { Interp = 0, Lorenzo = 1, Verbatim = 2 };

/// Everything the decompressor needs besides the streams.
struct CompressionConfig {
    PredictorKind predictor = PredictorKind::Interp;
    double error_bound = 0.0;  // resolved absolute bound
    std::uint32_t radius = kDefaultRadius;

    std::size_t anchor_stride = kDefaultAnchorStride;
    std::optional<std::uint8_t> frozen_dim;
    double alpha = 1.0;
    double beta = 1.0;
    std::vector<InterpChoice> level_choices;  // [l-1] configures level l
    std::vector<float> md_alpha;              // one weight per axis
    std::optional<BlockTable> blocks;

    std::uint8_t lorenzo_order = 1;

    bool operator==(const CompressionConfig &) const = default;
};

std::vector<std::uint8_t> serialize_config(const CompressionConfig &config, std::size_t rank);
CompressionConfig parse_config(std::span<const std::uint8_t> bytes, std::size_t rank);

InterpPlan make_interp_plan(const CompressionConfig &config, const Shape &shape);

}  // namespace hpez

#endif
