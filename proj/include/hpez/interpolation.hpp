#ifndef HPEZ_INTERPOLATION_HPP
#define HPEZ_INTERPOLATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hpez/grid.hpp"
#include "hpez/level_plan.hpp"
#include "hpez/quantizer.hpp"

namespace hpez {

enum class Direction { Compress, Decompress };

/// Loop nesting of a level pass. FastVaryingFirst keeps the innermost loop on
/// the contiguous last axis; DimMajor runs it along the interpolation axis.
/// Both produce identical codes because codes are stored per grid position.
enum class Traversal { FastVaryingFirst, DimMajor };

inline constexpr std::size_t kDefaultBlockSize = 32;

/// Per-block interpolation choices for the finest `tuned_levels` levels.
/// tags[l-1][b] is the encoded InterpChoice of block b (row-major block order)
/// on level l.
struct BlockTable {
    std::size_t block_size = kDefaultBlockSize;
    std::size_t tuned_levels = 0;
    std::vector<std::vector<std::uint8_t>> tags;

    bool operator==(const BlockTable &) const = default;
};

std::size_t block_count(const Shape &shape, std::size_t block_size);

struct InterpPlan {
    LevelPlan levels;
    std::vector<double> md_alpha;  // one weight per grid axis
    std::optional<BlockTable> blocks;
};

struct EngineOptions {
    ElementKind kind = ElementKind::Float64;
    std::uint32_t radius = kDefaultRadius;
    Traversal traversal = Traversal::FastVaryingFirst;
};

struct LevelStats {
    double abs_error_sum = 0.0;
    std::size_t count = 0;
};

/// Predicts every target point of levels[level_index] and replaces it by its
/// quantized reconstruction.
///
/// Compress: `work` holds reconstructed values on coarser points and originals
/// elsewhere; codes are written at each target's linear index.
/// Decompress: codes are read at each target's linear index; code 0 targets
/// must already hold their outlier value in `work`.
///
/// Neighbours are only read from points that both directions have already
/// reconstructed, so the two working grids stay bit-identical.
LevelStats predict_reconstruct_level(const Shape &shape, const InterpPlan &plan, std::size_t level_index,
                                     std::span<double> work, std::span<std::uint32_t> codes, Direction dir,
                                     const EngineOptions &opts);

/// Runs levels[level_index] with `choice` over the targets inside the box
/// [lo, hi) only, ignoring any block table.
LevelStats predict_reconstruct_box(const Shape &shape, const InterpPlan &plan, std::size_t level_index,
                                   const InterpChoice &choice, std::span<const std::size_t> lo,
                                   std::span<const std::size_t> hi, std::span<double> work,
                                   std::span<std::uint32_t> codes, Direction dir, const EngineOptions &opts);

/// All levels, coarse to fine. Anchors must already be in place.
LevelStats interpolate_all(const Shape &shape, const InterpPlan &plan, std::span<double> work,
                           std::span<std::uint32_t> codes, Direction dir, const EngineOptions &opts);

/// Calls fn(linear_index) for every point of the grid that is not an anchor,
/// in row-major order.
template <class Fn>
void for_each_non_anchor(const Shape &shape, std::size_t anchor_stride, std::optional<std::uint8_t> frozen_dim,
                         Fn &&fn);

}  // namespace hpez

#include "hpez/detail/for_each_non_anchor.hpp"

#endif
