#ifndef HPEZ_LEVEL_PLAN_HPP
#define HPEZ_LEVEL_PLAN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hpez/grid.hpp"
#include "hpez/kernels.hpp"

namespace hpez {

enum class Paradigm : std::uint8_t { OneD = 0, MultiDim = 1 };

/// What one interpolation level does: the kernel, and either a sequence of 1D
/// sweeps in `order` or the weighted multi-dimensional scheme.
struct InterpChoice {
    InterpKernel kernel{KernelTag::CubicNotAKnot, false};
    Paradigm paradigm = Paradigm::OneD;
    std::vector<std::uint8_t> order;  // OneD only: a permutation of the active axes

    bool operator==(const InterpChoice &) const = default;
};

/// One-byte encoding used in the archive; `active_axes` are the non-frozen
/// axes in ascending order.
std::uint8_t encode_choice(const InterpChoice &choice, std::span<const std::uint8_t> active_axes);
InterpChoice decode_choice(std::uint8_t tag, std::span<const std::uint8_t> active_axes);

/// Axes that take part in interpolation, ascending.
std::vector<std::uint8_t> active_axes(std::size_t rank, std::optional<std::uint8_t> frozen_dim);

/// All permutations of `axes` in lexicographic order.
std::vector<std::vector<std::uint8_t>> all_orders(std::span<const std::uint8_t> axes);

struct LevelConfig {
    InterpChoice choice;
    double error_bound = 0.0;
};

struct Level {
    std::size_t stride;
    LevelConfig config;
};

/// Coarse-to-fine hierarchy. levels.front() has stride anchor_stride / 2,
/// levels.back() has stride 1 and the global bound.
struct LevelPlan {
    std::size_t anchor_stride = 64;
    std::optional<std::uint8_t> frozen_dim;
    std::vector<Level> levels;

    std::size_t level_count() const { return levels.size(); }
    /// Level number l (1 = finest) of levels[i].
    std::size_t level_number(std::size_t i) const { return levels.size() - i; }
};

inline constexpr std::size_t kDefaultAnchorStride = 64;

bool is_power_of_two(std::size_t v);

/// e / min(alpha^(l-1), beta) for level l (1 = finest). The power is formed by
/// repeated multiplication so every platform derives identical bounds.
double level_error_bound(double global_e, std::size_t level, double alpha, double beta);

/// `choices[l-1]` configures level l; levels without a choice get the default.
LevelPlan build_level_plan(const Shape &shape, std::size_t anchor_stride, double global_e, double alpha, double beta,
                           std::optional<std::uint8_t> frozen_dim, std::span<const InterpChoice> choices = {});

/// Anchor lattice: stride `anchor_stride` on active axes, stride 1 on the frozen axis.
std::size_t anchor_count(const Shape &shape, std::size_t anchor_stride, std::optional<std::uint8_t> frozen_dim);
bool is_anchor(std::span<const std::size_t> coords, std::size_t anchor_stride, std::optional<std::uint8_t> frozen_dim);

/// Anchor values in row-major order, bit-exact copies.
std::vector<double> store_anchors(const Shape &shape, std::span<const double> data, std::size_t anchor_stride,
                                  std::optional<std::uint8_t> frozen_dim);
void restore_anchors(const Shape &shape, std::span<double> data, std::span<const double> anchors,
                     std::size_t anchor_stride, std::optional<std::uint8_t> frozen_dim);

}  // namespace hpez

#endif
