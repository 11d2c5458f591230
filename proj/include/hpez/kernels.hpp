#ifndef HPEZ_KERNELS_HPP
#define HPEZ_KERNELS_HPP

#include <cstdint>
#include <span>

namespace hpez {

enum class KernelTag : std::uint8_t { Linear = 0, CubicNotAKnot = 1, CubicNatural = 2 };

/// A 1D spline interpolation kernel. `same_level` selects the two-pass scheme
/// in which half of a level's targets are predicted from a wider stencil that
/// includes points reconstructed earlier on the same level.
struct InterpKernel {
    KernelTag tag = KernelTag::Linear;
    bool same_level = false;

    bool is_cubic() const { return tag != KernelTag::Linear; }
    bool valid() const { return !(tag == KernelTag::Linear && same_level); }
    bool operator==(const InterpKernel &) const = default;
};

/// Coefficient rows with exact rational entries: value = num / den.
struct CoefficientRow {
    std::int64_t den;
    std::int64_t num[6];
    std::uint8_t length;
    // Stencil offsets in units of the level stride, parallel to num.
    std::int8_t offsets[6];
};

/// The row `kernel_predict` applies. Inter-level cubic rows use offsets
/// (-3,-1,1,3); same-level not-a-knot uses (-2,-1,1,2); same-level natural
/// uses (-3,-2,-1,1,2,3).
const CoefficientRow &coefficient_row(InterpKernel kernel);

/// Dot product of the kernel's coefficient row with the ordered stencil.
/// Throws StencilLengthMismatch if the stencil has the wrong length.
double kernel_predict(InterpKernel kernel, std::span<const double> stencil);

// Fixed-coefficient rows, inlined for the hot path.
inline double linear_row(double l1, double r1) { return 0.5 * (l1 + r1); }

inline double cubic_not_a_knot_row(double l3, double l1, double r1, double r3) {
    return (-l3 + 9.0 * l1 + 9.0 * r1 - r3) * (1.0 / 16.0);
}

inline double cubic_natural_row(double l3, double l1, double r1, double r3) {
    return (-3.0 * l3 + 23.0 * l1 + 23.0 * r1 - 3.0 * r3) / 40.0;
}

inline double same_level_not_a_knot_row(double l2, double l1, double r1, double r2) {
    return (-l2 + 4.0 * l1 + 4.0 * r1 - r2) / 6.0;
}

inline double same_level_natural_row(double l3, double l2, double l1, double r1, double r2, double r3) {
    return (3.0 * l3 - 18.0 * l2 + 46.0 * l1 + 46.0 * r1 - 18.0 * r2 + 3.0 * r3) / 62.0;
}

// Boundary fallbacks: quadratic through three points, linear through two.
inline double quadratic_left_row(double l1, double r1, double r3) {  // offsets -1, 1, 3
    return (3.0 * l1 + 6.0 * r1 - r3) * (1.0 / 8.0);
}

inline double quadratic_right_row(double l3, double l1, double r1) {  // offsets -3, -1, 1
    return (-l3 + 6.0 * l1 + 3.0 * r1) * (1.0 / 8.0);
}

inline double linear_extrapolate_row(double l3, double l1) {  // offsets -3, -1
    return 1.5 * l1 - 0.5 * l3;
}

}  // namespace hpez

#endif
