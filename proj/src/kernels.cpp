#include "hpez/kernels.hpp"

#include <string>

#include "hpez/error.hpp"

namespace hpez {

namespace {

constexpr CoefficientRow kLinear{2, {1, 1}, 2, {-1, 1}};
constexpr CoefficientRow kNotAKnot{16, {-1, 9, 9, -1}, 4, {-3, -1, 1, 3}};
constexpr CoefficientRow kNatural{40, {-3, 23, 23, -3}, 4, {-3, -1, 1, 3}};
constexpr CoefficientRow kSameLevelNotAKnot{6, {-1, 4, 4, -1}, 4, {-2, -1, 1, 2}};
constexpr CoefficientRow kSameLevelNatural{62, {3, -18, 46, 46, -18, 3}, 6, {-3, -2, -1, 1, 2, 3}};

}  // namespace

const CoefficientRow &coefficient_row(InterpKernel kernel) {
    if (!kernel.valid()) throw Error(ErrorCode::BadConfig, "linear kernel has no same-level variant");
    switch (kernel.tag) {
        case KernelTag::Linear: return kLinear;
        case KernelTag::CubicNotAKnot: return kernel.same_level ? kSameLevelNotAKnot : kNotAKnot;
        case KernelTag::CubicNatural: return kernel.same_level ? kSameLevelNatural : kNatural;
    }
    throw Error(ErrorCode::BadConfig, "unknown kernel tag");
}

double kernel_predict(InterpKernel kernel, std::span<const double> s) {
    const CoefficientRow &row = coefficient_row(kernel);
    if (s.size() != row.length) {
        throw Error(ErrorCode::StencilLengthMismatch,
                    "kernel needs " + std::to_string(row.length) + " neighbours, got " + std::to_string(s.size()));
    }
    switch (kernel.tag) {
        case KernelTag::Linear: return linear_row(s[0], s[1]);
        case KernelTag::CubicNotAKnot:
            return kernel.same_level ? same_level_not_a_knot_row(s[0], s[1], s[2], s[3])
                                     : cubic_not_a_knot_row(s[0], s[1], s[2], s[3]);
        case KernelTag::CubicNatural:
            return kernel.same_level ? same_level_natural_row(s[0], s[1], s[2], s[3], s[4], s[5])
                                     : cubic_natural_row(s[0], s[1], s[2], s[3]);
    }
    return 0.0;
}

}  // namespace hpez
