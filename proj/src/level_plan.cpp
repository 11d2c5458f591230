#include "hpez/level_plan.hpp"

#include <algorithm>
#include <string>

#include "hpez/error.hpp"

namespace hpez {

namespace {

constexpr std::uint8_t kKernelCount = 5;

std::uint8_t kernel_index(InterpKernel k) {
    switch (k.tag) {
        case KernelTag::Linear: return 0;
        case KernelTag::CubicNotAKnot: return k.same_level ? 3 : 1;
        case KernelTag::CubicNatural: return k.same_level ? 4 : 2;
    }
    return 0;
}

InterpKernel kernel_from_index(std::uint8_t i) {
    switch (i) {
        case 0: return {KernelTag::Linear, false};
        case 1: return {KernelTag::CubicNotAKnot, false};
        case 2: return {KernelTag::CubicNatural, false};
        case 3: return {KernelTag::CubicNotAKnot, true};
        case 4: return {KernelTag::CubicNatural, true};
        default: throw Error(ErrorCode::BadConfig, "bad kernel index " + std::to_string(i));
    }
}

// Visits the lattice {0, step_a, 2 step_a, ...} in row-major order.
template <class Fn>
void for_each_lattice(const Shape &shape, std::span<const std::size_t> step, Fn &&fn) {
    const std::size_t rank = shape.rank();
    std::vector<std::size_t> c(rank, 0);
    while (true) {
        fn(shape.linear(c), std::span<const std::size_t>(c));
        std::size_t a = rank;
        while (a-- > 0) {
            c[a] += step[a];
            if (c[a] < shape.extent(a)) break;
            c[a] = 0;
        }
        if (a == static_cast<std::size_t>(-1)) return;
    }
}

std::vector<std::size_t> anchor_steps(const Shape &shape, std::size_t anchor_stride,
                                      std::optional<std::uint8_t> frozen_dim) {
    std::vector<std::size_t> step(shape.rank(), anchor_stride);
    if (frozen_dim) step[*frozen_dim] = 1;
    return step;
}

}  // namespace

std::vector<std::uint8_t> active_axes(std::size_t rank, std::optional<std::uint8_t> frozen_dim) {
    std::vector<std::uint8_t> axes;
    for (std::size_t a = 0; a < rank; ++a) {
        if (!frozen_dim || *frozen_dim != a) axes.push_back(static_cast<std::uint8_t>(a));
    }
    return axes;
}

std::vector<std::vector<std::uint8_t>> all_orders(std::span<const std::uint8_t> axes) {
    std::vector<std::uint8_t> p(axes.begin(), axes.end());
    std::sort(p.begin(), p.end());
    std::vector<std::vector<std::uint8_t>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::uint8_t encode_choice(const InterpChoice &choice, std::span<const std::uint8_t> axes) {
    if (!choice.kernel.valid()) throw Error(ErrorCode::BadConfig, "linear kernel has no same-level variant");
    std::uint8_t paradigm = 0;
    if (choice.paradigm == Paradigm::OneD) {
        auto orders = all_orders(axes);
        auto it = std::find(orders.begin(), orders.end(), choice.order);
        if (it == orders.end()) throw Error(ErrorCode::BadConfig, "order is not a permutation of the active axes");
        paradigm = static_cast<std::uint8_t>(1 + (it - orders.begin()));
    }
    return static_cast<std::uint8_t>(kernel_index(choice.kernel) | (paradigm << 3));
}

InterpChoice decode_choice(std::uint8_t tag, std::span<const std::uint8_t> axes) {
    InterpChoice c;
    std::uint8_t k = tag & 0x7;
    if (k >= kKernelCount) throw Error(ErrorCode::BadConfig, "bad kernel index in tag");
    c.kernel = kernel_from_index(k);
    std::uint8_t paradigm = tag >> 3;
    if (paradigm == 0) {
        c.paradigm = Paradigm::MultiDim;
    } else {
        auto orders = all_orders(axes);
        if (paradigm > orders.size()) throw Error(ErrorCode::BadConfig, "bad order index in tag");
        c.paradigm = Paradigm::OneD;
        c.order = orders[paradigm - 1];
    }
    return c;
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

double level_error_bound(double global_e, std::size_t level, double alpha, double beta) {
    double p = 1.0;
    for (std::size_t i = 1; i < level && p < beta; ++i) p *= alpha;
    return global_e / std::min(p, beta);
}

LevelPlan build_level_plan(const Shape &shape, std::size_t anchor_stride, double global_e, double alpha,
                           double beta, std::optional<std::uint8_t> frozen_dim,
                           std::span<const InterpChoice> choices) {
    if (anchor_stride < 2 || !is_power_of_two(anchor_stride)) {
        throw Error(ErrorCode::BadStride, "anchor stride must be a power of two >= 2, got " +
                                              std::to_string(anchor_stride));
    }
    if (!(alpha >= 1.0) || !(beta >= 1.0)) throw Error(ErrorCode::BadConfig, "alpha and beta must be >= 1");
    if (frozen_dim && *frozen_dim >= shape.rank()) throw Error(ErrorCode::BadConfig, "frozen axis out of range");

    const auto axes = active_axes(shape.rank(), frozen_dim);
    LevelPlan plan;
    plan.anchor_stride = anchor_stride;
    plan.frozen_dim = frozen_dim;
    std::size_t count = 0;
    while ((std::size_t{1} << count) < anchor_stride) ++count;
    for (std::size_t l = count; l >= 1; --l) {
        Level lv;
        lv.stride = std::size_t{1} << (l - 1);
        if (l - 1 < choices.size()) lv.config.choice = choices[l - 1];
        if (lv.config.choice.paradigm == Paradigm::OneD && lv.config.choice.order.empty()) {
            lv.config.choice.order = axes;
        }
        lv.config.error_bound = level_error_bound(global_e, l, alpha, beta);
        plan.levels.push_back(std::move(lv));
    }
    return plan;
}

std::size_t anchor_count(const Shape &shape, std::size_t anchor_stride, std::optional<std::uint8_t> frozen_dim) {
    std::size_t n = 1;
    for (std::size_t a = 0; a < shape.rank(); ++a) {
        std::size_t step = (frozen_dim && *frozen_dim == a) ? 1 : anchor_stride;
        n *= (shape.extent(a) - 1) / step + 1;
    }
    return n;
}

bool is_anchor(std::span<const std::size_t> coords, std::size_t anchor_stride,
               std::optional<std::uint8_t> frozen_dim) {
    for (std::size_t a = 0; a < coords.size(); ++a) {
        if (frozen_dim && *frozen_dim == a) continue;
        if (coords[a] % anchor_stride != 0) return false;
    }
    return true;
}

std::vector<double> store_anchors(const Shape &shape, std::span<const double> data, std::size_t anchor_stride,
                                  std::optional<std::uint8_t> frozen_dim) {
    std::vector<double> out;
    out.reserve(anchor_count(shape, anchor_stride, frozen_dim));
    auto step = anchor_steps(shape, anchor_stride, frozen_dim);
    for_each_lattice(shape, step, [&](std::size_t idx, std::span<const std::size_t>) { out.push_back(data[idx]); });
    return out;
}

void restore_anchors(const Shape &shape, std::span<double> data, std::span<const double> anchors,
                     std::size_t anchor_stride, std::optional<std::uint8_t> frozen_dim) {
    if (anchors.size() != anchor_count(shape, anchor_stride, frozen_dim)) {
        throw Error(ErrorCode::LengthMismatch, "anchor stream length does not match the lattice");
    }
    auto step = anchor_steps(shape, anchor_stride, frozen_dim);
    std::size_t k = 0;
    for_each_lattice(shape, step, [&](std::size_t idx, std::span<const std::size_t>) { data[idx] = anchors[k++]; });
}

}  // namespace hpez
