#include "hpez/lorenzo.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "hpez/error.hpp"

namespace hpez {

namespace {

struct Tap {
    std::array<std::size_t, kMaxRank> delta{};
    std::size_t offset = 0;
    double coef = 0.0;
};

// Taps of x - prod_a (1 - S_a)^order, S_a the backward shift along axis a.
std::vector<Tap> make_taps(std::uint8_t order, const Shape &shape) {
    if (order != 1 && order != 2) throw Error(ErrorCode::BadConfig, "Lorenzo order must be 1 or 2");
    static constexpr double c1[] = {1.0, -1.0};
    static constexpr double c2[] = {1.0, -2.0, 1.0};
    const double *c = order == 1 ? c1 : c2;
    const std::size_t rank = shape.rank();
    const std::size_t base = order + 1;
    std::size_t total = 1;
    for (std::size_t a = 0; a < rank; ++a) total *= base;

    std::vector<Tap> taps;
    for (std::size_t t = 1; t < total; ++t) {
        Tap tap;
        double prod = 1.0;
        std::size_t rem = t;
        for (std::size_t a = rank; a-- > 0;) {
            tap.delta[a] = rem % base;
            rem /= base;
            prod *= c[tap.delta[a]];
            tap.offset += tap.delta[a] * shape.stride(a);
        }
        tap.coef = -prod;
        taps.push_back(tap);
    }
    return taps;
}

inline double apply_taps(const std::vector<Tap> &taps, const double *values, std::size_t idx,
                         const std::array<std::size_t, kMaxRank> &c, std::size_t rank, bool interior) {
    double pred = 0.0;
    for (const Tap &t : taps) {
        if (!interior) {
            bool inside = true;
            for (std::size_t a = 0; a < rank; ++a) inside = inside && c[a] >= t.delta[a];
            if (!inside) continue;
        }
        pred += t.coef * values[idx - t.offset];
    }
    return pred;
}

}  // namespace

double lorenzo_predict(std::uint8_t order, const Shape &shape, std::span<const double> values,
                       std::span<const std::size_t> index) {
    const auto taps = make_taps(order, shape);
    std::array<std::size_t, kMaxRank> c{};
    for (std::size_t a = 0; a < shape.rank(); ++a) c[a] = index[a];
    return apply_taps(taps, values.data(), shape.linear(index), c, shape.rank(), false);
}

LorenzoStats lorenzo_pass(const Shape &shape, std::span<double> work, std::span<std::uint32_t> codes, double bound,
                          std::uint8_t order, Direction dir, const EngineOptions &opts) {
    if (work.size() != shape.size() || codes.size() != shape.size()) {
        throw Error(ErrorCode::SizeMismatch, "working buffers do not match the grid");
    }
    const auto taps = make_taps(order, shape);
    const std::size_t rank = shape.rank();
    const LinearQuantizer q{bound, opts.radius, opts.kind};
    LorenzoStats stats;

    std::array<std::size_t, kMaxRank> c{};
    std::size_t below = rank;  // axes whose coordinate is still < order
    for (std::size_t idx = 0; idx < shape.size(); ++idx) {
        const double pred = apply_taps(taps, work.data(), idx, c, rank, below == 0);
        if (dir == Direction::Compress) {
            const double orig = work[idx];
            const Quantized r = quantize(orig, pred, q);
            codes[idx] = r.code;
            work[idx] = r.reconstructed;
            stats.abs_error_sum += std::fabs(orig - pred);
            ++stats.count;
        } else if (codes[idx] != 0) {
            work[idx] = reconstruct(pred, static_cast<std::int64_t>(codes[idx]) - q.radius, q.bound, q.kind);
        }

        for (std::size_t a = rank; a-- > 0;) {
            const std::size_t old = c[a];
            if (++c[a] < shape.extent(a)) {
                if (c[a] == order) --below;
                break;
            }
            c[a] = 0;
            if (old >= order) ++below;
        }
    }
    return stats;
}

}  // namespace hpez
