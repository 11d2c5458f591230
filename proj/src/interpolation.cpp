#include "hpez/interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hpez/error.hpp"
#include "hpez/kernels.hpp"

namespace hpez {

namespace {

constexpr std::size_t R = kMaxRank;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct AxisRange {
    std::size_t begin = 0;
    std::size_t step = 1;
    std::size_t end = 0;  // exclusive
};

// Geometry padded to four axes; padded leading axes have extent 1.
struct Geometry {
    std::array<std::size_t, R> n{1, 1, 1, 1};
    std::array<std::size_t, R> st{0, 0, 0, 0};
    std::size_t frozen = kNone;
    std::size_t pad = 0;

    Geometry(const Shape &shape, std::optional<std::uint8_t> frozen_dim) {
        pad = R - shape.rank();
        for (std::size_t a = 0; a < shape.rank(); ++a) {
            n[a + pad] = shape.extent(a);
            st[a + pad] = shape.stride(a);
        }
        if (frozen_dim) frozen = *frozen_dim + pad;
    }
};

// Everything a level pass needs about its point set and stencils.
struct PassContext {
    const Geometry *geo;
    double *work;
    std::uint32_t *codes;
    Direction dir;
    LinearQuantizer quant;
    InterpKernel kernel;
    std::size_t s;
    std::array<std::size_t, R> lo;
    std::array<std::size_t, R> hi;
    LevelStats stats;
};

// 1D prediction along `axis` for the point at `idx` with coordinate `c` on
// that axis. Right-hand neighbours past the block's upper face are only
// usable when they are coarse points (`others_even`).
inline double predict_1d(const PassContext &ctx, std::size_t idx, std::size_t axis, std::size_t c, bool pass2,
                         bool others_even) {
    const Geometry &g = *ctx.geo;
    const std::size_t s = ctx.s;
    const std::size_t n = g.n[axis];
    const std::size_t hi = ctx.hi[axis];
    const std::size_t off = s * g.st[axis];
    const double *d = ctx.work + idx;

    const bool r1 = c + s < n && (c + s < hi || others_even);
    const bool l3 = c >= 3 * s;
    const bool r3 = c + 3 * s < n && (c + 3 * s < hi || others_even);

    if (pass2 && ctx.kernel.is_cubic()) {
        const bool l2 = c >= 2 * s;
        const bool r2 = c + 2 * s < std::min(n, hi);
        if (ctx.kernel.tag == KernelTag::CubicNotAKnot) {
            if (l2 && r1 && r2) {
                return same_level_not_a_knot_row(*(d - 2 * off), *(d - off), *(d + off), *(d + 2 * off));
            }
        } else if (l3 && l2 && r1 && r2 && r3) {
            return same_level_natural_row(*(d - 3 * off), *(d - 2 * off), *(d - off), *(d + off), *(d + 2 * off),
                                          *(d + 3 * off));
        }
    }

    if (r1) {
        if (!ctx.kernel.is_cubic()) return linear_row(*(d - off), *(d + off));
        if (l3 && r3) {
            return ctx.kernel.tag == KernelTag::CubicNotAKnot
                       ? cubic_not_a_knot_row(*(d - 3 * off), *(d - off), *(d + off), *(d + 3 * off))
                       : cubic_natural_row(*(d - 3 * off), *(d - off), *(d + off), *(d + 3 * off));
        }
        if (r3) return quadratic_left_row(*(d - off), *(d + off), *(d + 3 * off));
        if (l3) return quadratic_right_row(*(d - 3 * off), *(d - off), *(d + off));
        return linear_row(*(d - off), *(d + off));
    }
    if (l3) return linear_extrapolate_row(*(d - 3 * off), *(d - off));
    return *(d - off);
}

inline void commit(PassContext &ctx, std::size_t idx, double pred) {
    if (ctx.dir == Direction::Compress) {
        const double orig = ctx.work[idx];
        const Quantized q = quantize(orig, pred, ctx.quant);
        ctx.codes[idx] = q.code;
        ctx.work[idx] = q.reconstructed;
        ctx.stats.abs_error_sum += std::fabs(orig - pred);
        ++ctx.stats.count;
    } else {
        const std::uint32_t code = ctx.codes[idx];
        if (code != 0) {
            ctx.work[idx] = reconstruct(pred, static_cast<std::int64_t>(code) - ctx.quant.radius, ctx.quant.bound,
                                        ctx.quant.kind);
        }
    }
}

// First member of the progression begin + k*step that is >= lo.
inline std::size_t clip_begin(std::size_t begin, std::size_t step, std::size_t lo) {
    if (begin >= lo) return begin;
    return begin + (lo - begin + step - 1) / step * step;
}

// Visits a 4D lattice; nest[0] is the outermost loop axis.
template <class Fn>
void visit(const Geometry &g, const std::array<AxisRange, R> &r, const std::array<std::size_t, R> &nest, Fn &&fn) {
    for (std::size_t a = 0; a < R; ++a) {
        if (r[a].begin >= r[a].end) return;
    }
    const std::size_t a0 = nest[0], a1 = nest[1], a2 = nest[2], a3 = nest[3];
    std::array<std::size_t, R> c{};
    for (c[a0] = r[a0].begin; c[a0] < r[a0].end; c[a0] += r[a0].step) {
        const std::size_t i0 = c[a0] * g.st[a0];
        for (c[a1] = r[a1].begin; c[a1] < r[a1].end; c[a1] += r[a1].step) {
            const std::size_t i1 = i0 + c[a1] * g.st[a1];
            for (c[a2] = r[a2].begin; c[a2] < r[a2].end; c[a2] += r[a2].step) {
                const std::size_t i2 = i1 + c[a2] * g.st[a2];
                std::size_t idx = i2 + r[a3].begin * g.st[a3];
                const std::size_t inc = r[a3].step * g.st[a3];
                for (c[a3] = r[a3].begin; c[a3] < r[a3].end; c[a3] += r[a3].step, idx += inc) {
                    fn(c, idx);
                }
            }
        }
    }
}

std::array<std::size_t, R> nesting(Traversal t, std::size_t inner_axis) {
    if (t == Traversal::FastVaryingFirst || inner_axis == kNone) return {0, 1, 2, 3};
    std::array<std::size_t, R> nest{};
    std::size_t k = 0;
    for (std::size_t a = 0; a < R; ++a) {
        if (a != inner_axis) nest[k++] = a;
    }
    nest[R - 1] = inner_axis;
    return nest;
}

enum class Parity { Even, Odd, Any };

AxisRange axis_range(const PassContext &ctx, std::size_t axis, Parity p) {
    const Geometry &g = *ctx.geo;
    const std::size_t s = ctx.s;
    AxisRange r;
    if (g.n[axis] == 1 || axis == g.frozen) {
        r = {0, 1, g.n[axis]};
        if (p == Parity::Odd) r.end = 0;  // no interpolation along this axis
    } else if (p == Parity::Even) {
        r = {0, 2 * s, g.n[axis]};
    } else if (p == Parity::Odd) {
        r = {s, 2 * s, g.n[axis]};
    } else {
        r = {0, s, g.n[axis]};
    }
    r.begin = clip_begin(r.begin, r.step, ctx.lo[axis]);
    r.end = std::min(r.end, ctx.hi[axis]);
    return r;
}

void run_one_d(PassContext &ctx, const std::vector<std::size_t> &order, Traversal trav) {
    const Geometry &g = *ctx.geo;
    const std::size_t s = ctx.s;
    const bool split = ctx.kernel.is_cubic() && ctx.kernel.same_level;
    const std::size_t mask2 = 2 * s - 1;  // s is a power of two
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t axis = order[k];
        std::array<AxisRange, R> r;
        for (std::size_t a = 0; a < R; ++a) r[a] = axis_range(ctx, a, Parity::Even);
        for (std::size_t j = 0; j < k; ++j) r[order[j]] = axis_range(ctx, order[j], Parity::Any);
        r[axis] = axis_range(ctx, axis, Parity::Odd);
        const auto nest = nesting(trav, axis);

        auto body = [&](bool pass2) {
            return [&, pass2](const std::array<std::size_t, R> &c, std::size_t idx) {
                bool others_even = true;
                for (std::size_t j = 0; j < k; ++j) others_even = others_even && (c[order[j]] & mask2) == 0;
                commit(ctx, idx, predict_1d(ctx, idx, axis, c[axis], pass2, others_even));
            };
        };
        if (!split) {
            visit(g, r, nest, body(false));
        } else {
            // Pass 1: targets s, 5s, 9s, ...; pass 2: 3s, 7s, ... with the wider stencil.
            auto r1 = r;
            r1[axis].begin = clip_begin(s, 4 * s, ctx.lo[axis]);
            r1[axis].step = 4 * s;
            visit(g, r1, nest, body(false));
            auto r2 = r;
            r2[axis].begin = clip_begin(3 * s, 4 * s, ctx.lo[axis]);
            r2[axis].step = 4 * s;
            visit(g, r2, nest, body(true));
        }
    }
}

void run_multi_dim(PassContext &ctx, const std::vector<std::size_t> &axes, const std::array<double, R> &alpha,
                   Traversal trav) {
    const Geometry &g = *ctx.geo;
    const std::size_t s = ctx.s;
    const bool split = ctx.kernel.is_cubic() && ctx.kernel.same_level;
    const std::size_t m = axes.size();

    for (std::size_t k = 1; k <= m; ++k) {
        for (std::size_t subset = 1; subset < (std::size_t{1} << m); ++subset) {
            if (static_cast<std::size_t>(__builtin_popcountll(subset)) != k) continue;
            std::vector<std::size_t> odd;
            for (std::size_t j = 0; j < m; ++j) {
                if (subset & (std::size_t{1} << j)) odd.push_back(axes[j]);
            }
            std::array<AxisRange, R> r;
            for (std::size_t a = 0; a < R; ++a) r[a] = axis_range(ctx, a, Parity::Even);
            for (std::size_t a : odd) r[a] = axis_range(ctx, a, Parity::Odd);

            std::array<double, R> w{};
            double wsum = 0.0;
            for (std::size_t a : odd) wsum += alpha[a];
            for (std::size_t a : odd) w[a] = wsum > 0.0 ? alpha[a] / wsum : 1.0 / static_cast<double>(k);

            const auto nest = nesting(trav, odd.front());
            auto predict = [&](const std::array<std::size_t, R> &c, std::size_t idx, bool pass2) {
                if (k == 1) return predict_1d(ctx, idx, odd[0], c[odd[0]], pass2, true);
                double acc = 0.0;
                for (std::size_t a : odd) acc += w[a] * predict_1d(ctx, idx, a, c[a], pass2, false);
                return acc;
            };
            if (!split) {
                visit(g, r, nest,
                      [&](const std::array<std::size_t, R> &c, std::size_t idx) {
                          commit(ctx, idx, predict(c, idx, false));
                      });
            } else {
                // Checkerboard split: the parity of the summed target indices on the
                // odd axes flips with every 2s step along any of them.
                for (std::size_t pass = 0; pass < 2; ++pass) {
                    visit(g, r, nest, [&](const std::array<std::size_t, R> &c, std::size_t idx) {
                        std::size_t parity = 0;
                        for (std::size_t a : odd) parity += c[a] / (2 * s);
                        if ((parity & 1) == pass) commit(ctx, idx, predict(c, idx, pass == 1));
                    });
                }
            }
        }
    }
}

void run_choice(PassContext &ctx, const InterpChoice &choice, const std::vector<std::size_t> &active,
                const std::array<double, R> &alpha, Traversal trav) {
    ctx.kernel = choice.kernel;
    if (choice.paradigm == Paradigm::OneD) {
        std::vector<std::size_t> order;
        for (auto a : choice.order) order.push_back(a + ctx.geo->pad);
        run_one_d(ctx, order, trav);
    } else {
        run_multi_dim(ctx, active, alpha, trav);
    }
}

void validate_choice(const InterpChoice &choice, std::size_t rank, std::optional<std::uint8_t> frozen) {
    if (!choice.kernel.valid()) throw Error(ErrorCode::BadConfig, "linear kernel has no same-level variant");
    if (choice.paradigm == Paradigm::OneD) {
        auto expect = active_axes(rank, frozen);
        auto got = choice.order;
        std::sort(got.begin(), got.end());
        if (got != expect) throw Error(ErrorCode::BadConfig, "OneD order must be a permutation of the active axes");
    }
}

}  // namespace

std::size_t block_count(const Shape &shape, std::size_t block_size) {
    std::size_t n = 1;
    for (std::size_t a = 0; a < shape.rank(); ++a) n *= (shape.extent(a) + block_size - 1) / block_size;
    return n;
}

LevelStats predict_reconstruct_level(const Shape &shape, const InterpPlan &plan, std::size_t level_index,
                                     std::span<double> work, std::span<std::uint32_t> codes, Direction dir,
                                     const EngineOptions &opts) {
    const LevelPlan &lp = plan.levels;
    if (level_index >= lp.levels.size()) throw Error(ErrorCode::BadConfig, "level index out of range");
    if (work.size() != shape.size() || codes.size() != shape.size()) {
        throw Error(ErrorCode::SizeMismatch, "working buffers do not match the grid");
    }
    const Level &level = lp.levels[level_index];
    const Geometry geo(shape, lp.frozen_dim);

    std::vector<std::size_t> active;
    for (auto a : active_axes(shape.rank(), lp.frozen_dim)) active.push_back(a + geo.pad);
    std::array<double, R> alpha{};
    for (std::size_t a = 0; a < shape.rank() && a < plan.md_alpha.size(); ++a) alpha[a + geo.pad] = plan.md_alpha[a];

    PassContext ctx{};
    ctx.geo = &geo;
    ctx.work = work.data();
    ctx.codes = codes.data();
    ctx.dir = dir;
    ctx.quant = LinearQuantizer{level.config.error_bound, opts.radius, opts.kind};
    ctx.s = level.stride;
    ctx.lo = {0, 0, 0, 0};
    ctx.hi = geo.n;

    const std::size_t level_number = lp.level_number(level_index);
    const bool blockwise = plan.blocks && level_number <= plan.blocks->tuned_levels;
    if (!blockwise) {
        validate_choice(level.config.choice, shape.rank(), lp.frozen_dim);
        run_choice(ctx, level.config.choice, active, alpha, opts.traversal);
        return ctx.stats;
    }

    const BlockTable &table = *plan.blocks;
    const std::size_t bs = table.block_size;
    const auto &tags = table.tags.at(level_number - 1);
    if (tags.size() != block_count(shape, bs)) throw Error(ErrorCode::BadConfig, "block table size mismatch");
    const auto axes8 = active_axes(shape.rank(), lp.frozen_dim);
    std::array<std::size_t, R> nb{};
    for (std::size_t a = 0; a < R; ++a) nb[a] = (geo.n[a] + bs - 1) / bs;
    std::size_t b = 0;
    std::array<std::size_t, R> bc{};
    for (bc[0] = 0; bc[0] < nb[0]; ++bc[0]) {
        for (bc[1] = 0; bc[1] < nb[1]; ++bc[1]) {
            for (bc[2] = 0; bc[2] < nb[2]; ++bc[2]) {
                for (bc[3] = 0; bc[3] < nb[3]; ++bc[3], ++b) {
                    for (std::size_t a = 0; a < R; ++a) {
                        ctx.lo[a] = bc[a] * bs;
                        ctx.hi[a] = std::min(ctx.lo[a] + bs, geo.n[a]);
                    }
                    const InterpChoice choice = decode_choice(tags[b], axes8);
                    run_choice(ctx, choice, active, alpha, opts.traversal);
                }
            }
        }
    }
    return ctx.stats;
}

LevelStats predict_reconstruct_box(const Shape &shape, const InterpPlan &plan, std::size_t level_index,
                                   const InterpChoice &choice, std::span<const std::size_t> lo,
                                   std::span<const std::size_t> hi, std::span<double> work,
                                   std::span<std::uint32_t> codes, Direction dir, const EngineOptions &opts) {
    const LevelPlan &lp = plan.levels;
    if (level_index >= lp.levels.size()) throw Error(ErrorCode::BadConfig, "level index out of range");
    if (work.size() != shape.size() || codes.size() != shape.size()) {
        throw Error(ErrorCode::SizeMismatch, "working buffers do not match the grid");
    }
    if (lo.size() != shape.rank() || hi.size() != shape.rank()) throw Error(ErrorCode::BadRank, "box rank mismatch");
    validate_choice(choice, shape.rank(), lp.frozen_dim);
    const Level &level = lp.levels[level_index];
    const Geometry geo(shape, lp.frozen_dim);

    std::vector<std::size_t> active;
    for (auto a : active_axes(shape.rank(), lp.frozen_dim)) active.push_back(a + geo.pad);
    std::array<double, R> alpha{};
    for (std::size_t a = 0; a < shape.rank() && a < plan.md_alpha.size(); ++a) alpha[a + geo.pad] = plan.md_alpha[a];

    PassContext ctx{};
    ctx.geo = &geo;
    ctx.work = work.data();
    ctx.codes = codes.data();
    ctx.dir = dir;
    ctx.quant = LinearQuantizer{level.config.error_bound, opts.radius, opts.kind};
    ctx.s = level.stride;
    ctx.lo = {0, 0, 0, 0};
    ctx.hi = geo.n;
    for (std::size_t a = 0; a < shape.rank(); ++a) {
        ctx.lo[a + geo.pad] = lo[a];
        ctx.hi[a + geo.pad] = std::min(hi[a], geo.n[a + geo.pad]);
    }
    run_choice(ctx, choice, active, alpha, opts.traversal);
    return ctx.stats;
}

LevelStats interpolate_all(const Shape &shape, const InterpPlan &plan, std::span<double> work,
                           std::span<std::uint32_t> codes, Direction dir, const EngineOptions &opts) {
    LevelStats total;
    for (std::size_t i = 0; i < plan.levels.levels.size(); ++i) {
        auto st = predict_reconstruct_level(shape, plan, i, work, codes, dir, opts);
        total.abs_error_sum += st.abs_error_sum;
        total.count += st.count;
    }
    return total;
}

}  // namespace hpez
