#include "hpez/autotuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hpez/error.hpp"
#include "hpez/kernels.hpp"
#include "hpez/lorenzo.hpp"
#include "hpez/md_weights.hpp"

namespace hpez {

namespace {

constexpr double kPsnrCap = 999.0;

std::size_t log2_floor(std::size_t v) {
    std::size_t l = 0;
    while ((std::size_t{2} << l) <= v) ++l;
    return l;
}

// Codes and errors gathered from a sampled test, before projection.
struct Tally {
    std::vector<std::uint32_t> codes;
    double sq_err = 0.0;
    double abs_err = 0.0;
    std::size_t abs_count = 0;
};

TestEstimate project(Tally &t, const ScalarGrid &grid, std::size_t anchors_full) {
    const double n_full = static_cast<double>(grid.size());
    const double bits = static_cast<double>(element_bits(grid.kind()));
    const double coded = n_full - static_cast<double>(anchors_full);
    TestEstimate est;
    double per_point = 0.0;
    double mse = 0.0;
    if (!t.codes.empty()) {
        std::sort(t.codes.begin(), t.codes.end());
        const double n = static_cast<double>(t.codes.size());
        double entropy = 0.0;
        std::size_t zeros = 0;
        for (std::size_t i = 0; i < t.codes.size();) {
            std::size_t j = i;
            while (j < t.codes.size() && t.codes[j] == t.codes[i]) ++j;
            const double p = static_cast<double>(j - i) / n;
            entropy -= p * std::log2(p);
            if (t.codes[i] == 0) zeros = j - i;
            i = j;
        }
        per_point = entropy + static_cast<double>(zeros) / n * bits;
        mse = t.sq_err / n * coded / n_full;
    }
    est.bit_rate = (coded * per_point + static_cast<double>(anchors_full) * bits) / n_full;
    const double range = value_range(grid).range;
    if (mse == 0.0) {
        est.psnr = std::numeric_limits<double>::infinity();
    } else if (range == 0.0) {
        est.psnr = -std::numeric_limits<double>::infinity();
    } else {
        est.psnr = 20.0 * std::log10(range) - 10.0 * std::log10(mse);
    }
    est.mae = t.abs_count ? t.abs_err / static_cast<double>(t.abs_count) : 0.0;
    return est;
}

EngineOptions engine_options(const ScalarGrid &grid, const TunerOptions &opts) {
    return EngineOptions{grid.kind(), opts.radius, opts.traversal};
}

// Config restricted to a tuning block: anchor stride = sample stride and only
// the levels that fit inside a block.
CompressionConfig block_config(const CompressionConfig &c, const TuningSample &sample) {
    CompressionConfig b = c;
    b.anchor_stride = sample.stride;
    b.level_choices.resize(log2_floor(sample.stride));
    b.blocks.reset();
    return b;
}

void tally_block(Tally &t, const Shape &shape, std::size_t stride, std::optional<std::uint8_t> frozen,
                 std::span<const double> orig, std::span<const double> work, std::span<const std::uint32_t> codes) {
    for_each_non_anchor(shape, stride, frozen, [&](std::size_t idx) {
        t.codes.push_back(codes[idx]);
        const double d = orig[idx] - work[idx];
        t.sq_err += d * d;
    });
}

std::vector<std::vector<std::uint8_t>> orders_for(std::span<const std::uint8_t> axes) {
    if (axes.size() <= 3) return all_orders(axes);
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> id(axes.begin(), axes.end());
    out.push_back(id);
    for (std::size_t k = 1; k < id.size(); ++k) {
        std::vector<std::uint8_t> o{id[k]};
        for (std::size_t j = 0; j < id.size(); ++j) {
            if (j != k) o.push_back(id[j]);
        }
        out.push_back(o);
    }
    return out;
}

}  // namespace

double target_score(const TestEstimate &e, const QualityTarget &t) {
    if (t.kind == TargetKind::Ratio) return -e.bit_rate;
    const double penalty = t.lambda > 0.0 ? t.lambda * e.bit_rate : 0.0;
    return std::min(e.psnr, kPsnrCap) - penalty;
}

SampleStats analyze_samples(const ScalarGrid &grid, double rate) {
    const Shape &shape = grid.shape();
    const std::size_t rank = shape.rank();
    const auto points = sample_uniform(grid, rate);
    const auto data = grid.data();

    SampleStats st;
    st.sample_count = points.size();
    std::vector<std::size_t> margin(rank);
    for (std::size_t a = 0; a < rank; ++a) margin[a] = sample_margin(shape.extent(a));

    std::vector<double> lin_sum(rank, 0.0), cub_sum(rank, 0.0);
    std::vector<std::vector<double>> pred(points.size(), std::vector<double>(rank, 0.0));
    for (std::size_t p = 0; p < points.size(); ++p) {
        const std::size_t idx = shape.linear(points[p].index);
        const double x = points[p].value;
        for (std::size_t a = 0; a < rank; ++a) {
            if (margin[a] == 0) continue;
            const std::size_t off = shape.stride(a);
            const double lin = linear_row(data[idx - off], data[idx + off]);
            lin_sum[a] += (x - lin) * (x - lin);
            pred[p][a] = lin;
            if (margin[a] == 3) {
                const double cub = cubic_not_a_knot_row(data[idx - 3 * off], data[idx - off], data[idx + off],
                                                        data[idx + 3 * off]);
                cub_sum[a] += (x - cub) * (x - cub);
                pred[p][a] = cub;
            }
        }
    }
    const double n = static_cast<double>(points.size());
    st.linear_mse.assign(rank, kNoEstimate);
    st.cubic_mse.assign(rank, kNoEstimate);
    for (std::size_t a = 0; a < rank; ++a) {
        if (margin[a] == 0) continue;
        st.linear_mse[a] = lin_sum[a] / n;
        st.cubic_mse[a] = margin[a] == 3 ? cub_sum[a] / n : st.linear_mse[a];
    }
    st.sigma_sq = st.cubic_mse;

    const auto alpha = md_alpha_for(st, rank, std::nullopt);
    double md_sum = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        double acc = 0.0;
        for (std::size_t a = 0; a < rank; ++a) {
            if (margin[a] != 0) acc += static_cast<double>(alpha[a]) * pred[p][a];
        }
        md_sum += (points[p].value - acc) * (points[p].value - acc);
    }
    st.md_mse = md_sum / n;

    if (rank >= 2) {
        for (std::size_t a = 0; a < rank; ++a) {
            if (st.cubic_mse[a] == kNoEstimate) continue;
            if (!st.freeze_candidate || st.cubic_mse[a] > st.cubic_mse[*st.freeze_candidate]) {
                st.freeze_candidate = static_cast<std::uint8_t>(a);
            }
        }
    }
    return st;
}

std::vector<float> md_alpha_for(const SampleStats &stats, std::size_t rank, std::optional<std::uint8_t> frozen_dim) {
    std::vector<float> alpha(rank, 0.0f);
    const auto axes = active_axes(rank, frozen_dim);
    if (axes.empty()) return alpha;
    std::vector<std::uint8_t> known;
    std::vector<double> sigma;
    for (auto a : axes) {
        if (a < stats.sigma_sq.size() && stats.sigma_sq[a] != kNoEstimate) {
            known.push_back(a);
            sigma.push_back(stats.sigma_sq[a]);
        }
    }
    if (known.empty()) {
        for (auto a : axes) alpha[a] = 1.0f / static_cast<float>(axes.size());
        return alpha;
    }
    const auto w = md_weights(sigma);
    for (std::size_t i = 0; i < known.size(); ++i) alpha[known[i]] = static_cast<float>(w.alpha[i]);
    return alpha;
}

TuningSample make_tuning_sample(const ScalarGrid &grid, std::size_t anchor_stride, double fraction) {
    const Shape &shape = grid.shape();
    const std::size_t rank = shape.rank();
    TuningSample s;
    s.stride = rank <= 2 ? anchor_stride : std::min<std::size_t>(anchor_stride, rank == 3 ? 32 : 16);

    std::vector<std::size_t> ext(rank), slots(rank);
    std::size_t total_slots = 1, block_points = 1;
    for (std::size_t a = 0; a < rank; ++a) {
        const std::size_t n = shape.extent(a);
        ext[a] = std::min(n, s.stride + 1);
        slots[a] = n >= s.stride + 1 ? (n - 1) / s.stride : 1;
        total_slots *= slots[a];
        block_points *= ext[a];
    }
    s.block_shape = Shape(ext);
    auto wanted = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(shape.size()) / static_cast<double>(block_points)));
    const std::size_t count = std::clamp<std::size_t>(wanted, 1, total_slots);

    const auto data = grid.data();
    std::vector<std::size_t> origin(rank), c(rank);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t slot = static_cast<std::size_t>((static_cast<unsigned __int128>(i) * total_slots) / count);
        for (std::size_t a = rank; a-- > 0;) {
            origin[a] = (slot % slots[a]) * s.stride;
            slot /= slots[a];
        }
        std::vector<double> block(block_points);
        for (std::size_t k = 0; k < block_points; ++k) {
            std::size_t rem = k;
            for (std::size_t a = rank; a-- > 0;) {
                c[a] = origin[a] + rem % ext[a];
                rem /= ext[a];
            }
            block[k] = data[shape.linear(c)];
        }
        s.blocks.push_back(std::move(block));
    }
    return s;
}

std::vector<InterpChoice> candidate_choices(std::size_t rank, std::optional<std::uint8_t> frozen_dim,
                                            const TunerOptions &opts) {
    std::vector<InterpKernel> kernels;
    const bool cubic = opts.kernels != KernelSet::Linear;
    if (opts.kernels != KernelSet::Cubic) kernels.push_back({KernelTag::Linear, false});
    if (cubic) kernels.push_back({KernelTag::CubicNotAKnot, false});
    if (cubic && opts.natural_spline) kernels.push_back({KernelTag::CubicNatural, false});
    if (cubic && opts.same_level) kernels.push_back({KernelTag::CubicNotAKnot, true});
    if (cubic && opts.natural_spline && opts.same_level) kernels.push_back({KernelTag::CubicNatural, true});

    const auto axes = active_axes(rank, frozen_dim);
    std::vector<InterpChoice> out;
    if (axes.empty()) {
        out.push_back({kernels.front(), Paradigm::OneD, {}});
        return out;
    }
    const auto orders = orders_for(axes);
    for (const auto &k : kernels) {
        for (const auto &o : orders) out.push_back({k, Paradigm::OneD, o});
        if (opts.multi_dim && axes.size() >= 2) out.push_back({k, Paradigm::MultiDim, {}});
    }
    return out;
}

TestEstimate interp_test(const ScalarGrid &grid, const TuningSample &sample, const CompressionConfig &config,
                         const TunerOptions &opts) {
    const auto bc = block_config(config, sample);
    const auto plan = make_interp_plan(bc, sample.block_shape);
    const auto eo = engine_options(grid, opts);
    Tally t;
    std::vector<double> work;
    std::vector<std::uint32_t> codes(sample.block_shape.size());
    for (const auto &block : sample.blocks) {
        work = block;
        auto st = interpolate_all(sample.block_shape, plan, work, codes, Direction::Compress, eo);
        t.abs_err += st.abs_error_sum;
        t.abs_count += st.count;
        tally_block(t, sample.block_shape, sample.stride, config.frozen_dim, block, work, codes);
    }
    return project(t, grid, anchor_count(grid.shape(), config.anchor_stride, config.frozen_dim));
}

GlobalTuning tune_global(const ScalarGrid &grid, const TuningSample &sample, const SampleStats &stats, double e,
                         std::optional<std::uint8_t> frozen_dim, const TunerOptions &opts) {
    const std::size_t rank = grid.shape().rank();
    const std::size_t full_levels = log2_floor(opts.anchor_stride);
    const auto cands = candidate_choices(rank, frozen_dim, opts);

    CompressionConfig cfg;
    cfg.error_bound = e;
    cfg.radius = opts.radius;
    cfg.anchor_stride = opts.anchor_stride;
    cfg.frozen_dim = frozen_dim;
    cfg.md_alpha = md_alpha_for(stats, rank, frozen_dim);
    cfg.level_choices.assign(full_levels, cands.front());
    const auto bc = block_config(cfg, sample);
    auto plan = make_interp_plan(bc, sample.block_shape);
    const auto eo = engine_options(grid, opts);
    const Shape &bs = sample.block_shape;

    std::vector<std::vector<double>> state = sample.blocks;
    std::vector<std::vector<std::uint32_t>> codes(state.size(), std::vector<std::uint32_t>(bs.size()));
    std::vector<double> tmp;
    const std::size_t nlev = plan.levels.levels.size();
    GlobalTuning out;
    out.choices.assign(full_levels, cands.front());
    Tally t;
    for (std::size_t i = 0; i < nlev; ++i) {
        std::size_t best = 0;
        double best_mae = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cands.size(); ++j) {
            plan.levels.levels[i].config.choice = cands[j];
            double sum = 0.0;
            std::size_t cnt = 0;
            for (std::size_t b = 0; b < state.size(); ++b) {
                tmp = state[b];
                auto st = predict_reconstruct_level(bs, plan, i, tmp, codes[b], Direction::Compress, eo);
                sum += st.abs_error_sum;
                cnt += st.count;
            }
            const double mae = cnt ? sum / static_cast<double>(cnt) : 0.0;
            if (mae < best_mae) {
                best_mae = mae;
                best = j;
            }
        }
        plan.levels.levels[i].config.choice = cands[best];
        for (std::size_t b = 0; b < state.size(); ++b) {
            auto st = predict_reconstruct_level(bs, plan, i, state[b], codes[b], Direction::Compress, eo);
            t.abs_err += st.abs_error_sum;
            t.abs_count += st.count;
        }
        out.choices[plan.levels.level_number(i) - 1] = cands[best];
    }
    for (std::size_t l = nlev; l < full_levels; ++l) out.choices[l] = nlev ? out.choices[nlev - 1] : cands.front();

    for (std::size_t b = 0; b < state.size(); ++b) {
        tally_block(t, bs, sample.stride, frozen_dim, sample.blocks[b], state[b], codes[b]);
    }
    out.estimate = project(t, grid, anchor_count(grid.shape(), opts.anchor_stride, frozen_dim));
    return out;
}

FreezeDecision tune_freeze(const ScalarGrid &grid, const TuningSample &sample, const SampleStats &stats, double e,
                           const GlobalTuning &unfrozen, const TunerOptions &opts) {
    FreezeDecision d;
    d.chosen = unfrozen;
    if (!opts.freeze || grid.shape().rank() < 2 || !stats.freeze_candidate) return d;
    auto frozen = tune_global(grid, sample, stats, e, stats.freeze_candidate, opts);
    if (frozen.estimate.bit_rate < unfrozen.estimate.bit_rate) {
        d.frozen_dim = stats.freeze_candidate;
        d.chosen = std::move(frozen);
        d.rejected = unfrozen;
    } else {
        d.rejected = std::move(frozen);
    }
    return d;
}

EbDecision tune_eb(const ScalarGrid &grid, const TuningSample &sample, const CompressionConfig &base,
                   const TunerOptions &opts) {
    std::vector<std::pair<double, double>> cands{{1.0, 1.0}};
    for (double a : {1.0, 1.25, 1.5, 1.75, 2.0}) {
        for (double b : {1.5, 2.0, 3.0, 4.0}) cands.emplace_back(a, b);
    }
    EbDecision best;
    double best_score = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (auto [a, b] : cands) {
        CompressionConfig c = base;
        c.alpha = a;
        c.beta = b;
        const auto est = interp_test(grid, sample, c, opts);
        const double score = target_score(est, opts.target);
        if (first || score > best_score) {
            best = {a, b, est};
            best_score = score;
            first = false;
        }
    }
    return best;
}

TestEstimate lorenzo_test(const ScalarGrid &grid, const TuningSample &sample, double e, std::uint8_t order,
                          const TunerOptions &opts) {
    const Shape &bs = sample.block_shape;
    const auto eo = engine_options(grid, opts);
    Tally t;
    std::vector<double> work;
    std::vector<std::uint32_t> codes(bs.size());
    for (const auto &block : sample.blocks) {
        work = block;
        auto st = lorenzo_pass(bs, work, codes, e, order, Direction::Compress, eo);
        t.abs_err += st.abs_error_sum;
        t.abs_count += st.count;
        for (std::size_t idx = 0; idx < bs.size(); ++idx) {
            auto c = bs.coords(idx);
            if (std::any_of(c.begin(), c.end(), [&](std::size_t v) { return v < order; })) continue;
            t.codes.push_back(codes[idx]);
            const double d = block[idx] - work[idx];
            t.sq_err += d * d;
        }
    }
    return project(t, grid, 0);
}

LorenzoDecision tune_lorenzo(const ScalarGrid &grid, const TuningSample &sample, const TestEstimate &interp,
                             double e, const TunerOptions &opts) {
    LorenzoDecision d;
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint8_t order : {std::uint8_t{1}, std::uint8_t{2}}) {
        auto est = lorenzo_test(grid, sample, e, order, opts);
        TestEstimate adjusted = est;
        adjusted.bit_rate *= opts.lorenzo_coef;
        const double score = target_score(adjusted, opts.target);
        if (order == 1 || score > best) {
            best = score;
            d.order = order;
            d.estimate = est;
        }
    }
    d.use_lorenzo = interp.mae > 0.0 && best > target_score(interp, opts.target);
    return d;
}

BlockTable tune_blocks(const ScalarGrid &grid, const CompressionConfig &global, const TunerOptions &opts) {
    const Shape &shape = grid.shape();
    const std::size_t rank = shape.rank();
    const std::size_t bsz = opts.block_size;
    if (bsz == 0) throw Error(ErrorCode::BadConfig, "block size must be positive");
    BlockTable table;
    table.block_size = bsz;
    table.tuned_levels = std::min(kBlockTunedLevels, global.level_choices.size());

    const auto axes = active_axes(rank, global.frozen_dim);
    const auto cands = candidate_choices(rank, global.frozen_dim, opts);
    const std::size_t nblocks = block_count(shape, bsz);
    for (std::size_t l = 1; l <= table.tuned_levels; ++l) {
        table.tags.emplace_back(nblocks, encode_choice(global.level_choices[l - 1], axes));
    }
    if (table.tuned_levels == 0) return table;

    const double frac = std::pow(0.04, 1.0 / static_cast<double>(rank));
    const auto side = std::max<std::size_t>(static_cast<std::size_t>(std::lround(static_cast<double>(bsz) * frac)), 9);
    // Stencils reach 3 * stride <= 12 points; the region origin stays a multiple
    // of 8 so target parities match the full grid.
    constexpr std::size_t kMargin = 16;
    constexpr std::size_t kAlign = 8;

    EngineOptions eo{ElementKind::Float64, opts.radius, opts.traversal};
    CompressionConfig rc = global;
    rc.blocks.reset();
    const auto data = grid.data();

    std::vector<std::size_t> nb(rank), bc(rank, 0), r0(rank), r1(rank), lo(rank), hi(rank), c(rank);
    for (std::size_t a = 0; a < rank; ++a) nb[a] = (shape.extent(a) + bsz - 1) / bsz;
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::size_t rem = b;
        for (std::size_t a = rank; a-- > 0;) {
            bc[a] = rem % nb[a];
            rem /= nb[a];
        }
        std::vector<std::size_t> rext(rank);
        std::size_t rsize = 1;
        for (std::size_t a = 0; a < rank; ++a) {
            const std::size_t n = shape.extent(a);
            const std::size_t b0 = bc[a] * bsz;
            const std::size_t ext = std::min(bsz, n - b0);
            const std::size_t sl = std::min(side, ext);
            const std::size_t s0 = b0 + (ext - sl) / 2;
            r0[a] = (s0 > kMargin ? s0 - kMargin : 0) / kAlign * kAlign;
            r1[a] = std::min(n, s0 + sl + kMargin);
            lo[a] = s0 - r0[a];
            hi[a] = s0 + sl - r0[a];
            rext[a] = r1[a] - r0[a];
            rsize *= rext[a];
        }
        const Shape rshape(rext);
        std::vector<double> region(rsize);
        for (std::size_t k = 0; k < rsize; ++k) {
            std::size_t rr = k;
            for (std::size_t a = rank; a-- > 0;) {
                c[a] = r0[a] + rr % rext[a];
                rr /= rext[a];
            }
            region[k] = data[shape.linear(c)];
        }
        std::vector<std::uint32_t> codes(rsize);
        auto plan = make_interp_plan(rc, rshape);
        // A vanishing bound turns every target into an escape, so predictions
        // see original neighbours and the region is never modified.
        for (auto &lv : plan.levels.levels) lv.config.error_bound = std::numeric_limits<double>::min();

        for (std::size_t l = 1; l <= table.tuned_levels; ++l) {
            const std::size_t i = plan.levels.levels.size() - l;
            auto err = [&](const InterpChoice &ch) {
                return predict_reconstruct_box(rshape, plan, i, ch, lo, hi, region, codes, Direction::Compress, eo)
                    .abs_error_sum;
            };
            const InterpChoice &incumbent = global.level_choices[l - 1];
            double best_err = err(incumbent);
            const InterpChoice *best = &incumbent;
            for (const auto &ch : cands) {
                if (ch == incumbent) continue;
                const double e = err(ch);
                if (e < best_err) {
                    best_err = e;
                    best = &ch;
                }
            }
            table.tags[l - 1][b] = encode_choice(*best, axes);
        }
    }
    return table;
}

CompressionConfig tune(const ScalarGrid &grid, double e, const TunerOptions &opts, TuneTrace *trace) {
    const std::size_t rank = grid.shape().rank();
    TuneTrace local;
    TuneTrace &tr = trace ? *trace : local;

    try {
        tr.stats = analyze_samples(grid, opts.sample_rate);
    } catch (const Error &err) {
        if (err.code() != ErrorCode::GridTooSmall) throw;
        tr.stats = SampleStats{};
        tr.stats.linear_mse.assign(rank, kNoEstimate);
        tr.stats.cubic_mse.assign(rank, kNoEstimate);
        tr.stats.sigma_sq.assign(rank, kNoEstimate);
    }
    const auto sample = make_tuning_sample(grid, opts.anchor_stride, opts.test_fraction);

    CompressionConfig cfg;
    cfg.error_bound = e;
    cfg.radius = opts.radius;
    cfg.anchor_stride = opts.anchor_stride;

    if (opts.predictor == PredictorPreference::Lorenzo) {
        const auto o1 = lorenzo_test(grid, sample, e, 1, opts);
        const auto o2 = lorenzo_test(grid, sample, e, 2, opts);
        cfg.predictor = PredictorKind::Lorenzo;
        cfg.lorenzo_order = target_score(o2, opts.target) > target_score(o1, opts.target) ? 2 : 1;
        return cfg;
    }

    tr.global = tune_global(grid, sample, tr.stats, e, std::nullopt, opts);
    GlobalTuning chosen = tr.global;
    if (opts.freeze) {
        tr.freeze = tune_freeze(grid, sample, tr.stats, e, tr.global, opts);
        cfg.frozen_dim = tr.freeze->frozen_dim;
        chosen = tr.freeze->chosen;
    }
    cfg.level_choices = chosen.choices;
    cfg.md_alpha = md_alpha_for(tr.stats, rank, cfg.frozen_dim);

    if (opts.eb_tuning) {
        tr.eb = tune_eb(grid, sample, cfg, opts);
    } else {
        tr.eb = EbDecision{1.0, 1.0, chosen.estimate};
    }
    cfg.alpha = tr.eb.alpha;
    cfg.beta = tr.eb.beta;

    if (opts.lorenzo && opts.predictor == PredictorPreference::Auto) {
        tr.lorenzo = tune_lorenzo(grid, sample, tr.eb.estimate, e, opts);
        if (tr.lorenzo->use_lorenzo) {
            CompressionConfig lc;
            lc.predictor = PredictorKind::Lorenzo;
            lc.error_bound = e;
            lc.radius = opts.radius;
            lc.lorenzo_order = tr.lorenzo->order;
            return lc;
        }
    }

    if (opts.blockwise) cfg.blocks = tune_blocks(grid, cfg, opts);
    return cfg;
}

}  // namespace hpez
