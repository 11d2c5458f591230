#include "hpez/config.hpp"

#include <cmath>
#include <string>

#include "hpez/byte_io.hpp"
#include "hpez/error.hpp"

namespace hpez {

namespace {

constexpr std::uint8_t kNoFrozen = 0xFF;

std::size_t log2_exact(std::size_t v) {
    std::size_t l = 0;
    while ((std::size_t{1} << l) < v) ++l;
    return l;
}

}  // namespace

std::vector<std::uint8_t> serialize_config(const CompressionConfig &c, std::size_t rank) {
    ByteWriter w;
    w.put(static_cast<std::uint8_t>(c.predictor));
    w.put<double>(c.error_bound);
    w.put<std::uint32_t>(c.radius);
    if (c.predictor == PredictorKind::Lorenzo) {
        w.put<std::uint8_t>(c.lorenzo_order);
    } else if (c.predictor == PredictorKind::Interp) {
        const auto axes = active_axes(rank, c.frozen_dim);
        w.put<std::uint32_t>(static_cast<std::uint32_t>(c.anchor_stride));
        w.put<std::uint8_t>(c.frozen_dim ? *c.frozen_dim : kNoFrozen);
        w.put<double>(c.alpha);
        w.put<double>(c.beta);
        w.put<std::uint8_t>(static_cast<std::uint8_t>(c.level_choices.size()));
        for (const auto &choice : c.level_choices) w.put(encode_choice(choice, axes));
        w.put<std::uint8_t>(static_cast<std::uint8_t>(c.md_alpha.size()));
        for (float a : c.md_alpha) w.put<float>(a);
        w.put<std::uint8_t>(c.blocks ? 1 : 0);
        if (c.blocks) {
            w.put<std::uint32_t>(static_cast<std::uint32_t>(c.blocks->block_size));
            w.put<std::uint8_t>(static_cast<std::uint8_t>(c.blocks->tuned_levels));
            const std::size_t count = c.blocks->tags.empty() ? 0 : c.blocks->tags.front().size();
            w.put<std::uint64_t>(count);
            for (const auto &level : c.blocks->tags) {
                if (level.size() != count) throw Error(ErrorCode::BadConfig, "ragged block table");
                w.put_bytes(level);
            }
        }
    }
    return w.take();
}

CompressionConfig parse_config(std::span<const std::uint8_t> bytes, std::size_t rank) {
    ByteReader r(bytes, ErrorCode::CorruptStream);
    CompressionConfig c;
    const auto kind = r.get<std::uint8_t>();
    if (kind > 2) throw Error(ErrorCode::CorruptStream, "unknown predictor kind " + std::to_string(kind));
    c.predictor = static_cast<PredictorKind>(kind);
    c.error_bound = r.get<double>();
    c.radius = r.get<std::uint32_t>();
    if (!(c.error_bound >= 0.0) || !std::isfinite(c.error_bound) || c.radius == 0 || c.radius > (1u << 30)) {
        throw Error(ErrorCode::CorruptStream, "bad error bound or radius");
    }
    if (c.predictor == PredictorKind::Lorenzo) {
        c.lorenzo_order = r.get<std::uint8_t>();
        if (c.lorenzo_order != 1 && c.lorenzo_order != 2) throw Error(ErrorCode::CorruptStream, "bad Lorenzo order");
    } else if (c.predictor == PredictorKind::Interp) {
        c.anchor_stride = r.get<std::uint32_t>();
        if (c.anchor_stride < 2 || !is_power_of_two(c.anchor_stride)) {
            throw Error(ErrorCode::CorruptStream, "bad anchor stride");
        }
        const auto frozen = r.get<std::uint8_t>();
        if (frozen != kNoFrozen) {
            if (frozen >= rank) throw Error(ErrorCode::CorruptStream, "frozen axis out of range");
            c.frozen_dim = frozen;
        }
        c.alpha = r.get<double>();
        c.beta = r.get<double>();
        const auto axes = active_axes(rank, c.frozen_dim);
        const auto levels = r.get<std::uint8_t>();
        if (levels != log2_exact(c.anchor_stride)) throw Error(ErrorCode::CorruptStream, "level count mismatch");
        for (std::size_t l = 0; l < levels; ++l) c.level_choices.push_back(decode_choice(r.get<std::uint8_t>(), axes));
        const auto nalpha = r.get<std::uint8_t>();
        if (nalpha != 0 && nalpha != rank) throw Error(ErrorCode::CorruptStream, "weight count mismatch");
        for (std::size_t a = 0; a < nalpha; ++a) c.md_alpha.push_back(r.get<float>());
        if (r.get<std::uint8_t>()) {
            BlockTable t;
            t.block_size = r.get<std::uint32_t>();
            t.tuned_levels = r.get<std::uint8_t>();
            const auto count = r.get<std::uint64_t>();
            if (t.block_size == 0 || t.tuned_levels > levels) throw Error(ErrorCode::CorruptStream, "bad block table");
            for (std::size_t l = 0; l < t.tuned_levels; ++l) {
                if (count > r.remaining()) throw Error(ErrorCode::CorruptStream, "block table truncated");
                auto row = r.get_bytes(static_cast<std::size_t>(count));
                for (auto tag : row) decode_choice(tag, axes);
                t.tags.emplace_back(row.begin(), row.end());
            }
            c.blocks = std::move(t);
        }
    }
    if (r.remaining() != 0) throw Error(ErrorCode::CorruptStream, "trailing bytes in config block");
    return c;
}

InterpPlan make_interp_plan(const CompressionConfig &c, const Shape &shape) {
    InterpPlan plan;
    plan.levels = build_level_plan(shape, c.anchor_stride, c.error_bound, c.alpha, c.beta, c.frozen_dim,
                                   c.level_choices);
    plan.md_alpha.assign(c.md_alpha.begin(), c.md_alpha.end());
    if (plan.md_alpha.empty()) plan.md_alpha.assign(shape.rank(), 1.0);
    if (c.blocks) {
        if (c.blocks->tags.size() != c.blocks->tuned_levels) throw Error(ErrorCode::BadConfig, "block table levels");
        for (const auto &row : c.blocks->tags) {
            if (row.size() != block_count(shape, c.blocks->block_size)) {
                throw Error(ErrorCode::CorruptStream, "block table does not match the grid");
            }
        }
    }
    plan.blocks = c.blocks;
    return plan;
}

}  // namespace hpez
