#include "hpez/codec.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hpez/archive.hpp"
#include "hpez/byte_io.hpp"
#include "hpez/error.hpp"
#include "hpez/huffman.hpp"
#include "hpez/lorenzo.hpp"

namespace hpez {

namespace {

std::vector<std::uint8_t> encode_values(std::span<const double> values, ElementKind kind) {
    const std::size_t esize = element_size(kind);
    std::vector<std::uint8_t> out(values.size() * esize);
    std::uint8_t *p = out.data();
    for (double v : values) {
        switch (kind) {
            case ElementKind::Float32: store_le(p, static_cast<float>(v)); break;
            case ElementKind::Float64: store_le(p, v); break;
            case ElementKind::Int32: store_le(p, static_cast<std::int32_t>(v)); break;
            case ElementKind::Int64: store_le(p, static_cast<std::int64_t>(v)); break;
        }
        p += esize;
    }
    return out;
}

std::vector<double> decode_values(std::span<const std::uint8_t> bytes, ElementKind kind) {
    const std::size_t esize = element_size(kind);
    if (bytes.size() % esize != 0) throw Error(ErrorCode::CorruptStream, "value stream is not a whole number of elements");
    std::vector<double> out(bytes.size() / esize);
    const std::uint8_t *p = bytes.data();
    for (auto &v : out) {
        switch (kind) {
            case ElementKind::Float32: v = load_le<float>(p); break;
            case ElementKind::Float64: v = load_le<double>(p); break;
            case ElementKind::Int32: v = load_le<std::int32_t>(p); break;
            case ElementKind::Int64: v = static_cast<double>(load_le<std::int64_t>(p)); break;
        }
        p += esize;
    }
    return out;
}

// Positions that carry a code, in row-major order.
template <class Fn>
void for_each_coded(const Shape &shape, const CompressionConfig &c, Fn &&fn) {
    if (c.predictor == PredictorKind::Interp) {
        for_each_non_anchor(shape, c.anchor_stride, c.frozen_dim, fn);
    } else if (c.predictor == PredictorKind::Lorenzo) {
        for (std::size_t i = 0; i < shape.size(); ++i) fn(i);
    }
}

}  // namespace

double resolve_bound(const ErrorBoundSpec &bound, const ScalarGrid &grid) {
    if (!(bound.epsilon >= 0.0) || !std::isfinite(bound.epsilon)) {
        throw Error(ErrorCode::BadConfig, "error bound must be finite and non-negative");
    }
    double e = bound.resolve(value_range(grid).range);
    if (!(e > 0.0)) e = std::numeric_limits<double>::denorm_min();
    return e;
}

CompressResult compress_with(const ScalarGrid &grid, const CompressionConfig &config, const CompressOptions &opts) {
    const Shape &shape = grid.shape();
    const EngineOptions eo{grid.kind(), config.radius, opts.tuning.traversal};
    CompressResult res;
    res.config = config;
    res.reconstruction.assign(grid.data().begin(), grid.data().end());
    auto &work = res.reconstruction;

    std::vector<double> anchors;
    std::vector<std::uint32_t> codes(shape.size(), 0);
    switch (config.predictor) {
        case PredictorKind::Verbatim:
            anchors = work;
            break;
        case PredictorKind::Lorenzo:
            lorenzo_pass(shape, work, codes, config.error_bound, config.lorenzo_order, Direction::Compress, eo);
            break;
        case PredictorKind::Interp: {
            const auto plan = make_interp_plan(config, shape);
            anchors = store_anchors(shape, work, config.anchor_stride, config.frozen_dim);
            interpolate_all(shape, plan, work, codes, Direction::Compress, eo);
            break;
        }
    }
    std::vector<std::uint32_t> stream;
    std::vector<double> outliers;
    for_each_coded(shape, config, [&](std::size_t idx) {
        stream.push_back(codes[idx]);
        if (codes[idx] == 0) outliers.push_back(work[idx]);
    });

    Archive a;
    a.header.dims = shape.dims();
    a.header.kind = grid.kind();
    a.header.bound = opts.bound;
    a.config = lossless_pass(serialize_config(config, shape.rank()), opts.backend);
    a.anchors = lossless_pass(encode_values(anchors, grid.kind()), opts.backend);
    a.codes = lossless_pass(huffman_pack(stream), opts.backend);
    a.outliers = lossless_pass(encode_values(outliers, grid.kind()), opts.backend);
    res.archive = assemble_archive(a);
    return res;
}

CompressResult compress(const ScalarGrid &grid, const CompressOptions &opts) {
    const double e = resolve_bound(opts.bound, grid);
    CompressionConfig config;
    if (opts.verbatim) {
        config.predictor = PredictorKind::Verbatim;
        config.error_bound = e;
        config.radius = opts.tuning.radius;
    } else {
        config = tune(grid, e, opts.tuning);
    }
    return compress_with(grid, config, opts);
}

ScalarGrid decompress(std::span<const std::uint8_t> bytes, Traversal traversal) {
    const Archive a = parse_archive(bytes);
    const Shape shape(a.header.dims);
    const ElementKind kind = a.header.kind;
    const auto config = parse_config(lossless_unpass(a.config), shape.rank());
    const auto anchors = decode_values(lossless_unpass(a.anchors), kind);
    const auto outliers = decode_values(lossless_unpass(a.outliers), kind);
    const auto stream = huffman_unpack(lossless_unpass(a.codes), std::uint64_t{2} * config.radius);

    std::vector<double> work(shape.size(), 0.0);
    std::vector<std::uint32_t> codes(shape.size(), 0);
    std::size_t expected = 0;
    for_each_coded(shape, config, [&](std::size_t) { ++expected; });
    if (stream.size() != expected) {
        throw Error(ErrorCode::CorruptStream, "code stream holds " + std::to_string(stream.size()) + " codes, expected " +
                                                  std::to_string(expected));
    }
    OutlierCursor cursor(outliers);
    std::size_t k = 0;
    for_each_coded(shape, config, [&](std::size_t idx) {
        codes[idx] = stream[k++];
        if (codes[idx] == 0) work[idx] = cursor.next();
    });
    if (cursor.consumed() != outliers.size()) throw Error(ErrorCode::LengthMismatch, "unused outliers in archive");

    const EngineOptions eo{kind, config.radius, traversal};
    switch (config.predictor) {
        case PredictorKind::Verbatim:
            if (anchors.size() != shape.size()) throw Error(ErrorCode::LengthMismatch, "verbatim stream size mismatch");
            work = anchors;
            break;
        case PredictorKind::Lorenzo:
            lorenzo_pass(shape, work, codes, config.error_bound, config.lorenzo_order, Direction::Decompress, eo);
            break;
        case PredictorKind::Interp: {
            const auto plan = make_interp_plan(config, shape);
            restore_anchors(shape, work, anchors, config.anchor_stride, config.frozen_dim);
            interpolate_all(shape, plan, work, codes, Direction::Decompress, eo);
            break;
        }
    }
    return ScalarGrid(shape, kind, std::move(work));
}

}  // namespace hpez
