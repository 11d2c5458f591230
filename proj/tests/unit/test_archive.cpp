#include <gtest/gtest.h>

#include <random>

#include "expect_error.hpp"
#include "hpez/archive.hpp"
#include "hpez/config.hpp"

using namespace hpez;

namespace {

Archive sample_archive() {
    Archive a;
    a.header.dims = {10, 20, 30};
    a.header.kind = ElementKind::Float64;
    a.header.bound = {BoundMode::Absolute, 0.125};
    a.config = {1, 2, 3};
    a.anchors = {4, 5};
    a.codes.assign(1000, 6);
    a.outliers = {};
    return a;
}

CompressionConfig sample_config(std::size_t rank) {
    CompressionConfig c;
    c.error_bound = 0.003;
    c.anchor_stride = 16;
    c.frozen_dim = 1;
    c.alpha = 1.5;
    c.beta = 3.0;
    auto axes = active_axes(rank, c.frozen_dim);
    auto orders = all_orders(axes);
    for (std::size_t l = 0; l < 4; ++l) {
        InterpChoice ch;
        ch.kernel = l % 2 ? InterpKernel{KernelTag::CubicNatural, true} : InterpKernel{KernelTag::Linear, false};
        if (l == 3) {
            ch.paradigm = Paradigm::MultiDim;
        } else {
            ch.order = orders[l % orders.size()];
        }
        c.level_choices.push_back(ch);
    }
    c.md_alpha.assign(rank, 0.75f);
    BlockTable t;
    t.block_size = 8;
    t.tuned_levels = 2;
    t.tags = {std::vector<std::uint8_t>(5, encode_choice(c.level_choices[0], axes)),
              std::vector<std::uint8_t>(5, encode_choice(c.level_choices[3], axes))};
    c.blocks = t;
    return c;
}

}  // namespace

TEST(Archive, RoundTrip) {
    auto a = sample_archive();
    auto bytes = assemble_archive(a);
    EXPECT_EQ(parse_archive(bytes), a);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 8), "HPEZARCV");
    EXPECT_EQ(bytes[8], kArchiveVersion);
    EXPECT_EQ(bytes[9], 3);
}

TEST(Archive, BadMagic) {
    auto bytes = assemble_archive(sample_archive());
    bytes[0] ^= 1;
    EXPECT_HPEZ_ERROR(parse_archive(bytes), ErrorCode::BadMagic);
    std::vector<std::uint8_t> tiny{'H', 'P'};
    EXPECT_HPEZ_ERROR(parse_archive(tiny), ErrorCode::BadMagic);
}

TEST(Archive, UnsupportedVersion) {
    auto bytes = assemble_archive(sample_archive());
    bytes[8] = 2;
    EXPECT_HPEZ_ERROR(parse_archive(bytes), ErrorCode::UnsupportedVersion);
}

TEST(Archive, LengthMismatch) {
    auto bytes = assemble_archive(sample_archive());
    auto cut = bytes;
    cut.pop_back();
    EXPECT_HPEZ_ERROR(parse_archive(cut), ErrorCode::LengthMismatch);
    auto extra = bytes;
    extra.push_back(0);
    EXPECT_HPEZ_ERROR(parse_archive(extra), ErrorCode::LengthMismatch);
    // Inflate the declared length of the last (empty) stream.
    auto longer = bytes;
    longer[longer.size() - 8] = 1;
    EXPECT_HPEZ_ERROR(parse_archive(longer), ErrorCode::LengthMismatch);
}

TEST(Archive, BadRank) {
    auto a = sample_archive();
    a.header.dims = {1, 2, 3, 4, 5};
    EXPECT_HPEZ_ERROR(assemble_archive(a), ErrorCode::BadRank);
    auto bytes = assemble_archive(sample_archive());
    bytes[9] = 0;
    EXPECT_HPEZ_ERROR(parse_archive(bytes), ErrorCode::BadRank);
}

TEST(Config, InterpRoundTrip) {
    for (std::size_t rank : {2u, 3u, 4u}) {
        auto c = sample_config(rank);
        auto bytes = serialize_config(c, rank);
        EXPECT_EQ(parse_config(bytes, rank), c);
    }
}

TEST(Config, LorenzoAndVerbatimRoundTrip) {
    CompressionConfig l;
    l.predictor = PredictorKind::Lorenzo;
    l.error_bound = 1e-6;
    l.lorenzo_order = 2;
    l.radius = 1024;
    EXPECT_EQ(parse_config(serialize_config(l, 3), 3), l);
    CompressionConfig v;
    v.predictor = PredictorKind::Verbatim;
    EXPECT_EQ(parse_config(serialize_config(v, 1), 1), v);
}

TEST(Config, RandomBlockTablesRoundTrip) {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t rank = 1 + rng() % 4;
        auto c = sample_config(std::max<std::size_t>(rank, 2));
        rank = std::max<std::size_t>(rank, 2);
        auto axes = active_axes(rank, c.frozen_dim);
        std::size_t orders = all_orders(axes).size();
        std::size_t count = 1 + rng() % 200;
        for (auto &row : c.blocks->tags) {
            row.resize(count);
            for (auto &t : row) {
                std::uint8_t k = rng() % 5;
                std::uint8_t p = k == 0 ? 1 + rng() % orders : rng() % (orders + 1);
                t = static_cast<std::uint8_t>(k | (p << 3));
            }
        }
        EXPECT_EQ(parse_config(serialize_config(c, rank), rank), c);
    }
}

TEST(Config, CorruptBytes) {
    auto c = sample_config(3);
    auto bytes = serialize_config(c, 3);
    auto extra = bytes;
    extra.push_back(0);
    EXPECT_HPEZ_ERROR(parse_config(extra, 3), ErrorCode::CorruptStream);
    auto cut = bytes;
    cut.pop_back();
    EXPECT_HPEZ_ERROR(parse_config(cut, 3), ErrorCode::CorruptStream);
    auto kind = bytes;
    kind[0] = 7;
    EXPECT_HPEZ_ERROR(parse_config(kind, 3), ErrorCode::CorruptStream);
    EXPECT_HPEZ_ERROR(parse_config(bytes, 1), ErrorCode::CorruptStream);
}

TEST(Config, InterpPlanChecksBlockTable) {
    auto c = sample_config(3);
    Shape ok({9, 9, 17});
    EXPECT_EQ(block_count(ok, 8), 2u * 2u * 3u);
    c.blocks->tags.assign(2, std::vector<std::uint8_t>(12, 1));
    auto plan = make_interp_plan(c, ok);
    EXPECT_EQ(plan.levels.levels.size(), 4u);
    EXPECT_EQ(plan.md_alpha, std::vector<double>(3, 0.75));
    Shape wrong({9, 9, 9});
    EXPECT_HPEZ_ERROR(make_interp_plan(c, wrong), ErrorCode::CorruptStream);
}
