#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "expect_error.hpp"
#include "fields.hpp"
#include "hpez/codec.hpp"
#include "hpez/metrics.hpp"

using namespace hpez;

namespace {

ScalarGrid from(std::vector<std::size_t> dims, std::vector<double> v) {
    return ScalarGrid(Shape(std::move(dims)), ElementKind::Float64, std::move(v));
}

ScalarGrid map(const ScalarGrid &g, double scale, double shift) {
    std::vector<double> v(g.data().begin(), g.data().end());
    for (auto &x : v) x = scale * x + shift;
    return ScalarGrid(g.shape(), ElementKind::Float64, v);
}

// Direct per-window SSIM on a 2D grid, no running sums.
double ssim_direct_2d(const ScalarGrid &a, const ScalarGrid &b) {
    const std::size_t n0 = a.shape().extent(0), n1 = a.shape().extent(1);
    const auto r = value_range(a);
    const double L = r.range > 0 ? r.range : 1.0;
    const double c1 = std::pow(0.01 * L, 2), c2 = std::pow(0.03 * L, 2);
    const std::size_t w0 = std::min<std::size_t>(7, n0), w1 = std::min<std::size_t>(7, n1);
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + w0 <= n0; i += 2) {
        for (std::size_t j = 0; j + w1 <= n1; j += 2) {
            double ma = 0, mb = 0;
            for (std::size_t x = i; x < i + w0; ++x)
                for (std::size_t y = j; y < j + w1; ++y) {
                    ma += a[x * n1 + y] - r.min;
                    mb += b[x * n1 + y] - r.min;
                }
            const double w = double(w0 * w1);
            ma /= w;
            mb /= w;
            double va = 0, vb = 0, cov = 0;
            for (std::size_t x = i; x < i + w0; ++x)
                for (std::size_t y = j; y < j + w1; ++y) {
                    const double da = a[x * n1 + y] - r.min - ma, db = b[x * n1 + y] - r.min - mb;
                    va += da * da;
                    vb += db * db;
                    cov += da * db;
                }
            va /= w;
            vb /= w;
            cov /= w;
            total += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    }
    return total / double(count);
}

}  // namespace

TEST(Psnr, HandCase) {
    auto a = from({2}, {0.0, 1.0});
    auto b = from({2}, {0.1, 1.1});
    EXPECT_NEAR(*psnr(a, b), 20.0, 1e-9);
}

TEST(Psnr, EqualIsInfiniteAndConstantIsUndefined) {
    auto a = test::trig_field({10, 10});
    EXPECT_TRUE(std::isinf(*psnr(a, a)));
    auto c = from({3}, {2.0, 2.0, 2.0});
    auto d = from({3}, {2.0, 2.5, 2.0});
    EXPECT_FALSE(psnr(c, d).has_value());
    EXPECT_TRUE(std::isinf(*psnr(c, c)));
}

TEST(Psnr, RangeComesFromFirstArgument) {
    auto a = from({3}, {0.0, 1.0, 2.0});
    auto b = from({3}, {0.0, 1.0, 4.0});
    const double mse = 4.0 / 3.0;
    EXPECT_NEAR(*psnr(a, b), 20 * std::log10(2.0) - 10 * std::log10(mse), 1e-12);
    EXPECT_NEAR(*psnr(b, a), 20 * std::log10(4.0) - 10 * std::log10(mse), 1e-12);
}

TEST(Psnr, DimsMismatch) {
    EXPECT_HPEZ_ERROR(psnr(test::trig_field({4, 5}), test::trig_field({5, 4})), ErrorCode::DimsMismatch);
}

TEST(Ssim, IdenticalIsOne) {
    auto a = test::gaussian_bumps({30, 40}, 1, ElementKind::Float64);
    EXPECT_EQ(ssim(a, a), 1.0);
    auto c = test::constant_field({9, 9, 9}, 3.0);
    EXPECT_EQ(ssim(c, c), 1.0);
}

TEST(Ssim, NegatedIsNegative) {
    auto a = test::make_field({40, 40}, ElementKind::Float64, [](const auto &c) {
        return std::sin(double(c[0]) / 3.0) * std::cos(double(c[1]) / 4.0);
    });
    EXPECT_LT(ssim(a, map(a, -1.0, 0.0)), 0.0);
}

TEST(Ssim, SmallNoiseIsNearOne) {
    auto a = test::gaussian_bumps({50, 60}, 2, ElementKind::Float64);
    const double r = value_range(a).range;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e-3 * r, 1e-3 * r);
    std::vector<double> v(a.data().begin(), a.data().end());
    for (auto &x : v) x += u(rng);
    double s = ssim(a, ScalarGrid(a.shape(), ElementKind::Float64, v));
    EXPECT_GT(s, 0.99);
    EXPECT_LT(s, 1.0);
}

TEST(Ssim, AffineInvariance) {
    auto a = test::gaussian_bumps({31, 29, 17}, 4, ElementKind::Float64);
    auto b = test::white_noise({31, 29, 17}, 5, ElementKind::Float64);
    auto mix = map(a, 1.0, 0.0);
    std::vector<double> v(a.data().begin(), a.data().end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.05 * b[i];
    auto noisy = ScalarGrid(a.shape(), ElementKind::Float64, v);
    const double s = ssim(mix, noisy);
    EXPECT_NEAR(ssim(map(mix, 3.5, 0.0), map(noisy, 3.5, 0.0)), s, 1e-9);
    EXPECT_NEAR(ssim(map(mix, 0.25, -40.0), map(noisy, 0.25, -40.0)), s, 1e-9);
    EXPECT_NEAR(ssim(map(mix, 1.0, 1e3), map(noisy, 1.0, 1e3)), s, 1e-9);
}

TEST(Ssim, MatchesDirectWindowing) {
    auto a = test::gaussian_bumps({23, 30}, 6, ElementKind::Float64);
    auto b = test::white_noise({23, 30}, 7, ElementKind::Float64);
    std::vector<double> v(a.data().begin(), a.data().end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.2 * b[i];
    auto noisy = ScalarGrid(a.shape(), ElementKind::Float64, v);
    EXPECT_NEAR(ssim(a, noisy), ssim_direct_2d(a, noisy), 1e-12);
    auto thin = test::gaussian_bumps({4, 30}, 6, ElementKind::Float64);
    auto thin2 = map(thin, 1.1, 0.0);
    EXPECT_NEAR(ssim(thin, thin2), ssim_direct_2d(thin, thin2), 1e-12);
}

TEST(Ssim, Errors) {
    EXPECT_HPEZ_ERROR(ssim(test::trig_field({10}), test::trig_field({10})), ErrorCode::RankTooLow);
    EXPECT_HPEZ_ERROR(ssim(test::trig_field({10, 3}), test::trig_field({3, 10})), ErrorCode::DimsMismatch);
}

TEST(Evaluate, FillsReport) {
    auto g = test::trig_field({64, 64, 64});
    CompressOptions o;
    o.bound = {BoundMode::ValueRangeRelative, 1e-3};
    auto res = compress(g, o);
    auto dec = decompress(res.archive);
    auto r = evaluate(g, res.archive, dec);
    EXPECT_DOUBLE_EQ(r.compression_ratio, double(g.size() * 4) / double(res.archive.size()));
    EXPECT_DOUBLE_EQ(r.bit_rate, 32.0 / r.compression_ratio);
    EXPECT_LE(r.max_rel_error, 1e-3);
    EXPECT_GT(*r.psnr, 60.0);
    EXPECT_GT(*r.ssim, 0.99);
    auto flat = test::trig_field({5000});
    auto r1 = evaluate(flat, compress(flat, o).archive, decompress(compress(flat, o).archive));
    EXPECT_FALSE(r1.ssim.has_value());
}

TEST(Evaluate, CompressionRatioDefinition) {
    auto g = test::constant_field({1000, 1000}, 0.0);
    std::vector<std::uint8_t> fake(40000, 0);
    auto r = evaluate(g, fake, g);
    EXPECT_DOUBLE_EQ(r.compression_ratio, 100.0);
    EXPECT_EQ(r.max_abs_error, 0.0);
}

TEST(Sweep, MonotoneAndCsv) {
    auto g = test::gaussian_bumps({60, 60, 60}, 9);
    CompressOptions o;
    std::vector<double> eps{1e-2, 1e-3, 1e-4};
    auto rows = sweep(g, eps, o);
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LE(rows[i].report.compression_ratio, rows[i - 1].report.compression_ratio);
        EXPECT_GT(*rows[i].report.psnr, *rows[i - 1].report.psnr);
    }
    for (const auto &r : rows) EXPECT_LE(r.report.max_rel_error, r.epsilon);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "epsilon,bit_rate,psnr,ssim,cr,comp_seconds,decomp_seconds");
    int n = 0;
    while (std::getline(in, line)) ++n;
    EXPECT_EQ(n, 3);
    std::vector<double> one{1e-3};
    EXPECT_EQ(sweep(g, one, o).size(), 1u);
    EXPECT_HPEZ_ERROR(sweep(g, std::vector<double>{}, o), ErrorCode::InvalidArgument);
}

TEST(Transfer, Examples) {
    auto a = estimate_transfer(0, 1e9, 0, 0, 0, 1e9);
    EXPECT_DOUBLE_EQ(a.total_seconds, 1.0);
    auto b = estimate_transfer(100e9, 1e9, 6, 4, 0, 1e9);
    EXPECT_DOUBLE_EQ(b.total_seconds, 11.0);
    EXPECT_DOUBLE_EQ(b.baseline_seconds, 100.0);
    EXPECT_HPEZ_ERROR(estimate_transfer(1, 1, 0, 0, 0, 0), ErrorCode::InvalidArgument);
    EXPECT_HPEZ_ERROR(estimate_transfer(1, 1, 0, 0, 0, -5), ErrorCode::InvalidArgument);
}
