#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "expect_error.hpp"
#include "hpez/md_weights.hpp"
#include "md_oracle.hpp"

using namespace hpez;

TEST(MdWeights, Examples) {
    auto w = md_weights(std::vector<double>{1, 1});
    EXPECT_DOUBLE_EQ(w.alpha[0], 0.5);
    EXPECT_DOUBLE_EQ(w.alpha[1], 0.5);
    EXPECT_DOUBLE_EQ(w.combined_variance, 0.5);

    w = md_weights(std::vector<double>{1, 3});
    EXPECT_DOUBLE_EQ(w.alpha[0], 0.75);
    EXPECT_DOUBLE_EQ(w.alpha[1], 0.25);
    EXPECT_DOUBLE_EQ(w.combined_variance, 0.75);

    w = md_weights(std::vector<double>{2, 2, 2});
    for (double a : w.alpha) EXPECT_NEAR(a, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(w.combined_variance, 2.0 / 3.0, 1e-15);
}

TEST(MdWeights, ExamplesAgreeWithBruteForce) {
    auto o = test::brute_force_alpha({1, 3});
    EXPECT_NEAR(o[0], 0.75, 2e-3);
    o = test::brute_force_alpha({2, 2, 2});
    for (double a : o) EXPECT_NEAR(a, 1.0 / 3.0, 2e-3);
}

TEST(MdWeights, ZeroVarianceTakesAllWeight) {
    auto w = md_weights(std::vector<double>{2.0, 0.0, 0.0});
    EXPECT_EQ(w.alpha, (std::vector<double>{0.0, 1.0, 0.0}));
    EXPECT_EQ(w.combined_variance, 0.0);
    w = md_weights(std::vector<double>{1e-31, 1.0});
    EXPECT_EQ(w.alpha[0], 1.0);
}

TEST(MdWeights, RejectsBadInput) {
    EXPECT_HPEZ_ERROR(md_weights(std::vector<double>{}), ErrorCode::InvalidArgument);
    EXPECT_HPEZ_ERROR(md_weights(std::vector<double>(5, 1.0)), ErrorCode::InvalidArgument);
    EXPECT_HPEZ_ERROR(md_weights(std::vector<double>{1.0, -1.0}), ErrorCode::InvalidArgument);
}

TEST(MdWeights, ClosedFormMatchesGridSearch) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = t % 2 == 0 ? 2 : 3;
        std::vector<double> s(n);
        for (auto &v : s) v = u(rng);
        auto w = md_weights(s);
        auto o = test::brute_force_alpha(s);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(w.alpha[i], o[i], 2e-3);
            sum += w.alpha[i];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
        EXPECT_LE(w.combined_variance, *std::min_element(s.begin(), s.end()));
        double direct = 0.0;
        for (std::size_t i = 0; i < n; ++i) direct += w.alpha[i] * w.alpha[i] * s[i];
        EXPECT_NEAR(direct, w.combined_variance, 1e-12 * w.combined_variance);
    }
}

TEST(MdWeights, ProductFormAgrees) {
    std::vector<double> s{0.5, 2.0, 7.0, 3.0};
    auto w = md_weights(s);
    double prod = 1.0;
    for (double v : s) prod *= v;
    double pisum = 0.0;
    std::vector<double> pi;
    for (double v : s) {
        pi.push_back(prod / v);
        pisum += prod / v;
    }
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(w.alpha[i], pi[i] / pisum, 1e-14);
    EXPECT_NEAR(w.combined_variance, prod / pisum, 1e-14);
}
