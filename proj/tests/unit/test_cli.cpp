#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fields.hpp"
#include "hpez/cli.hpp"
#include "hpez/codec.hpp"

using namespace hpez;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hpez_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
        grid_ = test::gaussian_bumps({40, 48, 36}, 3);
        auto raw = to_raw(grid_);
        std::ofstream(path("in.f32"), std::ios::binary).write(reinterpret_cast<const char *>(raw.data()), raw.size());
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "hpez");
        out_.str("");
        err_.str("");
        return cli::run(args, out_, err_);
    }

    std::vector<std::string> grid_flags() const {
        return {"-i", path("in.f32"), "-d", "40", "48", "36", "-t", "f32"};
    }

    ScalarGrid read_grid(const std::string &name) const {
        std::ifstream in(path(name), std::ios::binary);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return load_raw(bytes, {40, 48, 36}, ElementKind::Float32);
    }

    fs::path dir_;
    ScalarGrid grid_;
    std::ostringstream out_, err_;
};

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string> &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_F(CliTest, CompressDecompressEvaluate) {
    ASSERT_EQ(run(cat({"compress"}, cat(grid_flags(), {"-o", path("a.hpez"), "-M", "REL", "-e", "1e-3"}))), 0)
        << err_.str();
    ASSERT_EQ(run({"decompress", "-i", path("a.hpez"), "-o", path("out.f32")}), 0) << err_.str();
    auto dec = read_grid("out.f32");
    const double e = 1e-3 * value_range(grid_).range;
    for (std::size_t i = 0; i < grid_.size(); ++i) ASSERT_LE(std::fabs(dec[i] - grid_[i]), e);

    ASSERT_EQ(run(cat({"evaluate"}, cat(grid_flags(), {"-a", path("a.hpez")}))), 0) << err_.str();
    EXPECT_NE(out_.str().find("compression_ratio="), std::string::npos);
    EXPECT_NE(out_.str().find("ssim="), std::string::npos);
    ASSERT_EQ(run(cat({"evaluate"}, cat(grid_flags(), {"-a", path("a.hpez"), "-z", path("out.f32")}))), 0);
    EXPECT_NE(out_.str().find("max_rel_error="), std::string::npos);
}

TEST_F(CliTest, AblationFlags) {
    auto args = cat({"compress"}, cat(grid_flags(), {"-o", path("b.hpez"), "-e", "1e-3", "--kernel-set", "linear",
                                                     "--no-freeze", "--no-blockwise", "--no-eb-tuning", "--no-lorenzo",
                                                     "--no-mdinterp", "--no-same-level", "--no-natural-spline",
                                                     "--no-fvfi", "--lossless-backend", "store"}));
    ASSERT_EQ(run(args), 0) << err_.str();
    ASSERT_EQ(run({"decompress", "-i", path("b.hpez"), "-o", path("b.f32"), "--no-fvfi"}), 0);
    auto dec = read_grid("b.f32");
    const double e = 1e-3 * value_range(grid_).range;
    for (std::size_t i = 0; i < grid_.size(); ++i) ASSERT_LE(std::fabs(dec[i] - grid_[i]), e);
}

TEST_F(CliTest, SweepWritesThreeRows) {
    ASSERT_EQ(run(cat({"sweep"}, cat(grid_flags(), {"-e", "1e-2", "1e-3", "1e-4"}))), 0) << err_.str();
    std::istringstream in(out_.str());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 4);
    ASSERT_EQ(run(cat({"sweep"}, cat(grid_flags(), {"-e", "1e-2", "-o", path("s.csv")}))), 0);
    std::ifstream f(path("s.csv"));
    lines = 0;
    while (std::getline(f, line)) ++lines;
    EXPECT_EQ(lines, 2);
}

TEST_F(CliTest, TransferEstimate) {
    ASSERT_EQ(run({"transfer-est", "--original-bytes", "100e9", "--archive-bytes", "1e9", "--comp-seconds", "6",
                   "--decomp-seconds", "4", "--link-speed", "1e9"}),
              0)
        << err_.str();
    EXPECT_NE(out_.str().find("total_seconds=11\n"), std::string::npos);
    EXPECT_NE(out_.str().find("baseline_seconds=100\n"), std::string::npos);
    EXPECT_EQ(run({"transfer-est", "--original-bytes", "1", "--archive-bytes", "1", "--link-speed", "0"}), 2);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}), 2);
    EXPECT_EQ(run({"frobnicate"}), 2);
    EXPECT_EQ(run({"compress", "-i", path("in.f32")}), 2);
    EXPECT_EQ(run(cat({"compress"}, cat(grid_flags(), {"-o", path("x"), "-e", "0"}))), 2);
    EXPECT_EQ(run(cat({"compress"}, cat(grid_flags(), {"-o", path("x"), "-e", "1e-3", "-t", "f16"}))), 2);
    EXPECT_EQ(run(cat({"compress"}, cat(grid_flags(), {"-o", path("x"), "-e", "1e-3", "--anchor-stride", "48"}))), 2);
    EXPECT_FALSE(err_.str().empty());
}

TEST_F(CliTest, IoAndFormatErrorsExitOne) {
    EXPECT_EQ(run({"decompress", "-i", path("missing.hpez"), "-o", path("o")}), 1);
    std::ofstream(path("junk.hpez")) << "not an archive";
    EXPECT_EQ(run({"decompress", "-i", path("junk.hpez"), "-o", path("o")}), 1);
    EXPECT_NE(err_.str().find("BadMagic"), std::string::npos);
    auto wrong = grid_flags();
    wrong[3] = "41";
    EXPECT_EQ(run(cat({"compress"}, cat(wrong, {"-o", path("x"), "-e", "1e-3"}))), 1);
}

TEST_F(CliTest, ConfigFileProvidesDefaults) {
    std::ofstream(path("c.cfg")) << "# ablation baseline\nkernel-set = linear\nno-freeze = true\nno-blockwise=1\n"
                                    "lossless-backend=store\nradius = 512\n";
    ASSERT_EQ(run(cat({"compress", "--config", path("c.cfg")},
                      cat(grid_flags(), {"-o", path("c.hpez"), "-e", "1e-3", "--radius", "1024"}))),
              0)
        << err_.str();
    std::ifstream in(path("c.hpez"), std::ios::binary);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ASSERT_EQ(run({"decompress", "-i", path("c.hpez"), "-o", path("c.f32")}), 0);
    std::ofstream(path("bad.cfg")) << "colour = blue\n";
    EXPECT_EQ(run(cat({"compress", "--config", path("bad.cfg")}, cat(grid_flags(), {"-o", path("x"), "-e", "1"}))), 2);
}
