#ifndef HPEZ_AUTOTUNER_HPP
#define HPEZ_AUTOTUNER_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hpez/config.hpp"
#include "hpez/grid.hpp"
#include "hpez/interpolation.hpp"
#include "hpez/level_plan.hpp"

namespace hpez {

enum class TargetKind : std::uint8_t { Ratio, Psnr };

/// Ratio minimises the estimated bit rate. Psnr maximises
/// PSNR - lambda * bit_rate (dB traded per bit/value).
struct QualityTarget {
    TargetKind kind = TargetKind::Ratio;
    double lambda = 6.02;
};

enum class KernelSet : std::uint8_t { All, Linear, Cubic };
enum class PredictorPreference : std::uint8_t { Auto, Interp, Lorenzo };

struct TunerOptions {
    QualityTarget target;
    double sample_rate = 0.002;
    double test_fraction = 0.01;
    std::size_t block_size = kDefaultBlockSize;
    std::size_t anchor_stride = kDefaultAnchorStride;
    std::uint32_t radius = kDefaultRadius;
    double lorenzo_coef = 1.2;
    KernelSet kernels = KernelSet::All;
    bool natural_spline = true;
    bool multi_dim = true;
    bool same_level = true;
    bool freeze = true;
    bool lorenzo = true;
    bool blockwise = true;
    bool eb_tuning = true;
    PredictorPreference predictor = PredictorPreference::Auto;
    Traversal traversal = Traversal::FastVaryingFirst;
};

inline constexpr double kNoEstimate = std::numeric_limits<double>::infinity();

/// Stride-1 interpolation statistics on the uniform sample. Axes too short for
/// an estimate hold kNoEstimate.
struct SampleStats {
    std::size_t sample_count = 0;
    std::vector<double> linear_mse;
    std::vector<double> cubic_mse;
    std::vector<double> sigma_sq;
    double md_mse = kNoEstimate;  // weighted multi-dimensional prediction
    std::optional<std::uint8_t> freeze_candidate;
};

SampleStats analyze_samples(const ScalarGrid &grid, double rate = 0.002);

/// Blocks of the grid used for sampled compression tests. Every block has
/// the same shape; `stride` is the anchor stride used inside a block, so the
/// block's levels are the finest log2(stride) levels of the full grid.
struct TuningSample {
    Shape block_shape;
    std::size_t stride = 0;
    std::vector<std::vector<double>> blocks;
};

TuningSample make_tuning_sample(const ScalarGrid &grid, std::size_t anchor_stride, double fraction);

/// Outcome of a sampled compression test, projected onto the full grid.
struct TestEstimate {
    double bit_rate = 0.0;
    double psnr = 0.0;
    double mae = 0.0;
};

double target_score(const TestEstimate &e, const QualityTarget &t);

/// Kernel-major candidate list; ties during tuning go to the earliest entry.
std::vector<InterpChoice> candidate_choices(std::size_t rank, std::optional<std::uint8_t> frozen_dim,
                                            const TunerOptions &opts);

std::vector<float> md_alpha_for(const SampleStats &stats, std::size_t rank, std::optional<std::uint8_t> frozen_dim);

struct GlobalTuning {
    std::vector<InterpChoice> choices;  // [l-1] configures level l
    TestEstimate estimate;
};

GlobalTuning tune_global(const ScalarGrid &grid, const TuningSample &sample, const SampleStats &stats, double e,
                         std::optional<std::uint8_t> frozen_dim, const TunerOptions &opts);

TestEstimate interp_test(const ScalarGrid &grid, const TuningSample &sample, const CompressionConfig &config,
                         const TunerOptions &opts);

struct FreezeDecision {
    std::optional<std::uint8_t> frozen_dim;
    GlobalTuning chosen;
    GlobalTuning rejected;
};

FreezeDecision tune_freeze(const ScalarGrid &grid, const TuningSample &sample, const SampleStats &stats, double e,
                           const GlobalTuning &unfrozen, const TunerOptions &opts);

struct EbDecision {
    double alpha = 1.0;
    double beta = 1.0;
    TestEstimate estimate;
};

/// `base` supplies everything but alpha and beta.
EbDecision tune_eb(const ScalarGrid &grid, const TuningSample &sample, const CompressionConfig &base,
                   const TunerOptions &opts);

struct LorenzoDecision {
    bool use_lorenzo = false;
    std::uint8_t order = 1;
    TestEstimate estimate;  // of the better order
};

TestEstimate lorenzo_test(const ScalarGrid &grid, const TuningSample &sample, double e, std::uint8_t order,
                          const TunerOptions &opts);
LorenzoDecision tune_lorenzo(const ScalarGrid &grid, const TuningSample &sample, const TestEstimate &interp,
                             double e, const TunerOptions &opts);

inline constexpr std::size_t kBlockTunedLevels = 3;

BlockTable tune_blocks(const ScalarGrid &grid, const CompressionConfig &global, const TunerOptions &opts);

struct TuneTrace {
    SampleStats stats;
    GlobalTuning global;
    std::optional<FreezeDecision> freeze;
    EbDecision eb;
    std::optional<LorenzoDecision> lorenzo;
};

/// analyze -> global -> freeze -> error bounds -> Lorenzo -> blocks.
CompressionConfig tune(const ScalarGrid &grid, double e, const TunerOptions &opts, TuneTrace *trace = nullptr);

}  // namespace hpez

#endif
