#ifndef HPEZ_METRICS_HPP
#define HPEZ_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "hpez/codec.hpp"
#include "hpez/grid.hpp"

namespace hpez {

/// PSNR in dB with the dynamic range of `a`. +inf when the grids are equal;
/// nullopt (undefined) when `a` is constant and the grids differ.
std::optional<double> psnr(const ScalarGrid &a, const ScalarGrid &b);

inline constexpr std::size_t kSsimWindow = 7;
inline constexpr std::size_t kSsimStep = 2;

/// Mean SSIM over 7-wide windows placed every 2 points along each axis
/// (a shorter axis is covered by one window), K1 = 0.01, K2 = 0.03,
/// dynamic range = range(a). Luminance is taken relative to min(a), which makes
/// the index invariant under a common positive scale and shift.
double ssim(const ScalarGrid &a, const ScalarGrid &b);

double max_abs_error(const ScalarGrid &a, const ScalarGrid &b);

struct QualityReport {
    double compression_ratio = 0.0;
    double bit_rate = 0.0;
    std::optional<double> psnr;
    std::optional<double> ssim;  // absent for rank-1 grids
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
};

QualityReport evaluate(const ScalarGrid &original, std::span<const std::uint8_t> archive,
                       const ScalarGrid &decompressed);

struct SweepRow {
    double epsilon = 0.0;
    QualityReport report;
    double comp_seconds = 0.0;
    double decomp_seconds = 0.0;
};

/// One compress + decompress + evaluate per epsilon; `base` supplies the
/// bound mode and every other option.
std::vector<SweepRow> sweep(const ScalarGrid &grid, std::span<const double> epsilons, const CompressOptions &base);

void write_sweep_csv(std::ostream &out, std::span<const SweepRow> rows);

struct TransferEstimate {
    double total_seconds = 0.0;
    double baseline_seconds = 0.0;
};

/// total = io + comp + decomp + archive_bytes / link; baseline = original_bytes / link.
TransferEstimate estimate_transfer(double original_bytes, double archive_bytes, double comp_seconds,
                                   double decomp_seconds, double io_seconds, double link_bytes_per_second);

}  // namespace hpez

#endif
