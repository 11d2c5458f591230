#include "hpez/metrics.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>

#include "hpez/error.hpp"

namespace hpez {

namespace {

void require_same_dims(const ScalarGrid &a, const ScalarGrid &b) {
    if (!(a.shape() == b.shape())) throw Error(ErrorCode::DimsMismatch, "grids have different dimensions");
}

// Sums of `v` over windows of length w[a] starting every kSsimStep points
// (one window when the axis is shorter than kSsimWindow), one axis at a time.
std::vector<double> window_sums(std::vector<double> v, std::vector<std::size_t> dims) {
    const std::size_t rank = dims.size();
    for (std::size_t a = 0; a < rank; ++a) {
        const std::size_t n = dims[a];
        const std::size_t w = std::min(kSsimWindow, n);
        const std::size_t starts = (n - w) / kSsimStep + 1;
        std::size_t outer = 1, inner = 1;
        for (std::size_t j = 0; j < a; ++j) outer *= dims[j];
        for (std::size_t j = a + 1; j < rank; ++j) inner *= dims[j];
        std::vector<double> out(outer * starts * inner, 0.0);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t s = 0; s < starts; ++s) {
                double *dst = &out[(o * starts + s) * inner];
                for (std::size_t k = 0; k < w; ++k) {
                    const double *src = &v[(o * n + s * kSsimStep + k) * inner];
                    for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i];
                }
            }
        }
        v = std::move(out);
        dims[a] = starts;
    }
    return v;
}

}  // namespace

std::optional<double> psnr(const ScalarGrid &a, const ScalarGrid &b) {
    require_same_dims(a, b);
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    if (sq == 0.0) return std::numeric_limits<double>::infinity();
    const double range = value_range(a).range;
    if (range == 0.0) return std::nullopt;
    const double mse = sq / static_cast<double>(a.size());
    return 20.0 * std::log10(range) - 10.0 * std::log10(mse);
}

double ssim(const ScalarGrid &a, const ScalarGrid &b) {
    require_same_dims(a, b);
    if (a.shape().rank() < 2) throw Error(ErrorCode::RankTooLow, "SSIM needs a grid of rank 2 or more");
    const std::size_t n = a.size();
    const ValueRange vr = value_range(a);
    const double range = vr.range;
    const double L = range > 0.0 ? range : 1.0;
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);

    // Windows work on values centred on the mean of `a`; luminance is measured
    // from the minimum of `a`.
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += a[i];
    m /= static_cast<double>(n);
    std::vector<double> xa(n), xb(n), xaa(n), xbb(n), xab(n);
    for (std::size_t i = 0; i < n; ++i) {
        xa[i] = a[i] - m;
        xb[i] = b[i] - m;
        xaa[i] = xa[i] * xa[i];
        xbb[i] = xb[i] * xb[i];
        xab[i] = xa[i] * xb[i];
    }
    const auto &dims = a.shape().dims();
    double w = 1.0;
    for (auto d : dims) w *= static_cast<double>(std::min(kSsimWindow, d));
    const auto sa = window_sums(std::move(xa), dims);
    const auto sb = window_sums(std::move(xb), dims);
    const auto saa = window_sums(std::move(xaa), dims);
    const auto sbb = window_sums(std::move(xbb), dims);
    const auto sab = window_sums(std::move(xab), dims);

    double total = 0.0;
    for (std::size_t k = 0; k < sa.size(); ++k) {
        const double ca = sa[k] / w, cb = sb[k] / w;
        const double va = saa[k] / w - ca * ca;
        const double vb = sbb[k] / w - cb * cb;
        const double cov = sab[k] / w - ca * cb;
        const double ma = ca + (m - vr.min), mb = cb + (m - vr.min);
        total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return total / static_cast<double>(sa.size());
}

double max_abs_error(const ScalarGrid &a, const ScalarGrid &b) {
    require_same_dims(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

QualityReport evaluate(const ScalarGrid &original, std::span<const std::uint8_t> archive,
                       const ScalarGrid &decompressed) {
    require_same_dims(original, decompressed);
    if (archive.empty()) throw Error(ErrorCode::EmptyInput, "empty archive");
    QualityReport r;
    const double orig_bytes = static_cast<double>(original.size() * element_size(original.kind()));
    r.compression_ratio = orig_bytes / static_cast<double>(archive.size());
    r.bit_rate = static_cast<double>(element_bits(original.kind())) / r.compression_ratio;
    r.psnr = psnr(original, decompressed);
    if (original.shape().rank() >= 2) r.ssim = ssim(original, decompressed);
    r.max_abs_error = max_abs_error(original, decompressed);
    const double range = value_range(original).range;
    if (range > 0.0) {
        r.max_rel_error = r.max_abs_error / range;
    } else {
        r.max_rel_error = r.max_abs_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return r;
}

std::vector<SweepRow> sweep(const ScalarGrid &grid, std::span<const double> epsilons, const CompressOptions &base) {
    if (epsilons.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one epsilon");
    using clock = std::chrono::steady_clock;
    std::vector<SweepRow> rows;
    for (double eps : epsilons) {
        CompressOptions o = base;
        o.bound.epsilon = eps;
        const auto t0 = clock::now();
        const auto res = compress(grid, o);
        const auto t1 = clock::now();
        const auto dec = decompress(res.archive, o.tuning.traversal);
        const auto t2 = clock::now();
        SweepRow row;
        row.epsilon = eps;
        row.comp_seconds = std::chrono::duration<double>(t1 - t0).count();
        row.decomp_seconds = std::chrono::duration<double>(t2 - t1).count();
        row.report = evaluate(grid, res.archive, dec);
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::ostream &out, std::span<const SweepRow> rows) {
    out << "epsilon,bit_rate,psnr,ssim,cr,comp_seconds,decomp_seconds\n";
    out << std::setprecision(10);
    for (const auto &r : rows) {
        out << r.epsilon << ',' << r.report.bit_rate << ',';
        if (r.report.psnr) {
            out << *r.report.psnr;
        } else {
            out << "undefined";
        }
        out << ',';
        if (r.report.ssim) out << *r.report.ssim;
        out << ',' << r.report.compression_ratio << ',' << r.comp_seconds << ',' << r.decomp_seconds << '\n';
    }
}

TransferEstimate estimate_transfer(double original_bytes, double archive_bytes, double comp_seconds,
                                   double decomp_seconds, double io_seconds, double link) {
    if (!(link > 0.0) || !std::isfinite(link)) throw Error(ErrorCode::InvalidArgument, "link speed must be positive");
    if (original_bytes < 0 || archive_bytes < 0 || comp_seconds < 0 || decomp_seconds < 0 || io_seconds < 0) {
        throw Error(ErrorCode::InvalidArgument, "sizes and times must be non-negative");
    }
    return {io_seconds + comp_seconds + decomp_seconds + archive_bytes / link, original_bytes / link};
}

}  // namespace hpez
