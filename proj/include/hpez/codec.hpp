#ifndef HPEZ_CODEC_HPP
#define HPEZ_CODEC_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "hpez/autotuner.hpp"
#include "hpez/config.hpp"
#include "hpez/grid.hpp"
#include "hpez/interpolation.hpp"
#include "hpez/lossless.hpp"

namespace hpez {

struct CompressOptions {
    ErrorBoundSpec bound;
    TunerOptions tuning;
    LosslessBackend backend = LosslessBackend::Deflate;
    bool verbatim = false;  // store every value losslessly
};

struct CompressResult {
    std::vector<std::uint8_t> archive;
    std::vector<double> reconstruction;  // the compressor's final working grid
    CompressionConfig config;
};

/// Resolved absolute bound; a zero bound (constant grid in relative mode)
/// becomes the smallest positive double.
double resolve_bound(const ErrorBoundSpec &bound, const ScalarGrid &grid);

/// Compresses with an explicit config, skipping the tuner.
CompressResult compress_with(const ScalarGrid &grid, const CompressionConfig &config, const CompressOptions &opts);
CompressResult compress(const ScalarGrid &grid, const CompressOptions &opts);

ScalarGrid decompress(std::span<const std::uint8_t> archive, Traversal traversal = Traversal::FastVaryingFirst);

}  // namespace hpez

#endif
