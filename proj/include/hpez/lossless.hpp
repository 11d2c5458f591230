#ifndef HPEZ_LOSSLESS_HPP
#define HPEZ_LOSSLESS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace hpez {

enum class LosslessBackend : std::uint8_t { Store = 0, Deflate = 1 };

/// Output starts with the backend tag byte, so unpass needs no side channel.
std::vector<std::uint8_t> lossless_pass(std::span<const std::uint8_t> bytes, LosslessBackend backend);
std::vector<std::uint8_t> lossless_unpass(std::span<const std::uint8_t> bytes);

}  // namespace hpez

#endif
