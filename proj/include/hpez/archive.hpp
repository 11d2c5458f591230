#ifndef HPEZ_ARCHIVE_HPP
#define HPEZ_ARCHIVE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hpez/grid.hpp"

namespace hpez {

inline constexpr char kArchiveMagic[8] = {'H', 'P', 'E', 'Z', 'A', 'R', 'C', 'V'};
inline constexpr std::uint8_t kArchiveVersion = 1;

struct ArchiveHeader {
    std::vector<std::size_t> dims;
    ElementKind kind = ElementKind::Float32;
    ErrorBoundSpec bound;

    bool operator==(const ArchiveHeader &) const = default;
};

/// The config block and the three streams are stored as given; the codec
/// fills them with lossless-passed bytes.
struct Archive {
    ArchiveHeader header;
    std::vector<std::uint8_t> config;
    std::vector<std::uint8_t> anchors;
    std::vector<std::uint8_t> codes;
    std::vector<std::uint8_t> outliers;

    bool operator==(const Archive &) const = default;
};

std::vector<std::uint8_t> assemble_archive(const Archive &archive);
Archive parse_archive(std::span<const std::uint8_t> bytes);

}  // namespace hpez

#endif
