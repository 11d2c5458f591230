#include "hpez/archive.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "hpez/byte_io.hpp"
#include "hpez/error.hpp"

namespace hpez {

std::vector<std::uint8_t> assemble_archive(const Archive &a) {
    const auto &h = a.header;
    if (h.dims.empty() || h.dims.size() > kMaxRank) throw Error(ErrorCode::BadRank, "archive rank must be 1-4");
    ByteWriter w;
    w.put_bytes({reinterpret_cast<const std::uint8_t *>(kArchiveMagic), sizeof(kArchiveMagic)});
    w.put<std::uint8_t>(kArchiveVersion);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(h.dims.size()));
    for (auto d : h.dims) w.put<std::uint64_t>(d);
    w.put(static_cast<std::uint8_t>(h.kind));
    w.put(static_cast<std::uint8_t>(h.bound.mode));
    w.put<double>(h.bound.epsilon);
    w.put_block(a.config);
    w.put_block(a.anchors);
    w.put_block(a.codes);
    w.put_block(a.outliers);
    return w.take();
}

Archive parse_archive(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < sizeof(kArchiveMagic) ||
        std::memcmp(bytes.data(), kArchiveMagic, sizeof(kArchiveMagic)) != 0) {
        throw Error(ErrorCode::BadMagic, "not an HPEZ archive");
    }
    ByteReader r(bytes.subspan(sizeof(kArchiveMagic)), ErrorCode::LengthMismatch);
    const auto version = r.get<std::uint8_t>();
    if (version != kArchiveVersion) {
        throw Error(ErrorCode::UnsupportedVersion, "archive version " + std::to_string(version) + " is not supported");
    }
    Archive a;
    const auto rank = r.get<std::uint8_t>();
    if (rank == 0 || rank > kMaxRank) throw Error(ErrorCode::BadRank, "archive rank must be 1-4");
    for (std::size_t i = 0; i < rank; ++i) {
        const auto d = r.get<std::uint64_t>();
        if (d == 0) throw Error(ErrorCode::CorruptStream, "zero extent in archive header");
        a.header.dims.push_back(static_cast<std::size_t>(d));
    }
    const auto kind = r.get<std::uint8_t>();
    if (kind > 3) throw Error(ErrorCode::CorruptStream, "unknown element kind " + std::to_string(kind));
    a.header.kind = static_cast<ElementKind>(kind);
    const auto mode = r.get<std::uint8_t>();
    if (mode > 1) throw Error(ErrorCode::CorruptStream, "unknown bound mode " + std::to_string(mode));
    a.header.bound.mode = static_cast<BoundMode>(mode);
    a.header.bound.epsilon = r.get<double>();
    auto block = [&] {
        auto b = r.get_block();
        return std::vector<std::uint8_t>(b.begin(), b.end());
    };
    a.config = block();
    a.anchors = block();
    a.codes = block();
    a.outliers = block();
    if (r.remaining() != 0) throw Error(ErrorCode::LengthMismatch, "trailing bytes after the last stream");
    return a;
}

}  // namespace hpez
