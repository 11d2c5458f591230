#include "hpez/lossless.hpp"

#include <zlib.h>

#include <string>

#include "hpez/byte_io.hpp"
#include "hpez/error.hpp"

namespace hpez {

std::vector<std::uint8_t> lossless_pass(std::span<const std::uint8_t> bytes, LosslessBackend backend) {
    ByteWriter w;
    w.put(static_cast<std::uint8_t>(backend));
    switch (backend) {
        case LosslessBackend::Store:
            w.put_bytes(bytes);
            return w.take();
        case LosslessBackend::Deflate: {
            w.put<std::uint64_t>(bytes.size());
            uLongf cap = compressBound(static_cast<uLong>(bytes.size()));
            std::vector<std::uint8_t> out(cap);
            int rc = compress2(out.data(), &cap, bytes.data(), static_cast<uLong>(bytes.size()), 6);
            if (rc != Z_OK) throw Error(ErrorCode::CorruptStream, "deflate failed with code " + std::to_string(rc));
            out.resize(cap);
            w.put_bytes(out);
            return w.take();
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown lossless backend");
}

std::vector<std::uint8_t> lossless_unpass(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw Error(ErrorCode::CorruptStream, "missing lossless backend tag");
    const auto tag = bytes[0];
    auto body = bytes.subspan(1);
    if (tag == static_cast<std::uint8_t>(LosslessBackend::Store)) return {body.begin(), body.end()};
    if (tag != static_cast<std::uint8_t>(LosslessBackend::Deflate)) {
        throw Error(ErrorCode::CorruptStream, "unknown lossless backend tag " + std::to_string(tag));
    }
    ByteReader r(body, ErrorCode::CorruptStream);
    const auto raw = r.get<std::uint64_t>();
    auto packed = r.get_bytes(r.remaining());
    if (raw > (std::uint64_t{1} << 40)) throw Error(ErrorCode::CorruptStream, "implausible raw length");
    if (raw == 0) return {};
    std::vector<std::uint8_t> out(static_cast<std::size_t>(raw));
    uLongf len = static_cast<uLongf>(raw);
    int rc = uncompress(out.data(), &len, packed.data(), static_cast<uLong>(packed.size()));
    if (rc != Z_OK || len != raw) throw Error(ErrorCode::CorruptStream, "inflate failed with code " + std::to_string(rc));
    return out;
}

}  // namespace hpez
