#ifndef HPEZ_BYTE_IO_HPP
#define HPEZ_BYTE_IO_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "hpez/error.hpp"

namespace hpez {

// Fixed little-endian encoding of arithmetic values, independent of the host.
template <class T>
void store_le(std::uint8_t *out, T value) {
    static_assert(std::is_arithmetic_v<T>);
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U bits;
    std::memcpy(&bits, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out[i] = static_cast<std::uint8_t>(bits >> (8 * i));
    }
}

template <class T>
T load_le(const std::uint8_t *in) {
    static_assert(std::is_arithmetic_v<T>);
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bits |= static_cast<U>(static_cast<U>(in[i]) << (8 * i));
    }
    T value;
    std::memcpy(&value, &bits, sizeof(T));
    return value;
}

class ByteWriter {
public:
    template <class T>
    void put(T value) {
        std::size_t at = buf_.size();
        buf_.resize(at + sizeof(T));
        store_le(buf_.data() + at, value);
    }

    void put_varint(std::uint64_t value) {
        while (value >= 0x80) {
            buf_.push_back(static_cast<std::uint8_t>(value | 0x80));
            value >>= 7;
        }
        buf_.push_back(static_cast<std::uint8_t>(value));
    }

    void put_bytes(std::span<const std::uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }

    /// Length-prefixed (u64) block.
    void put_block(std::span<const std::uint8_t> bytes) {
        put<std::uint64_t>(bytes.size());
        put_bytes(bytes);
    }

    std::size_t size() const { return buf_.size(); }
    std::vector<std::uint8_t> take() { return std::move(buf_); }
    const std::vector<std::uint8_t> &bytes() const { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes, ErrorCode underflow = ErrorCode::LengthMismatch)
        : bytes_(bytes), underflow_(underflow) {}

    template <class T>
    T get() {
        require(sizeof(T));
        T value = load_le<T>(bytes_.data() + pos_);
        pos_ += sizeof(T);
        return value;
    }

    std::uint64_t get_varint() {
        std::uint64_t value = 0;
        for (int shift = 0; shift < 64; shift += 7) {
            auto byte = get<std::uint8_t>();
            value |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
            if ((byte & 0x80) == 0) return value;
        }
        throw Error(underflow_, "varint too long");
    }

    std::span<const std::uint8_t> get_bytes(std::size_t n) {
        require(n);
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    std::span<const std::uint8_t> get_block() {
        auto n = get<std::uint64_t>();
        if (n > remaining()) {
            throw Error(underflow_, "declared length " + std::to_string(n) + " exceeds " +
                                        std::to_string(remaining()) + " available bytes");
        }
        return get_bytes(static_cast<std::size_t>(n));
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t position() const { return pos_; }

private:
    void require(std::size_t n) const {
        if (n > remaining()) {
            throw Error(underflow_, "need " + std::to_string(n) + " bytes, " + std::to_string(remaining()) +
                                        " available");
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    ErrorCode underflow_;
};

}  // namespace hpez

#endif
