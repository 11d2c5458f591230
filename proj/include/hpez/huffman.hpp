#ifndef HPEZ_HUFFMAN_HPP
#define HPEZ_HUFFMAN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hpez {

inline constexpr std::uint8_t kMaxCodeLength = 32;

/// Canonical Huffman table: only (symbol, length) pairs are stored; codes are
/// assigned in (length, symbol) order.
struct HuffmanTable {
    std::vector<std::uint32_t> symbols;  // ascending
    std::vector<std::uint8_t> lengths;   // parallel to symbols

    bool operator==(const HuffmanTable &) const = default;
};

struct HuffmanEncoded {
    HuffmanTable table;
    std::vector<std::uint8_t> bits;  // MSB-first
    std::uint64_t bit_count = 0;
};

/// Ties during tree construction are broken by symbol value so identical
/// frequency multisets give identical tables. A one-symbol alphabet gets a
/// 1-bit code. Lengths are limited to kMaxCodeLength.
HuffmanTable build_huffman_table(std::span<const std::uint32_t> codes);
HuffmanEncoded huffman_encode(std::span<const std::uint32_t> codes);
std::vector<std::uint32_t> huffman_decode(const HuffmanTable &table, std::span<const std::uint8_t> bits,
                                          std::size_t count);

/// Self-contained byte form: count, table, bitstream.
std::vector<std::uint8_t> huffman_pack(std::span<const std::uint32_t> codes);
std::vector<std::uint32_t> huffman_unpack(std::span<const std::uint8_t> bytes, std::uint64_t alphabet_limit);

}  // namespace hpez

#endif
