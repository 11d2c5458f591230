#include "hpez/huffman.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "hpez/byte_io.hpp"
#include "hpez/error.hpp"

namespace hpez {

namespace {

constexpr std::uint32_t kDenseLimit = 1u << 22;
constexpr unsigned kLookupBits = 12;

struct SymbolFreq {
    std::uint32_t symbol;
    std::uint64_t freq;
};

std::vector<SymbolFreq> count_symbols(std::span<const std::uint32_t> codes) {
    std::uint32_t max_sym = *std::max_element(codes.begin(), codes.end());
    std::vector<SymbolFreq> out;
    if (max_sym < kDenseLimit) {
        std::vector<std::uint64_t> freq(static_cast<std::size_t>(max_sym) + 1, 0);
        for (auto c : codes) ++freq[c];
        for (std::uint32_t s = 0; s <= max_sym; ++s) {
            if (freq[s]) out.push_back({s, freq[s]});
        }
    } else {
        std::unordered_map<std::uint32_t, std::uint64_t> freq;
        for (auto c : codes) ++freq[c];
        for (auto [s, f] : freq) out.push_back({s, f});
        std::sort(out.begin(), out.end(), [](auto &a, auto &b) { return a.symbol < b.symbol; });
    }
    return out;
}

// Code lengths via the two-queue construction over leaves sorted by
// (freq, symbol); on equal weight a leaf is taken before an internal node.
std::vector<std::uint8_t> code_lengths(const std::vector<SymbolFreq> &syms) {
    const std::size_t n = syms.size();
    std::vector<std::uint8_t> len(n, 0);
    if (n == 1) {
        len[0] = 1;
        return len;
    }
    std::vector<std::size_t> leaves(n);
    std::iota(leaves.begin(), leaves.end(), 0);
    std::sort(leaves.begin(), leaves.end(), [&](std::size_t a, std::size_t b) {
        if (syms[a].freq != syms[b].freq) return syms[a].freq < syms[b].freq;
        return syms[a].symbol < syms[b].symbol;
    });

    // Nodes 0..n-1 are leaves (by position in `leaves`), n.. are internal.
    std::vector<std::uint64_t> weight(2 * n - 1);
    std::vector<std::size_t> parent(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) weight[i] = syms[leaves[i]].freq;
    std::size_t next_leaf = 0, next_internal = n, created = n;
    auto take = [&]() {
        if (next_leaf < n && (next_internal >= created || weight[next_leaf] <= weight[next_internal])) {
            return next_leaf++;
        }
        return next_internal++;
    };
    while (created < 2 * n - 1) {
        std::size_t a = take();
        std::size_t b = take();
        weight[created] = weight[a] + weight[b];
        parent[a] = parent[b] = created;
        ++created;
    }
    std::vector<std::uint32_t> depth(2 * n - 1, 0);
    for (std::size_t i = 2 * n - 1; i-- > 0;) {
        if (i != 2 * n - 2) depth[i] = depth[parent[i]] + 1;
    }

    std::vector<std::uint32_t> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[leaves[i]] = depth[i];

    // Limit lengths: clamp, then lengthen the longest sub-limit codes until
    // the Kraft sum fits again.
    const std::uint64_t full = std::uint64_t{1} << kMaxCodeLength;
    std::uint64_t kraft = 0;
    for (auto &d : raw) {
        d = std::min<std::uint32_t>(d, kMaxCodeLength);
        kraft += std::uint64_t{1} << (kMaxCodeLength - d);
    }
    while (kraft > full) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (raw[i] >= kMaxCodeLength) continue;
            if (pick == n || raw[i] > raw[pick] || (raw[i] == raw[pick] && syms[i].freq < syms[pick].freq)) pick = i;
        }
        kraft -= std::uint64_t{1} << (kMaxCodeLength - raw[pick] - 1);
        ++raw[pick];
    }
    for (std::size_t i = 0; i < n; ++i) len[i] = static_cast<std::uint8_t>(raw[i]);
    return len;
}

struct Canonical {
    std::vector<std::uint32_t> order;  // table indices sorted by (length, symbol)
    std::vector<std::uint32_t> code;   // per table index
};

Canonical assign_codes(const HuffmanTable &t) {
    Canonical c;
    c.order.resize(t.symbols.size());
    std::iota(c.order.begin(), c.order.end(), 0);
    std::stable_sort(c.order.begin(), c.order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return t.lengths[a] < t.lengths[b]; });
    c.code.resize(t.symbols.size());
    std::uint64_t code = 0;
    std::uint8_t prev = 0;
    for (auto i : c.order) {
        code <<= (t.lengths[i] - prev);
        prev = t.lengths[i];
        c.code[i] = static_cast<std::uint32_t>(code);
        ++code;
    }
    return c;
}

void validate(const HuffmanTable &t) {
    if (t.symbols.empty() || t.symbols.size() != t.lengths.size()) {
        throw Error(ErrorCode::InvalidTable, "empty or inconsistent table");
    }
    std::uint64_t kraft = 0;
    for (std::size_t i = 0; i < t.symbols.size(); ++i) {
        if (i > 0 && t.symbols[i] <= t.symbols[i - 1]) throw Error(ErrorCode::InvalidTable, "symbols not ascending");
        if (t.lengths[i] == 0 || t.lengths[i] > kMaxCodeLength) {
            throw Error(ErrorCode::InvalidTable, "code length " + std::to_string(t.lengths[i]) + " out of range");
        }
        kraft += std::uint64_t{1} << (kMaxCodeLength - t.lengths[i]);
    }
    if (kraft > (std::uint64_t{1} << kMaxCodeLength)) throw Error(ErrorCode::InvalidTable, "Kraft sum exceeds 1");
}

class BitWriter {
public:
    void put(std::uint32_t code, unsigned len) {
        acc_ = (acc_ << len) | code;
        fill_ += len;
        while (fill_ >= 8) {
            fill_ -= 8;
            out_.push_back(static_cast<std::uint8_t>(acc_ >> fill_));
        }
        count_ += len;
    }
    std::vector<std::uint8_t> finish() {
        if (fill_ > 0) out_.push_back(static_cast<std::uint8_t>(acc_ << (8 - fill_)));
        fill_ = 0;
        return std::move(out_);
    }
    std::uint64_t count() const { return count_; }

private:
    std::uint64_t acc_ = 0;
    unsigned fill_ = 0;
    std::uint64_t count_ = 0;
    std::vector<std::uint8_t> out_;
};

}  // namespace

HuffmanTable build_huffman_table(std::span<const std::uint32_t> codes) {
    if (codes.empty()) throw Error(ErrorCode::EmptyInput, "cannot build a Huffman table for an empty stream");
    auto syms = count_symbols(codes);
    auto len = code_lengths(syms);
    HuffmanTable t;
    for (std::size_t i = 0; i < syms.size(); ++i) {
        t.symbols.push_back(syms[i].symbol);
        t.lengths.push_back(len[i]);
    }
    return t;
}

HuffmanEncoded huffman_encode(std::span<const std::uint32_t> codes) {
    HuffmanEncoded enc;
    enc.table = build_huffman_table(codes);
    const auto canon = assign_codes(enc.table);
    const auto &syms = enc.table.symbols;

    BitWriter w;
    if (syms.back() < kDenseLimit) {
        std::vector<std::uint32_t> slot(static_cast<std::size_t>(syms.back()) + 1, 0);
        for (std::size_t i = 0; i < syms.size(); ++i) slot[syms[i]] = static_cast<std::uint32_t>(i);
        for (auto c : codes) {
            auto i = slot[c];
            w.put(canon.code[i], enc.table.lengths[i]);
        }
    } else {
        std::unordered_map<std::uint32_t, std::uint32_t> slot;
        for (std::size_t i = 0; i < syms.size(); ++i) slot[syms[i]] = static_cast<std::uint32_t>(i);
        for (auto c : codes) {
            auto i = slot.at(c);
            w.put(canon.code[i], enc.table.lengths[i]);
        }
    }
    enc.bit_count = w.count();
    enc.bits = w.finish();
    return enc;
}

std::vector<std::uint32_t> huffman_decode(const HuffmanTable &table, std::span<const std::uint8_t> bits,
                                          std::size_t count) {
    validate(table);
    const auto canon = assign_codes(table);

    // Canonical decoding tables per length.
    std::array<std::uint64_t, kMaxCodeLength + 2> first_code{};
    std::array<std::uint32_t, kMaxCodeLength + 2> first_index{}, per_len{};
    for (auto l : table.lengths) ++per_len[l];
    std::uint64_t code = 0;
    std::uint32_t index = 0;
    for (unsigned l = 1; l <= kMaxCodeLength; ++l) {
        code = (code + (l > 1 ? per_len[l - 1] : 0)) << (l > 1 ? 1 : 0);
        if (l == 1) code = 0;
        first_code[l] = code;
        first_index[l] = index;
        index += per_len[l];
    }
    std::vector<std::uint32_t> sorted_symbols(canon.order.size());
    for (std::size_t k = 0; k < canon.order.size(); ++k) sorted_symbols[k] = table.symbols[canon.order[k]];

    // Short codes resolve through a direct lookup: entry = (len << 24) | sorted index.
    std::vector<std::uint32_t> lookup(std::size_t{1} << kLookupBits, 0);
    for (std::size_t k = 0; k < canon.order.size(); ++k) {
        const std::uint32_t i = canon.order[k];
        const unsigned l = table.lengths[i];
        if (l > kLookupBits) continue;
        const std::uint32_t lo = canon.code[i] << (kLookupBits - l);
        const std::uint32_t hi = lo + (1u << (kLookupBits - l));
        for (std::uint32_t e = lo; e < hi; ++e) lookup[e] = (static_cast<std::uint32_t>(l) << 24) | static_cast<std::uint32_t>(k);
    }

    const std::uint64_t total_bits = static_cast<std::uint64_t>(bits.size()) * 8;
    std::vector<std::uint32_t> out;
    out.reserve(count);
    std::uint64_t pos = 0;
    // Reads `n` (<= 32) bits at `pos`, zero padded past the end.
    auto peek = [&](unsigned n) -> std::uint64_t {
        std::uint64_t v = 0;
        std::uint64_t byte = pos >> 3;
        unsigned skip = static_cast<unsigned>(pos & 7);
        for (unsigned k = 0; k < 5; ++k) {
            v <<= 8;
            if (byte + k < bits.size()) v |= bits[byte + k];
        }
        // v holds 40 bits starting at byte; drop `skip` leading bits.
        return (v >> (40 - skip - n)) & ((std::uint64_t{1} << n) - 1);
    };

    for (std::size_t s = 0; s < count; ++s) {
        std::uint32_t e = lookup[peek(kLookupBits)];
        unsigned len = e >> 24;
        std::uint32_t k = e & 0xFFFFFF;
        if (len == 0) {
            len = kLookupBits + 1;
            for (; len <= kMaxCodeLength; ++len) {
                std::uint64_t c = peek(len);
                if (per_len[len] && c >= first_code[len] && c - first_code[len] < per_len[len]) {
                    k = first_index[len] + static_cast<std::uint32_t>(c - first_code[len]);
                    break;
                }
            }
            if (len > kMaxCodeLength) {
                if (pos >= total_bits) throw Error(ErrorCode::TruncatedStream, "bitstream ended early");
                throw Error(ErrorCode::CorruptStream, "bit pattern matches no code");
            }
        }
        if (pos + len > total_bits) {
            throw Error(ErrorCode::TruncatedStream, "bitstream ended after " + std::to_string(s) + " of " +
                                                        std::to_string(count) + " symbols");
        }
        pos += len;
        out.push_back(sorted_symbols[k]);
    }
    return out;
}

std::vector<std::uint8_t> huffman_pack(std::span<const std::uint32_t> codes) {
    ByteWriter w;
    w.put_varint(codes.size());
    if (codes.empty()) return w.take();
    auto enc = huffman_encode(codes);
    w.put_varint(enc.table.symbols.size());
    std::uint32_t prev = 0;
    for (std::size_t i = 0; i < enc.table.symbols.size(); ++i) {
        w.put_varint(i == 0 ? enc.table.symbols[0] : enc.table.symbols[i] - prev - 1);
        w.put<std::uint8_t>(enc.table.lengths[i]);
        prev = enc.table.symbols[i];
    }
    w.put_varint(enc.bit_count);
    w.put_bytes(enc.bits);
    return w.take();
}

std::vector<std::uint32_t> huffman_unpack(std::span<const std::uint8_t> bytes, std::uint64_t alphabet_limit) {
    ByteReader r(bytes, ErrorCode::TruncatedStream);
    const std::uint64_t count = r.get_varint();
    if (count == 0) return {};
    const std::uint64_t nsym = r.get_varint();
    if (nsym == 0 || nsym > alphabet_limit) throw Error(ErrorCode::InvalidTable, "bad symbol count");
    HuffmanTable t;
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < nsym; ++i) {
        std::uint64_t d = r.get_varint();
        std::uint64_t sym = i == 0 ? d : prev + 1 + d;
        if (sym >= alphabet_limit) throw Error(ErrorCode::InvalidTable, "symbol outside the alphabet");
        t.symbols.push_back(static_cast<std::uint32_t>(sym));
        t.lengths.push_back(r.get<std::uint8_t>());
        prev = sym;
    }
    const std::uint64_t bit_count = r.get_varint();
    const std::uint64_t nbytes = (bit_count + 7) / 8;
    if (nbytes > r.remaining()) throw Error(ErrorCode::TruncatedStream, "bitstream shorter than declared");
    auto bits = r.get_bytes(static_cast<std::size_t>(nbytes));
    if (count > bit_count) throw Error(ErrorCode::TruncatedStream, "fewer bits than symbols");
    return huffman_decode(t, bits, static_cast<std::size_t>(count));
}

}  // namespace hpez
