#ifndef HPEZ_DETAIL_FOR_EACH_NON_ANCHOR_HPP
#define HPEZ_DETAIL_FOR_EACH_NON_ANCHOR_HPP

#include <array>

namespace hpez {

template <class Fn>
void for_each_non_anchor(const Shape &shape, std::size_t anchor_stride, std::optional<std::uint8_t> frozen_dim,
                         Fn &&fn) {
    const std::size_t rank = shape.rank();
    const std::size_t pad = kMaxRank - rank;
    std::array<std::size_t, kMaxRank> n{1, 1, 1, 1};
    // Mask of coordinates that may be nonzero modulo the anchor stride.
    std::array<std::size_t, kMaxRank> mask{0, 0, 0, 0};
    for (std::size_t a = 0; a < rank; ++a) {
        n[a + pad] = shape.extent(a);
        mask[a + pad] = (frozen_dim && *frozen_dim == a) ? 0 : anchor_stride - 1;
    }
    std::size_t idx = 0;
    for (std::size_t i0 = 0; i0 < n[0]; ++i0) {
        const bool o0 = (i0 & mask[0]) != 0;
        for (std::size_t i1 = 0; i1 < n[1]; ++i1) {
            const bool o1 = o0 || (i1 & mask[1]) != 0;
            for (std::size_t i2 = 0; i2 < n[2]; ++i2) {
                const bool o2 = o1 || (i2 & mask[2]) != 0;
                if (o2) {
                    for (std::size_t i3 = 0; i3 < n[3]; ++i3) fn(idx + i3);
                } else {
                    for (std::size_t i3 = 0; i3 < n[3]; ++i3) {
                        if ((i3 & mask[3]) != 0) fn(idx + i3);
                    }
                }
                idx += n[3];
            }
        }
    }
}

}  // namespace hpez

#endif
