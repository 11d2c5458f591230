#include "hpez/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hpez/byte_io.hpp"
#include "hpez/error.hpp"

namespace hpez {

namespace {

// Largest magnitude for which every integer is exactly representable as a double.
constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

}  // namespace

std::size_t element_size(ElementKind kind) {
    switch (kind) {
        case ElementKind::Float32: return 4;
        case ElementKind::Float64: return 8;
        case ElementKind::Int32: return 4;
        case ElementKind::Int64: return 8;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown element kind");
}

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty() || dims_.size() > kMaxRank) {
        throw Error(ErrorCode::BadRank, "rank must be 1-4, got " + std::to_string(dims_.size()));
    }
    strides_.assign(dims_.size(), 1);
    size_ = 1;
    for (std::size_t a = dims_.size(); a-- > 0;) {
        if (dims_[a] == 0) throw Error(ErrorCode::InvalidArgument, "zero extent on axis " + std::to_string(a));
        strides_[a] = size_;
        size_ *= dims_[a];
    }
}

std::size_t Shape::linear(std::span<const std::size_t> coords) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) idx += coords[a] * strides_[a];
    return idx;
}

std::vector<std::size_t> Shape::coords(std::size_t index) const {
    std::vector<std::size_t> c(dims_.size());
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        c[a] = index / strides_[a];
        index %= strides_[a];
    }
    return c;
}

ScalarGrid::ScalarGrid(Shape shape, ElementKind kind, std::vector<double> data)
    : shape_(std::move(shape)), kind_(kind), data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
        throw Error(ErrorCode::SizeMismatch, "grid holds " + std::to_string(data_.size()) + " values, dims need " +
                                                 std::to_string(shape_.size()));
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw Error(ErrorCode::NonFiniteValue, "non-finite value at index " + std::to_string(i));
        }
        if (kind_ == ElementKind::Int64 && std::fabs(data_[i]) > kExactIntegerLimit) {
            throw Error(ErrorCode::ValueOutOfRange, "int64 magnitude above 2^53 at index " + std::to_string(i));
        }
    }
}

ScalarGrid load_raw(std::span<const std::uint8_t> bytes, const std::vector<std::size_t> &dims, ElementKind kind) {
    Shape shape(dims);
    const std::size_t esize = element_size(kind);
    if (bytes.size() != shape.size() * esize) {
        throw Error(ErrorCode::SizeMismatch, "expected " + std::to_string(shape.size() * esize) + " bytes, got " +
                                                 std::to_string(bytes.size()));
    }
    std::vector<double> data(shape.size());
    const std::uint8_t *p = bytes.data();
    for (std::size_t i = 0; i < data.size(); ++i, p += esize) {
        switch (kind) {
            case ElementKind::Float32: data[i] = load_le<float>(p); break;
            case ElementKind::Float64: data[i] = load_le<double>(p); break;
            case ElementKind::Int32: data[i] = load_le<std::int32_t>(p); break;
            case ElementKind::Int64: {
                auto v = load_le<std::int64_t>(p);
                if (v > static_cast<std::int64_t>(kExactIntegerLimit) ||
                    v < -static_cast<std::int64_t>(kExactIntegerLimit)) {
                    throw Error(ErrorCode::ValueOutOfRange, "int64 magnitude above 2^53 at index " + std::to_string(i));
                }
                data[i] = static_cast<double>(v);
                break;
            }
        }
    }
    return ScalarGrid(std::move(shape), kind, std::move(data));
}

std::vector<std::uint8_t> to_raw(const ScalarGrid &grid) {
    const std::size_t esize = element_size(grid.kind());
    std::vector<std::uint8_t> out(grid.size() * esize);
    std::uint8_t *p = out.data();
    for (double v : grid.data()) {
        switch (grid.kind()) {
            case ElementKind::Float32: store_le(p, static_cast<float>(v)); break;
            case ElementKind::Float64: store_le(p, v); break;
            case ElementKind::Int32: store_le(p, static_cast<std::int32_t>(v)); break;
            case ElementKind::Int64: store_le(p, static_cast<std::int64_t>(v)); break;
        }
        p += esize;
    }
    return out;
}

double snap_to_kind(double value, ElementKind kind) {
    switch (kind) {
        case ElementKind::Float32: return static_cast<double>(static_cast<float>(value));
        case ElementKind::Float64: return value;
        case ElementKind::Int32: return std::clamp(std::round(value), -2147483648.0, 2147483647.0);
        case ElementKind::Int64: return std::clamp(std::round(value), -kExactIntegerLimit, kExactIntegerLimit);
    }
    return value;
}

ValueRange value_range(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "value_range of an empty grid");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi, *hi - *lo};
}

ValueRange value_range(const ScalarGrid &grid) { return value_range(grid.data()); }

std::size_t sample_margin(std::size_t extent) {
    if (extent >= 7) return 3;
    if (extent >= 3) return 1;
    return 0;
}

std::vector<SamplePoint> sample_uniform(const ScalarGrid &grid, double rate) {
    if (!(rate > 0.0 && rate <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "sample rate must lie in (0, 1]");
    }
    const Shape &shape = grid.shape();
    const std::size_t rank = shape.rank();
    std::vector<std::size_t> lo(rank), len(rank);
    bool any_axis = false;
    std::size_t interior = 1;
    for (std::size_t a = 0; a < rank; ++a) {
        std::size_t m = sample_margin(shape.extent(a));
        if (m > 0) any_axis = true;
        lo[a] = m;
        len[a] = shape.extent(a) - 2 * m;
        interior *= len[a];
    }
    if (!any_axis || interior == 0) {
        throw Error(ErrorCode::GridTooSmall, "no interior point has interpolation neighbours");
    }

    auto wanted = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(shape.size())));
    std::size_t count = std::clamp<std::size_t>(wanted, 1, interior);

    std::vector<SamplePoint> out;
    out.reserve(count);
    std::vector<std::size_t> coord(rank);
    for (std::size_t k = 0; k < count; ++k) {
        // Even stride over the flattened interior; exact integer arithmetic.
        auto flat = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * interior) / count);
        for (std::size_t a = rank; a-- > 0;) {
            coord[a] = lo[a] + flat % len[a];
            flat /= len[a];
        }
        out.push_back({coord, grid[shape.linear(coord)]});
    }
    return out;
}

}  // namespace hpez
