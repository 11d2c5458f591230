#ifndef HPEZ_GRID_HPP
#define HPEZ_GRID_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hpez {

inline constexpr std::size_t kMaxRank = 4;

enum class ElementKind : std::uint8_t { Float32 = 0, Float64 = 1, Int32 = 2, Int64 = 3 };

std::size_t element_size(ElementKind kind);
inline std::size_t element_bits(ElementKind kind) { return element_size(kind) * 8; }
inline bool is_integer(ElementKind kind) { return kind == ElementKind::Int32 || kind == ElementKind::Int64; }

/// Extents of a row-major grid; the last axis is the fastest-varying one.
class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<std::size_t> dims);

    std::size_t rank() const { return dims_.size(); }
    std::size_t extent(std::size_t axis) const { return dims_[axis]; }
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }
    std::size_t size() const { return size_; }
    const std::vector<std::size_t> &dims() const { return dims_; }

    std::size_t linear(std::span<const std::size_t> coords) const;
    std::vector<std::size_t> coords(std::size_t index) const;

    bool operator==(const Shape &other) const { return dims_ == other.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

/// An n-dimensional (1-4D) grid of scalars. Values are held as doubles; the
/// element kind records the on-disk representation and the value domain.
class ScalarGrid {
public:
    ScalarGrid() = default;
    ScalarGrid(Shape shape, ElementKind kind, std::vector<double> data);

    const Shape &shape() const { return shape_; }
    ElementKind kind() const { return kind_; }
    std::size_t size() const { return data_.size(); }
    std::span<const double> data() const { return data_; }
    double operator[](std::size_t i) const { return data_[i]; }

private:
    Shape shape_;
    ElementKind kind_ = ElementKind::Float32;
    std::vector<double> data_;
};

enum class BoundMode : std::uint8_t { Absolute = 0, ValueRangeRelative = 1 };

struct ErrorBoundSpec {
    BoundMode mode = BoundMode::ValueRangeRelative;
    double epsilon = 1e-3;

    double resolve(double value_range) const {
        return mode == BoundMode::Absolute ? epsilon : epsilon * value_range;
    }
    bool operator==(const ErrorBoundSpec &) const = default;
};

struct ValueRange {
    double min;
    double max;
    double range;
};

ScalarGrid load_raw(std::span<const std::uint8_t> bytes, const std::vector<std::size_t> &dims, ElementKind kind);
std::vector<std::uint8_t> to_raw(const ScalarGrid &grid);

/// Rounds a working value to the nearest value representable by `kind`.
double snap_to_kind(double value, ElementKind kind);

ValueRange value_range(const ScalarGrid &grid);
ValueRange value_range(std::span<const double> values);

struct SamplePoint {
    std::vector<std::size_t> index;
    double value;
};

/// Per-axis margin used by sample_uniform: 3 when cubic neighbours fit, 1 when
/// only linear neighbours fit, 0 when the axis is excluded from analysis.
std::size_t sample_margin(std::size_t extent);

std::vector<SamplePoint> sample_uniform(const ScalarGrid &grid, double rate);

}  // namespace hpez

#endif
