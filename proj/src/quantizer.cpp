#include "hpez/quantizer.hpp"

#include <string>

#include "hpez/error.hpp"

namespace hpez {

double OutlierCursor::next() {
    if (pos_ >= values_.size()) {
        throw Error(ErrorCode::OutlierUnderflow, "outlier list exhausted after " + std::to_string(pos_) + " values");
    }
    return values_[pos_++];
}

double dequantize(double prediction, std::uint32_t code, OutlierCursor &outliers, const LinearQuantizer &q) {
    if (code == 0) return outliers.next();
    if (code >= 2 * static_cast<std::uint64_t>(q.radius)) {
        throw Error(ErrorCode::CorruptStream, "quantization code " + std::to_string(code) + " out of range");
    }
    return reconstruct(prediction, static_cast<std::int64_t>(code) - static_cast<std::int64_t>(q.radius), q.bound,
                       q.kind);
}

}  // namespace hpez
