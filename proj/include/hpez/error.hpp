#ifndef HPEZ_ERROR_HPP
#define HPEZ_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hpez {

enum class ErrorCode {
    SizeMismatch,
    NonFiniteValue,
    ValueOutOfRange,
    BadRank,
    GridTooSmall,
    StencilLengthMismatch,
    BadStride,
    BadConfig,
    OutlierUnderflow,
    EmptyInput,
    TruncatedStream,
    InvalidTable,
    CorruptStream,
    BadMagic,
    UnsupportedVersion,
    LengthMismatch,
    DimsMismatch,
    RankTooLow,
    InvalidArgument,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hpez

#endif
