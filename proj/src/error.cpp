#include "hpez/error.hpp"

namespace hpez {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
        case ErrorCode::BadRank: return "BadRank";
        case ErrorCode::GridTooSmall: return "GridTooSmall";
        case ErrorCode::StencilLengthMismatch: return "StencilLengthMismatch";
        case ErrorCode::BadStride: return "BadStride";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::OutlierUnderflow: return "OutlierUnderflow";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::TruncatedStream: return "TruncatedStream";
        case ErrorCode::InvalidTable: return "InvalidTable";
        case ErrorCode::CorruptStream: return "CorruptStream";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DimsMismatch: return "DimsMismatch";
        case ErrorCode::RankTooLow: return "RankTooLow";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace hpez
