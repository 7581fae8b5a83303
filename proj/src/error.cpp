#include "grp/error.hpp"

namespace grp {

std::string_view
to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::NonAsciiData: return "NonAsciiData";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::RejectedInvalidPoint: return "RejectedInvalidPoint";
    case ErrorCode::NonPositiveLeaf: return "NonPositiveLeaf";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::NoPlaneFound: return "NoPlaneFound";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NegativeRadius: return "NegativeRadius";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::BehindCamera: return "BehindCamera";
    case ErrorCode::FullyBehindCamera: return "FullyBehindCamera";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::InvalidCamera: return "InvalidCamera";
    case ErrorCode::BoxOutOfBounds: return "BoxOutOfBounds";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::MalformedModel: return "MalformedModel";
    case ErrorCode::MalformedImage: return "MalformedImage";
    case ErrorCode::ImageSizeMismatch: return "ImageSizeMismatch";
    case ErrorCode::MalformedManifestRow: return "MalformedManifestRow";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
  : std::runtime_error(std::string(to_string(code)) + ": " + message)
  , code_(code)
{}

} // namespace grp
