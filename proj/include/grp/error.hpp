#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grp {

enum class ErrorCode {
  // cloud-core
  MissingFile,
  MalformedHeader,
  NonAsciiData,
  IoFailure,
  RejectedInvalidPoint,
  NonPositiveLeaf,
  EmptyCloud,
  AlphaOutOfRange,
  InvalidBounds,
  // plane-seg
  DegenerateCloud,
  NoPlaneFound,
  IndexOutOfRange,
  // clustering
  InvalidParams,
  NegativeRadius,
  // proposal
  EmptyCluster,
  BehindCamera,
  FullyBehindCamera,
  DegenerateProjection,
  InvalidCamera,
  // recognition
  BoxOutOfBounds,
  EmptyClass,
  SingleClass,
  ShapeMismatch,
  ProtocolError,
  Timeout,
  MalformedModel,
  MalformedImage,
  ImageSizeMismatch,
  // acquisition / synth / cli
  MalformedManifestRow,
  InvalidSpec,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's error JSON) can branch on it without parsing text.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace grp
