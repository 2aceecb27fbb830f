#pragma once

#include <stdexcept>
#include <string>

namespace geotag {

enum class ErrorCode {
  InvalidArgument,
  DistanceExceeded,
  OutOfView,
  UnknownCamera,
  Degenerate,
  PureRotation,
  AmbiguousCheirality,
  ParallelRays,
  Diverged,
  RankDeficient,
  DisconnectedGraph,
  LabelMismatch,
  MalformedXml,
  DanglingNodeRef,
  OpenBuildingRing,
  SchemaError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geotag
