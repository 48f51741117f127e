// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace actwarp {

enum class ErrorKind {
  Domain,
  Parse,
  Validation,
  InvalidArgument,
  SingularMetric,
  NonOrthonormalFrame,
  DegeneratePlane,
  RankDeficient,
  NormalComplementFailure,
  NotNormal,
  EmptyDistribution,
  SplitMismatch,
  NotWarped,
  MissingSplit,
  MissingXi,
  FrameDegenerate,
  IllConditionedFit,
  UnknownModel,
  Precondition,
  Io,
};

/// Single exception type for the whole engine; `kind` separates the
/// failure classes that callers (and the C API) need to tell apart.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) {
  throw Error(k, msg);
}

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::SingularMetric: return "singular-metric";
    case ErrorKind::NonOrthonormalFrame: return "non-orthonormal-frame";
    case ErrorKind::DegeneratePlane: return "degenerate-plane";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::NormalComplementFailure: return "normal-complement-failure";
    case ErrorKind::NotNormal: return "not-normal";
    case ErrorKind::EmptyDistribution: return "empty-distribution";
    case ErrorKind::SplitMismatch: return "split-mismatch";
    case ErrorKind::NotWarped: return "not-warped";
    case ErrorKind::MissingSplit: return "missing-split";
    case ErrorKind::MissingXi: return "missing-xi";
    case ErrorKind::FrameDegenerate: return "frame-degenerate";
    case ErrorKind::IllConditionedFit: return "ill-conditioned-fit";
    case ErrorKind::UnknownModel: return "unknown-model";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace actwarp
