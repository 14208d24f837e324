#pragma once

#include <stdexcept>
#include <string>

namespace foltor {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define FOLTOR_DEFINE_ERROR(NAME)                                         \
  struct NAME : Error {                                                   \
    explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {}    \
  }

FOLTOR_DEFINE_ERROR(NotInGamma);
FOLTOR_DEFINE_ERROR(Overflow);
FOLTOR_DEFINE_ERROR(NotCoprime);
FOLTOR_DEFINE_ERROR(NonzeroAtOrigin);
FOLTOR_DEFINE_ERROR(NotEven);
FOLTOR_DEFINE_ERROR(NotMonotone);
FOLTOR_DEFINE_ERROR(RankMismatch);
FOLTOR_DEFINE_ERROR(NotQuadratic);
FOLTOR_DEFINE_ERROR(FiberRankNot2);
FOLTOR_DEFINE_ERROR(NotDefinite);
FOLTOR_DEFINE_ERROR(NotOrientationPreserving);
FOLTOR_DEFINE_ERROR(NotFoliated);
FOLTOR_DEFINE_ERROR(NotDiffeo);
FOLTOR_DEFINE_ERROR(OnCore);
FOLTOR_DEFINE_ERROR(OnBoundary);
FOLTOR_DEFINE_ERROR(NotDefinedForSpec);
FOLTOR_DEFINE_ERROR(IncompatiblePair);
FOLTOR_DEFINE_ERROR(ChartSwapping);

#undef FOLTOR_DEFINE_ERROR

}  // namespace foltor
