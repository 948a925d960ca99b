#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace airy {

// Base of every typed numerical failure. `kind()` is the stable name the CLI
// prints and tests match on.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string_view kind, const std::string &detail)
      : std::runtime_error(std::string(kind) + ": " + detail), kind_(kind) {}
  std::string_view kind() const noexcept { return kind_; }

 private:
  std::string_view kind_;
};

#define AIRY_DEFINE_ERROR(Name)                                            \
  class Name : public NumericalError {                                     \
   public:                                                                 \
    explicit Name(const std::string &detail) : NumericalError(#Name, detail) {} \
  }

AIRY_DEFINE_ERROR(NonConvergence);
AIRY_DEFINE_ERROR(SingularPencil);
AIRY_DEFINE_ERROR(RankDeficient);
AIRY_DEFINE_ERROR(PencilFailure);
AIRY_DEFINE_ERROR(DegenerateDirections);
AIRY_DEFINE_ERROR(PartitionMismatch);
AIRY_DEFINE_ERROR(CutoffViolation);
AIRY_DEFINE_ERROR(WhiteningRankDeficient);
AIRY_DEFINE_ERROR(EigCollision);
AIRY_DEFINE_ERROR(MarginTooSmall);
AIRY_DEFINE_ERROR(BadShape);
AIRY_DEFINE_ERROR(SingularSystem);

#undef AIRY_DEFINE_ERROR

}  // namespace airy
