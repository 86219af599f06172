#pragma once

#include <stdexcept>
#include <string>

namespace ellikorn {

// One exception type per named error condition; the code string is what
// reports and the CLI print.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

#define ELLIKORN_ERROR(Name)                                         \
  class Name : public Error {                                        \
  public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}   \
  }

ELLIKORN_ERROR(MalformedSpec);
ELLIKORN_ERROR(InhomogeneousOrder);
ELLIKORN_ERROR(ZeroOperator);
ELLIKORN_ERROR(DimensionMismatch);
ELLIKORN_ERROR(NotCElliptic);
ELLIKORN_ERROR(NotElliptic);
ELLIKORN_ERROR(SingularGram);
ELLIKORN_ERROR(BallOutsideGrid);
ELLIKORN_ERROR(CoincidentPoints);
ELLIKORN_ERROR(DegenerateDenominator);
ELLIKORN_ERROR(DisconnectedMask);
ELLIKORN_ERROR(EmptyMask);
ELLIKORN_ERROR(UnreachableCube);
ELLIKORN_ERROR(MomentsNotZero);
ELLIKORN_ERROR(ScaleTooFine);
ELLIKORN_ERROR(ThresholdTooSmall);
ELLIKORN_ERROR(NonPowerOfTwoGrid);
ELLIKORN_ERROR(TooFewPoints);
ELLIKORN_ERROR(OrderTooLow);
ELLIKORN_ERROR(WitnessInvalid);
ELLIKORN_ERROR(InvalidOrlicz);
ELLIKORN_ERROR(DomainTooThin);
ELLIKORN_ERROR(SingularPencil);
ELLIKORN_ERROR(ZeroDenominator);
ELLIKORN_ERROR(UsageError);
ELLIKORN_ERROR(FileError);

#undef ELLIKORN_ERROR

}  // namespace ellikorn
