#ifndef QBT_ERRORS_HPP
#define QBT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbt {

// Error taxonomy. Two categories drive the CLI exit codes: malformed or
// inconsistent caller input (exit 1) versus failures detected while
// computing (exit 2).
enum class ErrorCategory { invalid_input, numerical };

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string& what_arg)
        : std::runtime_error(what_arg), category_(category) {}
    ErrorCategory category() const noexcept { return category_; }

  private:
    ErrorCategory category_;
};

class InvalidInput : public Error {
  public:
    explicit InvalidInput(const std::string& msg) : Error(ErrorCategory::invalid_input, msg) {}
};

class NumericalFailure : public Error {
  public:
    explicit NumericalFailure(const std::string& msg) : Error(ErrorCategory::numerical, msg) {}
};

#define QBT_DEFINE_ERROR(Name, Base)                                                              \
    class Name : public Base {                                                                    \
      public:                                                                                      \
        explicit Name(const std::string& msg) : Base(std::string(#Name ": ") + msg) {}             \
    }

QBT_DEFINE_ERROR(DimensionMismatch, InvalidInput);
QBT_DEFINE_ERROR(InvalidRange, InvalidInput);
QBT_DEFINE_ERROR(OddN, InvalidInput);
QBT_DEFINE_ERROR(InvalidSpec, InvalidInput);
QBT_DEFINE_ERROR(NonSquareSystem, InvalidInput);
QBT_DEFINE_ERROR(NodeCollision, InvalidInput);
QBT_DEFINE_ERROR(NotConjugateClosed, InvalidInput);
QBT_DEFINE_ERROR(PreconditionViolated, InvalidInput);

QBT_DEFINE_ERROR(SingularResolvent, NumericalFailure);
QBT_DEFINE_ERROR(SingularFeedthrough, NumericalFailure);
QBT_DEFINE_ERROR(SingularD, NumericalFailure);
QBT_DEFINE_ERROR(ImaginaryAxisEigenvalue, NumericalFailure);
QBT_DEFINE_ERROR(UnstableSystem, NumericalFailure);
QBT_DEFINE_ERROR(UnstableA, NumericalFailure);
QBT_DEFINE_ERROR(IllConditionedSeparation, NumericalFailure);
QBT_DEFINE_ERROR(NoStabilizingSolution, NumericalFailure);
QBT_DEFINE_ERROR(IndefiniteR, NumericalFailure);
QBT_DEFINE_ERROR(NotPositiveReal, NumericalFailure);
QBT_DEFINE_ERROR(NotBoundedReal, NumericalFailure);
QBT_DEFINE_ERROR(ResidualImaginary, NumericalFailure);
QBT_DEFINE_ERROR(DegenerateGap, NumericalFailure);
QBT_DEFINE_ERROR(RankDeficient, NumericalFailure);

#undef QBT_DEFINE_ERROR

}  // namespace qbt

#endif  // QBT_ERRORS_HPP
