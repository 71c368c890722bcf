#pragma once

#include <stdexcept>
#include <string>

namespace safesched {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SAFESCHED_DEFINE_ERROR(Name)        \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

SAFESCHED_DEFINE_ERROR(ParseError);
SAFESCHED_DEFINE_ERROR(InvalidDistribution);
SAFESCHED_DEFINE_ERROR(DegenerateCondition);
SAFESCHED_DEFINE_ERROR(EmptySample);
SAFESCHED_DEFINE_ERROR(ParameterOutOfRange);
SAFESCHED_DEFINE_ERROR(ValidationFailed);
SAFESCHED_DEFINE_ERROR(WrongOwner);
SAFESCHED_DEFINE_ERROR(IllegalAction);
SAFESCHED_DEFINE_ERROR(StateSpaceExceeded);
SAFESCHED_DEFINE_ERROR(Unschedulable);
SAFESCHED_DEFINE_ERROR(NoConvergence);
SAFESCHED_DEFINE_ERROR(NonTotalStrategy);
SAFESCHED_DEFINE_ERROR(EmptyPrefix);
SAFESCHED_DEFINE_ERROR(HardTasksPresent);
SAFESCHED_DEFINE_ERROR(ConditionNotCertified);
SAFESCHED_DEFINE_ERROR(SafetyViolation);
SAFESCHED_DEFINE_ERROR(DenominatorNonpositive);
SAFESCHED_DEFINE_ERROR(EmptySafeSet);
SAFESCHED_DEFINE_ERROR(NoAllowedAction);
SAFESCHED_DEFINE_ERROR(StructureMismatch);

#undef SAFESCHED_DEFINE_ERROR

}  // namespace safesched
