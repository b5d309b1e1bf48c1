#pragma once

#include <stdexcept>
#include <string>

namespace gaussforge {

// Base of every failure raised by the library. Each derived type names one
// failure mode; callers dispatch on the type, not on the message.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GAUSSFORGE_ERROR(Name)                                             \
    class Name : public error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : error(#Name ": " + what) {} \
    }

GAUSSFORGE_ERROR(ParseError);
GAUSSFORGE_ERROR(IndeterminateValuation);
GAUSSFORGE_ERROR(InsufficientPrecision);
GAUSSFORGE_ERROR(NotInMaximalIdeal);
GAUSSFORGE_ERROR(NotARoot);
GAUSSFORGE_ERROR(PrecisionExhausted);
GAUSSFORGE_ERROR(NotDivisible);
GAUSSFORGE_ERROR(QuotientNotIntegral);
GAUSSFORGE_ERROR(Uncertified);
GAUSSFORGE_ERROR(NoContraction);
GAUSSFORGE_ERROR(SlopeNotPositive);
GAUSSFORGE_ERROR(NewtonStall);
GAUSSFORGE_ERROR(NoWitnessIndex);
GAUSSFORGE_ERROR(GuaranteeViolated);
GAUSSFORGE_ERROR(CapExceeded);
GAUSSFORGE_ERROR(PreconditionFailed);
GAUSSFORGE_ERROR(NotCoprime);
GAUSSFORGE_ERROR(IncompleteCertificate);
GAUSSFORGE_ERROR(DigestMismatch);

#undef GAUSSFORGE_ERROR

} // namespace gaussforge
