#ifndef ISOCHRON_ERRORS_HPP
#define ISOCHRON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace isochron {

// Base of all engine errors. `code()` is a stable machine-readable tag used
// by the CLI to map failures onto exit codes.
class EngineError : public std::runtime_error {
public:
    EngineError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }
private:
    std::string code_;
};

#define ISOCHRON_DEFINE_ERROR(Name)                                   \
    class Name : public EngineError {                                 \
    public:                                                           \
        explicit Name(const std::string& what = #Name)                \
            : EngineError(#Name, what) {}                             \
    }

// exprparse
class SyntaxError : public EngineError {
public:
    SyntaxError(int line, int col, const std::string& what)
        : EngineError("SyntaxError",
                      std::to_string(line) + ":" + std::to_string(col) + ": " + what),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }
private:
    int line_, col_;
};
ISOCHRON_DEFINE_ERROR(UnknownVariable);
ISOCHRON_DEFINE_ERROR(NegativeExponent);
ISOCHRON_DEFINE_ERROR(MalformedRationalExponent);

// polyalg
ISOCHRON_DEFINE_ERROR(VariableContextMismatch);
ISOCHRON_DEFINE_ERROR(MissingWeight);
ISOCHRON_DEFINE_ERROR(ZeroPolynomial);
ISOCHRON_DEFINE_ERROR(LengthMismatch);
ISOCHRON_DEFINE_ERROR(UnboundVariableInNumericMode);
ISOCHRON_DEFINE_ERROR(ExponentOverflow);

// powerseries
ISOCHRON_DEFINE_ERROR(NonInvertibleConstantTerm);
ISOCHRON_DEFINE_ERROR(NonzeroInnerConstant);
ISOCHRON_DEFINE_ERROR(NonUnitLinearCoefficient);
ISOCHRON_DEFINE_ERROR(BadConstantTerm);

// lienard
ISOCHRON_DEFINE_ERROR(MalformedSystem);
ISOCHRON_DEFINE_ERROR(MismatchedBase);
ISOCHRON_DEFINE_ERROR(ZeroV);

// calgorithm
ISOCHRON_DEFINE_ERROR(NonlinearCOccurrence);
ISOCHRON_DEFINE_ERROR(TruncationSensitivity);
ISOCHRON_DEFINE_ERROR(UnboundParameter);
ISOCHRON_DEFINE_ERROR(NonPositiveK2);
ISOCHRON_DEFINE_ERROR(UnconventionalName);

// groebner
ISOCHRON_DEFINE_ERROR(ResourceLimit);

// numverify
ISOCHRON_DEFINE_ERROR(StepSizeUnderflow);
ISOCHRON_DEFINE_ERROR(BlowUp);
ISOCHRON_DEFINE_ERROR(NoReturnDetected);
ISOCHRON_DEFINE_ERROR(DomainErrorOnOrbit);
ISOCHRON_DEFINE_ERROR(InsufficientSamples);

// catalog
ISOCHRON_DEFINE_ERROR(ConstraintViolation);
ISOCHRON_DEFINE_ERROR(UnknownFamily);
ISOCHRON_DEFINE_ERROR(FixtureFormatError);

#undef ISOCHRON_DEFINE_ERROR

} // namespace isochron

#endif
