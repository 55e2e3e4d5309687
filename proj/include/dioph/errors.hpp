#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dioph {

// Every failure mode surfaces as a typed error with a stable machine-readable
// code; the CLI maps codes to --error-json output and exit status.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define DIOPH_ERROR_TYPE(Name)                                        \
    struct Name : Error {                                             \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}  \
    }

DIOPH_ERROR_TYPE(PrecisionExhausted);
DIOPH_ERROR_TYPE(UnsupportedExpression);
DIOPH_ERROR_TYPE(DomainError);
DIOPH_ERROR_TYPE(UsageError);
DIOPH_ERROR_TYPE(RationalDependenceDetected);
DIOPH_ERROR_TYPE(DegenerateLattice);
DIOPH_ERROR_TYPE(ScaleExceeded);
DIOPH_ERROR_TYPE(SequenceExhausted);
DIOPH_ERROR_TYPE(InsufficientChildren);
DIOPH_ERROR_TYPE(ScaleWindow);
DIOPH_ERROR_TYPE(CertificateFailure);
DIOPH_ERROR_TYPE(InsufficientData);
DIOPH_ERROR_TYPE(UnknownBall);
DIOPH_ERROR_TYPE(IndexOutOfRange);
DIOPH_ERROR_TYPE(IOError);

#undef DIOPH_ERROR_TYPE

} // namespace dioph
