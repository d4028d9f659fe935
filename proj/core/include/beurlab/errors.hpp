#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace beurlab {

/// Base of every exception thrown by the library. kind() is the stable name
/// that appears in report rows.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "Error"; }
};

#define BEURLAB_DECLARE_ERROR(Name)                                            \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(what) {}                \
        const char* kind() const noexcept override { return #Name; }           \
    }

BEURLAB_DECLARE_ERROR(PopaOriginError);
BEURLAB_DECLARE_ERROR(UndefinedForRhoZero);
BEURLAB_DECLARE_ERROR(DomainError);
BEURLAB_DECLARE_ERROR(DivideByZero);
BEURLAB_DECLARE_ERROR(SingularIntegrandError);
BEURLAB_DECLARE_ERROR(NonconvergenceError);
BEURLAB_DECLARE_ERROR(IntegrationError);
BEURLAB_DECLARE_ERROR(MissingRoleError);
BEURLAB_DECLARE_ERROR(UnsupportedPairError);
BEURLAB_DECLARE_ERROR(UnknownFamilyError);
BEURLAB_DECLARE_ERROR(BadParamError);
BEURLAB_DECLARE_ERROR(RangeError);
BEURLAB_DECLARE_ERROR(DegenerateFitError);
BEURLAB_DECLARE_ERROR(FitError);
BEURLAB_DECLARE_ERROR(NonSEWarning);
BEURLAB_DECLARE_ERROR(HypothesisFailure);
BEURLAB_DECLARE_ERROR(WienerCheckFailure);
BEURLAB_DECLARE_ERROR(ResonanceError);
BEURLAB_DECLARE_ERROR(UnboundParamError);
BEURLAB_DECLARE_ERROR(ConfigError);
BEURLAB_DECLARE_ERROR(IoError);

#undef BEURLAB_DECLARE_ERROR

/// Tokenizer failure at a byte offset of the source text.
class LexError : public Error {
public:
    LexError(const std::string& what, std::size_t position);
    const char* kind() const noexcept override { return "LexError"; }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Parser failure at a byte offset, with the set of tokens that would have
/// been accepted there.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position, std::vector<std::string> expected);
    const char* kind() const noexcept override { return "ParseError"; }
    std::size_t position() const noexcept { return position_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::vector<std::string> expected_;
};

}  // namespace beurlab
