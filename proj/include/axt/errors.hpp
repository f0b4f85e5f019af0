#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace axt {

// Base of every error raised by the library. Each subclass names one failure
// mode so callers (and tests) can catch precisely what they expect.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CycleError : public Error {
public:
    CycleError(std::string msg, std::vector<std::size_t> cycle_nets)
        : Error(std::move(msg)), cycle_(std::move(cycle_nets)) {}
    // Net ids around one cycle, in traversal order.
    const std::vector<std::size_t>& cycle() const { return cycle_; }

private:
    std::vector<std::size_t> cycle_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

#define AXT_DEFINE_ERROR(Name)        \
    class Name : public Error {       \
    public:                           \
        using Error::Error;           \
    }

AXT_DEFINE_ERROR(SemanticError);
AXT_DEFINE_ERROR(PortMismatch);
AXT_DEFINE_ERROR(UnknownModule);
AXT_DEFINE_ERROR(BadParams);
AXT_DEFINE_ERROR(StreamMismatch);
AXT_DEFINE_ERROR(BadThreshold);
AXT_DEFINE_ERROR(NoRareNets);
AXT_DEFINE_ERROR(NoWitness);
AXT_DEFINE_ERROR(WouldViolateTiming);
AXT_DEFINE_ERROR(UnitMismatch);
AXT_DEFINE_ERROR(SignatureMismatch);
AXT_DEFINE_ERROR(EmptySet);
AXT_DEFINE_ERROR(UnknownInstance);
AXT_DEFINE_ERROR(LabelMismatch);
AXT_DEFINE_ERROR(BudgetInfeasible);

#undef AXT_DEFINE_ERROR

}  // namespace axt
