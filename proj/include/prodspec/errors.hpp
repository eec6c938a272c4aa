#ifndef PRODSPEC_ERRORS_HPP
#define PRODSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace prodspec {

// Invalid argument or out-of-domain parameter.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation misuse: a precondition on object state was violated
// (e.g. attaching angles twice, mismatched scaling rule).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Numerical failure: quadrature did not converge, eigensolver hit its
// iteration cap, etc. The message carries diagnostics.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace prodspec

#endif
