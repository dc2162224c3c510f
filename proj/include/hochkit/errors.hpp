#pragma once

#include <stdexcept>
#include <string>

namespace hochkit {

/// Input violates an algebraic axiom (algebra table, simplicial identity,
/// functoriality, module action). The CLI maps this to exit status 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A homology request reaches past the range a truncated model can certify.
class TruncationError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

} // namespace hochkit
