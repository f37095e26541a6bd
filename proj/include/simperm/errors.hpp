#pragma once

#include <stdexcept>
#include <string>

namespace simperm {

// Caller broke a documented precondition (index out of range, collision, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A spec object (SigmaSpec, ChainSpec, Partition request) is malformed.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A size guard tripped; the message names the offending size.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class UnsupportedDimension : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Rejection sampling ran out of budget.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructed object failed its own replay / verification. Always a bug
// or a falsified construction, never a recoverable condition.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace simperm
