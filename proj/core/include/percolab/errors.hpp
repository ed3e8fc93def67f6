#pragma once

#include <stdexcept>
#include <string>

namespace percolab {

// Base of everything the library throws on contract violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Elements or functions from two different group contexts were combined.
class ContextMismatch : public Error {
 public:
  using Error::Error;
};

// A configured size, depth or step budget would be exceeded. The caller may
// raise the budget and retry.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A group action could not be applied (e.g. no inverse map supplied).
class ActionError : public Error {
 public:
  using Error::Error;
};

// The requested method does not apply to the input (e.g. the return
// probability route on a non-symmetric multiset).
class MethodNotApplicable : public Error {
 public:
  using Error::Error;
};

// Two function representations cannot be combined.
class CoercionError : public Error {
 public:
  using Error::Error;
};

// An internal invariant that must hold by construction was observed broken.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace percolab
