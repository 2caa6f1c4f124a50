#pragma once

#include <stdexcept>
#include <string>

namespace qcy {

// A relation term of path length < 2 (the ideal would not be admissible).
class NotAdmissibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Some path of length length_bound survived the ideal closure; the caller
// must rebuild with a larger bound.
class BoundTooSmallError : public std::runtime_error {
 public:
  BoundTooSmallError(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_bound(suggested) {}
  int suggested_bound;
};

class DegenerateFormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotMultiplicativeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInvertibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedTypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WrongCharacteristicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadParametersError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotTruncatedPolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line_arg)
      : std::runtime_error("line " + std::to_string(line_arg) + ": " + what), line(line_arg) {}
  int line;
};

// An internal re-check failed: the run must not be trusted.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcy
