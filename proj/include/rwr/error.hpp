#pragma once

#include <stdexcept>
#include <string>

namespace rwr {

/// Parameter outside its documented domain (p not in (0,1), negative b, ...).
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Call made in a state where the operation is undefined (empty input, n < 2, ...).
class UsageError : public std::logic_error {
public:
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

/// Parameters valid, but the requested quantity only exists in another regime.
class RegimeError : public std::domain_error {
public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

/// File could not be opened or written.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rwr
