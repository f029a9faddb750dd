#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "l4/ast.hpp"

namespace l4 {

// Base of every failure raised by the toolkit. The CLI maps subclasses to
// exit codes, so new failure kinds must derive from the right branch.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg, SourceLoc loc = {})
      : std::runtime_error(msg), loc_(loc) {}
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, SourceLoc loc, std::vector<std::string> expected = {})
      : Error(msg, loc), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class NameError : public Error {
 public:
  using Error::Error;
};

// The rule dependency relation has a directed cycle.
class CycleError : public Error {
 public:
  explicit CycleError(std::vector<std::string> cycle);
  // r0 -> r1 -> ... -> r0; the first name is repeated at the end.
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class InterfaceMismatch : public Error {
 public:
  using Error::Error;
};

class TransformError : public Error {
 public:
  using Error::Error;
};

// A construct outside what a backend can translate or evaluate.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A configured search or grounding budget was exhausted.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Malformed input that is not L4 source (configs, CLI arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

std::string format_loc(SourceLoc loc);

}  // namespace l4
