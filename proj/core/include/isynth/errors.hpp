#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace isynth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, const std::string& found);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

class UnknownAtom : public Error {
 public:
  explicit UnknownAtom(const std::string& name) : Error("unknown atom '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class EmptyTraceError : public Error {
 public:
  EmptyTraceError() : Error("formula evaluation requires a non-empty trace") {}
};

class ManagerMismatch : public Error {
 public:
  ManagerMismatch() : Error("BDD operands belong to different managers") {}
};

class NonPropositional : public Error {
 public:
  NonPropositional() : Error("formula contains temporal operators") {}
};

class DfaTooLarge : public Error {
 public:
  explicit DfaTooLarge(std::size_t cap) : Error("DFA exceeds the state cap of " + std::to_string(cap)), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

class Timeout : public Error {
 public:
  Timeout() : Error("operation exceeded its deadline") {}
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a transducer leaves its winning region.
class OutOfRegion : public Error {
 public:
  OutOfRegion() : Error("transducer left the winning region") {}
};

class AlternationError : public Error {
 public:
  explicit AlternationError(const std::string& what) : Error(what) {}
};

class StepLimit : public Error {
 public:
  explicit StepLimit(std::size_t steps)
      : Error("joint acceptance not reached within " + std::to_string(steps) + " steps"), steps_(steps) {}
  std::size_t steps() const { return steps_; }

 private:
  std::size_t steps_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace isynth
