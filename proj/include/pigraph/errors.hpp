#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pigraph {

struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Base for every diagnostic tied to a position in a source model.
class SourceError : public std::runtime_error {
 public:
  SourceError(SourceSpan span, const std::string& message)
      : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
                           message),
        span_(span) {}

  SourceSpan span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

class SyntaxError : public SourceError {
 public:
  SyntaxError(SourceSpan span, std::string found, std::vector<std::string> expected)
      : SourceError(span, format(found, expected)),
        found_(std::move(found)),
        expected_(std::move(expected)) {}

  const std::string& found() const noexcept { return found_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(const std::string& found, const std::vector<std::string>& expected) {
    std::string msg = "syntax error: unexpected " + found + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    return msg;
  }

  std::string found_;
  std::vector<std::string> expected_;
};

/// A model that parses but violates a well-formedness rule.
class WellFormednessError : public SourceError {
 public:
  WellFormednessError(SourceSpan span, std::string rule, const std::string& detail)
      : SourceError(span, "ill-formed (" + rule + "): " + detail), rule_(std::move(rule)) {}

  /// Short rule tag, e.g. "match-before-0" or "undeclared-name".
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

/// An ε-run exceeded the static bound.  Signals an engine bug, never bad input.
class EpsilonBoundExceeded : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bisimilarity was asked about an incompletely explored state space.
class TruncatedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pigraph
