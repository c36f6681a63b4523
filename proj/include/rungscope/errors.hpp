#pragma once

#include <stdexcept>
#include <string>

namespace rungscope {

/// Invalid user-supplied configuration (bad preset name, inconsistent
/// parameters, unresolvable grid, dt over the stability bound, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure in a config document; carries the 1-based line number.
class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Integration produced NaN/Inf or an invariant broke beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double t, std::string field,
                 double magnitude)
      : std::runtime_error(what), t_(t), field_(std::move(field)),
        magnitude_(magnitude) {}
  double time() const noexcept { return t_; }
  const std::string& field() const noexcept { return field_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  double t_;
  std::string field_;
  double magnitude_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rungscope
