#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grenier {

/// Invalid parameters: grid size, config keys, ranges.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A non-finite value appeared during time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::size_t step, double time, const std::string& what = {})
      : std::runtime_error("blow-up at step " + std::to_string(step) + ", t = " +
                           std::to_string(time) + (what.empty() ? "" : ": " + what)),
        step_(step),
        time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

/// Mass projection asked to rescale a vanishing amplitude.
class DegenerateProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two states that cannot be compared (different grids or times).
class ComparisonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Wave function reconstruction requested at eps = 0.
class ReconstructionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace grenier
