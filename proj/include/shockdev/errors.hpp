#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace shockdev {

// Base of every error raised by the library. The kind string is stable and
// used by the CLI to pick an exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define SHOCKDEV_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  };

SHOCKDEV_DEFINE_ERROR(OutOfRange)
SHOCKDEV_DEFINE_ERROR(NoRoot)
SHOCKDEV_DEFINE_ERROR(DegenerateJump)
SHOCKDEV_DEFINE_ERROR(InconsistentCusp)
SHOCKDEV_DEFINE_ERROR(OutOfBox)
SHOCKDEV_DEFINE_ERROR(LeftBox)
SHOCKDEV_DEFINE_ERROR(SingularGamma)
SHOCKDEV_DEFINE_ERROR(ConfigError)

#undef SHOCKDEV_DEFINE_ERROR

// Raised when a fixed-point or root iteration fails to settle. Carries the
// sequence of successive differences so callers can judge the contraction.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history)
      : Error("NonConvergence", what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }
  double last_ratio() const noexcept {
    if (history_.size() < 2 || history_[history_.size() - 2] == 0.0) return 0.0;
    return history_.back() / history_[history_.size() - 2];
  }

 private:
  std::vector<double> history_;
};

}  // namespace shockdev
