#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cruiseopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where a model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model evaluation produced a physically inconsistent value
/// (negative thrust, non-finite drag, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Configuration or file content failed validation. `field()` names the
/// offending key when one can be identified.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Failure of the singular-arc feedback. Carries the trajectory time at which
/// it happened once the integrator has attached it.
class FeedbackError : public Error {
 public:
  explicit FeedbackError(const std::string& message) : Error(message), base_(message) {}

  double time() const noexcept { return time_; }
  void set_time(double t) {
    time_ = t;
    message_ = base_ + " (t=" + std::to_string(t) + " s)";
  }
  const char* what() const noexcept override {
    return message_.empty() ? Error::what() : message_.c_str();
  }

 private:
  std::string base_;
  std::string message_;
  double time_ = std::numeric_limits<double>::quiet_NaN();
};

/// The algebraic co-state system on the singular arc is numerically singular.
class IllConditionedError : public FeedbackError {
 public:
  IllConditionedError(const std::string& message, double det, double condition)
      : FeedbackError(message), det_(det), condition_(condition) {}

  double det() const noexcept { return det_; }
  double condition() const noexcept { return condition_; }

 private:
  double det_;
  double condition_;
};

/// <lambda, D> vanished: the singular throttle is undefined.
class SingularDenominatorError : public FeedbackError {
 public:
  SingularDenominatorError(const std::string& message, double denominator)
      : FeedbackError(message), denominator_(denominator) {}

  double denominator() const noexcept { return denominator_; }

 private:
  double denominator_;
};

/// The determinant-transport throttle (alpha = 0) has a vanishing denominator.
class DegenerateArcError : public FeedbackError {
 public:
  using FeedbackError::FeedbackError;
};

/// The state left the admissible region (non-finite, v <= 0, m <= m_min).
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& message, double time)
      : Error(message + " (t=" + std::to_string(time) + " s)"), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Geometry for which a closed-form heading does not exist.
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace cruiseopt
