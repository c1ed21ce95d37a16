#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nobeta {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Global predicate tolerance. Bodies are normalized to diameter in [1, 4].
inline constexpr double kTau = 1e-9;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionViolation : public std::runtime_error {
 public:
  PreconditionViolation(const std::string& what, std::optional<Vec> witness = std::nullopt)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const std::optional<Vec>& witness() const { return witness_; }

 private:
  std::optional<Vec> witness_;
};

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline std::vector<double> toStd(const Vec& v) { return {v.data(), v.data() + v.size()}; }

inline Vec fromStd(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace nobeta
