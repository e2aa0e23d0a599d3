#pragma once

#include <compare>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specband/core_types.hpp"

namespace specband {

/// Coefficients in ascending degree.
using ScalarPolynomial = std::vector<cd>;

/// Value of the height grading: a nonnegative integer or minus infinity.
class Height {
 public:
  static Height minus_infinity() { return Height(); }
  explicit Height(int value) : finite_(true), value_(value) {}

  bool finite() const { return finite_; }
  /// Throws std::logic_error for minus infinity.
  int value() const;

  Height operator+(int shift) const { return finite_ ? Height(value_ + shift) : *this; }
  bool operator==(const Height&) const = default;
  std::strong_ordering operator<=>(const Height& o) const;
  std::string str() const;

 private:
  Height() = default;
  bool finite_ = false;
  int value_ = 0;
};

/// n-component vector of scalar polynomials.
class VectorPolynomial {
 public:
  VectorPolynomial() = default;
  explicit VectorPolynomial(int n);  // zero polynomial
  VectorPolynomial(int n, std::vector<ScalarPolynomial> comps);

  /// Vector polynomial with the given coefficient at each height index
  /// h = n*deg + (slot - 1).
  static VectorPolynomial from_height_coefficients(int n, const std::vector<cd>& coeffs);
  static VectorPolynomial constant(const Eigen::VectorXcd& v);

  int dim() const { return n_; }
  const std::vector<ScalarPolynomial>& comps() const { return comps_; }
  const ScalarPolynomial& comp(int slot) const { return comps_[slot - 1]; }  // 1-based
  int degree(int slot) const { return static_cast<int>(comps_[slot - 1].size()) - 1; }  // -1 for 0
  int max_degree() const;
  bool is_zero() const { return max_degree() < 0; }

  /// Coefficient sitting at height index h (zero if absent).
  cd at_height(int h) const;
  /// Coefficients at height indices 0..size-1.
  std::vector<cd> height_coefficients(int size) const;

  Eigen::VectorXcd evaluate(cd t) const;

  /// Drops trailing coefficients with modulus <= tol in each component.
  VectorPolynomial& trim(double tol = 0.0);

  VectorPolynomial operator+(const VectorPolynomial& o) const;
  VectorPolynomial operator-(const VectorPolynomial& o) const;
  VectorPolynomial operator-() const;
  VectorPolynomial operator*(cd s) const;
  VectorPolynomial& operator+=(const VectorPolynomial& o);
  VectorPolynomial& operator-=(const VectorPolynomial& o);
  /// Multiplication by z^power.
  VectorPolynomial times_z(int power = 1) const;
  /// Multiplication by a scalar polynomial.
  VectorPolynomial times(const ScalarPolynomial& s) const;
  /// Conjugates every coefficient.
  VectorPolynomial conj_coeffs() const;

  bool operator==(const VectorPolynomial&) const = default;

 private:
  int n_ = 0;
  std::vector<ScalarPolynomial> comps_;
};

inline VectorPolynomial operator*(cd s, const VectorPolynomial& p) { return p * s; }

Height height(const VectorPolynomial& r);

/// e_{nk+i}(z) = z^k e_i.
VectorPolynomial canonical_e(int index, int n);

cd evaluate(const ScalarPolynomial& s, cd t);
ScalarPolynomial trim(ScalarPolynomial s, double tol = 0.0);

}  // namespace specband
