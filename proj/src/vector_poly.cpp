#include "specband/vector_poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "specband/errors.hpp"

namespace specband {

int Height::value() const {
  if (!finite_) throw std::logic_error("height is minus infinity");
  return value_;
}

std::strong_ordering Height::operator<=>(const Height& o) const {
  if (finite_ != o.finite_) return finite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  if (!finite_) return std::strong_ordering::equal;
  return value_ <=> o.value_;
}

std::string Height::str() const { return finite_ ? std::to_string(value_) : "-inf"; }

ScalarPolynomial trim(ScalarPolynomial s, double tol) {
  while (!s.empty() && std::abs(s.back()) <= tol) s.pop_back();
  return s;
}

cd evaluate(const ScalarPolynomial& s, cd t) {
  cd acc{};
  for (auto it = s.rbegin(); it != s.rend(); ++it) acc = acc * t + *it;
  return acc;
}

VectorPolynomial::VectorPolynomial(int n) : n_(n), comps_(static_cast<std::size_t>(n)) {
  if (n < 1) throw DimensionMismatch("vector polynomial dimension must be positive");
}

VectorPolynomial::VectorPolynomial(int n, std::vector<ScalarPolynomial> comps)
    : n_(n), comps_(std::move(comps)) {
  if (n < 1) throw DimensionMismatch("vector polynomial dimension must be positive");
  if (static_cast<int>(comps_.size()) != n) throw DimensionMismatch("component count differs from n");
  trim(0.0);
}

VectorPolynomial VectorPolynomial::from_height_coefficients(int n, const std::vector<cd>& coeffs) {
  VectorPolynomial r(n);
  for (std::size_t h = 0; h < coeffs.size(); ++h) {
    if (coeffs[h] == cd{}) continue;
    auto& c = r.comps_[h % n];
    const std::size_t deg = h / n;
    if (c.size() <= deg) c.resize(deg + 1);
    c[deg] = coeffs[h];
  }
  return r;
}

VectorPolynomial VectorPolynomial::constant(const Eigen::VectorXcd& v) {
  VectorPolynomial r(static_cast<int>(v.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (v(i) != cd{}) r.comps_[i] = {v(i)};
  }
  return r;
}

int VectorPolynomial::max_degree() const {
  int d = -1;
  for (const auto& c : comps_) d = std::max(d, static_cast<int>(c.size()) - 1);
  return d;
}

cd VectorPolynomial::at_height(int h) const {
  if (h < 0) return {};
  const auto& c = comps_[h % n_];
  const std::size_t deg = h / n_;
  return deg < c.size() ? c[deg] : cd{};
}

std::vector<cd> VectorPolynomial::height_coefficients(int size) const {
  std::vector<cd> out(static_cast<std::size_t>(std::max(size, 0)));
  for (int h = 0; h < size; ++h) out[h] = at_height(h);
  return out;
}

Eigen::VectorXcd VectorPolynomial::evaluate(cd t) const {
  Eigen::VectorXcd v(n_);
  for (int i = 0; i < n_; ++i) v(i) = specband::evaluate(comps_[i], t);
  return v;
}

VectorPolynomial& VectorPolynomial::trim(double tol) {
  for (auto& c : comps_) c = specband::trim(std::move(c), tol);
  return *this;
}

VectorPolynomial& VectorPolynomial::operator+=(const VectorPolynomial& o) {
  if (o.n_ != n_) throw DimensionMismatch("vector polynomial dimensions differ");
  for (int i = 0; i < n_; ++i) {
    auto& a = comps_[i];
    const auto& b = o.comps_[i];
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) a[k] += b[k];
  }
  return trim(0.0);
}

VectorPolynomial& VectorPolynomial::operator-=(const VectorPolynomial& o) { return *this += -o; }

VectorPolynomial VectorPolynomial::operator+(const VectorPolynomial& o) const {
  VectorPolynomial r = *this;
  r += o;
  return r;
}

VectorPolynomial VectorPolynomial::operator-(const VectorPolynomial& o) const {
  VectorPolynomial r = *this;
  r -= o;
  return r;
}

VectorPolynomial VectorPolynomial::operator-() const { return *this * cd{-1.0}; }

VectorPolynomial VectorPolynomial::operator*(cd s) const {
  VectorPolynomial r = *this;
  for (auto& c : r.comps_) {
    for (auto& x : c) x *= s;
  }
  return r.trim(0.0);
}

VectorPolynomial VectorPolynomial::times_z(int power) const {
  if (power < 0) throw std::invalid_argument("negative power of z");
  VectorPolynomial r = *this;
  for (auto& c : r.comps_) {
    if (!c.empty()) c.insert(c.begin(), static_cast<std::size_t>(power), cd{});
  }
  return r;
}

VectorPolynomial VectorPolynomial::times(const ScalarPolynomial& s) const {
  VectorPolynomial r(n_);
  const ScalarPolynomial st = specband::trim(s);
  if (st.empty()) return r;
  for (int i = 0; i < n_; ++i) {
    const auto& a = comps_[i];
    if (a.empty()) continue;
    ScalarPolynomial prod(a.size() + st.size() - 1);
    for (std::size_t j = 0; j < a.size(); ++j) {
      for (std::size_t k = 0; k < st.size(); ++k) prod[j + k] += a[j] * st[k];
    }
    r.comps_[i] = specband::trim(std::move(prod));
  }
  return r;
}

VectorPolynomial VectorPolynomial::conj_coeffs() const {
  VectorPolynomial r = *this;
  for (auto& c : r.comps_) {
    for (auto& x : c) x = std::conj(x);
  }
  return r;
}

Height height(const VectorPolynomial& r) {
  Height h = Height::minus_infinity();
  for (int j = 1; j <= r.dim(); ++j) {
    const int deg = r.degree(j);
    if (deg >= 0) h = std::max(h, Height(r.dim() * deg + j - 1));
  }
  return h;
}

VectorPolynomial canonical_e(int index, int n) {
  if (index < 1) throw std::invalid_argument("canonical index must be positive");
  if (n < 1) throw DimensionMismatch("dimension must be positive");
  std::vector<cd> coeffs(static_cast<std::size_t>(index));
  coeffs.back() = 1.0;
  return VectorPolynomial::from_height_coefficients(n, coeffs);
}

}  // namespace specband
