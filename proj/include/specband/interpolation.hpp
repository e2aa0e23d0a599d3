#pragma once

#include <vector>

#include "specband/config.hpp"
#include "specband/core_types.hpp"
#include "specband/errors.hpp"
#include "specband/spectral.hpp"
#include "specband/vector_poly.hpp"

namespace specband {

/// Nodes mu_k with vectors C^k; r solves the problem when (C^k)^* r(mu_k) = 0 for all k.
struct InterpolationData {
  int n = 0;
  std::vector<MeasurePoint> points;

  static InterpolationData from_measure(const StepMeasure& mu) { return {mu.n, mu.points}; }
  StepMeasure as_measure() const { return {n, points}; }
};

/// L2(sigma) seminorm.
double seminorm(const VectorPolynomial& r, const StepMeasure& mu);

/// True iff |(C^k)^* r(mu_k)| <= tol * |C^k| * |r|(max(1, |mu_k|)) for every
/// node, where |r| has the moduli of r's coefficients. Zero polynomials are solutions.
bool is_solution(const VectorPolynomial& r, const InterpolationData& data, double tol = 1e-8);

class NoDecomposition : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct Decomposition {
  std::vector<cd> a;                  // coefficients of p_1..p_N
  std::vector<ScalarPolynomial> s;   // multipliers of q_1..q_n
  double residual = 0.0;              // |recomposed - r| in coefficient space
  double scale = 0.0;                 // |r| in coefficient space
};

/// Least-squares fit of r by sum a_k p_k + sum s_j q_j in coefficient space.
/// `support` > 0 restricts the a_k to k <= support. Never throws on a poor fit.
Decomposition solve_decomposition(const VectorPolynomial& r, const std::vector<VectorPolynomial>& p,
                                  const std::vector<VectorPolynomial>& q, int support = 0,
                                  const Tolerances& tol = default_tolerances());

/// As solve_decomposition, but throws NoDecomposition when
/// residual > rel_tol * max(scale, 1).
Decomposition decompose(const VectorPolynomial& r, const std::vector<VectorPolynomial>& p,
                        const std::vector<VectorPolynomial>& q, double rel_tol = 1e-9,
                        const Tolerances& tol = default_tolerances());

VectorPolynomial recompose(const Decomposition& d, const std::vector<VectorPolynomial>& p,
                           const std::vector<VectorPolynomial>& q);

/// Dimension of the solution space among vector polynomials of height <= h,
/// for h = 0..max_height.
std::vector<int> solution_dimensions(const InterpolationData& data, int max_height,
                                     const Tolerances& tol = default_tolerances());

struct GeneratorReport {
  std::vector<Height> heights;    // h(q_j) in input order
  std::vector<int> residues;      // h(q_j) mod n, -1 for a zero q_j
  bool distinct_residues = false;
  bool all_solutions = false;
  int max_height = 0;
  std::vector<int> dimensions;          // solution_dimensions up to max_height
  std::vector<int> generator_heights;   // minimal heights found by brute force, ascending
  std::vector<int> new_directions;      // new solutions at each generator height (expected 1)
  bool minimal = false;                 // sorted h(q_j) equal generator_heights
};

GeneratorReport verify_generators(const std::vector<VectorPolynomial>& q, const InterpolationData& data,
                                  MatrixClass class_hint, const Tolerances& tol = default_tolerances());

}  // namespace specband
