#include "specband/interpolation.hpp"

#include <algorithm>
#include <set>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace specband {

double seminorm(const VectorPolynomial& r, const StepMeasure& mu) { return samples(r, mu).norm(); }

bool is_solution(const VectorPolynomial& r, const InterpolationData& data, double tol) {
  if (r.dim() != data.n) throw DimensionMismatch("polynomial and data dimensions differ");
  for (const auto& pt : data.points) {
    // Cancellation-free size of r near mu: sum |c_i| max(1, |mu|)^i per component.
    const double rho = std::max(1.0, std::abs(pt.lambda));
    double mag = 0.0;
    for (const auto& c : r.comps()) {
      double acc = 0.0, zp = 1.0;
      for (cd x : c) {
        acc += std::abs(x) * zp;
        zp *= rho;
      }
      mag += acc * acc;
    }
    const double bound = tol * pt.C.norm() * std::sqrt(mag);
    if (std::abs(pt.C.dot(r.evaluate(pt.lambda))) > bound) return false;
  }
  return true;
}

namespace {

int max_height_of(const std::vector<VectorPolynomial>& polys) {
  int h = -1;
  for (const auto& p : polys) {
    const Height hp = height(p);
    if (hp.finite()) h = std::max(h, hp.value());
  }
  return h;
}

void append_column(Eigen::MatrixXcd& A, int col, const VectorPolynomial& r) {
  for (int h = 0; h < A.rows(); ++h) A(h, col) = r.at_height(h);
}

Decomposition solve_at(const VectorPolynomial& r, const std::vector<VectorPolynomial>& p,
                       const std::vector<VectorPolynomial>& q, int na, int top, const Tolerances& tol) {
  const int n = r.dim();

  std::vector<int> sdeg(q.size(), -1);
  int cols = na;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const Height hq = height(q[j]);
    if (hq.finite() && hq.value() <= top) sdeg[j] = (top - hq.value()) / n;
    cols += sdeg[j] + 1;
  }

  Decomposition dec;
  dec.a.assign(p.size(), cd{});
  dec.s.assign(q.size(), ScalarPolynomial{});
  const int rows = top + 1;
  Eigen::VectorXcd b(rows);
  for (int h = 0; h < rows; ++h) b(h) = r.at_height(h);
  dec.scale = b.norm();
  if (rows == 0 || cols == 0) {
    dec.residual = dec.scale;
    return dec;
  }

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, cols);
  int col = 0;
  for (int k = 0; k < na; ++k) append_column(A, col++, p[k]);
  for (std::size_t j = 0; j < q.size(); ++j) {
    for (int d = 0; d <= sdeg[j]; ++d) append_column(A, col++, q[j].times_z(d));
  }
  Eigen::VectorXd colscale(cols);
  for (int c = 0; c < cols; ++c) {
    const double nrm = A.col(c).norm();
    colscale(c) = nrm > 0.0 ? nrm : 1.0;
    A.col(c) /= colscale(c);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
  cod.setThreshold(tol.lstsq);
  cod.compute(A);
  Eigen::VectorXcd x = cod.solve(b);
  dec.residual = (A * x - b).norm();
  x = x.cwiseQuotient(colscale.cast<cd>());

  col = 0;
  for (int k = 0; k < na; ++k) dec.a[k] = x(col++);
  for (std::size_t j = 0; j < q.size(); ++j) {
    ScalarPolynomial s(static_cast<std::size_t>(sdeg[j] + 1));
    for (int d = 0; d <= sdeg[j]; ++d) s[d] = x(col++);
    dec.s[j] = trim(std::move(s));
  }
  return dec;
}

}  // namespace

Decomposition solve_decomposition(const VectorPolynomial& r, const std::vector<VectorPolynomial>& p,
                                  const std::vector<VectorPolynomial>& q, int support,
                                  const Tolerances& tol) {
  const int n = r.dim();
  for (const auto& x : p) {
    if (x.dim() != n) throw DimensionMismatch("p dimension differs from r");
  }
  for (const auto& x : q) {
    if (x.dim() != n) throw DimensionMismatch("q dimension differs from r");
  }
  const int na = support > 0 ? std::min<int>(support, static_cast<int>(p.size())) : static_cast<int>(p.size());
  const Height hr = height(r);
  const int top = std::max({hr.finite() ? hr.value() : -1, max_height_of(p)});
  // Multiples of q_j sharing a residue class can cancel above h(r), so the
  // multiplier degrees are widened until the fit closes.
  Decomposition best = solve_at(r, p, q, na, top, tol);
  const int widen = q.empty() ? 0 : static_cast<int>(p.size());
  for (int extra = 1; extra <= widen && best.residual > 1e-9 * std::max(best.scale, 1.0); ++extra) {
    Decomposition d = solve_at(r, p, q, na, top + n * extra, tol);
    if (d.residual < best.residual) best = std::move(d);
  }
  return best;
}

Decomposition decompose(const VectorPolynomial& r, const std::vector<VectorPolynomial>& p,
                        const std::vector<VectorPolynomial>& q, double rel_tol, const Tolerances& tol) {
  Decomposition d = solve_decomposition(r, p, q, 0, tol);
  if (d.residual > rel_tol * std::max(d.scale, 1.0)) {
    throw NoDecomposition("no decomposition in span of p and q (residual " + std::to_string(d.residual) + ")");
  }
  return d;
}

VectorPolynomial recompose(const Decomposition& d, const std::vector<VectorPolynomial>& p,
                           const std::vector<VectorPolynomial>& q) {
  if (p.empty() && q.empty()) throw DimensionMismatch("empty polynomial system");
  VectorPolynomial out(p.empty() ? q.front().dim() : p.front().dim());
  for (std::size_t k = 0; k < d.a.size() && k < p.size(); ++k) {
    if (d.a[k] != cd{}) out += p[k] * d.a[k];
  }
  for (std::size_t j = 0; j < d.s.size() && j < q.size(); ++j) out += q[j].times(d.s[j]);
  return out;
}

std::vector<int> solution_dimensions(const InterpolationData& data, int max_height, const Tolerances& tol) {
  const int n = data.n;
  const int P = static_cast<int>(data.points.size());
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < P; ++k) {
    const double l = data.points[k].lambda;
    lo = k == 0 ? l : std::min(lo, l);
    hi = k == 0 ? l : std::max(hi, l);
  }
  const double center = 0.5 * (lo + hi);
  const double half = hi - lo > 0.0 ? 0.5 * (hi - lo) : 1.0;

  // Height-filtered basis with Chebyshev polynomials of the rescaled variable
  // in place of monomials; the spaces of height <= h are unchanged.
  const int maxdeg = max_height / n + 1;
  Eigen::MatrixXd cheb(P, maxdeg + 1);
  for (int k = 0; k < P; ++k) {
    const double x = (data.points[k].lambda - center) / half;
    cheb(k, 0) = 1.0;
    if (maxdeg >= 1) cheb(k, 1) = x;
    for (int d = 2; d <= maxdeg; ++d) cheb(k, d) = 2.0 * x * cheb(k, d - 1) - cheb(k, d - 2);
  }
  Eigen::MatrixXcd A(P, max_height + 1);
  for (int h = 0; h <= max_height; ++h) {
    const int slot = h % n;
    const int deg = h / n;
    for (int k = 0; k < P; ++k) A(k, h) = std::conj(data.points[k].C(slot)) * cheb(k, deg);
    const double nrm = A.col(h).norm();
    if (nrm > 0.0) A.col(h) /= nrm;
  }
  std::vector<int> dims;
  for (int h = 0; h <= max_height; ++h) {
    const Eigen::MatrixXcd sub = A.leftCols(h + 1);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > tol.lstsq * top && top > 0.0) ++rank;
    }
    dims.push_back(h + 1 - rank);
  }
  return dims;
}

GeneratorReport verify_generators(const std::vector<VectorPolynomial>& q, const InterpolationData& data,
                                  MatrixClass class_hint, const Tolerances& tol) {
  (void)class_hint;  // the findings are the same; interpretation differs by class
  const int n = data.n;
  GeneratorReport rep;
  rep.all_solutions = true;
  std::set<int> seen;
  rep.distinct_residues = true;
  int top = 0;
  for (const auto& g : q) {
    const Height h = height(g);
    rep.heights.push_back(h);
    if (h.finite()) {
      rep.residues.push_back(h.value() % n);
      if (!seen.insert(h.value() % n).second) rep.distinct_residues = false;
      top = std::max(top, h.value());
    } else {
      rep.residues.push_back(-1);
      rep.distinct_residues = false;
    }
    if (!is_solution(g, data, tol.zero_norm)) rep.all_solutions = false;
  }
  rep.max_height = top;
  rep.dimensions = solution_dimensions(data, top, tol);

  std::vector<int> found;  // residues of generators found so far
  for (int h = 0; h <= top; ++h) {
    const int prev = h == 0 ? 0 : rep.dimensions[h - 1];
    const int gained = rep.dimensions[h] - prev;
    const bool inherited = std::find(found.begin(), found.end(), h % n) != found.end();
    const int fresh = gained - (inherited ? 1 : 0);
    if (fresh > 0) {
      rep.generator_heights.push_back(h);
      rep.new_directions.push_back(fresh);
      found.push_back(h % n);
    }
  }
  std::vector<int> sorted;
  for (const auto& h : rep.heights) {
    if (h.finite()) sorted.push_back(h.value());
  }
  std::sort(sorted.begin(), sorted.end());
  rep.minimal = sorted == rep.generator_heights;
  return rep;
}

}  // namespace specband
