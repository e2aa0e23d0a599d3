#include "specband/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "specband/errors.hpp"

namespace specband {

namespace {

std::string at(int row, int col) {
  std::ostringstream os;
  os << "(" << row << "," << col << ")";
  return os.str();
}

double threshold(const Eigen::MatrixXcd& d, double rel) {
  return d.size() == 0 ? 0.0 : rel * d.cwiseAbs().maxCoeff();
}

// Rightmost column (1-based) of row r with a nonzero entry among columns 1..N; 0 if none.
int rightmost(const Eigen::MatrixXcd& d, int r, int N, double thr) {
  for (int c = N; c >= 1; --c) {
    if (std::abs(d(r - 1, c - 1)) > thr) return c;
  }
  return 0;
}

// First row a < limit with a nonzero in column c; 0 if none.
int topmost_above(const Eigen::MatrixXcd& d, int c, int limit, double thr) {
  for (int a = 1; a < limit; ++a) {
    if (std::abs(d(a - 1, c - 1)) > thr) return a;
  }
  return 0;
}

bool is_tail_entry(const MatrixSpec& spec, const Eigen::MatrixXcd& d, int j, int k, double thr) {
  auto it = spec.pivot.find(k);
  if (it == spec.pivot.end() || it->second != j) return false;
  if (std::abs(d(j - 1, k - 1)) <= thr) return false;
  return topmost_above(d, k, j, thr) == 0;
}

}  // namespace

const char* to_string(MatrixClass which) { return which == MatrixClass::M ? "m" : "mtilde"; }

cd MatrixSpec::entry(int j, int k) const {
  if (j <= k) {
    auto it = entries.find({j, k});
    return it == entries.end() ? cd{} : it->second;
  }
  auto it = entries.find({k, j});
  return it == entries.end() ? cd{} : std::conj(it->second);
}

void MatrixSpec::set_entry(int j, int k, cd value) {
  if (j > k) {
    std::swap(j, k);
    value = std::conj(value);
  }
  if (j == k) value = cd{value.real(), 0.0};
  if (value == cd{}) {
    entries.erase({j, k});
  } else {
    entries[{j, k}] = value;
  }
}

double MatrixSpec::max_abs() const {
  double m = 0.0;
  for (const auto& [idx, v] : entries) m = std::max(m, std::abs(v));
  return m;
}

Eigen::MatrixXcd MatrixSpec::dense() const {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n_max, n_max);
  for (const auto& [idx, v] : entries) {
    const auto [j, k] = idx;
    if (j > n_max || k > n_max) continue;
    d(j - 1, k - 1) = v;
    d(k - 1, j - 1) = std::conj(v);
  }
  return d;
}

FiniteHermitian::FiniteHermitian(Eigen::MatrixXcd data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols()) throw StructureError("matrix is not square");
  if (data_.size() == 0) return;
  const double scale = std::max(1.0, data_.cwiseAbs().maxCoeff());
  const double defect = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-10 * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian (defect " << defect << ")";
    throw StructureError(os.str());
  }
  Eigen::MatrixXcd sym = (data_ + data_.adjoint()) / 2.0;
  data_ = std::move(sym);
}

bool ValidationReport::has_violation(const std::string& clause) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.clause == clause; });
}

MatrixSpec extend_tail(const MatrixSpec& spec, int N) {
  if (N <= spec.n_max) return spec;
  if (!spec.tail) throw TailUndefined("no tail declared; cannot extend beyond N_max");
  const Tail tail = *spec.tail;
  const int d = tail.offset();
  if (d <= 0 || tail.j0 < 1) throw TailUndefined("tail requires k0 > j0 >= 1");
  if (spec.n_max + 1 < tail.k0) {
    throw TailUndefined("columns between N_max and k0 are not covered by the tail");
  }

  std::vector<cd> profile = spec.tail_profile;
  if (!profile.empty() && static_cast<int>(profile.size()) != d + 1) {
    throw TailUndefined("tail_profile must list k0-j0+1 values");
  }
  if (profile.empty()) {
    profile.assign(d + 1, cd{});
    if (spec.n_max >= tail.k0) {
      for (int off = 0; off <= d; ++off) profile[off] = spec.entry(spec.n_max - off, spec.n_max);
    } else {
      profile[d] = 1.0;
    }
  }
  if (profile[d] == cd{}) throw TailUndefined("tail profile has a zero edge value");

  MatrixSpec out = spec;
  for (int c = spec.n_max + 1; c <= N; ++c) {
    for (int off = 0; off <= d; ++off) out.set_entry(c - off, c, profile[off]);
    out.pivot[c] = c - d;
  }
  out.n_max = N;
  return out;
}

FiniteHermitian truncate(const MatrixSpec& spec, int N) {
  if (N < 1) throw DimensionMismatch("truncation size must be positive");
  const MatrixSpec full = N > spec.n_max ? extend_tail(spec, N) : spec;
  Eigen::MatrixXcd d = full.dense().topLeftCorner(N, N);
  return FiniteHermitian(std::move(d));
}

StructureInfo analyze_structure(const MatrixSpec& spec, int N, const Tolerances& tol) {
  if (N <= spec.n) throw DimensionMismatch("truncation size must exceed n");
  const MatrixSpec full = N > spec.n_max ? extend_tail(spec, N) : spec;
  const Eigen::MatrixXcd d = full.dense();
  const double thr = threshold(d, tol.structural);

  StructureInfo info;
  info.n = spec.n;
  info.N = N;
  info.tail = spec.tail;
  std::set<int> used;
  for (int c = spec.n + 1; c <= N; ++c) {
    auto it = full.pivot.find(c);
    if (it == full.pivot.end()) throw MissingPivot("column " + std::to_string(c) + " has no pivot");
    const int r = it->second;
    if (r < 1 || r >= c) throw PivotViolation("pivot " + at(r, c) + " is not above the diagonal");
    if (std::abs(d(r - 1, c - 1)) <= thr) throw PivotViolation("pivot entry " + at(r, c) + " is zero");
    const int right = rightmost(d, r, N, thr);
    if (right != c) {
      throw PivotViolation("pivot " + at(r, c) + " is not the rightmost nonzero of row " +
                           std::to_string(r) + " (found column " + std::to_string(right) + ")");
    }
    if (!used.insert(r).second) {
      throw PivotViolation("row " + std::to_string(r) + " is the pivot of two columns");
    }
    info.pivot[c] = r;
  }
  info.K_perp.assign(used.begin(), used.end());
  for (int r = 1; r <= N; ++r) {
    if (!used.count(r)) info.K.push_back(r);
  }
  for (std::size_t j = 0; j < info.K.size(); ++j) info.gamma[info.K[j]] = static_cast<int>(j) + 1;
  return info;
}

ValidationReport validate_class(const MatrixSpec& spec, MatrixClass which, const Tolerances& tol) {
  ValidationReport rep;
  rep.which = which;
  auto fail = [&](std::string clause, int r, int c, std::string msg) {
    rep.violations.push_back({std::move(clause), r, c, std::move(msg)});
    rep.pass = false;
  };
  auto warn = [&](std::string clause, int r, int c, std::string msg) {
    rep.warnings.push_back({std::move(clause), r, c, std::move(msg)});
    rep.minimal = false;
  };

  const int N = spec.n_max;
  if (spec.n < 1) {
    fail("cond1", 0, 0, "n must be positive");
    return rep;
  }
  for (const auto& [idx, v] : spec.entries) {
    if (idx.first > N || idx.second > N || idx.first < 1) {
      fail("hermitian", idx.first, idx.second, "entry outside the stored range");
    }
  }
  const Eigen::MatrixXcd d = spec.dense();
  const double thr = threshold(d, tol.structural);
  for (int i = 1; i <= N; ++i) {
    if (std::abs(d(i - 1, i - 1).imag()) > thr) fail("hermitian", i, i, "diagonal entry is not real");
  }

  // Condition (1): one row-edge entry per column beyond n.
  std::map<int, int> row_of;
  for (const auto& [c, r] : spec.pivot) {
    if (c <= spec.n || c > N) {
      fail("cond1", r, c, "pivot declared for column outside n+1..N_max");
    }
  }
  for (int c = spec.n + 1; c <= N; ++c) {
    auto it = spec.pivot.find(c);
    if (it == spec.pivot.end()) {
      fail("cond1", 0, c, "column " + std::to_string(c) + " has no pivot");
      continue;
    }
    const int r = it->second;
    if (r < 1 || r >= c) {
      fail("cond1", r, c, "pivot " + at(r, c) + " is not above the diagonal");
      continue;
    }
    if (std::abs(d(r - 1, c - 1)) <= thr) {
      fail("cond1", r, c, "pivot entry " + at(r, c) + " is zero");
      continue;
    }
    const int right = rightmost(d, r, N, thr);
    if (right != c) fail("cond1", r, right, "nonzero " + at(r, right) + " right of pivot " + at(r, c));
    if (auto [pos, fresh] = row_of.emplace(r, c); !fresh) {
      fail("cond1", r, c, "row " + std::to_string(r) + " already pivots column " + std::to_string(pos->second));
    }
  }

  // Condition (2): the tail diagonal.
  if (!spec.tail) {
    fail("cond2", 0, 0, "no tail declared");
  } else {
    const Tail t = *spec.tail;
    if (t.j0 < 1 || t.k0 <= t.j0) {
      fail("cond2", t.j0, t.k0, "tail requires k0 > j0 >= 1");
    } else if (t.k0 > N) {
      rep.warnings.push_back({"cond2", t.j0, t.k0, "tail starts beyond the stored range"});
    } else {
      for (int m = 0; t.k0 + m <= N; ++m) {
        const int j = t.j0 + m;
        const int k = t.k0 + m;
        auto it = spec.pivot.find(k);
        if (it == spec.pivot.end() || it->second != j) {
          fail("cond2", j, k, "tail entry " + at(j, k) + " is not the row-edge entry of column " +
                                  std::to_string(k));
          continue;
        }
        if (std::abs(d(j - 1, k - 1)) <= thr) {
          fail("cond2", j, k, "tail entry " + at(j, k) + " is zero");
          continue;
        }
        if (const int a = topmost_above(d, k, j, thr); a != 0) {
          fail("cond2", a, k, "tail entry " + at(j, k) + " is not a column-edge entry; " + at(a, k) +
                                  " is nonzero");
        }
      }
      if (t.j0 >= 2 && t.k0 - 1 > spec.n && is_tail_entry(spec, d, t.j0 - 1, t.k0 - 1, thr)) {
        warn("minimal_tail", t.j0 - 1, t.k0 - 1, "tail also holds from " + at(t.j0 - 1, t.k0 - 1));
      }
    }
  }

  // Minimality of n: condition (1) must fail for l = n - 1, i.e. column n must
  // not carry exactly one row-edge entry.
  if (spec.n >= 2 && N >= spec.n) {
    int edges = 0;
    for (int r = 1; r <= N; ++r) {
      if (row_of.count(r)) continue;
      if (rightmost(d, r, N, thr) == spec.n) ++edges;
    }
    if (edges == 1) warn("minimal_n", 0, spec.n, "condition (1) already holds with l = n - 1");
  }

  if (which == MatrixClass::MTilde) {
    int prev_row = 0;
    for (int c = spec.n + 1; c <= N; ++c) {
      auto it = spec.pivot.find(c);
      if (it == spec.pivot.end()) continue;
      const int r = it->second;
      if (r <= prev_row) {
        fail("a", r, c, "pivot rows not increasing: column " + std::to_string(c) + " uses row " +
                            std::to_string(r) + " after row " + std::to_string(prev_row));
      }
      prev_row = std::max(prev_row, r);
      if (r >= 1 && r < c) {
        if (const int a = topmost_above(d, c, r, thr); a != 0) {
          fail("b", a, c, "row-edge entry " + at(r, c) + " is not a column-edge entry; " + at(a, c) +
                              " is nonzero");
        }
      }
    }
  }
  return rep;
}

MatrixSpec generate_random(const RandomProfile& profile, std::uint64_t seed) {
  const int n = profile.n;
  const int nmax = profile.n_max;
  if (n < 1) throw InconsistentProfile("n must be positive");
  if (nmax <= n) throw InconsistentProfile("N_max must exceed n");
  if (profile.density < 0.0 || profile.density > 1.0) throw InconsistentProfile("density outside [0,1]");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> edge_mod(0.5, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::bernoulli_distribution keep(profile.density);
  std::bernoulli_distribution coin(0.5);
  auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  std::map<int, int> pivot;
  std::set<int> permanent(profile.degeneration_rows.begin(), profile.degeneration_rows.end());
  Tail tail;

  if (!profile.pivot_rows.empty()) {
    if (static_cast<int>(profile.pivot_rows.size()) != nmax - n) {
      throw InconsistentProfile("pivot_rows must list one row per column n+1..N_max");
    }
    std::set<int> seen;
    for (int c = n + 1; c <= nmax; ++c) {
      const int r = profile.pivot_rows[c - n - 1];
      if (r < 1 || r >= c) throw InconsistentProfile("pivot row must lie above the diagonal");
      if (!seen.insert(r).second) throw InconsistentProfile("pivot rows must be distinct");
      if (permanent.count(r)) throw InconsistentProfile("a degeneration row cannot be a pivot row");
      pivot[c] = r;
    }
    if (profile.tail) {
      tail = *profile.tail;
      for (int k = tail.k0; k <= nmax; ++k) {
        if (pivot[k] != k - tail.offset()) throw InconsistentProfile("tail disagrees with pivot_rows");
      }
    } else {
      const int d = nmax - pivot[nmax];
      int k0 = nmax;
      while (k0 - 1 > n && pivot[k0 - 1] == k0 - 1 - d) --k0;
      tail = {k0 - d, k0};
    }
  } else {
    int d = 0;
    if (profile.tail) {
      d = profile.tail->offset();
    } else if (!profile.degeneration_rows.empty()) {
      d = n - static_cast<int>(permanent.size());
    } else {
      d = uniform_int(1, n);
    }
    if (d < 1 || d > n) throw InconsistentProfile("tail offset k0-j0 must lie in 1..n");
    const int q = n - d;
    if (!profile.degeneration_rows.empty() && static_cast<int>(permanent.size()) != q) {
      throw InconsistentProfile("number of degeneration rows must equal n - (k0 - j0)");
    }
    if (profile.tail) {
      tail = *profile.tail;
      if (tail.j0 != tail.k0 - d || tail.j0 < q + 1) throw InconsistentProfile("tail too early for n");
    } else {
      const int lo = std::max(q + 1, permanent.empty() ? 1 : *permanent.rbegin() + 1);
      const int hi = nmax - d;
      if (lo > hi) throw InconsistentProfile("N_max too small for the requested structure");
      tail.j0 = uniform_int(lo, hi);
      tail.k0 = tail.j0 + d;
    }
    if (tail.k0 > nmax) throw InconsistentProfile("tail must start inside N_max");
    if (!permanent.empty() && *permanent.rbegin() >= tail.j0) {
      throw InconsistentProfile("degeneration rows must precede the tail");
    }
    if (permanent.empty() && q > 0) {
      std::vector<int> rows(tail.j0 - 1);
      std::iota(rows.begin(), rows.end(), 1);
      std::shuffle(rows.begin(), rows.end(), rng);
      permanent.insert(rows.begin(), rows.begin() + q);
    }
    std::vector<int> free_rows;
    for (int r = 1; r < tail.j0; ++r) {
      if (!permanent.count(r)) free_rows.push_back(r);
    }
    // Columns n+1..k0-1 take the non-degenerate rows above the tail.
    for (int c = n + 1; c < tail.k0; ++c) {
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < free_rows.size(); ++i) {
        if (free_rows[i] < c) candidates.push_back(i);
      }
      if (candidates.empty()) throw InconsistentProfile("no admissible pivot row");
      const std::size_t pick =
          profile.force_mtilde ? candidates.front()
                               : candidates[static_cast<std::size_t>(uniform_int(0, static_cast<int>(candidates.size()) - 1))];
      pivot[c] = free_rows[pick];
      free_rows.erase(free_rows.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    for (int k = tail.k0; k <= nmax; ++k) pivot[k] = k - d;
  }

  if (profile.force_mtilde) {
    int prev = 0;
    for (const auto& [c, r] : pivot) {
      if (r <= prev) throw InconsistentProfile("forced M~ structure needs increasing pivot rows");
      prev = r;
    }
  }

  std::map<int, int> edge_of;  // row -> its pivot column
  for (const auto& [c, r] : pivot) edge_of[r] = c;
  const int d = tail.offset();

  auto edge_value = [&]() -> cd {
    const double mod = edge_mod(rng);
    if (profile.complex_entries) return std::polar(mod, angle(rng));
    return coin(rng) ? mod : -mod;
  };
  auto interior_value = [&]() -> cd {
    if (profile.complex_entries) return cd{unit(rng), unit(rng)} / std::sqrt(2.0);
    return unit(rng);
  };

  MatrixSpec spec;
  spec.n = n;
  spec.n_max = nmax;
  spec.pivot = pivot;
  for (int a = 1; a <= nmax; ++a) {
    for (int b = a; b <= nmax; ++b) {
      if (a == b) {
        if (keep(rng)) spec.set_entry(a, a, unit(rng));
        continue;
      }
      if (auto it = edge_of.find(a); it != edge_of.end()) {
        if (b > it->second) continue;
        if (b == it->second) {
          spec.set_entry(a, b, edge_value());
          continue;
        }
      }
      if (permanent.count(a) && b >= tail.k0) continue;
      if (b >= tail.k0 && a < b - d) continue;
      if (profile.force_mtilde && b > n && a < pivot[b]) continue;
      if (keep(rng)) spec.set_entry(a, b, interior_value());
    }
  }

  // Report the smallest (j0, k0) for which the tail property holds.
  const Eigen::MatrixXcd dense = spec.dense();
  const double thr = threshold(dense, default_tolerances().structural);
  while (tail.j0 >= 2 && tail.k0 - 1 > n && is_tail_entry(spec, dense, tail.j0 - 1, tail.k0 - 1, thr)) {
    --tail.j0;
    --tail.k0;
  }
  spec.tail = tail;
  return spec;
}

MatrixSpec spec_from_matrix(const FiniteHermitian& m, int n, double zero_tol) {
  const int N = m.size();
  if (n < 1 || N <= n) throw DimensionMismatch("need 1 <= n < N");
  const Eigen::MatrixXcd& d = m.data();
  const double thr = threshold(d, zero_tol);

  MatrixSpec spec;
  spec.n = n;
  spec.n_max = N;
  for (int j = 1; j <= N; ++j) {
    for (int k = j; k <= N; ++k) {
      if (std::abs(d(j - 1, k - 1)) > thr) spec.set_entry(j, k, d(j - 1, k - 1));
    }
  }
  const Eigen::MatrixXcd clean = spec.dense();
  for (int c = n + 1; c <= N; ++c) {
    const int r = topmost_above(clean, c, c, 0.0);
    if (r == 0) throw MissingPivot("column " + std::to_string(c) + " has no entry above the diagonal");
    spec.pivot[c] = r;
  }
  Tail tail{spec.pivot[N], N};
  while (tail.j0 >= 2 && tail.k0 - 1 > n && is_tail_entry(spec, clean, tail.j0 - 1, tail.k0 - 1, 0.0)) {
    --tail.j0;
    --tail.k0;
  }
  spec.tail = tail;
  return spec;
}

}  // namespace specband
