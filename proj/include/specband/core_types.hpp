#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specband/config.hpp"

namespace specband {

using cd = std::complex<double>;

/// Start (j0, k0) of the diagonal of simultaneous row/column-edge entries.
/// Indices are 1-based.
struct Tail {
  int j0 = 0;
  int k0 = 0;

  int offset() const { return k0 - j0; }
  bool operator==(const Tail&) const = default;
};

/// Structural and numeric description of a Hermitian matrix of class M.
///
/// Only the upper triangle (j <= k) is stored; the lower triangle is implied
/// by symmetry. All indices are 1-based. Rows and columns beyond `n_max` are
/// generated from the tail (see extend_tail).
struct MatrixSpec {
  int n = 0;
  int n_max = 0;
  std::map<std::pair<int, int>, cd> entries;
  std::map<int, int> pivot;  // column -> row holding that column's row-edge entry
  std::optional<Tail> tail;
  // Column profile used for extension: value of entry (c - off, c) for off = 0..k0-j0.
  // Empty means "copy the last stored column".
  std::vector<cd> tail_profile;

  cd entry(int j, int k) const;
  void set_entry(int j, int k, cd value);
  double max_abs() const;
  Eigen::MatrixXcd dense() const;  // n_max x n_max, Hermitian completion

  bool operator==(const MatrixSpec&) const = default;
};

/// Dense N x N Hermitian matrix; upper-left corner M_N of an infinite matrix.
class FiniteHermitian {
 public:
  FiniteHermitian() = default;
  /// Throws StructureError if `data` is not square or not Hermitian to
  /// working precision. The stored matrix is exactly Hermitian.
  explicit FiniteHermitian(Eigen::MatrixXcd data);

  int size() const { return static_cast<int>(data_.rows()); }
  const Eigen::MatrixXcd& data() const { return data_; }
  cd operator()(int j, int k) const { return data_(j - 1, k - 1); }  // 1-based

 private:
  Eigen::MatrixXcd data_;
};

/// Row bookkeeping of a truncation M_N.
struct StructureInfo {
  int n = 0;
  int N = 0;
  std::vector<int> K;       // rows without a row-edge entry inside G_N, ascending
  std::vector<int> K_perp;  // pivot rows of columns n+1..N, ascending
  std::map<int, int> gamma; // K[j-1] -> j
  std::map<int, int> pivot; // column -> row, restricted to n+1..N
  std::optional<Tail> tail;
};

enum class MatrixClass { M, MTilde };

const char* to_string(MatrixClass which);

struct Violation {
  std::string clause;  // "cond1", "cond2", "a", "b", "hermitian", "minimal_n", "minimal_tail"
  int row = 0;
  int col = 0;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  MatrixClass which = MatrixClass::M;
  bool pass = true;
  bool minimal = true;  // minimality of n and (j0, k0); a failure only downgrades
  std::vector<Violation> violations;
  std::vector<Violation> warnings;

  bool has_violation(const std::string& clause) const;
};

StructureInfo analyze_structure(const MatrixSpec& spec, int N,
                                const Tolerances& tol = default_tolerances());

ValidationReport validate_class(const MatrixSpec& spec, MatrixClass which,
                                const Tolerances& tol = default_tolerances());

FiniteHermitian truncate(const MatrixSpec& spec, int N);

/// Returns a spec whose stored part covers `N` rows, generated from the tail.
MatrixSpec extend_tail(const MatrixSpec& spec, int N);

struct RandomProfile {
  int n = 1;
  int n_max = 4;
  std::optional<Tail> tail;            // chosen at random when absent
  std::vector<int> pivot_rows;         // pivot rows of columns n+1..n_max; random when empty
  std::vector<int> degeneration_rows;  // rows that never carry a row-edge entry
  bool force_mtilde = false;
  bool complex_entries = false;
  double density = 0.7;  // probability that an unconstrained admissible entry is nonzero
};

/// Deterministic test-instance generator. Row-edge entries have modulus in
/// [0.5, 1.5]; every other entry has modulus at most 1.
MatrixSpec generate_random(const RandomProfile& profile, std::uint64_t seed);

/// Builds a spec for a finite matrix by reading the pivot of each column
/// n+1..N as its topmost nonzero entry and detecting the longest trailing tail
/// diagonal. Entries with |m| <= zero_tol * max|m| are dropped.
MatrixSpec spec_from_matrix(const FiniteHermitian& m, int n, double zero_tol);

}  // namespace specband
