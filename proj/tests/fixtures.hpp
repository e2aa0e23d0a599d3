#pragma once

#include <random>
#include <string>

#include "specband/core_types.hpp"
#include "specband/io.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(SPECBAND_TEST_DATA) + "/" + name; }

inline specband::MatrixSpec load(const std::string& name) {
  return specband::spec_from_json(specband::read_json_file(path(name)));
}

inline specband::MatrixSpec flip2() { return load("flip2.json"); }
inline specband::MatrixSpec jac5() { return load("jac5.json"); }
inline specband::MatrixSpec fix7() { return load("fix7.json"); }

/// The three structural variants of the seven-row example: case 1 drops
/// m25, case 2 drops m35, case 3 drops both.
inline specband::MatrixSpec fix7_case(int which) {
  specband::MatrixSpec s = fix7();
  if (which == 1 || which == 3) s.set_entry(2, 5, 0.0);
  if (which == 2 || which == 3) s.set_entry(3, 5, 0.0);
  return s;
}

/// Random class-M instance used by the property suites: n in {1,2,3},
/// N in {n+2..20}, all determined by the seed.
struct Instance {
  specband::MatrixSpec spec;
  int N = 0;
  std::uint64_t seed = 0;
};

inline Instance random_instance(std::uint64_t seed, int max_N = 20, bool complex_entries = false) {
  std::mt19937_64 rng(seed * 7919 + 17);
  const int n = std::uniform_int_distribution<int>(1, 3)(rng);
  const int N = std::uniform_int_distribution<int>(n + 2, max_N)(rng);
  specband::RandomProfile prof;
  prof.n = n;
  prof.n_max = N;
  prof.complex_entries = complex_entries;
  return {specband::generate_random(prof, seed), N, seed};
}

}  // namespace fixtures
