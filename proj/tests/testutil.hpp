#pragma once
// Shared helpers for the test suite: a seeded RNG, a small random formula
// generator, and fixture path lookup.  The generator here is deliberately
// independent of the one inside the report builders so that property tests
// exercise the library with inputs it did not produce itself.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nmlab/formula.hpp"

namespace testutil {

inline std::string data_dir() { return NMLAB_DATA_DIR; }

inline std::string data_file(const std::string& rel) {
  return data_dir() + "/" + rel;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t raw() { return gen_(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  bool coin() { return (gen_() & 1u) != 0; }

 private:
  std::mt19937_64 gen_;
};

inline nmlab::Formula random_formula(Rng& rng, int depth,
                                     const std::vector<std::string>& vars) {
  using nmlab::Formula;
  if (depth <= 0) return Formula::var(vars[rng.below(vars.size())]);
  switch (rng.below(6)) {
    case 0:
    case 1:
      return Formula::var(vars[rng.below(vars.size())]);
    case 2:
      return Formula::neg(random_formula(rng, depth - 1, vars));
    case 3:
      return Formula::box(random_formula(rng, depth - 1, vars));
    default:
      return Formula::impl(random_formula(rng, depth - 1, vars),
                           random_formula(rng, depth - 1, vars));
  }
}

/// Instantiates a schema with p, q, r, s for its metavariables in sorted
/// order, the convention every report and sweep in the suite follows.
inline nmlab::Formula fresh_instance(const nmlab::Schema& s) {
  static const char* const names[] = {"p", "q", "r", "s"};
  nmlab::Substitution sub;
  std::size_t i = 0;
  for (const auto& m : s.metavariables()) sub[m] = nmlab::Formula::var(names[i++]);
  return s.instantiate(sub);
}

}  // namespace testutil
