#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mwb/formula.hpp"

namespace mwb {

// Deterministic random formulas (fixed seed, raw mt19937_64 output only, so
// sequences are identical across platforms).
class FormulaGen {
public:
  struct Params {
    std::vector<std::string> atoms = {"p", "q", "r"};
    unsigned max_depth = 4;
    unsigned max_k_depth = 3;
  };

  FormulaGen(Params params, std::uint64_t seed) : params_(std::move(params)), rng_(seed) {}

  std::uint64_t next_u64() { return rng_(); }
  unsigned uniform(std::size_t n) { return n == 0 ? 0 : static_cast<unsigned>(rng_() % n); }
  bool chance(unsigned num, unsigned den) { return uniform(den) < num; }

  Formula next() { return gen(params_.max_depth, params_.max_k_depth); }

private:
  Formula gen(unsigned depth_left, unsigned k_left) {
    if (depth_left == 0) return Formula::atom(params_.atoms[uniform(params_.atoms.size())]);
    const unsigned choices = k_left > 0 ? 6 : 5;
    switch (uniform(choices)) {
      case 0: return Formula::atom(params_.atoms[uniform(params_.atoms.size())]);
      case 1: return Formula::negation(gen(depth_left - 1, k_left));
      case 2: return Formula::conjunction(gen(depth_left - 1, k_left), gen(depth_left - 1, k_left));
      case 3: return Formula::disjunction(gen(depth_left - 1, k_left), gen(depth_left - 1, k_left));
      case 4: return Formula::implication(gen(depth_left - 1, k_left), gen(depth_left - 1, k_left));
      default: return Formula::know(gen(depth_left - 1, k_left - 1));
    }
  }

  Params params_;
  std::mt19937_64 rng_;
};

}  // namespace mwb
