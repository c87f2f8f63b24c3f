// State 2-designs from mutually unbiased bases, and sampling plans over them.
#pragma once

#include <cstdint>
#include <vector>

#include "seqpt/qmath.hpp"

namespace seqpt {

// Ordered set of K = D(D+1) pure states grouped base by base; the second
// moment matches the Haar measure.
struct TwoDesign {
  std::vector<PureState> states;
  int dim;

  int cardinality() const { return static_cast<int>(states.size()); }
};

struct DesignCheck {
  bool is_design;
  double max_residual;
};

// n = 1: the 6 eigenstates of sigma_z, sigma_x, sigma_y (in that order).
// n = 2: 20 states from the standard table of 5 MUBs for D = 4.
// Global phases are fixed so the first nonzero amplitude is real positive.
TwoDesign mub_design(int n_qubits);

// Frame condition: (1/K) sum_j P_j (x) P_j == 2/(D(D+1)) * P_sym entrywise.
DesignCheck verify_2design(const std::vector<PureState>& states);

enum class SamplingMode { without_replacement, with_replacement };

struct SamplingPlan {
  std::vector<int> indices;
  SamplingMode mode;
  std::uint64_t seed;

  int size() const { return static_cast<int>(indices.size()); }
};

// Uniformly random subset (without replacement) or sequence (with
// replacement) of M indices into [0, K); deterministic per seed.
SamplingPlan make_plan(int K, int M, SamplingMode mode, std::uint64_t seed);

// The full design in canonical order (exact 2-design average).
SamplingPlan full_plan(int K);

}  // namespace seqpt
