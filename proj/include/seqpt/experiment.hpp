// Measurement statistics (shot noise), the interferometer noise model, the
// finite-population error bound, convergence analysis, and channel-fidelity
// metrics.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seqpt/channels.hpp"
#include "seqpt/qmath.hpp"

namespace seqpt {

// Interferometer imperfections: visibility V scales the ancilla coherence,
// the deterministic phase offset and a Gaussian per-setting phase jitter act
// on the relative path phase. Default jitter std 2*pi/30 rad corresponds to
// a lambda/30 path stability.
struct NoiseModel {
  double visibility = 1.0;
  double phase_offset = 0.0;
  double phase_jitter_std = 0.0;

  void check() const;
};

struct CountRecord {
  std::vector<long long> counts;
  long long shots = 0;
};

// Multinomial draw over the outcome probabilities; deterministic per seed.
CountRecord sample_counts(const std::vector<double>& probabilities,
                          long long shots, std::uint64_t seed);

// In-place noise on a joint ancilla (x) system density matrix (2D x 2D,
// ancilla slot first): the ancilla off-diagonal blocks are scaled by
// V * exp(+-i phase), with phase = offset + one Gaussian jitter draw.
void apply_noise(Mat& joint, int system_dim, const NoiseModel& noise,
                 std::uint64_t seed);

// scale * sqrt((1/M) * (K-M)/(K-1)); vanishes at M = K.
double error_bound(int M, int K, double scale);

enum class ScaleKind { population_std, worst_case_deviation, explicit_value };

struct ScaleRule {
  ScaleKind kind = ScaleKind::worst_case_deviation;
  double value = 0.0;  // used when kind == explicit_value

  static ScaleRule population_std() { return {ScaleKind::population_std, 0.0}; }
  static ScaleRule worst_case() { return {ScaleKind::worst_case_deviation, 0.0}; }
  static ScaleRule explicit_scale(double v) { return {ScaleKind::explicit_value, v}; }
};

enum class EnumerateMode { all_subsets, permutation_prefixes };

struct EnumerateRule {
  EnumerateMode mode = EnumerateMode::all_subsets;
  int n_permutations = 0;
  std::uint64_t seed = 0;

  static EnumerateRule all_subsets() { return {}; }
  static EnumerateRule prefixes(int n_perms, std::uint64_t seed) {
    return {EnumerateMode::permutation_prefixes, n_perms, seed};
  }
};

// Subset-averaged estimation errors against the finite-population bound.
// Values are fidelity-type; deviations and bound scale both carry the
// (D+1)/D chi-matrix factor so the curves live in chi units.
struct ConvergenceReport {
  std::vector<double> per_state_values;
  double full_mean = 0.0;
  double true_mean = 0.0;
  double scale = 0.0;
  // subset_errors[M-1] lists |subset mean - full mean| (chi units) for every
  // enumerated subset of size M, M = 1..K.
  std::vector<std::vector<double>> subset_errors;
  std::vector<double> bound_curve;  // per M = 1..K
  long long violations = 0;
};

ConvergenceReport convergence_report(const std::vector<double>& per_state_values,
                                     double true_mean, ScaleRule scale_rule,
                                     EnumerateRule enumerate_rule, int dim);

struct ChannelFidelityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long n_samples = 0;
};

// Monte Carlo average over Haar-random pure inputs of the Uhlmann fidelity
// between the two channel outputs. Outputs are projected to the nearest
// normalized positive state (eigenvalue clip) so that slightly unphysical
// linear-inversion reconstructions can be compared.
ChannelFidelityEstimate channel_fidelity(const Channel& ch1, const Channel& ch2,
                                         long long n_samples,
                                         std::uint64_t seed);

}  // namespace seqpt
