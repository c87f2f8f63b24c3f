// Estimation algorithms: SEQPT diagonal and off-diagonal chi elements
// (ancilla circuit and ancilla-free variants), the fidelity-to-chi
// conversion, full-matrix assembly, and the standard QPT baseline.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seqpt/channels.hpp"
#include "seqpt/designs.hpp"
#include "seqpt/experiment.hpp"
#include "seqpt/qmath.hpp"

namespace seqpt {

// Every estimator accepts exact mode (no sampling) or a per-setting shot
// count, separating algorithmic correctness from statistics.
struct Shots {
  bool is_exact = true;
  long long count = 0;

  static Shots exact() { return Shots{}; }
  static Shots of(long long n) { return Shots{false, n}; }
};

enum class Axis { x = 0, y = 1 };

enum class Method { seqpt_ancilla, seqpt_ancilla_free, standard };

struct FidelityEstimate {
  cx value;             // real for diagonal averages
  double std_error = 0.0;  // 0 in exact mode
  int samples = 0;         // design states (or Haar samples) used
  Shots shots;
};

struct ChiElementEstimate {
  int a = 0;
  int b = 0;
  cx value;
  double std_error = 0.0;
  Method method = Method::seqpt_ancilla;
};

// Outcome probabilities of the ancilla circuit: Hadamard on a clean ancilla,
// controlled-Ea (ancilla 1) and controlled-Eb (ancilla 0), the channel on the
// system, then sigma_x or sigma_y on the ancilla jointly with survival of the
// input state.
struct CircuitRun {
  int a = 0;
  int b = 0;
  Axis axis = Axis::x;
  double p_plus_survive = 0.0;
  double p_minus_survive = 0.0;
  double p_plus_fail = 0.0;
  double p_minus_fail = 0.0;
  bool diagonal_flagged = false;  // a == b (the diagonal shortcut is preferred)

  double conditional_difference() const {
    return p_plus_survive - p_minus_survive;
  }
};

// ((D+1) F - delta_ab) / D.
cx chi_from_fidelity(cx fidelity, int dim, bool diagonal);

// Diagonal case (a == b): mean survival probability over the plan. In exact
// mode with the full plan this is the exact 2-design average.
FidelityEstimate design_average_fidelity(const ModifiedChannel& mod,
                                         const TwoDesign& design,
                                         const SamplingPlan& plan,
                                         Shots shots = Shots::exact(),
                                         std::uint64_t seed = 0);

// Monte Carlo over Haar-random pure states (diagonal case).
FidelityEstimate haar_average_fidelity(const ModifiedChannel& mod,
                                       int n_samples, std::uint64_t seed);

CircuitRun run_offdiagonal_circuit(const Channel& channel, int a, int b,
                                   const PureState& input, Axis axis,
                                   const NoiseModel* noise = nullptr,
                                   std::uint64_t seed = 0);

// Off-diagonal chi element from the ancilla circuit: x-axis conditional
// differences give Re F, y-axis ones Im F, averaged over the plan.
ChiElementEstimate seqpt_offdiagonal(const Channel& channel, int a, int b,
                                     const TwoDesign& design,
                                     const SamplingPlan& plan,
                                     Shots shots = Shots::exact(),
                                     const NoiseModel* noise = nullptr,
                                     std::uint64_t seed = 0);

// Ancilla-free variant: prepares (Ea + e^{i phi} Eb)|psi>/2 conditional
// states for phi in {0, pi, pi/2, 3pi/2} and differences survival
// probabilities of the maps E_+- to recover Re and Im chi_ab.
ChiElementEstimate seqpt_ancilla_free(const Channel& channel, int a, int b,
                                      const TwoDesign& design,
                                      const SamplingPlan& plan,
                                      Shots shots = Shots::exact(),
                                      std::uint64_t seed = 0);

struct ChiEstimate {
  Mat entries;                  // D^2 x D^2, Hermitian by construction
  Eigen::MatrixXd std_errors;   // per element
  Method method = Method::seqpt_ancilla;
  int dim = 2;

  ValidationReport validate() const {
    return Channel::validate_chi(entries, dim);
  }
};

// Assembles all chi elements from the diagonal and off-diagonal estimators;
// chi_ba = conj(chi_ab). Independent elements run on worker threads capped by
// SEQPT_THREADS; per-setting seeds make results schedule-independent.
ChiEstimate seqpt_full(const Channel& channel, const TwoDesign& design,
                       Shots shots = Shots::exact(),
                       const NoiseModel* noise = nullptr,
                       std::uint64_t seed = 0,
                       Method offdiagonal_method = Method::seqpt_ancilla);

// Baseline: inputs {|0>, |1>, |+>, |+i>}, full output state tomography via
// sigma_x/y/z expectations, superoperator by linear inversion, then chi.
ChiEstimate standard_qpt(const Channel& channel, Shots shots = Shots::exact(),
                         std::uint64_t seed = 0);

enum class ResourceMethod { seqpt_element, standard_full };

// D(D+1) survival probabilities per SEQPT element; D^4 transition
// probabilities for full standard QPT.
long long resource_count(ResourceMethod method, int dim);

// Worker cap from SEQPT_THREADS (>= 1); hardware concurrency by default.
int worker_thread_count();

}  // namespace seqpt
