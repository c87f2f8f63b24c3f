// Complex linear algebra at fixed small dimension: pure/mixed state types,
// Pauli operator bases, Haar sampling and state fidelity.
#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace seqpt {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Tolerances: algebraic identities vs spectral computations (double precision
// at D <= 8).
inline constexpr double kAlgTol = 1e-12;
inline constexpr double kSpecTol = 1e-10;

// Derives an independent RNG stream from a base seed and a task index path.
// SplitMix64-style mixing; stable across runs and thread schedules.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts);

Mat kron(const Mat& a, const Mat& b);

// Unit-norm state vector of dimension D = 2^n.
class PureState {
 public:
  explicit PureState(Vec amplitudes);

  const Vec& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }
  cx overlap(const PureState& other) const;  // <this|other>
  Mat projector() const;                     // |psi><psi|

 private:
  Vec amplitudes_;
};

PureState basis_state(int dim, int index);

class DensityMatrix {
 public:
  // Validates hermiticity, unit trace and positivity.
  static DensityMatrix from_matrix(Mat m);
  // Unnormalized (or non-Hermitian) conditional state; no checks.
  static DensityMatrix conditional(Mat m);
  static DensityMatrix pure(const PureState& psi);

  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  bool normalized() const { return normalized_; }

 private:
  DensityMatrix(Mat m, bool normalized)
      : m_(std::move(m)), normalized_(normalized) {}
  Mat m_;
  bool normalized_;
};

// Rank-1 projector onto a pure state.
struct Projector {
  PureState state;
  Mat matrix() const { return state.projector(); }
};

// Ordered set of D^2 unitary, Hermitian, trace-orthogonal operators with
// tr(Ea Eb) = D delta_ab. This implementation fixes unnormalized Pauli
// strings; the 1/D of the Hilbert-Schmidt inner product is carried by the
// chi-matrix convention, so the identity channel has chi_II = 1.
class OperatorBasis {
 public:
  OperatorBasis(std::vector<Mat> elements, std::vector<std::string> labels);

  const Mat& element(int a) const { return elements_[a]; }
  const std::string& label(int a) const { return labels_[a]; }
  int size() const { return static_cast<int>(elements_.size()); }
  int dim() const { return static_cast<int>(elements_[0].rows()); }
  // Index of a label such as "X" or "iz" (case-insensitive); -1 if absent.
  int index_of(const std::string& label) const;

 private:
  std::vector<Mat> elements_;
  std::vector<std::string> labels_;
};

// The 4^n Pauli strings in lexicographic label order (I < X < Y < Z).
OperatorBasis pauli_basis(int n_qubits);

// Shared immutable basis instance for dim = 2^n (n <= 3).
const OperatorBasis& cached_pauli_basis(int dim);

// Unit-norm state distributed by the unitarily invariant measure
// (normalized vector of independent standard complex Gaussians).
PureState haar_random_state(int dim, std::uint64_t seed);

// (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2, in [0, 1].
double uhlmann_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

}  // namespace seqpt
