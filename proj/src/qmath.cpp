#include "seqpt/qmath.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>

namespace seqpt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : parts) h = splitmix64(h ^ (p + 0x9e3779b97f4a7c15ULL));
  return h;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

PureState::PureState(Vec amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0)
    throw std::invalid_argument("PureState: empty amplitude vector");
  if (std::abs(amplitudes_.norm() - 1.0) > kAlgTol)
    throw std::invalid_argument("PureState: amplitudes not unit norm");
}

cx PureState::overlap(const PureState& other) const {
  if (dim() != other.dim())
    throw std::invalid_argument("PureState::overlap: dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);
}

Mat PureState::projector() const {
  return amplitudes_ * amplitudes_.adjoint();
}

PureState basis_state(int dim, int index) {
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return PureState(v);
}

DensityMatrix DensityMatrix::from_matrix(Mat m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("DensityMatrix: matrix not square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kAlgTol)
    throw std::invalid_argument("DensityMatrix: matrix not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > kAlgTol ||
      std::abs(m.trace().imag()) > kAlgTol)
    throw std::invalid_argument("DensityMatrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  return DensityMatrix(std::move(m), true);
}

DensityMatrix DensityMatrix::conditional(Mat m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("DensityMatrix: matrix not square");
  return DensityMatrix(std::move(m), false);
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(psi.projector(), true);
}

OperatorBasis::OperatorBasis(std::vector<Mat> elements,
                             std::vector<std::string> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty() || elements_.size() != labels_.size())
    throw std::invalid_argument("OperatorBasis: element/label mismatch");
  const auto d = elements_[0].rows();
  const Mat id = Mat::Identity(d, d);
  for (const Mat& e : elements_) {
    if ((e * e.adjoint() - id).cwiseAbs().maxCoeff() > kAlgTol)
      throw std::invalid_argument("OperatorBasis: element not unitary");
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kAlgTol)
      throw std::invalid_argument("OperatorBasis: element not Hermitian");
  }
}

int OperatorBasis::index_of(const std::string& label) const {
  std::string up;
  for (char c : label) up.push_back(static_cast<char>(std::toupper(c)));
  for (int a = 0; a < size(); ++a)
    if (labels_[a] == up) return a;
  return -1;
}

OperatorBasis pauli_basis(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 3)
    throw std::invalid_argument("pauli_basis: n_qubits must be in [1, 3]");
  const cx i(0.0, 1.0);
  std::array<Mat, 4> sigma;
  sigma[0] = Mat::Identity(2, 2);
  sigma[1] = (Mat(2, 2) << 0, 1, 1, 0).finished();
  sigma[2] = (Mat(2, 2) << 0, -i, i, 0).finished();
  sigma[3] = (Mat(2, 2) << 1, 0, 0, -1).finished();
  const char names[] = {'I', 'X', 'Y', 'Z'};

  const int count = 1 << (2 * n_qubits);
  std::vector<Mat> elements;
  std::vector<std::string> labels;
  elements.reserve(count);
  labels.reserve(count);
  for (int a = 0; a < count; ++a) {
    Mat op = Mat::Identity(1, 1);
    std::string label;
    for (int q = n_qubits - 1; q >= 0; --q) {
      const int digit = (a >> (2 * q)) & 3;
      op = kron(op, sigma[digit]);
      label.push_back(names[digit]);
    }
    elements.push_back(std::move(op));
    labels.push_back(std::move(label));
  }
  return OperatorBasis(std::move(elements), std::move(labels));
}

const OperatorBasis& cached_pauli_basis(int dim) {
  static const OperatorBasis b1 = pauli_basis(1);
  static const OperatorBasis b2 = pauli_basis(2);
  static const OperatorBasis b3 = pauli_basis(3);
  switch (dim) {
    case 2: return b1;
    case 4: return b2;
    case 8: return b3;
    default:
      throw std::invalid_argument("cached_pauli_basis: unsupported dimension");
  }
}

PureState haar_random_state(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("haar_random_state: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  for (int k = 0; k < dim; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(k) = cx(re, im);
  }
  v /= v.norm();
  return PureState(v);
}

double uhlmann_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim())
    throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es1(rho1.matrix());
  if (es1.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("uhlmann_fidelity: non-positive input");
  Eigen::VectorXd w = es1.eigenvalues().cwiseMax(0.0);
  const Mat sqrt1 = es1.eigenvectors() * w.cwiseSqrt().asDiagonal() *
                    es1.eigenvectors().adjoint();
  Mat inner = sqrt1 * rho2.matrix() * sqrt1;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es2(inner);
  if (es2.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("uhlmann_fidelity: non-positive input");
  // Discard eigenvalue noise at the machine-precision floor: spurious
  // O(eps) eigenvalues would otherwise contribute O(sqrt(eps)) after the
  // square root.
  const double floor_ = es2.eigenvalues().cwiseAbs().maxCoeff() * 1e-14;
  double root_sum = 0.0;
  for (Eigen::Index k = 0; k < es2.eigenvalues().size(); ++k)
    if (es2.eigenvalues()(k) > floor_)
      root_sum += std::sqrt(es2.eigenvalues()(k));
  return root_sum * root_sum;
}

}  // namespace seqpt
