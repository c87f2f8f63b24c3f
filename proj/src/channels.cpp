#include "seqpt/channels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace seqpt {

namespace {

constexpr double kCpSlack = 1e-8;  // eigenvalue clip threshold for chi -> kraus
constexpr double kPi = 3.14159265358979323846;

int isqrt_dim(const Mat& m) { return static_cast<int>(m.rows()); }

Mat rotation(double theta) {
  Mat r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

std::string rep_name(Rep r) {
  switch (r) {
    case Rep::chi: return "chi";
    case Rep::kraus: return "kraus";
    case Rep::unitary: return "unitary";
    case Rep::superop: return "superoperator";
  }
  return "?";
}

Rep rep_from_name(const std::string& name) {
  if (name == "chi") return Rep::chi;
  if (name == "kraus") return Rep::kraus;
  if (name == "unitary") return Rep::unitary;
  if (name == "superoperator" || name == "superop") return Rep::superop;
  throw std::invalid_argument("unknown representation: " + name);
}

Channel Channel::from_unitary(Mat u) {
  const int d = isqrt_dim(u);
  if (u.cols() != d) throw std::invalid_argument("from_unitary: not square");
  if ((u * u.adjoint() - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("from_unitary: matrix not unitary");
  Channel c(Rep::unitary, d);
  c.mat_ = std::move(u);
  return c;
}

Channel Channel::from_chi(Mat chi, int dim) {
  if (chi.rows() != dim * dim || chi.cols() != dim * dim)
    throw std::invalid_argument("from_chi: chi must be D^2 x D^2");
  Channel c(Rep::chi, dim);
  c.mat_ = std::move(chi);
  return c;
}

Channel Channel::from_kraus(std::vector<Mat> kraus) {
  if (kraus.empty()) throw std::invalid_argument("from_kraus: empty set");
  const int d = isqrt_dim(kraus[0]);
  for (const Mat& a : kraus)
    if (a.rows() != d || a.cols() != d)
      throw std::invalid_argument("from_kraus: inconsistent dimensions");
  Channel c(Rep::kraus, d);
  c.kraus_ = std::move(kraus);
  return c;
}

Channel Channel::from_superoperator(Mat s, int dim) {
  if (s.rows() != dim * dim || s.cols() != dim * dim)
    throw std::invalid_argument("from_superoperator: must be D^2 x D^2");
  Channel c(Rep::superop, dim);
  c.mat_ = std::move(s);
  return c;
}

const Mat& Channel::matrix() const {
  if (rep_ == Rep::kraus)
    throw std::logic_error("Channel::matrix: kraus representation");
  return mat_;
}

const std::vector<Mat>& Channel::kraus_operators() const {
  if (rep_ != Rep::kraus)
    throw std::logic_error("Channel::kraus_operators: not kraus");
  return kraus_;
}

Mat Channel::chi_matrix() const {
  const OperatorBasis& basis = cached_pauli_basis(dim_);
  const int d2 = dim_ * dim_;
  switch (rep_) {
    case Rep::chi:
      return mat_;
    case Rep::unitary: {
      Vec u(d2);
      for (int a = 0; a < d2; ++a)
        u(a) = (basis.element(a).adjoint() * mat_).trace() / double(dim_);
      return u * u.adjoint();
    }
    case Rep::kraus: {
      Mat chi = Mat::Zero(d2, d2);
      for (const Mat& k : kraus_) {
        Vec c(d2);
        for (int a = 0; a < d2; ++a)
          c(a) = (basis.element(a).adjoint() * k).trace() / double(dim_);
        chi += c * c.adjoint();
      }
      return chi;
    }
    case Rep::superop: {
      // B_ab = conj(Eb) (x) Ea satisfy tr(B_ab^dag B_cd) = D^2 delta.
      Mat chi(d2, d2);
      for (int a = 0; a < d2; ++a)
        for (int b = 0; b < d2; ++b) {
          const Mat basis_op =
              kron(basis.element(b).conjugate(), basis.element(a));
          chi(a, b) = (basis_op.adjoint() * mat_).trace() / double(d2);
        }
      return chi;
    }
  }
  throw std::logic_error("unreachable");
}

Channel Channel::to(Rep target) const {
  if (target == rep_) return *this;
  const OperatorBasis& basis = cached_pauli_basis(dim_);
  const int d2 = dim_ * dim_;
  const Mat chi = chi_matrix();
  switch (target) {
    case Rep::chi:
      return from_chi(chi, dim_);
    case Rep::superop: {
      Mat s = Mat::Zero(d2, d2);
      for (int a = 0; a < d2; ++a)
        for (int b = 0; b < d2; ++b)
          s += chi(a, b) * kron(basis.element(b).conjugate(), basis.element(a));
      return from_superoperator(std::move(s), dim_);
    }
    case Rep::kraus: {
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (chi + chi.adjoint()));
      if (es.eigenvalues().minCoeff() < -kCpSlack)
        throw std::invalid_argument(
            "Channel::to(kraus): chi is not completely positive");
      std::vector<Mat> kraus;
      for (int k = 0; k < d2; ++k) {
        const double lambda = std::max(es.eigenvalues()(k), 0.0);
        if (lambda < 1e-14) continue;
        Mat a = Mat::Zero(dim_, dim_);
        for (int j = 0; j < d2; ++j)
          a += es.eigenvectors()(j, k) * basis.element(j);
        kraus.push_back(std::sqrt(lambda) * a);
      }
      if (kraus.empty()) kraus.push_back(Mat::Zero(dim_, dim_));
      return from_kraus(std::move(kraus));
    }
    case Rep::unitary: {
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (chi + chi.adjoint()));
      int top = 0;
      es.eigenvalues().maxCoeff(&top);
      for (int k = 0; k < d2; ++k)
        if (k != top && std::abs(es.eigenvalues()(k)) > 1e-8)
          throw std::invalid_argument(
              "Channel::to(unitary): chi is not rank one");
      const Vec u = std::sqrt(es.eigenvalues()(top)) * es.eigenvectors().col(top);
      Mat um = Mat::Zero(dim_, dim_);
      for (int a = 0; a < d2; ++a) um += u(a) * basis.element(a);
      // Fix the (physically irrelevant) global phase.
      for (int i = 0; i < dim_ * dim_; ++i) {
        const cx v = um(i / dim_, i % dim_);
        if (std::abs(v) > 1e-9) {
          um *= std::abs(v) / v;
          break;
        }
      }
      return from_unitary(std::move(um));
    }
  }
  throw std::logic_error("unreachable");
}

Mat Channel::apply(const Mat& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw std::invalid_argument("Channel::apply: dimension mismatch");
  switch (rep_) {
    case Rep::unitary:
      return mat_ * rho * mat_.adjoint();
    case Rep::kraus: {
      Mat out = Mat::Zero(dim_, dim_);
      for (const Mat& k : kraus_) out += k * rho * k.adjoint();
      return out;
    }
    case Rep::chi: {
      const OperatorBasis& basis = cached_pauli_basis(dim_);
      const int d2 = dim_ * dim_;
      Mat out = Mat::Zero(dim_, dim_);
      for (int a = 0; a < d2; ++a) {
        const Mat ea_rho = basis.element(a) * rho;
        for (int b = 0; b < d2; ++b)
          out += mat_(a, b) * ea_rho * basis.element(b).adjoint();
      }
      return out;
    }
    case Rep::superop: {
      const Vec v = Eigen::Map<const Vec>(rho.data(), dim_ * dim_);
      const Vec w = mat_ * v;
      return Eigen::Map<const Mat>(w.data(), dim_, dim_);
    }
  }
  throw std::logic_error("unreachable");
}

DensityMatrix Channel::apply(const DensityMatrix& rho) const {
  Mat out = apply(rho.matrix());
  return rho.normalized() ? DensityMatrix::from_matrix(std::move(out))
                          : DensityMatrix::conditional(std::move(out));
}

ValidationReport Channel::validate_chi(const Mat& chi, int dim) {
  ValidationReport report;
  report.hermiticity_residual = (chi - chi.adjoint()).cwiseAbs().maxCoeff();
  report.hermitian = report.hermiticity_residual <= kSpecTol;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (chi + chi.adjoint()));
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  const OperatorBasis& basis = cached_pauli_basis(dim);
  Mat tp = Mat::Identity(dim, dim) * -1.0;
  for (int a = 0; a < dim * dim; ++a)
    for (int b = 0; b < dim * dim; ++b)
      tp += chi(a, b) * basis.element(b).adjoint() * basis.element(a);
  report.tp_residual = tp.jacobiSvd().singularValues().maxCoeff();
  return report;
}

Mat ModifiedChannel::apply(const Mat& rho) const {
  const OperatorBasis& basis = cached_pauli_basis(base.dim());
  return base.apply(basis.element(left_index) * rho *
                    basis.element(right_index));
}

DensityMatrix ModifiedChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix::conditional(apply(rho.matrix()));
}

ModifiedChannel modified_channel(Channel base, int a, int b) {
  const int d2 = base.dim() * base.dim();
  if (a < 0 || a >= d2 || b < 0 || b >= d2)
    throw std::out_of_range("modified_channel: basis index out of range");
  return ModifiedChannel{std::move(base), a, b};
}

Channel builtin_channel(const std::string& name,
                        const std::vector<double>& params) {
  auto unit_interval = [&](double p, const char* what) {
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
    return p;
  };
  auto angle = [&]() {
    return params.empty() ? 0.0 : params[0] * kPi / 180.0;
  };
  const cx i(0.0, 1.0);

  if (name == "identity") {
    return Channel::from_unitary(Mat::Identity(2, 2));
  }
  if (name == "qwp") {
    Mat jones(2, 2);
    jones << 1, 0, 0, i;
    const double t = angle();
    return Channel::from_unitary(rotation(t) * jones * rotation(-t));
  }
  if (name == "hwp") {
    Mat jones(2, 2);
    jones << 1, 0, 0, -1;
    const double t = angle();
    return Channel::from_unitary(rotation(t) * jones * rotation(-t));
  }
  if (name == "depolarizing") {
    if (params.empty()) throw std::invalid_argument("depolarizing needs p");
    const double p = unit_interval(params[0], "depolarizing p");
    const OperatorBasis& basis = cached_pauli_basis(2);
    std::vector<Mat> kraus;
    kraus.push_back(std::sqrt(1.0 - 0.75 * p) * basis.element(0));
    for (int a = 1; a < 4; ++a)
      kraus.push_back(std::sqrt(0.25 * p) * basis.element(a));
    return Channel::from_kraus(std::move(kraus));
  }
  if (name == "dephasing") {
    if (params.empty()) throw std::invalid_argument("dephasing needs p");
    const double p = unit_interval(params[0], "dephasing p");
    const OperatorBasis& basis = cached_pauli_basis(2);
    // Off-diagonals scale by 1 - p; p = 1 is complete dephasing.
    return Channel::from_kraus(
        {std::sqrt(1.0 - 0.5 * p) * basis.element(0),
         std::sqrt(0.5 * p) * basis.element(3)});
  }
  if (name == "amplitude_damping") {
    if (params.empty()) throw std::invalid_argument("amplitude_damping needs gamma");
    const double g = unit_interval(params[0], "amplitude_damping gamma");
    Mat k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1.0 - g);
    k1 << 0, std::sqrt(g), 0, 0;
    return Channel::from_kraus({k0, k1});
  }
  if (name == "unitary")
    throw std::invalid_argument(
        "builtin 'unitary' requires an explicit matrix; supply it as channel "
        "data");
  throw std::invalid_argument("unknown builtin channel: " + name);
}

Channel random_cptp_channel(int dim, std::uint64_t seed) {
  const int env = 4;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(dim * env, dim);
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c)
      g(r, c) = cx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(dim * env, dim);
  // Phase-fix against the R diagonal so the isometry is Haar distributed.
  const Mat r = qr.matrixQR().topRows(dim).triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const cx d = r(c, c);
    if (std::abs(d) > 0) q.col(c) *= d / std::abs(d);
  }
  std::vector<Mat> kraus;
  kraus.reserve(env);
  for (int k = 0; k < env; ++k) kraus.push_back(q.middleRows(k * dim, dim));
  return Channel::from_kraus(std::move(kraus));
}

}  // namespace seqpt
