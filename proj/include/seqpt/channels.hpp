// Channel representations (chi, Kraus, unitary, superoperator), conversions,
// CP/TP validation, application, and the builtin channel library.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqpt/qmath.hpp"

namespace seqpt {

enum class Rep { chi, kraus, unitary, superop };

std::string rep_name(Rep r);
Rep rep_from_name(const std::string& name);

struct ValidationReport {
  double hermiticity_residual = 0.0;  // max |chi - chi^dag| entry
  double min_eigenvalue = 0.0;        // of the Hermitized chi
  double tp_residual = 0.0;           // ||sum chi_ab Eb^dag Ea - I||_2
  bool hermitian = false;
};

// A CP map in one of four interconvertible representations. The chi matrix is
// taken in the Pauli-string basis with tr(Ea Eb) = D delta_ab, so the
// identity channel is chi_II = 1. Superoperators act on column-major vec(rho).
class Channel {
 public:
  static Channel from_unitary(Mat u);
  static Channel from_chi(Mat chi, int dim);
  static Channel from_kraus(std::vector<Mat> kraus);
  static Channel from_superoperator(Mat s, int dim);

  Rep rep() const { return rep_; }
  int dim() const { return dim_; }

  // Conversion to a target representation; chi entries survive round trips
  // within 1e-8. chi -> kraus requires a positive semidefinite chi; the
  // eigenvalues are clipped at 0 when >= -1e-8.
  Channel to(Rep target) const;

  // chi entries of this channel (converting if needed).
  Mat chi_matrix() const;
  // Raw payload accessors; only valid for the matching representation.
  const Mat& matrix() const;
  const std::vector<Mat>& kraus_operators() const;

  // Linear action on an arbitrary D x D matrix (conditional states included).
  Mat apply(const Mat& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

  ValidationReport validate() const { return validate_chi(chi_matrix(), dim_); }

  static ValidationReport validate_chi(const Mat& chi, int dim);

 private:
  Channel(Rep rep, int dim) : rep_(rep), dim_(dim) {}
  Rep rep_;
  int dim_;
  Mat mat_;                 // chi / unitary / superoperator payload
  std::vector<Mat> kraus_;  // kraus payload
};

// E_ab(rho) = E(Ea rho Eb); not CP for a != b, output generally non-Hermitian
// and unnormalized.
struct ModifiedChannel {
  Channel base;
  int left_index;
  int right_index;

  Mat apply(const Mat& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
};

ModifiedChannel modified_channel(Channel base, int a, int b);

// name in {identity, qwp, hwp, depolarizing, dephasing, amplitude_damping}.
// Waveplate angles are in degrees (Jones convention: QWP at 0 deg is
// diag(1, i) on (H, V) amplitudes); p and gamma must be in [0, 1].
Channel builtin_channel(const std::string& name,
                        const std::vector<double>& params);

// Uniform CP TP map: Haar-random isometry into a dim * 4 dilation, traced out.
Channel random_cptp_channel(int dim, std::uint64_t seed);

}  // namespace seqpt
