#include "seqpt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace seqpt {

void NoiseModel::check() const {
  if (visibility < 0.0 || visibility > 1.0)
    throw std::invalid_argument("NoiseModel: visibility must be in [0, 1]");
  if (phase_jitter_std < 0.0)
    throw std::invalid_argument("NoiseModel: jitter std must be >= 0");
}

CountRecord sample_counts(const std::vector<double>& probabilities,
                          long long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  double total = 0.0;
  for (double p : probabilities) {
    if (p < -1e-9)
      throw std::invalid_argument("sample_counts: negative probability");
    total += std::max(p, 0.0);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("sample_counts: probabilities must sum to 1");

  std::mt19937_64 rng(seed);
  CountRecord record;
  record.shots = shots;
  record.counts.resize(probabilities.size(), 0);
  long long remaining = shots;
  double mass_left = total;
  for (std::size_t k = 0; k + 1 < probabilities.size(); ++k) {
    const double p = std::max(probabilities[k], 0.0);
    if (remaining == 0 || mass_left <= 0.0) break;
    const double cond = std::clamp(p / mass_left, 0.0, 1.0);
    std::binomial_distribution<long long> bin(remaining, cond);
    const long long c = bin(rng);
    record.counts[k] = c;
    remaining -= c;
    mass_left -= p;
  }
  record.counts.back() = remaining;
  return record;
}

void apply_noise(Mat& joint, int system_dim, const NoiseModel& noise,
                 std::uint64_t seed) {
  noise.check();
  if (joint.rows() != 2 * system_dim || joint.cols() != 2 * system_dim)
    throw std::invalid_argument("apply_noise: joint state must be 2D x 2D");
  double phase = noise.phase_offset;
  if (noise.phase_jitter_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise.phase_jitter_std);
    phase += gauss(rng);
  }
  const cx factor = noise.visibility * std::exp(cx(0.0, phase));
  joint.block(0, system_dim, system_dim, system_dim) *= std::conj(factor);
  joint.block(system_dim, 0, system_dim, system_dim) *= factor;
}

double error_bound(int M, int K, double scale) {
  if (M < 1 || K < 1) throw std::invalid_argument("error_bound: M, K >= 1");
  if (M > K) throw std::invalid_argument("error_bound: M > K");
  if (scale < 0.0) throw std::invalid_argument("error_bound: scale < 0");
  if (K == 1) return 0.0;
  return scale * std::sqrt((1.0 / M) * double(K - M) / double(K - 1));
}

namespace {

// Visits every size-M index combination of [0, K).
template <typename F>
void for_each_combination(int K, int M, F&& visit) {
  std::vector<int> idx(M);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(idx);
    int pos = M - 1;
    while (pos >= 0 && idx[pos] == K - M + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < M; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ConvergenceReport convergence_report(const std::vector<double>& per_state_values,
                                     double true_mean, ScaleRule scale_rule,
                                     EnumerateRule enumerate_rule, int dim) {
  const int K = static_cast<int>(per_state_values.size());
  if (K < 2)
    throw std::invalid_argument("convergence_report: need at least 2 values");
  if (enumerate_rule.mode == EnumerateMode::all_subsets && K > 20)
    throw std::invalid_argument(
        "convergence_report: all-subsets enumeration capped at K = 20");

  // Chi units: fidelity deviations carry the (D+1)/D factor of Eq-style
  // chi-from-fidelity mapping; the constant delta shift cancels.
  const double factor = double(dim + 1) / double(dim);
  const double mean =
      std::accumulate(per_state_values.begin(), per_state_values.end(), 0.0) /
      K;

  ConvergenceReport report;
  report.per_state_values = per_state_values;
  report.full_mean = mean;
  report.true_mean = true_mean;

  switch (scale_rule.kind) {
    case ScaleKind::population_std: {
      double var = 0.0;
      for (double v : per_state_values) var += (v - mean) * (v - mean);
      report.scale = factor * std::sqrt(var / K);
      break;
    }
    case ScaleKind::worst_case_deviation: {
      double worst = 0.0;
      for (double v : per_state_values)
        worst = std::max(worst, std::abs(v - mean));
      report.scale = factor * worst;
      break;
    }
    case ScaleKind::explicit_value:
      report.scale = scale_rule.value;
      break;
  }

  report.subset_errors.resize(K);
  report.bound_curve.resize(K);
  for (int M = 1; M <= K; ++M)
    report.bound_curve[M - 1] = error_bound(M, K, report.scale);

  auto record = [&](int M, double subset_sum) {
    const double err = factor * std::abs(subset_sum / M - mean);
    report.subset_errors[M - 1].push_back(err);
    if (err > report.bound_curve[M - 1] + 1e-12) ++report.violations;
  };

  if (enumerate_rule.mode == EnumerateMode::all_subsets) {
    for (int M = 1; M <= K; ++M)
      for_each_combination(K, M, [&](const std::vector<int>& idx) {
        double sum = 0.0;
        for (int j : idx) sum += per_state_values[j];
        record(M, sum);
      });
  } else {
    std::vector<int> order(K);
    for (int p = 0; p < enumerate_rule.n_permutations; ++p) {
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(derive_seed(enumerate_rule.seed, {std::uint64_t(p)}));
      std::shuffle(order.begin(), order.end(), rng);
      double sum = 0.0;
      for (int M = 1; M <= K; ++M) {
        sum += per_state_values[order[M - 1]];
        record(M, sum);
      }
    }
  }
  return report;
}

namespace {

DensityMatrix project_to_state(Mat out) {
  out = 0.5 * (out + out.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(out);
  Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  const double tr = w.sum();
  if (tr <= 1e-12)
    throw std::invalid_argument("channel_fidelity: output has no positive part");
  w /= tr;
  return DensityMatrix::conditional(es.eigenvectors() * w.asDiagonal() *
                                    es.eigenvectors().adjoint());
}

}  // namespace

ChannelFidelityEstimate channel_fidelity(const Channel& ch1, const Channel& ch2,
                                         long long n_samples,
                                         std::uint64_t seed) {
  if (ch1.dim() != ch2.dim())
    throw std::invalid_argument("channel_fidelity: dimension mismatch");
  if (n_samples < 2)
    throw std::invalid_argument("channel_fidelity: n_samples must be >= 2");

  double sum = 0.0;
  double sum_sq = 0.0;
  for (long long k = 0; k < n_samples; ++k) {
    const PureState psi =
        haar_random_state(ch1.dim(), derive_seed(seed, {std::uint64_t(k)}));
    const Mat rho = psi.projector();
    const double f = uhlmann_fidelity(project_to_state(ch1.apply(rho)),
                                      project_to_state(ch2.apply(rho)));
    sum += f;
    sum_sq += f * f;
  }
  const double mean = sum / n_samples;
  const double var =
      std::max(0.0, sum_sq / n_samples - mean * mean) / (n_samples - 1.0);
  return ChannelFidelityEstimate{mean, std::sqrt(var), n_samples};
}

}  // namespace seqpt
