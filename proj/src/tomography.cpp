#include "seqpt/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace seqpt {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

double binomial_frequency(double p, long long shots, std::uint64_t seed) {
  const CountRecord rec = sample_counts({clamp01(p), 1.0 - clamp01(p)}, shots, seed);
  return double(rec.counts[0]) / double(shots);
}

}  // namespace

cx chi_from_fidelity(cx fidelity, int dim, bool diagonal) {
  if (dim < 2) throw std::invalid_argument("chi_from_fidelity: dim must be >= 2");
  const double delta = diagonal ? 1.0 : 0.0;
  return (double(dim + 1) * fidelity - delta) / double(dim);
}

FidelityEstimate design_average_fidelity(const ModifiedChannel& mod,
                                         const TwoDesign& design,
                                         const SamplingPlan& plan,
                                         Shots shots, std::uint64_t seed) {
  if (mod.left_index != mod.right_index)
    throw std::invalid_argument(
        "design_average_fidelity: diagonal case only (a == b); use the "
        "off-diagonal estimators otherwise");
  if (plan.indices.empty())
    throw std::invalid_argument("design_average_fidelity: empty plan");
  const int a = mod.left_index;

  double sum = 0.0;
  double var = 0.0;
  for (int j : plan.indices) {
    if (j < 0 || j >= design.cardinality())
      throw std::out_of_range("design_average_fidelity: plan index");
    const PureState& psi = design.states[j];
    const Mat out = mod.apply(psi.projector());
    const double p = (psi.amplitudes().adjoint() * out * psi.amplitudes())(0).real();
    if (shots.is_exact) {
      sum += p;
    } else {
      const double f = binomial_frequency(
          p, shots.count,
          derive_seed(seed, {std::uint64_t(a), std::uint64_t(a),
                             std::uint64_t(j), 2}));
      sum += f;
      var += f * (1.0 - f) / double(shots.count);
    }
  }
  const int m = plan.size();
  FidelityEstimate est;
  est.value = sum / m;
  est.std_error = shots.is_exact ? 0.0 : std::sqrt(var) / m;
  est.samples = m;
  est.shots = shots;
  return est;
}

FidelityEstimate haar_average_fidelity(const ModifiedChannel& mod,
                                       int n_samples, std::uint64_t seed) {
  if (mod.left_index != mod.right_index)
    throw std::invalid_argument("haar_average_fidelity: diagonal case only");
  if (n_samples < 2)
    throw std::invalid_argument("haar_average_fidelity: n_samples must be >= 2");
  const int dim = mod.base.dim();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const PureState psi =
        haar_random_state(dim, derive_seed(seed, {std::uint64_t(k)}));
    const Mat out = mod.apply(psi.projector());
    const double p = (psi.amplitudes().adjoint() * out * psi.amplitudes())(0).real();
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / n_samples;
  const double var =
      std::max(0.0, sum_sq / n_samples - mean * mean) / (n_samples - 1.0);
  FidelityEstimate est;
  est.value = mean;
  est.std_error = std::sqrt(var);
  est.samples = n_samples;
  est.shots = Shots::exact();
  return est;
}

CircuitRun run_offdiagonal_circuit(const Channel& channel, int a, int b,
                                   const PureState& input, Axis axis,
                                   const NoiseModel* noise,
                                   std::uint64_t seed) {
  const int d = channel.dim();
  const int d2 = d * d;
  if (a < 0 || a >= d2 || b < 0 || b >= d2)
    throw std::out_of_range("run_offdiagonal_circuit: basis index");
  if (input.dim() != d)
    throw std::invalid_argument("run_offdiagonal_circuit: dimension mismatch");
  const OperatorBasis& basis = cached_pauli_basis(d);

  // H on |0>, then controlled-Ea^dag on ancilla 1 and controlled-Eb^dag on 0.
  Vec joint = Vec::Zero(2 * d);
  joint.head(d) = basis.element(b).adjoint() * input.amplitudes();
  joint.tail(d) = basis.element(a).adjoint() * input.amplitudes();
  joint /= std::sqrt(2.0);

  Mat rho_joint = joint * joint.adjoint();
  // Channel acts on the system in both interferometer arms.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      rho_joint.block(i * d, j * d, d, d) =
          channel.apply(Mat(rho_joint.block(i * d, j * d, d, d)));
  if (noise != nullptr) apply_noise(rho_joint, d, *noise, seed);

  const cx im(0.0, 1.0);
  Mat sigma(2, 2);
  if (axis == Axis::x)
    sigma << 0, 1, 1, 0;
  else
    sigma << 0, -im, im, 0;
  const Mat anc_plus = 0.5 * (Mat::Identity(2, 2) + sigma);
  const Mat anc_minus = 0.5 * (Mat::Identity(2, 2) - sigma);
  const Mat surv = input.projector();
  const Mat fail = Mat::Identity(d, d) - surv;

  CircuitRun run;
  run.a = a;
  run.b = b;
  run.axis = axis;
  run.diagonal_flagged = (a == b);
  run.p_plus_survive = (kron(anc_plus, surv) * rho_joint).trace().real();
  run.p_minus_survive = (kron(anc_minus, surv) * rho_joint).trace().real();
  run.p_plus_fail = (kron(anc_plus, fail) * rho_joint).trace().real();
  run.p_minus_fail = (kron(anc_minus, fail) * rho_joint).trace().real();
  return run;
}

ChiElementEstimate seqpt_offdiagonal(const Channel& channel, int a, int b,
                                     const TwoDesign& design,
                                     const SamplingPlan& plan, Shots shots,
                                     const NoiseModel* noise,
                                     std::uint64_t seed) {
  if (a == b)
    throw std::invalid_argument(
        "seqpt_offdiagonal: use design_average_fidelity for diagonal elements");
  if (plan.indices.empty())
    throw std::invalid_argument("seqpt_offdiagonal: empty plan");
  const int d = channel.dim();

  double re_sum = 0.0, im_sum = 0.0, var_sum = 0.0;
  for (int j : plan.indices) {
    const PureState& psi = design.states.at(j);
    for (Axis axis : {Axis::x, Axis::y}) {
      const std::uint64_t jitter_seed =
          derive_seed(seed, {std::uint64_t(a), std::uint64_t(b),
                             std::uint64_t(j), std::uint64_t(axis), 0});
      const CircuitRun run =
          run_offdiagonal_circuit(channel, a, b, psi, axis, noise, jitter_seed);
      double diff;
      if (shots.is_exact) {
        diff = run.conditional_difference();
      } else {
        const std::uint64_t count_seed =
            derive_seed(seed, {std::uint64_t(a), std::uint64_t(b),
                               std::uint64_t(j), std::uint64_t(axis), 1});
        std::vector<double> probs = {
            clamp01(run.p_plus_survive), clamp01(run.p_minus_survive),
            clamp01(run.p_plus_fail), clamp01(run.p_minus_fail)};
        double total = probs[0] + probs[1] + probs[2] + probs[3];
        for (double& p : probs) p /= total;
        const CountRecord rec = sample_counts(probs, shots.count, count_seed);
        diff = double(rec.counts[0] - rec.counts[1]) / double(shots.count);
        const double ps = double(rec.counts[0] + rec.counts[1]) / double(shots.count);
        var_sum += std::max(0.0, ps - diff * diff) / double(shots.count);
      }
      if (axis == Axis::x)
        re_sum += diff;
      else
        im_sum += diff;
    }
  }
  const int m = plan.size();
  const cx fidelity(re_sum / m, im_sum / m);

  ChiElementEstimate est;
  est.a = a;
  est.b = b;
  est.method = Method::seqpt_ancilla;
  est.value = chi_from_fidelity(fidelity, d, false);
  est.std_error =
      shots.is_exact ? 0.0
                     : double(d + 1) / double(d) * std::sqrt(var_sum) / m;
  return est;
}

ChiElementEstimate seqpt_ancilla_free(const Channel& channel, int a, int b,
                                      const TwoDesign& design,
                                      const SamplingPlan& plan, Shots shots,
                                      std::uint64_t seed) {
  if (a == b)
    throw std::invalid_argument(
        "seqpt_ancilla_free: use design_average_fidelity for diagonal elements");
  if (plan.indices.empty())
    throw std::invalid_argument("seqpt_ancilla_free: empty plan");
  const int d = channel.dim();
  const OperatorBasis& basis = cached_pauli_basis(d);
  const double phases[4] = {0.0, kPi, 0.5 * kPi, 1.5 * kPi};

  double re_sum = 0.0, im_sum = 0.0, var_sum = 0.0;
  for (int j : plan.indices) {
    const PureState& psi = design.states.at(j);
    double f[4];
    for (int k = 0; k < 4; ++k) {
      // Conditional (unnormalized) state behind the ancilla projection; a
      // zero-norm branch simply contributes zero probability.
      const Vec prepared =
          0.5 * (basis.element(a) * psi.amplitudes() +
                 std::exp(cx(0.0, phases[k])) * basis.element(b) *
                     psi.amplitudes());
      const Mat out = channel.apply(Mat(prepared * prepared.adjoint()));
      double p = (psi.amplitudes().adjoint() * out * psi.amplitudes())(0).real();
      if (shots.is_exact) {
        f[k] = p;
      } else {
        const std::uint64_t count_seed =
            derive_seed(seed, {std::uint64_t(a), std::uint64_t(b),
                               std::uint64_t(j), std::uint64_t(k), 3});
        f[k] = binomial_frequency(p, shots.count, count_seed);
        var_sum += f[k] * (1.0 - f[k]) / double(shots.count);
      }
    }
    re_sum += f[0] - f[1];
    im_sum += f[2] - f[3];
  }
  const int m = plan.size();
  const cx fidelity(re_sum / m, im_sum / m);

  ChiElementEstimate est;
  est.a = a;
  est.b = b;
  est.method = Method::seqpt_ancilla_free;
  est.value = chi_from_fidelity(fidelity, d, false);
  est.std_error =
      shots.is_exact ? 0.0
                     : double(d + 1) / double(d) * std::sqrt(var_sum) / m;
  return est;
}

int worker_thread_count() {
  if (const char* env = std::getenv("SEQPT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ChiEstimate seqpt_full(const Channel& channel, const TwoDesign& design,
                       Shots shots, const NoiseModel* noise,
                       std::uint64_t seed, Method offdiagonal_method) {
  if (offdiagonal_method == Method::standard)
    throw std::invalid_argument("seqpt_full: off-diagonal method must be a "
                                "seqpt variant");
  const int d = channel.dim();
  const int d2 = d * d;
  const SamplingPlan plan = full_plan(design.cardinality());

  struct Task {
    int a, b;
  };
  std::vector<Task> tasks;
  for (int a = 0; a < d2; ++a) tasks.push_back({a, a});
  for (int a = 0; a < d2; ++a)
    for (int b = a + 1; b < d2; ++b) tasks.push_back({a, b});

  std::vector<cx> values(tasks.size());
  std::vector<double> errors(tasks.size());
  std::vector<std::exception_ptr> failures(tasks.size());

  auto run_task = [&](std::size_t t) {
    const auto [a, b] = tasks[t];
    try {
      if (a == b) {
        const FidelityEstimate f = design_average_fidelity(
            modified_channel(channel, a, a), design, plan, shots, seed);
        values[t] = chi_from_fidelity(f.value, d, true);
        errors[t] = double(d + 1) / double(d) * f.std_error;
      } else {
        const ChiElementEstimate est =
            offdiagonal_method == Method::seqpt_ancilla
                ? seqpt_offdiagonal(channel, a, b, design, plan, shots, noise,
                                    seed)
                : seqpt_ancilla_free(channel, a, b, design, plan, shots, seed);
        values[t] = est.value;
        errors[t] = est.std_error;
      }
    } catch (...) {
      failures[t] = std::current_exception();
    }
  };

  const int n_workers =
      std::min<int>(worker_thread_count(), static_cast<int>(tasks.size()));
  if (n_workers <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < n_workers; ++w)
      workers.emplace_back([&, w] {
        for (std::size_t t = w; t < tasks.size(); t += n_workers) run_task(t);
      });
    for (auto& th : workers) th.join();
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  ChiEstimate chi;
  chi.entries = Mat::Zero(d2, d2);
  chi.std_errors = Eigen::MatrixXd::Zero(d2, d2);
  chi.method = offdiagonal_method;
  chi.dim = d;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto [a, b] = tasks[t];
    chi.entries(a, b) = values[t];
    chi.std_errors(a, b) = errors[t];
    if (a != b) {
      chi.entries(b, a) = std::conj(values[t]);
      chi.std_errors(b, a) = errors[t];
    }
  }
  // Hermitian by construction; the diagonal estimates are real averages.
  for (int a = 0; a < d2; ++a) chi.entries(a, a) = chi.entries(a, a).real();
  return chi;
}

ChiEstimate standard_qpt(const Channel& channel, Shots shots,
                         std::uint64_t seed) {
  const int d = channel.dim();
  if (d != 2)
    throw std::invalid_argument("standard_qpt: implemented at D = 2");
  const OperatorBasis& basis = cached_pauli_basis(2);
  const cx im(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);

  std::vector<PureState> inputs = {
      basis_state(2, 0), basis_state(2, 1),
      PureState((Vec(2) << s, s).finished()),
      PureState((Vec(2) << s, s * im).finished())};

  // Bloch components of each output, with shot-noise replaced measurements.
  auto measure = [&](bool resample, const Eigen::MatrixXd* r_override) {
    Mat m_in(4, 4), m_out(4, 4);
    Eigen::MatrixXd r(4, 3);
    for (int k = 0; k < 4; ++k) {
      const Mat rho_in = inputs[k].projector();
      const Mat rho_out = channel.apply(rho_in);
      for (int l = 0; l < 3; ++l) {
        double rv = (basis.element(l + 1) * rho_out).trace().real();
        if (resample) {
          const double p_up = clamp01(0.5 * (1.0 + rv));
          const double f = binomial_frequency(
              p_up, shots.count,
              derive_seed(seed, {4, std::uint64_t(k), std::uint64_t(l)}));
          rv = 2.0 * f - 1.0;
        }
        if (r_override != nullptr) rv = (*r_override)(k, l);
        r(k, l) = rv;
      }
      Mat rho_est = 0.5 * Mat::Identity(2, 2);
      for (int l = 0; l < 3; ++l) rho_est += 0.5 * r(k, l) * basis.element(l + 1);
      m_in.col(k) = Eigen::Map<const Vec>(rho_in.data(), 4);
      m_out.col(k) = Eigen::Map<const Vec>(rho_est.data(), 4);
    }
    struct Result {
      Mat chi;
      Eigen::MatrixXd r;
    };
    const Mat superop = m_out * m_in.inverse();
    Mat chi = Channel::from_superoperator(superop, 2).chi_matrix();
    chi = 0.5 * (chi + chi.adjoint());
    return Result{std::move(chi), std::move(r)};
  };

  ChiEstimate est;
  est.method = Method::standard;
  est.dim = 2;
  est.std_errors = Eigen::MatrixXd::Zero(4, 4);

  if (shots.is_exact) {
    est.entries = measure(false, nullptr).chi;
    return est;
  }

  auto nominal = measure(true, nullptr);
  est.entries = nominal.chi;
  // chi is affine in the 12 measured Bloch components: propagate binomial
  // variances through exact unit-perturbation derivatives.
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(4, 4);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 3; ++l) {
      Eigen::MatrixXd perturbed = nominal.r;
      perturbed(k, l) += 1.0;
      const Mat deriv = measure(false, &perturbed).chi - nominal.chi;
      const double v =
          std::max(0.0, 1.0 - nominal.r(k, l) * nominal.r(k, l)) /
          double(shots.count);
      var += v * deriv.cwiseAbs2();
    }
  est.std_errors = var.cwiseSqrt();
  return est;
}

long long resource_count(ResourceMethod method, int dim) {
  if (dim < 2) throw std::invalid_argument("resource_count: dim must be >= 2");
  const long long d = dim;
  switch (method) {
    case ResourceMethod::seqpt_element: return d * (d + 1);
    case ResourceMethod::standard_full: return d * d * d * d;
  }
  throw std::logic_error("unreachable");
}

}  // namespace seqpt
