#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "seqpt/experiment.hpp"
#include "seqpt/tomography.hpp"

using namespace seqpt;

TEST_CASE("NoiseModel parameter validation") {
  NoiseModel ok;
  CHECK_NOTHROW(ok.check());
  NoiseModel bad_v;
  bad_v.visibility = 1.2;
  CHECK_THROWS_AS(bad_v.check(), std::invalid_argument);
  NoiseModel bad_jitter;
  bad_jitter.phase_jitter_std = -0.1;
  CHECK_THROWS_AS(bad_jitter.check(), std::invalid_argument);
}

TEST_CASE("sample_counts: degenerate, determinism, convergence") {
  const CountRecord sure = sample_counts({1.0, 0.0}, 100, 1);
  CHECK(sure.counts == std::vector<long long>({100, 0}));
  CHECK(sure.shots == 100);

  const CountRecord third = sample_counts({1.0 / 3, 1.0 / 3, 1.0 / 3}, 3, 2);
  CHECK(std::accumulate(third.counts.begin(), third.counts.end(), 0LL) == 3);

  for (std::uint64_t seed : {0ULL, 7ULL, 123456ULL}) {
    const CountRecord half = sample_counts({0.5, 0.5}, 1000000, seed);
    const double freq = double(half.counts[0]) / 1e6;
    CHECK(freq > 0.497);  // 6 sigma of the binomial std 5e-4
    CHECK(freq < 0.503);
  }

  const CountRecord a = sample_counts({0.2, 0.3, 0.5}, 1000, 9);
  const CountRecord b = sample_counts({0.2, 0.3, 0.5}, 1000, 9);
  CHECK(a.counts == b.counts);

  CHECK_THROWS_AS(sample_counts({0.5, 0.4}, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_counts({1.5, -0.5}, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_counts({1.0}, 0, 0), std::invalid_argument);
}

TEST_CASE("apply_noise: identity case and full dephasing") {
  const Channel qwp = builtin_channel("qwp", {0.0});
  const TwoDesign d = mub_design(1);

  NoiseModel clean;  // V = 1, zero phases
  for (int j = 0; j < 6; ++j)
    for (Axis axis : {Axis::x, Axis::y}) {
      const CircuitRun noiseless =
          run_offdiagonal_circuit(qwp, 0, 3, d.states[j], axis);
      const CircuitRun with_clean =
          run_offdiagonal_circuit(qwp, 0, 3, d.states[j], axis, &clean, 1);
      CHECK(std::abs(noiseless.conditional_difference() -
                     with_clean.conditional_difference()) < 1e-12);
    }

  NoiseModel dark;
  dark.visibility = 0.0;
  for (int j = 0; j < 6; ++j)
    for (Axis axis : {Axis::x, Axis::y}) {
      const CircuitRun run =
          run_offdiagonal_circuit(qwp, 0, 3, d.states[j], axis, &dark, 1);
      CHECK(std::abs(run.conditional_difference()) < 1e-12);
    }
}

TEST_CASE("apply_noise scales off-diagonal chi estimates by V") {
  const Channel qwp = builtin_channel("qwp", {0.0});
  NoiseModel vis;
  vis.visibility = 0.92;
  const ChiElementEstimate est = seqpt_offdiagonal(
      qwp, 0, 3, mub_design(1), full_plan(6), Shots::exact(), &vis);
  CHECK(std::abs(est.value - cx(0.0, 0.46)) < 1e-10);
}

TEST_CASE("apply_noise phase acts on the relative path phase") {
  // A pi phase offset flips the sign of every coherence-borne difference.
  const Channel qwp = builtin_channel("qwp", {0.0});
  NoiseModel flip;
  flip.phase_offset = 3.14159265358979323846;
  const ChiElementEstimate est = seqpt_offdiagonal(
      qwp, 0, 3, mub_design(1), full_plan(6), Shots::exact(), &flip);
  CHECK(std::abs(est.value - cx(0.0, -0.5)) < 1e-10);

  Mat joint = Mat::Identity(4, 4) / 4.0;
  NoiseModel any;
  CHECK_THROWS_AS(apply_noise(joint, 3, any, 0), std::invalid_argument);
}

TEST_CASE("error_bound formula and limits") {
  CHECK(error_bound(6, 6, 1.0) == 0.0);
  CHECK(error_bound(1, 6, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(error_bound(3, 6, 1.0) ==
        doctest::Approx(std::sqrt(0.2)).epsilon(1e-15));
  CHECK(error_bound(3, 6, 2.5) ==
        doctest::Approx(2.5 * std::sqrt(0.2)).epsilon(1e-15));
  for (int M = 1; M < 6; ++M)
    CHECK(error_bound(M, 6, 1.0) > error_bound(M + 1, 6, 1.0));
  CHECK_THROWS_AS(error_bound(7, 6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(0, 6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(1, 6, -1.0), std::invalid_argument);
}

TEST_CASE("convergence_report on a constant list") {
  const ConvergenceReport r = convergence_report(
      {1, 1, 1, 1, 1, 1}, 1.0, ScaleRule::worst_case(),
      EnumerateRule::all_subsets(), 2);
  CHECK(r.violations == 0);
  CHECK(r.scale == 0.0);
  for (const auto& errs : r.subset_errors)
    for (double e : errs) CHECK(e == 0.0);
  CHECK(r.bound_curve.back() == 0.0);
  // 2^6 - 1 nonempty subsets in total.
  std::size_t total = 0;
  for (const auto& errs : r.subset_errors) total += errs.size();
  CHECK(total == 63);
}

TEST_CASE("convergence_report: errors vanish at M = K") {
  const ConvergenceReport r = convergence_report(
      {0.3, 0.9, 0.1, 0.5}, 0.45, ScaleRule::population_std(),
      EnumerateRule::all_subsets(), 2);
  REQUIRE(r.subset_errors.back().size() == 1);
  CHECK(r.subset_errors.back()[0] == 0.0);
  CHECK(r.bound_curve.back() == 0.0);
}

TEST_CASE("convergence_report on identity-channel chi_ZZ survivals") {
  // Survivals (1, 1, 0, 0, 0, 0): the worst-case bound anchors at the largest
  // single-sample error, but the (1, 1) pair at M = 2 still exceeds the decayed
  // bound; exhaustive enumeration gives exactly 10 exceedances.
  const std::vector<double> survivals = {1, 1, 0, 0, 0, 0};
  const ConvergenceReport r = convergence_report(
      survivals, 1.0 / 3.0, ScaleRule::worst_case(),
      EnumerateRule::all_subsets(), 2);
  CHECK(r.full_mean == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // Chi units: scale = (3/2) * max |v - mean| = (3/2)(2/3) = 1.
  CHECK(r.scale == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.violations == 10);
  // M = 1 errors saturate but do not exceed the bound.
  for (double e : r.subset_errors[0]) CHECK(e <= r.bound_curve[0] + 1e-12);
}

TEST_CASE("convergence_report scale rules") {
  const std::vector<double> vals = {0.2, 0.4, 0.9};
  const double mean = 0.5;
  const double factor = 1.5;  // (D+1)/D at D = 2

  const ConvergenceReport pop = convergence_report(
      vals, mean, ScaleRule::population_std(), EnumerateRule::all_subsets(), 2);
  const double expected_std =
      std::sqrt((0.09 + 0.01 + 0.16) / 3.0);
  CHECK(pop.scale == doctest::Approx(factor * expected_std).epsilon(1e-12));

  const ConvergenceReport worst = convergence_report(
      vals, mean, ScaleRule::worst_case(), EnumerateRule::all_subsets(), 2);
  CHECK(worst.scale == doctest::Approx(factor * 0.4).epsilon(1e-12));

  const ConvergenceReport fixed = convergence_report(
      vals, mean, ScaleRule::explicit_scale(0.7),
      EnumerateRule::all_subsets(), 2);
  CHECK(fixed.scale == 0.7);
}

TEST_CASE("convergence_report permutation prefixes are deterministic") {
  const std::vector<double> vals = {1, 1, 0, 0, 0, 0};
  const EnumerateRule rule = EnumerateRule::prefixes(50, 11);
  const ConvergenceReport a = convergence_report(
      vals, 1.0 / 3.0, ScaleRule::worst_case(), rule, 2);
  const ConvergenceReport b = convergence_report(
      vals, 1.0 / 3.0, ScaleRule::worst_case(), rule, 2);
  for (int m = 0; m < 6; ++m) {
    REQUIRE(a.subset_errors[m].size() == 50);
    CHECK(a.subset_errors[m] == b.subset_errors[m]);
  }
  CHECK(a.violations == b.violations);
}

TEST_CASE("convergence_report input validation") {
  CHECK_THROWS_AS(convergence_report({}, 0.0, ScaleRule::worst_case(),
                                     EnumerateRule::all_subsets(), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(convergence_report({1.0}, 1.0, ScaleRule::worst_case(),
                                     EnumerateRule::all_subsets(), 2),
                  std::invalid_argument);
  const std::vector<double> big(21, 0.5);
  CHECK_THROWS_AS(convergence_report(big, 0.5, ScaleRule::worst_case(),
                                     EnumerateRule::all_subsets(), 2),
                  std::invalid_argument);
  CHECK_NOTHROW(convergence_report(big, 0.5, ScaleRule::worst_case(),
                                   EnumerateRule::prefixes(5, 0), 2));
}

TEST_CASE("channel_fidelity known values") {
  const Channel id = builtin_channel("identity", {});
  const ChannelFidelityEstimate self = channel_fidelity(id, id, 100, 1);
  CHECK(self.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(self.std_error < 1e-9);

  // For unitaries the Haar average is (|tr(U^dag V)|^2 + D)/(D^2 + D) = 2/3.
  const Channel qwp = builtin_channel("qwp", {0.0});
  const ChannelFidelityEstimate f_q = channel_fidelity(id, qwp, 100000, 2);
  CHECK(std::abs(f_q.value - 2.0 / 3.0) < 3.0 * f_q.std_error + 1e-12);

  // Pure input vs maximally mixed output: fidelity 1/2 for every input.
  const Channel dep = builtin_channel("depolarizing", {1.0});
  const ChannelFidelityEstimate f_d = channel_fidelity(id, dep, 5000, 3);
  CHECK(f_d.value == doctest::Approx(0.5).epsilon(1e-9));

  // Symmetry within statistical error.
  const ChannelFidelityEstimate fwd = channel_fidelity(id, qwp, 20000, 4);
  const ChannelFidelityEstimate bwd = channel_fidelity(qwp, id, 20000, 4);
  CHECK(std::abs(fwd.value - bwd.value) <
        3.0 * (fwd.std_error + bwd.std_error) + 1e-12);

  CHECK_THROWS_AS(channel_fidelity(id, random_cptp_channel(4, 0), 100, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(channel_fidelity(id, id, 1, 0), std::invalid_argument);
}

TEST_CASE("channel_fidelity tolerates slightly unphysical chi inputs") {
  // Linear-inversion artifacts: a small negative chi eigenvalue must not
  // break the Uhlmann computation.
  Mat chi = builtin_channel("identity", {}).chi_matrix();
  chi(1, 1) = -1e-4;
  chi(0, 0) = 1.0 + 1e-4;
  const Channel near_id = Channel::from_chi(chi, 2);
  const ChannelFidelityEstimate f =
      channel_fidelity(near_id, builtin_channel("identity", {}), 2000, 5);
  CHECK(f.value > 0.999);
}

TEST_CASE("shot-mode std scales as 1/sqrt(shots)") {
  const Channel qwp = builtin_channel("qwp", {0.0});
  const TwoDesign d = mub_design(1);
  const SamplingPlan plan = full_plan(6);

  auto empirical_std = [&](long long shots) {
    std::vector<double> values;
    for (int s = 0; s < 100; ++s) {
      const ChiElementEstimate est = seqpt_offdiagonal(
          qwp, 0, 3, d, plan, Shots::of(shots), nullptr, 9000 + s);
      values.push_back(est.value.imag());
    }
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return std::sqrt(var / (values.size() - 1));
  };

  const double coarse = empirical_std(1000);
  const double fine = empirical_std(4000);
  CHECK(coarse / fine > 1.6);
  CHECK(coarse / fine < 2.4);
}
