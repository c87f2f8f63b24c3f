#include "seqpt/designs.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace seqpt {

namespace {

PureState phase_fixed(Vec v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-12) {
      v *= std::abs(v(k)) / v(k);
      break;
    }
  }
  v /= v.norm();
  return PureState(std::move(v));
}

std::vector<PureState> single_qubit_mubs() {
  const cx i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Vec> raw = {
      (Vec(2) << 1, 0).finished(),       (Vec(2) << 0, 1).finished(),
      (Vec(2) << s, s).finished(),       (Vec(2) << s, -s).finished(),
      (Vec(2) << s, s * i).finished(),   (Vec(2) << s, -s * i).finished()};
  std::vector<PureState> states;
  for (Vec& v : raw) states.push_back(phase_fixed(std::move(v)));
  return states;
}

// Rows of the five standard MUBs for D = 4 (computational basis first).
std::vector<PureState> two_qubit_mubs() {
  const cx i(0.0, 1.0);
  const cx o(1.0, 0.0);
  std::vector<std::vector<cx>> rows = {
      {1, 0, 0, 0},   {0, 1, 0, 0},   {0, 0, 1, 0},   {0, 0, 0, 1},
      {o, o, o, o},   {o, o, -o, -o}, {o, -o, -o, o}, {o, -o, o, -o},
      {o, -o, -i, -i}, {o, -o, i, i},  {o, o, i, -i},  {o, o, -i, i},
      {o, -i, -i, -o}, {o, -i, i, o},  {o, i, i, -o},  {o, i, -i, o},
      {o, -i, -o, -i}, {o, -i, o, i},  {o, i, o, -i},  {o, i, -o, i}};
  std::vector<PureState> states;
  for (const auto& row : rows) {
    Vec v(4);
    for (int k = 0; k < 4; ++k) v(k) = row[k];
    states.push_back(phase_fixed(std::move(v)));
  }
  return states;
}

}  // namespace

TwoDesign mub_design(int n_qubits) {
  switch (n_qubits) {
    case 1: return TwoDesign{single_qubit_mubs(), 2};
    case 2: return TwoDesign{two_qubit_mubs(), 4};
    default:
      throw std::invalid_argument("mub_design: n_qubits must be 1 or 2");
  }
}

DesignCheck verify_2design(const std::vector<PureState>& states) {
  if (states.empty())
    throw std::invalid_argument("verify_2design: empty state list");
  const int d = states[0].dim();
  for (const PureState& s : states)
    if (s.dim() != d)
      throw std::invalid_argument("verify_2design: mixed dimensions");

  const int d2 = d * d;
  Mat frame = Mat::Zero(d2, d2);
  for (const PureState& s : states) {
    const Mat p = s.projector();
    frame += kron(p, p);
  }
  frame /= double(states.size());

  Mat swap = Mat::Zero(d2, d2);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) swap(a * d + b, b * d + a) = 1.0;
  const Mat target = (Mat::Identity(d2, d2) + swap) / double(d * (d + 1));

  const double residual = (frame - target).cwiseAbs().maxCoeff();
  return DesignCheck{residual <= 1e-8, residual};
}

SamplingPlan make_plan(int K, int M, SamplingMode mode, std::uint64_t seed) {
  if (K < 1 || M < 1) throw std::invalid_argument("make_plan: K, M must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<int> indices;
  if (mode == SamplingMode::without_replacement) {
    if (M > K)
      throw std::invalid_argument("make_plan: M > K without replacement");
    std::vector<int> pool(K);
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: the first M entries are a uniform subset.
    for (int j = 0; j < M; ++j) {
      std::uniform_int_distribution<int> pick(j, K - 1);
      std::swap(pool[j], pool[pick(rng)]);
    }
    indices.assign(pool.begin(), pool.begin() + M);
  } else {
    std::uniform_int_distribution<int> pick(0, K - 1);
    indices.reserve(M);
    for (int j = 0; j < M; ++j) indices.push_back(pick(rng));
  }
  return SamplingPlan{std::move(indices), mode, seed};
}

SamplingPlan full_plan(int K) {
  std::vector<int> indices(K);
  std::iota(indices.begin(), indices.end(), 0);
  return SamplingPlan{std::move(indices), SamplingMode::without_replacement, 0};
}

}  // namespace seqpt
