// Command-line harness: channel/config ingestion, experiment execution, and
// CSV/JSON result emission.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqpt/io.hpp"

namespace {

using namespace seqpt;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format;
};

ExperimentConfig load_config(const CommonArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw std::invalid_argument("cannot open config: " + args.config_path);
  json j;
  in >> j;
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  if (args.seed) cfg.seed = *args.seed;
  if (!args.output.empty()) cfg.output_path = args.output;
  if (!args.format.empty()) {
    if (args.format != "json" && args.format != "csv")
      throw std::invalid_argument("config 'format': must be json or csv");
    cfg.format = args.format;
  }
  return cfg;
}

void emit(const ExperimentConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write output: " + cfg.output_path);
  out << text;
}

std::pair<int, int> resolve_element(const OperatorBasis& basis,
                                    const std::string& la,
                                    const std::string& lb) {
  const int a = basis.index_of(la);
  const int b = basis.index_of(lb);
  if (a < 0 || b < 0)
    throw std::invalid_argument("config 'elements': unknown label pair (" + la +
                                ", " + lb + ")");
  return {a, b};
}

SamplingPlan config_plan(const ExperimentConfig& cfg, int K) {
  if (cfg.plan_m < 0) return full_plan(K);
  const SamplingMode mode = cfg.plan_mode == "with-replacement"
                                ? SamplingMode::with_replacement
                                : SamplingMode::without_replacement;
  return make_plan(K, cfg.plan_m, mode, derive_seed(cfg.seed, {0x91a7}));
}

ChiEstimate reconstruct(const Channel& channel, const ExperimentConfig& cfg,
                        const std::string& method) {
  const NoiseModel* noise = cfg.noise ? &*cfg.noise : nullptr;
  if (method == "standard") return standard_qpt(channel, cfg.shots, cfg.seed);

  const Method offdiag = method == "seqpt-ancilla-free"
                             ? Method::seqpt_ancilla_free
                             : Method::seqpt_ancilla;
  const TwoDesign design = mub_design(cfg.design_qubits);
  if (design.dim != channel.dim())
    throw std::invalid_argument(
        "config 'design.n_qubits': dimension does not match the channel");
  const SamplingPlan plan = config_plan(cfg, design.cardinality());
  const int d = channel.dim();
  const int d2 = d * d;

  if (cfg.elements.empty() && cfg.plan_m < 0)
    return seqpt_full(channel, design, cfg.shots, noise, cfg.seed, offdiag);

  // Selective elements and/or a partial plan: per-element assembly.
  const OperatorBasis& basis = cached_pauli_basis(d);
  std::vector<std::pair<int, int>> wanted;
  if (cfg.elements.empty()) {
    for (int a = 0; a < d2; ++a)
      for (int b = a; b < d2; ++b) wanted.emplace_back(a, b);
  } else {
    for (const auto& [la, lb] : cfg.elements)
      wanted.push_back(resolve_element(basis, la, lb));
  }

  ChiEstimate est;
  est.entries = Mat::Zero(d2, d2);
  est.std_errors = Eigen::MatrixXd::Zero(d2, d2);
  est.method = offdiag;
  est.dim = d;
  for (const auto& [a, b] : wanted) {
    cx value;
    double stderr_ = 0.0;
    if (a == b) {
      const FidelityEstimate f = design_average_fidelity(
          modified_channel(channel, a, a), design, plan, cfg.shots, cfg.seed);
      value = chi_from_fidelity(f.value, d, true);
      stderr_ = double(d + 1) / double(d) * f.std_error;
    } else {
      const ChiElementEstimate e =
          offdiag == Method::seqpt_ancilla
              ? seqpt_offdiagonal(channel, a, b, design, plan, cfg.shots,
                                  noise, cfg.seed)
              : seqpt_ancilla_free(channel, a, b, design, plan, cfg.shots,
                                   cfg.seed);
      value = e.value;
      stderr_ = e.std_error;
    }
    est.entries(a, b) = value;
    est.std_errors(a, b) = stderr_;
    if (a != b) {
      est.entries(b, a) = std::conj(value);
      est.std_errors(b, a) = stderr_;
    }
  }
  return est;
}

int cmd_tomograph(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const Channel channel = config_channel(cfg);

  std::vector<std::string> methods;
  if (cfg.method == "all")
    methods = {"seqpt", "seqpt-ancilla-free", "standard"};
  else
    methods = {cfg.method};

  json results = json::array();
  std::vector<ChiEstimate> estimates;
  for (const std::string& m : methods) {
    estimates.push_back(reconstruct(channel, cfg, m));
    results.push_back(result_bundle(estimates.back(), channel, cfg, m));
  }

  json out;
  out["results"] = std::move(results);
  if (estimates.size() > 1) {
    json pairwise = json::array();
    for (std::size_t i = 0; i < estimates.size(); ++i)
      for (std::size_t j = i + 1; j < estimates.size(); ++j) {
        const ChannelFidelityEstimate f = channel_fidelity(
            Channel::from_chi(estimates[i].entries, estimates[i].dim),
            Channel::from_chi(estimates[j].entries, estimates[j].dim),
            cfg.n_samples, derive_seed(cfg.seed, {0xcafe, i, j}));
        pairwise.push_back(json{{"methods", {methods[i], methods[j]}},
                                {"value", f.value},
                                {"std_error", f.std_error}});
      }
    out["pairwise_fidelity"] = std::move(pairwise);
  }
  emit(cfg, out.dump(2) + "\n");
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const Channel left_src = config_channel(cfg);
  const Channel right_src =
      cfg.channel2_spec ? config_channel(cfg, true) : left_src;

  auto realize = [&](const Channel& src, const std::string& method) {
    if (method == "given") return src;
    return Channel::from_chi(reconstruct(src, cfg, method).entries, src.dim());
  };
  const Channel left = realize(left_src, cfg.method == "all" ? "given" : cfg.method);
  const Channel right = realize(right_src, cfg.method2);

  const ChannelFidelityEstimate f = channel_fidelity(
      left, right, cfg.n_samples, derive_seed(cfg.seed, {0xc0de}));
  json out{{"value", f.value},
           {"std_error", f.std_error},
           {"n_samples", f.n_samples},
           {"config", cfg.echo()}};
  emit(cfg, out.dump(2) + "\n");
  return 0;
}

int cmd_convergence(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  if (cfg.elements.size() != 1)
    throw std::invalid_argument(
        "config 'elements': convergence needs exactly one (a, b) pair");
  const Channel channel = config_channel(cfg);
  const TwoDesign design = mub_design(cfg.design_qubits);
  if (design.dim != channel.dim())
    throw std::invalid_argument(
        "config 'design.n_qubits': dimension does not match the channel");
  const int d = channel.dim();
  const OperatorBasis& basis = cached_pauli_basis(d);
  const auto [a, b] = resolve_element(basis, cfg.elements[0].first,
                                      cfg.elements[0].second);
  const int K = design.cardinality();
  if (cfg.enumerate_mode == "all-subsets" && K > 8)
    throw std::invalid_argument(
        "config 'enumerate': all-subsets requires K <= 8");

  // Exact per-state fidelity contributions of the selected element.
  const ModifiedChannel mod = modified_channel(channel, a, b);
  std::vector<double> values;
  values.reserve(K);
  for (const PureState& psi : design.states) {
    const Mat out = mod.apply(psi.projector());
    const cx z = (psi.amplitudes().adjoint() * out * psi.amplitudes())(0);
    values.push_back(cfg.component == "im" ? z.imag() : z.real());
  }
  const cx chi_true = channel.chi_matrix()(a, b);
  const cx f_true = (double(d) * chi_true + (a == b ? 1.0 : 0.0)) / double(d + 1);
  const double true_mean =
      cfg.component == "im" ? f_true.imag() : f_true.real();

  ScaleRule scale = ScaleRule::worst_case();
  if (cfg.scale_rule == "population-std") scale = ScaleRule::population_std();
  else if (cfg.scale_rule == "explicit")
    scale = ScaleRule::explicit_scale(cfg.explicit_scale);
  else if (cfg.scale_rule != "worst-case-deviation" &&
           cfg.scale_rule != "worst-case")
    throw std::invalid_argument("config 'scale_rule': unknown value");

  const EnumerateRule enumerate =
      cfg.enumerate_mode == "all-subsets"
          ? EnumerateRule::all_subsets()
          : EnumerateRule::prefixes(cfg.n_permutations,
                                    derive_seed(cfg.seed, {0x5e7}));

  const ConvergenceReport report =
      convergence_report(values, true_mean, scale, enumerate, d);
  std::ostringstream csv;
  write_convergence_csv(csv, basis.label(a), basis.label(b), report);
  emit(cfg, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective and efficient quantum process tomography simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON config path")
        ->required();
    sub->add_option("--seed", args.seed, "Seed override");
    sub->add_option("--output", args.output, "Output path override");
    sub->add_option("--format", args.format, "json|csv override");
  };
  CLI::App* tomograph =
      app.add_subcommand("tomograph", "Reconstruct a chi matrix");
  CLI::App* compare =
      app.add_subcommand("compare", "Channel fidelity between two channels");
  CLI::App* convergence =
      app.add_subcommand("convergence", "Subset convergence analysis (CSV)");
  add_common(tomograph);
  add_common(compare);
  add_common(convergence);

  CLI11_PARSE(app, argc, argv);

  try {
    if (tomograph->parsed()) return cmd_tomograph(args);
    if (compare->parsed()) return cmd_compare(args);
    if (convergence->parsed()) return cmd_convergence(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
