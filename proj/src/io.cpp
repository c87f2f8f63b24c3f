#include "seqpt/io.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace seqpt {

namespace {

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string("channel '") + field +
                                "': expected a nested array");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols)
      throw std::invalid_argument(std::string("channel '") + field +
                                  "': ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = j.at(r).at(c);
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument(std::string("channel '") + field +
                                    "': entries must be [re, im] pairs");
      m(r, c) = cx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

json channel_to_json(const Channel& channel) {
  json j;
  j["dim"] = channel.dim();
  switch (channel.rep()) {
    case Rep::unitary:
      j["type"] = "unitary";
      j["data"] = matrix_to_json(channel.matrix());
      break;
    case Rep::chi:
      j["type"] = "chi";
      j["data"] = matrix_to_json(channel.matrix());
      break;
    case Rep::superop:
      j["type"] = "superoperator";
      j["data"] = matrix_to_json(channel.matrix());
      break;
    case Rep::kraus: {
      j["type"] = "kraus";
      json ops = json::array();
      for (const Mat& k : channel.kraus_operators())
        ops.push_back(matrix_to_json(k));
      j["data"] = std::move(ops);
      break;
    }
  }
  return j;
}

Channel channel_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("channel: expected object");
  const std::string type = j.value("type", "builtin");
  if (type == "builtin") {
    if (!j.contains("name"))
      throw std::invalid_argument("channel 'name': missing for builtin");
    std::vector<double> params;
    if (j.contains("params"))
      params = j.at("params").get<std::vector<double>>();
    return builtin_channel(j.at("name").get<std::string>(), params);
  }
  if (!j.contains("data"))
    throw std::invalid_argument("channel 'data': missing");
  if (type == "unitary")
    return Channel::from_unitary(matrix_from_json(j.at("data"), "data"));
  if (type == "chi") {
    const Mat chi = matrix_from_json(j.at("data"), "data");
    const int d2 = static_cast<int>(chi.rows());
    int d = 1;
    while (d * d < d2) ++d;
    if (d * d != d2)
      throw std::invalid_argument("channel 'data': chi must be D^2 x D^2");
    return Channel::from_chi(chi, d);
  }
  if (type == "superoperator" || type == "superop") {
    const Mat s = matrix_from_json(j.at("data"), "data");
    const int d2 = static_cast<int>(s.rows());
    int d = 1;
    while (d * d < d2) ++d;
    return Channel::from_superoperator(s, d);
  }
  if (type == "kraus") {
    std::vector<Mat> ops;
    for (const json& op : j.at("data"))
      ops.push_back(matrix_from_json(op, "data"));
    return Channel::from_kraus(std::move(ops));
  }
  throw std::invalid_argument("channel 'type': unknown value '" + type + "'");
}

json noise_to_json(const NoiseModel& noise) {
  return json{{"visibility", noise.visibility},
              {"phase_offset", noise.phase_offset},
              {"phase_jitter_std", noise.phase_jitter_std}};
}

NoiseModel noise_from_json(const json& j) {
  NoiseModel noise;
  noise.visibility = j.value("visibility", 1.0);
  noise.phase_offset = j.value("phase_offset", 0.0);
  noise.phase_jitter_std = j.value("phase_jitter_std", 0.0);
  noise.check();
  return noise;
}

json design_to_json(const TwoDesign& design) {
  json states = json::array();
  for (const PureState& s : design.states) {
    json amps = json::array();
    for (Eigen::Index k = 0; k < s.amplitudes().size(); ++k)
      amps.push_back(json::array(
          {s.amplitudes()(k).real(), s.amplitudes()(k).imag()}));
    states.push_back(std::move(amps));
  }
  return json{{"dim", design.dim}, {"states", std::move(states)}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("channel"))
    throw std::invalid_argument("config 'channel': missing");
  cfg.channel_spec = j.at("channel");
  if (j.contains("channel2")) cfg.channel2_spec = j.at("channel2");
  cfg.method = j.value("method", std::string("seqpt"));
  if (cfg.method != "seqpt" && cfg.method != "seqpt-ancilla-free" &&
      cfg.method != "standard" && cfg.method != "all")
    throw std::invalid_argument("config 'method': unknown value '" +
                                cfg.method + "'");
  cfg.method2 = j.value("method2", std::string("given"));

  if (j.contains("elements") && !j.at("elements").is_string()) {
    for (const json& e : j.at("elements")) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument(
            "config 'elements': expected [a_label, b_label] pairs");
      cfg.elements.emplace_back(e.at(0).get<std::string>(),
                                e.at(1).get<std::string>());
    }
  }

  if (j.contains("shots")) {
    const json& s = j.at("shots");
    if (s.is_string()) {
      if (s.get<std::string>() != "exact")
        throw std::invalid_argument("config 'shots': integer or \"exact\"");
      cfg.shots = Shots::exact();
    } else {
      const long long n = s.get<long long>();
      if (n < 1) throw std::invalid_argument("config 'shots': must be >= 1");
      cfg.shots = Shots::of(n);
    }
  }
  if (j.contains("noise") && !j.at("noise").is_null())
    cfg.noise = noise_from_json(j.at("noise"));

  if (j.contains("design")) {
    const json& d = j.at("design");
    cfg.design_qubits = d.is_object() ? d.value("n_qubits", 1) : d.get<int>();
  }
  if (j.contains("plan")) {
    const json& p = j.at("plan");
    cfg.plan_mode = p.value("mode", std::string("without-replacement"));
    if (cfg.plan_mode != "without-replacement" &&
        cfg.plan_mode != "with-replacement")
      throw std::invalid_argument("config 'plan.mode': unknown value");
    cfg.plan_m = p.value("M", -1);
  }
  cfg.seed = j.value("seed", std::uint64_t(0));
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.is_string()) {
      cfg.output_path = o.get<std::string>();
    } else {
      cfg.output_path = o.value("path", std::string());
      cfg.format = o.value("format", std::string("json"));
    }
  }
  if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
  if (cfg.format != "json" && cfg.format != "csv")
    throw std::invalid_argument("config 'format': must be json or csv");
  cfg.n_samples = j.value("n_samples", cfg.n_samples);
  cfg.component = j.value("component", cfg.component);
  if (cfg.component != "re" && cfg.component != "im")
    throw std::invalid_argument("config 'component': must be re or im");
  cfg.scale_rule = j.value("scale_rule", cfg.scale_rule);
  if (j.contains("scale_rule") && j.at("scale_rule").is_number()) {
    cfg.scale_rule = "explicit";
    cfg.explicit_scale = j.at("scale_rule").get<double>();
  }
  cfg.enumerate_mode = j.value("enumerate", cfg.enumerate_mode);
  cfg.n_permutations = j.value("n_permutations", cfg.n_permutations);
  return cfg;
}

json ExperimentConfig::echo() const {
  json j;
  j["channel"] = channel_spec;
  if (channel2_spec) j["channel2"] = *channel2_spec;
  j["method"] = method;
  if (!elements.empty()) {
    json e = json::array();
    for (const auto& [a, b] : elements) e.push_back(json::array({a, b}));
    j["elements"] = std::move(e);
  } else {
    j["elements"] = "all";
  }
  j["shots"] = shots.is_exact ? json("exact") : json(shots.count);
  j["noise"] = noise ? noise_to_json(*noise) : json(nullptr);
  j["design"] = json{{"type", "mub"}, {"n_qubits", design_qubits}};
  j["plan"] = json{{"mode", plan_mode}, {"M", plan_m}};
  j["seed"] = seed;
  j["format"] = format;
  j["n_samples"] = n_samples;
  return j;
}

Channel config_channel(const ExperimentConfig& config, bool second) {
  if (!second) return channel_from_json(config.channel_spec);
  if (!config.channel2_spec)
    throw std::invalid_argument("config 'channel2': missing");
  return channel_from_json(*config.channel2_spec);
}

json result_bundle(const ChiEstimate& estimate, const Channel& truth,
                   const ExperimentConfig& config, const std::string& method) {
  const int d = estimate.dim;
  const int d2 = d * d;
  json re = json::array(), im = json::array(), err = json::array();
  for (int a = 0; a < d2; ++a)
    for (int b = 0; b < d2; ++b) {
      re.push_back(estimate.entries(a, b).real());
      im.push_back(estimate.entries(a, b).imag());
      err.push_back(estimate.std_errors(a, b));
    }
  const ValidationReport v = estimate.validate();

  json bundle;
  bundle["method"] = method;
  bundle["dim"] = d;
  bundle["chi_re"] = std::move(re);
  bundle["chi_im"] = std::move(im);
  bundle["std_errors"] = std::move(err);
  bundle["validation"] = json{{"hermitian", v.hermitian},
                              {"hermiticity_residual", v.hermiticity_residual},
                              {"min_eigenvalue", v.min_eigenvalue},
                              {"tp_residual", v.tp_residual}};
  bundle["resource_counts"] =
      json{{"seqpt_element", resource_count(ResourceMethod::seqpt_element, d)},
           {"standard_full", resource_count(ResourceMethod::standard_full, d)}};
  const ChannelFidelityEstimate f =
      channel_fidelity(Channel::from_chi(estimate.entries, d), truth,
                       config.n_samples, derive_seed(config.seed, {0xf1d}));
  bundle["reconstruction_fidelity"] = json{{"value", f.value},
                                           {"std_error", f.std_error},
                                           {"n_samples", f.n_samples}};
  bundle["config"] = config.echo();
  return bundle;
}

Channel channel_from_bundle(const json& bundle) {
  const int d = bundle.at("dim").get<int>();
  const int d2 = d * d;
  const auto& re = bundle.at("chi_re");
  const auto& im = bundle.at("chi_im");
  if (static_cast<int>(re.size()) != d2 * d2 ||
      static_cast<int>(im.size()) != d2 * d2)
    throw std::invalid_argument("bundle: chi arrays must have length D^4");
  Mat chi(d2, d2);
  for (int a = 0; a < d2; ++a)
    for (int b = 0; b < d2; ++b)
      chi(a, b) = cx(re.at(a * d2 + b).get<double>(),
                     im.at(a * d2 + b).get<double>());
  return Channel::from_chi(chi, d);
}

void write_convergence_csv(std::ostream& out, const std::string& label_a,
                           const std::string& label_b,
                           const ConvergenceReport& report) {
  out << "element_a,element_b,M,subset_id,error,bound\n";
  out << std::setprecision(17);
  const int K = static_cast<int>(report.per_state_values.size());
  for (int M = 1; M <= K; ++M) {
    const auto& errs = report.subset_errors[M - 1];
    for (std::size_t s = 0; s < errs.size(); ++s)
      out << label_a << ',' << label_b << ',' << M << ',' << s << ','
          << errs[s] << ',' << report.bound_curve[M - 1] << '\n';
  }
}

}  // namespace seqpt
