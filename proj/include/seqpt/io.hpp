// JSON/CSV schemas: channel payloads, experiment configs, result bundles and
// convergence tables.
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seqpt/channels.hpp"
#include "seqpt/designs.hpp"
#include "seqpt/experiment.hpp"
#include "seqpt/tomography.hpp"

namespace seqpt {

using json = nlohmann::json;

// Channel schema: {"type": "unitary"|"chi"|"kraus"|"superoperator"|"builtin",
// "dim": D, "data": nested row-major arrays of [re, im] pairs (an array of
// matrices for kraus), "name": string, "params": [real]}.
json channel_to_json(const Channel& channel);
Channel channel_from_json(const json& j);

json noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const json& j);

json design_to_json(const TwoDesign& design);

struct ExperimentConfig {
  json channel_spec;
  std::optional<json> channel2_spec;
  std::string method = "seqpt";   // seqpt | seqpt-ancilla-free | standard | all
  std::string method2 = "given";  // compare: reconstruction for the right side
  // Pauli-string label pairs; empty means every element.
  std::vector<std::pair<std::string, std::string>> elements;
  Shots shots = Shots::exact();
  std::optional<NoiseModel> noise;
  int design_qubits = 1;
  std::string plan_mode = "without-replacement";
  int plan_m = -1;  // -1: the full design
  std::uint64_t seed = 0;
  std::string output_path;  // empty: stdout
  std::string format = "json";
  long long n_samples = 20000;      // fidelity Monte Carlo samples
  std::string component = "re";     // convergence: re | im
  std::string scale_rule = "worst-case-deviation";
  double explicit_scale = 0.0;
  std::string enumerate_mode = "all-subsets";
  int n_permutations = 200;

  static ExperimentConfig from_json(const json& j);
  json echo() const;
};

Channel config_channel(const ExperimentConfig& config, bool second = false);

// One reconstruction result: flattened chi, validation, errors, metadata.
json result_bundle(const ChiEstimate& estimate, const Channel& truth,
                   const ExperimentConfig& config, const std::string& method);

// Re-ingest an emitted bundle as a chi channel.
Channel channel_from_bundle(const json& bundle);

void write_convergence_csv(std::ostream& out, const std::string& label_a,
                           const std::string& label_b,
                           const ConvergenceReport& report);

}  // namespace seqpt
