#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "seqpt/io.hpp"

using namespace seqpt;

namespace {

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("channel JSON round trips per representation") {
  const Channel qwp = builtin_channel("qwp", {15.0});
  for (Rep target : {Rep::unitary, Rep::chi, Rep::superop, Rep::kraus}) {
    const Channel converted = qwp.to(target);
    const Channel back = channel_from_json(channel_to_json(converted));
    CHECK(back.rep() == target);
    CHECK((back.chi_matrix() - qwp.chi_matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("builtin channel JSON form") {
  const json j = {{"type", "builtin"}, {"name", "depolarizing"}, {"params", {0.4}}};
  const Channel ch = channel_from_json(j);
  CHECK(std::abs(ch.chi_matrix()(0, 0) - cx(0.7)) < 1e-12);
  // "builtin" is the default type when a name is present.
  const Channel id = channel_from_json({{"type", "builtin"}, {"name", "identity"}});
  CHECK(std::abs(id.chi_matrix()(0, 0) - cx(1.0)) < 1e-12);
}

TEST_CASE("channel JSON diagnostics name the offending field") {
  CHECK(error_of([] {
          channel_from_json(json::array());
        }).find("channel") != std::string::npos);
  CHECK(error_of([] {
          channel_from_json({{"type", "builtin"}});
        }).find("'name'") != std::string::npos);
  CHECK(error_of([] {
          channel_from_json({{"type", "chi"}});
        }).find("'data'") != std::string::npos);
  CHECK(error_of([] {
          channel_from_json({{"type", "wat"}, {"data", json::array()}});
        }).find("'type'") != std::string::npos);
  // Ragged or malformed matrices.
  CHECK(error_of([] {
          channel_from_json(
              {{"type", "unitary"},
               {"data", json::parse("[[[1,0],[0,0]],[[0,0]]]")}});
        }).find("ragged") != std::string::npos);
  CHECK(error_of([] {
          channel_from_json(
              {{"type", "unitary"}, {"data", json::parse("[[1,0],[0,1]]")}});
        }).find("[re, im]") != std::string::npos);
}

TEST_CASE("noise JSON round trip and validation") {
  NoiseModel n;
  n.visibility = 0.92;
  n.phase_offset = 0.1;
  n.phase_jitter_std = 0.2;
  const NoiseModel back = noise_from_json(noise_to_json(n));
  CHECK(back.visibility == n.visibility);
  CHECK(back.phase_offset == n.phase_offset);
  CHECK(back.phase_jitter_std == n.phase_jitter_std);
  CHECK_THROWS_AS(noise_from_json({{"visibility", 1.4}}), std::invalid_argument);
}

TEST_CASE("design JSON lists amplitude pairs") {
  const json j = design_to_json(mub_design(1));
  CHECK(j.at("dim") == 2);
  REQUIRE(j.at("states").size() == 6);
  CHECK(j.at("states").at(0).at(0).at(0).get<double>() == 1.0);
  CHECK(j.at("states").at(0).at(0).at(1).get<double>() == 0.0);
}

TEST_CASE("ExperimentConfig defaults and parsing") {
  const json j = {{"channel", {{"type", "builtin"}, {"name", "identity"}}}};
  const ExperimentConfig cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.method == "seqpt");
  CHECK(cfg.shots.is_exact);
  CHECK_FALSE(cfg.noise.has_value());
  CHECK(cfg.design_qubits == 1);
  CHECK(cfg.plan_m == -1);
  CHECK(cfg.seed == 0);
  CHECK(cfg.format == "json");
  CHECK(cfg.elements.empty());

  const json full = {
      {"channel", {{"type", "builtin"}, {"name", "qwp"}, {"params", {0.0}}}},
      {"method", "seqpt-ancilla-free"},
      {"elements", json::array({json::array({"I", "Z"}),
                                json::array({"z", "z"})})},
      {"shots", 5000},
      {"noise", {{"visibility", 0.92}}},
      {"design", {{"n_qubits", 1}}},
      {"plan", {{"mode", "without-replacement"}, {"M", 3}}},
      {"seed", 7},
      {"format", "json"}};
  const ExperimentConfig c = ExperimentConfig::from_json(full);
  CHECK(c.method == "seqpt-ancilla-free");
  REQUIRE(c.elements.size() == 2);
  CHECK(c.elements[0] == std::make_pair(std::string("I"), std::string("Z")));
  CHECK_FALSE(c.shots.is_exact);
  CHECK(c.shots.count == 5000);
  CHECK(c.noise->visibility == 0.92);
  CHECK(c.plan_m == 3);
  CHECK(c.seed == 7);
}

TEST_CASE("ExperimentConfig diagnostics name the offending field") {
  CHECK(error_of([] {
          ExperimentConfig::from_json(json::object());
        }).find("'channel'") != std::string::npos);
  const json base = {{"channel", {{"type", "builtin"}, {"name", "identity"}}}};
  auto with = [&](const char* key, json v) {
    json j = base;
    j[key] = std::move(v);
    return j;
  };
  CHECK(error_of([&] {
          ExperimentConfig::from_json(with("method", "magic"));
        }).find("'method'") != std::string::npos);
  CHECK(error_of([&] {
          ExperimentConfig::from_json(with("shots", "sometimes"));
        }).find("'shots'") != std::string::npos);
  CHECK(error_of([&] {
          ExperimentConfig::from_json(with("shots", 0));
        }).find("'shots'") != std::string::npos);
  CHECK(error_of([&] {
          ExperimentConfig::from_json(with("format", "xml"));
        }).find("'format'") != std::string::npos);
  CHECK(error_of([&] {
          ExperimentConfig::from_json(with("plan", {{"mode", "maybe"}}));
        }).find("'plan.mode'") != std::string::npos);
  CHECK(error_of([&] {
          ExperimentConfig::from_json(with("component", "abs"));
        }).find("'component'") != std::string::npos);
  CHECK(error_of([&] {
          ExperimentConfig::from_json(with("elements", json::parse("[[\"I\"]]")));
        }).find("'elements'") != std::string::npos);
}

TEST_CASE("config echo round trips") {
  const json j = {
      {"channel", {{"type", "builtin"}, {"name", "qwp"}, {"params", {0.0}}}},
      {"method", "all"},
      {"shots", "exact"},
      {"seed", 11},
      {"n_samples", 500}};
  const ExperimentConfig cfg = ExperimentConfig::from_json(j);
  const ExperimentConfig again = ExperimentConfig::from_json(cfg.echo());
  CHECK(again.method == cfg.method);
  CHECK(again.shots.is_exact == cfg.shots.is_exact);
  CHECK(again.seed == cfg.seed);
  CHECK(again.n_samples == cfg.n_samples);
  CHECK(again.echo() == cfg.echo());
}

TEST_CASE("result bundles re-ingest as equivalent chi channels") {
  const json j = {
      {"channel", {{"type", "builtin"}, {"name", "qwp"}, {"params", {0.0}}}},
      {"seed", 3},
      {"n_samples", 200}};
  const ExperimentConfig cfg = ExperimentConfig::from_json(j);
  const Channel truth = config_channel(cfg);
  const ChiEstimate est = seqpt_full(truth, mub_design(1));
  const json bundle = result_bundle(est, truth, cfg, "seqpt");

  CHECK(bundle.at("chi_re").size() == 16);
  CHECK(bundle.at("chi_im").size() == 16);
  CHECK(bundle.at("std_errors").size() == 16);
  CHECK(bundle.at("validation").at("hermitian").get<bool>());
  CHECK(bundle.at("resource_counts").at("seqpt_element") == 6);
  CHECK(bundle.at("resource_counts").at("standard_full") == 16);
  CHECK(bundle.at("reconstruction_fidelity").at("value").get<double>() > 0.999);

  const Channel back = channel_from_bundle(bundle);
  const PureState probe = haar_random_state(2, 55);
  const Mat diff =
      back.apply(Mat(probe.projector())) - truth.apply(Mat(probe.projector()));
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-10);

  json truncated = bundle;
  truncated["chi_re"] = json::array({1.0});
  CHECK_THROWS_AS(channel_from_bundle(truncated), std::invalid_argument);
}

TEST_CASE("config_channel resolves the second channel slot") {
  json j = {{"channel", {{"type", "builtin"}, {"name", "identity"}}}};
  const ExperimentConfig solo = ExperimentConfig::from_json(j);
  CHECK_THROWS_AS(config_channel(solo, true), std::invalid_argument);
  j["channel2"] = {{"type", "builtin"}, {"name", "qwp"}, {"params", {0.0}}};
  const ExperimentConfig duo = ExperimentConfig::from_json(j);
  CHECK(std::abs(config_channel(duo, true).chi_matrix()(0, 0) - cx(0.5)) <
        1e-12);
}

TEST_CASE("convergence CSV layout") {
  const ConvergenceReport r = convergence_report(
      {1, 1, 0, 0, 0, 0}, 1.0 / 3.0, ScaleRule::worst_case(),
      EnumerateRule::all_subsets(), 2);
  std::ostringstream out;
  write_convergence_csv(out, "Z", "Z", r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "element_a,element_b,M,subset_id,error,bound");
  std::size_t rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("Z,Z,", 0) == 0);
    last = line;
  }
  CHECK(rows == 63);
  // The single M = 6 row has error 0 and bound 0.
  CHECK(last == "Z,Z,6,0,0,0");
}
