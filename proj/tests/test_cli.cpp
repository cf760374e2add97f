#include <catch2/catch_amalgamated.hpp>

#include <modkk/cli.hpp>

#include <nlohmann/json.hpp>

#include <limits>
#include <string>
#include <vector>

using namespace modkk;
using nlohmann::json;

namespace {

std::size_t data_rows(const std::string& csv) {
  std::size_t rows = 0;
  bool header = true;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string::npos) end = csv.size();
    const std::string line = csv.substr(start, end - start);
    if (!line.empty() && line[0] != '#' && !header) ++rows;
    header = false;
    start = end + 1;
  }
  return rows;
}

}  // namespace

TEST_CASE("config parser keeps every recognized field") {
  const std::string text = R"({
    "command": "fractal",
    "seed": 42,
    "tol": 1e-6,
    "tolerances": {"modadj": 1e-11},
    "output_dir": "out",
    "only": "modadj",
    "intervals": [[0.0, 1.0], [1.5, 2.5]],
    "grid_points": 64,
    "dirac_variant": "fourier",
    "unit_profile": true,
    "trivial": true,
    "module_rank": 5,
    "algebra_dim": 3,
    "generators": 7,
    "fibre_dim": 6,
    "sweep_points": 17
  })";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.command == "fractal");
  CHECK(cfg.seed == 42);
  REQUIRE(cfg.global_tol.has_value());
  CHECK(*cfg.global_tol == 1e-6);
  CHECK(cfg.tolerances.at("modadj") == 1e-11);
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.only == "modadj");
  REQUIRE(cfg.intervals.size() == 2);
  CHECK(cfg.intervals[1].a == 1.5);
  CHECK(cfg.intervals[1].b == 2.5);
  CHECK(cfg.grid_points == 64);
  CHECK(cfg.dirac_variant == "fourier");
  CHECK(cfg.unit_profile);
  CHECK(cfg.trivial);
  CHECK(cfg.module_rank == 5);
  CHECK(cfg.algebra_dim == 3);
  CHECK(cfg.generators == 7);
  CHECK(cfg.fibre_dim == 6);
  CHECK(cfg.sweep_points == 17);

  // named tolerance wins over the global one, fallback fills the rest
  CHECK(cfg.tol("modadj", 1e-9) == 1e-11);
  CHECK(cfg.tol("other", 1e-9) == 1e-6);
  const RunConfig bare = parse_config(R"({"command": "verify"})");
  CHECK(bare.tol("other", 1e-9) == 1e-9);
}

TEST_CASE("config parser rejects malformed input") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config("{}"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"command": "dance"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"command": "verify", "surprise": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"command": "verify", "seed": "seven"})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"command": "fractal", "dirac_variant": "spectral"})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"command": "fractal", "intervals": [[0.0]]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"command": "fractal", "tolerances": [1.0]})"),
      ConfigError);

  RunConfig cfg;
  cfg.command = "bogus";
  CHECK_THROWS_AS(run_command(cfg), ConfigError);
}

TEST_CASE("verify command reports every identity and is reproducible") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.seed = 7;

  const CommandResult first = cmd_verify(cfg);
  CHECK(first.exit_code == 0);
  CHECK(first.files.empty());

  const json rep = json::parse(first.report);
  CHECK(rep.at("command") == "verify");
  CHECK(rep.at("seed") == 7);
  CHECK(rep.at("all_pass") == true);
  const auto& entries = rep.at("entries");
  REQUIRE(entries.size() == 16);
  const std::vector<std::string> names = {
      "modadj",         "modadjinv", "cruxide",
      "cruxideI",       "cruxideII", "firreside",
      "prealgideI",     "intrig",    "conkay",
      "betide",         "sqrt_integral", "dual_assembly",
      "gram_reconstruction", "twicom", "gram_compression",
      "omega_isometry"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    CHECK(entries[i].at("name") == names[i]);
    CHECK(entries[i].at("pass") == true);
    CHECK(entries[i].at("residual").get<double>() <=
          entries[i].at("tolerance").get<double>());
  }

  const CommandResult second = cmd_verify(cfg);
  CHECK(second.report == first.report);  // byte-identical reruns
}

TEST_CASE("verify command narrows to one entry and honours tolerances") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.seed = 3;
  cfg.only = "cruxide";
  const CommandResult res = cmd_verify(cfg);
  CHECK(res.exit_code == 0);
  const json rep = json::parse(res.report);
  REQUIRE(rep.at("entries").size() == 1);
  CHECK(rep.at("entries")[0].at("name") == "cruxide");

  cfg.only = "no_such_identity";
  CHECK_THROWS_AS(cmd_verify(cfg), ConfigError);

  // an absurd tolerance flips the verdict without touching the residual
  RunConfig strict;
  strict.command = "verify";
  strict.seed = 3;
  strict.only = "modadj";
  strict.global_tol = 1e-30;
  const CommandResult failed = cmd_verify(strict);
  CHECK(failed.exit_code == 1);
  const json frep = json::parse(failed.report);
  CHECK(frep.at("all_pass") == false);
  CHECK(frep.at("entries")[0].at("pass") == false);
  CHECK(frep.at("entries")[0].at("residual").get<double>() > 0.0);
}

TEST_CASE("sweep command writes one csv per estimate with a slope footer") {
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.seed = 11;
  cfg.sweep_points = 9;
  cfg.only = "esterr";

  const CommandResult res = cmd_sweep(cfg);
  CHECK(res.exit_code == 0);
  REQUIRE(res.files.size() == 1);
  CHECK(res.files[0].first == "esterr.csv");
  const std::string& csv = res.files[0].second;
  CHECK(csv.rfind("lambda,norm,bound,slope_so_far\n", 0) == 0);
  CHECK(data_rows(csv) == 9);
  CHECK(csv.find("# fitted_slope = ") != std::string::npos);
  CHECK(csv.find("# alpha = ") != std::string::npos);
  CHECK(csv.find("# seed = 11") != std::string::npos);

  const json rep = json::parse(res.report);
  REQUIRE(rep.at("estimates").size() == 1);
  CHECK(rep.at("estimates")[0].at("name") == "esterr");
  CHECK(rep.at("estimates")[0].at("pass") == true);

  cfg.only = "unknown_estimate";
  CHECK_THROWS_AS(cmd_sweep(cfg), ConfigError);
  cfg.only.clear();
  cfg.sweep_points = 1;
  CHECK_THROWS_AS(cmd_sweep(cfg), ConfigError);
}

TEST_CASE("product command validates the trivial instance exactly") {
  RunConfig cfg;
  cfg.command = "product";
  cfg.seed = 3;
  cfg.trivial = true;

  const CommandResult res = cmd_product(cfg);
  const json rep = json::parse(res.report);
  CAPTURE(res.report);
  CHECK(res.exit_code == 0);
  CHECK(rep.at("all_pass") == true);
  CHECK(rep.at("trivial_product_residual").get<double>() <= 1e-10);
  CHECK(rep.at("connection").at("all_zero") == true);
  CHECK(rep.at("connection").at("head").get<double>() == 0.0);
}

TEST_CASE("product command runs the random pipeline and flags missing rank") {
  RunConfig cfg;
  cfg.command = "product";
  cfg.seed = 1;
  cfg.module_rank = 2;
  cfg.algebra_dim = 2;
  cfg.generators = 3;
  cfg.fibre_dim = 3;
  const CommandResult res = run_command(cfg);
  const json rep = json::parse(res.report);
  CAPTURE(res.report);
  CHECK(res.exit_code == 0);
  CHECK(rep.at("all_pass") == true);
  CHECK(rep.at("dual_assembly").get<double>() <= 1e-10);
  CHECK(rep.at("connection").at("pass") == true);
  REQUIRE_FALSE(rep.at("product_conditions").empty());
  REQUIRE_FALSE(rep.at("bounded_transform").empty());

  RunConfig deficient;
  deficient.command = "product";
  deficient.seed = 1;
  deficient.module_rank = 3;
  deficient.algebra_dim = 2;
  deficient.generators = 1;
  deficient.fibre_dim = 4;
  const CommandResult bad = cmd_product(deficient);
  CHECK(bad.exit_code == 1);
  const json brep = json::parse(bad.report);
  CHECK(brep.at("error") == "GeneratorDeficient");
  CHECK(brep.at("all_pass") == false);
}

TEST_CASE("fractal command emits the spectrum and the condition report") {
  RunConfig cfg;
  cfg.command = "fractal";
  cfg.grid_points = 64;
  const CommandResult res = cmd_fractal(cfg);
  const json rep = json::parse(res.report);
  CAPTURE(res.report);
  CHECK(res.exit_code == 0);
  CHECK(rep.at("all_pass") == true);
  CHECK(rep.at("grid_points") == 64);
  REQUIRE(res.files.size() == 1);
  CHECK(res.files[0].first == "spectrum.csv");
  CHECK(data_rows(res.files[0].second) == 64);
  CHECK(res.files[0].second.rfind("index,eigenvalue\n", 0) == 0);
  CHECK(res.files[0].second.find("# assembly_comparison = ") !=
        std::string::npos);

  bool saw_stability = false;
  for (const auto& cond : rep.at("conditions"))
    if (cond.at("name") == "commutator_stability") saw_stability = true;
  CHECK(saw_stability);
}

TEST_CASE("fractal command handles the fourier variant and the unit profile") {
  RunConfig cfg;
  cfg.command = "fractal";
  cfg.grid_points = 64;
  cfg.dirac_variant = "fourier";
  cfg.intervals = {Interval{0.0, 1.0}, Interval{1.4, 2.4}};
  const CommandResult res = run_command(cfg);
  const json rep = json::parse(res.report);
  CAPTURE(res.report);
  CHECK(rep.at("symmetry_defect").get<double>() < 1e-8);
  // the wrapped spectral symbol couples the extreme frequencies, so the
  // straight commutators grow with the grid: the stability entry must flag
  // it, and nothing else may fail
  CHECK(res.exit_code == 1);
  CHECK(rep.at("all_pass") == false);
  for (const auto& cond : rep.at("conditions")) {
    if (cond.at("name") == "commutator_stability") {
      CHECK(cond.at("pass") == false);
      const auto& det = cond.at("details");
      REQUIRE(det.size() == 3);
      CHECK(det[0].get<double>() < det[1].get<double>());
      CHECK(det[1].get<double>() < det[2].get<double>());
    } else {
      CHECK(cond.at("pass") == true);
    }
  }

  RunConfig unit;
  unit.command = "fractal";
  unit.grid_points = 32;
  unit.unit_profile = true;
  const CommandResult ures = cmd_fractal(unit);
  const json urep = json::parse(ures.report);
  CAPTURE(ures.report);
  CHECK(ures.exit_code == 0);
  CHECK(urep.at("all_pass") == true);
  CHECK(urep.at("assembly_comparison").get<double>() == 0.0);
  REQUIRE(ures.files.size() == 1);
  CHECK(data_rows(ures.files[0].second) == 32);
}
