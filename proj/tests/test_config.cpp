#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "omsim/commands.hpp"
#include "omsim/stability.hpp"

using namespace omsim;
namespace fs = std::filesystem;

namespace {

constexpr const char* kOptimum = R"({"g_minus":2.5,"g_plus":2.295,"delta":1,"kappa":0.0005,"gamma2":0.0005})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(OMSIM_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "omsim_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse_config") {
  SUBCASE("optimum parameters") {
    const RunConfig cfg = parse_config(kOptimum);
    CHECK(cfg.mode == DriftMode::Rwa);
    CHECK(cfg.couplings.G_minus == 2.5);
    CHECK(cfg.couplings.G_plus == 2.295);
    CHECK(cfg.params.gamma1 == 1.0);
    CHECK(cfg.params.nbar_d == 0.0);
    CHECK(cfg.params.kappa == 0.0005);
  }
  SUBCASE("g_minus is required") {
    CHECK_THROWS_WITH_AS(parse_config("{}"), doctest::Contains("g_minus"), ValidationError);
  }
  SUBCASE("G+ < G- enforced") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"g_plus":3.0,"g_minus":2.5,"kappa":0.1})"), doctest::Contains("G+ < G-"),
                         ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"ratio":1.0,"g_minus":2.5})"), ValidationError);
  }
  SUBCASE("ratio key") {
    const RunConfig cfg = parse_config(R"({"g_minus":2.0,"ratio":0.5})");
    CHECK(cfg.couplings.G_plus == 1.0);
    CHECK_THROWS_AS(parse_config(R"({"g_minus":2.0,"ratio":0.5,"g_plus":1.0})"), ValidationError);
  }
  SUBCASE("unknown keys and bad values are named") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"g_minus":2.5,"gama2":0.1})"), doctest::Contains("gama2"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"g_minus":2.5,"kappa":-1})"), doctest::Contains("kappa"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"g_minus":2.5,"kappa":"x"})"), doctest::Contains("kappa"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"g_minus":2.5,"mode":"exact"})"), doctest::Contains("mode"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"g_minus":2.5,"gamma1":2})"), doctest::Contains("gamma1"), ValidationError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ValidationError);
  }
  SUBCASE("syntax errors report line and column") {
    try {
      parse_config("{\n  \"g_minus\": 2.5,\n  \"kappa\": ,\n}");
      FAIL("expected a parse error");
    } catch (const ConfigParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 12);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("drive entry path") {
    // a+ = a- = real when epsilon = a * denominator / i
    const double kappa = 0.5, delta = 1.0, w1 = 10.0, g1 = 1e-3, ap = 1000.0, am = 2000.0;
    const cplx ep = ap * cplx(-kappa / 2, -delta + w1) / cplx(0, 1);
    const cplx em = am * cplx(-kappa / 2, -delta - w1) / cplx(0, 1);
    nlohmann::json j = {{"kappa", kappa}, {"delta", delta}, {"omega1", w1}, {"g1", g1},
                        {"g2a", g1 * ap}, {"g2b", g1 * am}, {"epsilon_plus", {ep.real(), ep.imag()}},
                        {"epsilon_minus", {em.real(), em.imag()}}};
    const RunConfig cfg = config_from_json(j);
    CHECK(cfg.couplings.G_plus == doctest::Approx(1.0));
    CHECK(cfg.couplings.G_minus == doctest::Approx(2.0));
    j["g_minus"] = 2.0;
    CHECK_THROWS_AS(config_from_json(j), ValidationError);
  }
  SUBCASE("evolve and sweep options") {
    const RunConfig cfg = parse_config(R"({"g_minus":2.5,"t_end":10,"dt_out":0.5,"axis":"detuning","grid_points":7})");
    CHECK(*cfg.t_end == 10.0);
    CHECK(*cfg.dt_out == 0.5);
    CHECK(cfg.axis == SweepAxis::Detuning);
    CHECK(cfg.grid.size() == 7);
    CHECK_THROWS_AS(parse_config(R"({"g_minus":2.5,"dt_out":0})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"g_minus":2.5,"grid":[]})"), ValidationError);
  }
}

TEST_CASE("overrides") {
  auto obj = parse_config_object(kOptimum);
  apply_override(obj, "delta=2.5");
  apply_override(obj, "mode=full");
  apply_override(obj, "grid=[0.1,0.2]");
  CHECK(obj["delta"] == 2.5);
  CHECK(obj["mode"] == "full");
  CHECK(obj["grid"].size() == 2);
  CHECK_THROWS_AS(apply_override(obj, "novalue"), ValidationError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1234567.891234567) == "1234567.89123");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(-2.0) == "-2");
  CHECK(round_significant(3.14159265358979) == 3.14159265359);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ValidationError("x")) == ExitCode::InvalidConfig);
  CHECK(exit_code_for(CouplingInstabilityError("x")) == ExitCode::InvalidConfig);
  CHECK(exit_code_for(UnstableModelError("x")) == ExitCode::Unstable);
  CHECK(exit_code_for(NumericalError("x")) == ExitCode::NumericalFailure);
}

TEST_CASE("commands") {
  const RunConfig cfg = parse_config(kOptimum);

  SUBCASE("steady record at the optimum") {
    const auto j = nlohmann::json::parse(cmd_steady(cfg).data);
    CHECK(j["E_N"].get<double>() == doctest::Approx(3.2).epsilon(0.1 / 3.2));
    CHECK(j["mu"].get<double>() == doctest::Approx(0.98).epsilon(0.02 / 0.98));
    CHECK(j["sigma"].size() == 36);
    CHECK(j["sigma"][4] == j["sigma"][24]);
    CHECK(j["symplectic_eigenvalues"].size() == 2);
    CHECK(j["bogoliubov_occupations"].size() == 3);
    for (const auto& n : j["bogoliubov_occupations"]) CHECK(n.get<double>() <= 0.05);
  }

  SUBCASE("floquet with constant coefficients agrees with Hurwitz") {
    RunConfig rwa = cfg;
    rwa.params.omega1 = 10.0;
    rwa.params.omega2 = 100.0;
    const auto j = nlohmann::json::parse(cmd_floquet(rwa).data);
    CHECK(j["stable"].get<bool>() == hurwitz_stable(DriftModel{rwa.params, rwa.couplings, DriftMode::Rwa}));
    CHECK(j["multipliers"].size() == 6);
    CHECK(j["multipliers"][0].size() == 2);
    CHECK(j["period"].get<double>() == doctest::Approx(3.14159265359));
  }

  SUBCASE("evolve csv") {
    RunConfig e = cfg;
    e.t_end = 2.0;
    e.dt_out = 0.5;
    const std::string csv = cmd_evolve(e).data;
    CHECK(csv.rfind("t,E_N,mu,nu_min\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find("\n0.5,") != std::string::npos);
    RunConfig missing = cfg;
    CHECK_THROWS_AS(cmd_evolve(missing), ValidationError);
  }

  SUBCASE("sweep csv and optimum") {
    RunConfig s = cfg;
    s.axis = SweepAxis::Detuning;
    s.grid = default_detuning_grid(40);
    const auto out = cmd_sweep(s);
    CHECK(out.data.rfind("axis,value,E_N,mu,stable\n", 0) == 0);
    CHECK(out.data.find("\ndetuning,0.05,") != std::string::npos);
    REQUIRE(out.optimum.has_value());
    const auto opt = nlohmann::json::parse(*out.optimum);
    CHECK(opt["optimum"]["refined"].get<bool>());
    CHECK(opt["optimum"]["value"].get<double>() == doctest::Approx(0.99).epsilon(0.2));

    s.occupations = true;
    const std::string with_n = cmd_sweep(s).data;
    CHECK(with_n.rfind("axis,value,E_N,mu,stable,n_beta1,n_beta2,n_b1\n", 0) == 0);
    const std::string first = with_n.substr(with_n.find('\n') + 1, with_n.find('\n', with_n.find('\n') + 1) - with_n.find('\n') - 1);
    CHECK(std::count(first.begin(), first.end(), ',') == 7);
  }

  SUBCASE("unstable RWA model") {
    RunConfig dark = cfg;
    dark.params.kappa = dark.params.gamma2 = 0.0;
    dark.params.delta = 0.0;
    CHECK_THROWS_AS(cmd_steady(dark), UnstableModelError);
  }
}

TEST_CASE("cli") {
  const fs::path dir = scratch_dir();
  const fs::path config = dir / "optimum.json";
  std::ofstream(config) << kOptimum;
  const std::string base = "--config " + config.string();

  SUBCASE("steady writes a JSON file, byte-identical across runs") {
    const fs::path a = dir / "a.json", b = dir / "b.json";
    CHECK(run_cli("steady " + base + " --out " + a.string()) == 0);
    CHECK(run_cli("steady " + base + " --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(nlohmann::json::parse(slurp(a))["E_N"].get<double>() > 3.0);
  }

  SUBCASE("invalid config exits 3") {
    CHECK(run_cli("steady " + base + " --set g_plus=2.5 --out " + (dir / "x.json").string()) == 3);
    CHECK(run_cli("steady --set bogus=1") == 3);
    CHECK(run_cli("steady " + base + " --mode full") == 3);
  }

  SUBCASE("unstable model exits 2 without writing") {
    const fs::path out = dir / "unstable.json";
    fs::remove(out);
    CHECK(run_cli("steady " + base + " --set kappa=0 --set gamma2=0 --set delta=0 --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out));
  }

  SUBCASE("sweep writes CSV and optimum record") {
    const fs::path csv = dir / "sweep.csv";
    fs::remove(csv.string() + ".optimum.json");
    CHECK(run_cli("sweep " + base + " --set axis=detuning --set grid_points=25 --out " + csv.string()) == 0);
    CHECK(slurp(csv).rfind("axis,value,E_N,mu,stable\n", 0) == 0);
    CHECK(fs::exists(csv.string() + ".optimum.json"));
  }

  SUBCASE("floquet and evolve") {
    CHECK(run_cli("floquet " + base + " --mode full --set omega1=10 --set omega2=100 --out " +
                  (dir / "f.json").string()) == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "f.json"))["stable"].get<bool>());
    CHECK(run_cli("evolve " + base + " --set t_end=1 --set dt_out=0.25 --out " + (dir / "e.csv").string()) == 0);
    CHECK(slurp(dir / "e.csv").rfind("t,E_N,mu,nu_min\n", 0) == 0);
  }
}
