#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sbpsat/cli.hpp"

using namespace sbpsat;
using namespace sbpsat::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sbpsat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sbpsat_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("ops verify passes for a valid operator") {
  const auto r = invoke({"ops", "verify", "--order", "4", "--variant", "narrow", "--n", "32"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("ops verify on a grid below the closure width exits 2") {
  const auto r = invoke({"ops", "verify", "--order", "8", "--variant", "wide", "--n", "6"});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("GridTooSmall") != std::string::npos);
}

TEST_CASE("ops verify on a tampered coefficient file exits 1 and names the check") {
  const auto dir = scratch("tampered").string();
  REQUIRE(invoke({"ops", "verify", "--order", "4", "--n", "20", "--dump", dir}).code == kOk);
  auto ops = load_operator_set(dir);
  CHECK(invoke({"ops", "verify", "--load", dir}).code == kOk);
  ops.Q(2, 3) += 1e-5;
  save_operator_set(ops, dir);
  const auto r = invoke({"ops", "verify", "--load", dir});
  CHECK(r.code == kCheckFailed);
  CHECK(r.err.find("Q_plus_QT") != std::string::npos);
}

TEST_CASE("ops qtable lists every reference row") {
  const auto r = invoke({"ops", "qtable"});
  CHECK(r.code == kOk);
  CHECK(count_lines(r.out) == 10);
  CHECK(r.out.find("\"2,0 wide\",2,wide,16,2,2,0,match,no") != std::string::npos);
  CHECK(r.out.find("mismatch,yes") != std::string::npos);
  const auto b = invoke({"ops", "qtable", "--corner"});
  CHECK(b.code == kOk);
  CHECK(count_lines(b.out) == 6);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == kUsage);
  CHECK(invoke({"frobnicate"}).code == kUsage);
  CHECK(invoke({"run"}).code == kUsage);
  CHECK(invoke({"run", scratch("missing.json").string()}).code == kUsage);
  CHECK(invoke({"--help"}).code == kOk);
}

TEST_CASE("invalid omega_mode exits 2 and names the allowed modes") {
  const auto path = write_config("bad_omega.json", R"({"preset": "heat_dirichlet_steady", "omega_mode": "huge"})");
  const auto r = invoke({"run", path});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("omega_mode") != std::string::npos);
  CHECK(r.err.find("q_eps") != std::string::npos);
}

TEST_CASE("config validation names the field") {
  struct Case {
    const char* text;
    const char* field;
  };
  const Case cases[] = {
      {R"({"preset": "heat_dirichlet_steady", "N": [64, 32]})", "'N'"},
      {R"({"preset": "heat_dirichlet_steady", "N": 4})", "'N'"},
      {R"({"preset": "heat_dirichlet_steady", "operator": {"variant": "medium"}})", "'operator.variant'"},
      {R"({"preset": "heat_dirichlet_steady", "operator": {"interior_order": 5}})", "'operator.interior_order'"},
      {R"({"preset": "heat_dirichlet_steady", "time": {"dt": 0.1}})", "'time'"},
      {R"({"preset": "heat_dirichlet", "time": {"dt": -1}})", "'time'"},
      {R"({"preset": "heat_dirichlet", "steady": true})", "'steady'"},
      {R"({"preset": "nope"})", "'preset'"},
      {R"({"N": 32})", "'preset'"},
      {R"({"preset": "heat_dirichlet_steady", "colour": 1})", "'colour'"},
      {R"({"preset": "heat_dirichlet_steady", "penalty_flavor": "custom"})", "'penalty_flavor'"},
      {R"({"preset": "heat_dirichlet_steady", "params": {"eps": -1}})", "'params.eps'"},
  };
  for (const auto& c : cases) {
    INFO(c.text);
    try {
      parse_config(c.text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(c.field) != std::string::npos);
    }
  }
}

TEST_CASE("malformed JSON reports line and column") {
  const auto path = write_config("broken.json", "{\n  \"preset\": \"heat_dirichlet_steady\",,\n}");
  const auto r = invoke({"run", path});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(r.err.find("column") != std::string::npos);
}

TEST_CASE("config arrays expand into a campaign") {
  const auto cfg = parse_config(R"({"preset": "heat_dirichlet_steady",
    "operator": {"interior_order": [4, 6], "variant": ["wide", "narrow"]},
    "omega_mode": ["eigen", "q_eps"], "N": [32, 64], "threads": 3})");
  CHECK(cfg.orders == std::vector<int>{4, 6});
  CHECK(cfg.variants.size() == 2);
  CHECK(cfg.omega_modes.size() == 2);
  CHECK(cfg.threads == 3);
}

TEST_CASE("single N run leaves the order columns empty and warns") {
  const auto path = write_config("single.json", R"({"preset": "heat_dirichlet_steady", "N": 32})");
  const auto r = invoke({"run", path});
  CHECK(r.code == kOk);
  CHECK(r.err.find("warning") != std::string::npos);
  std::istringstream is(r.out);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(header == csv_header().substr(0, csv_header().size() - 1));
  std::vector<std::string> cols;
  std::stringstream rs(row);
  for (std::string c; std::getline(rs, c, ',');) cols.push_back(c);
  REQUIRE(cols.size() == 15);
  CHECK(cols[8].empty());
  CHECK(cols[11].empty());
  CHECK(cols[14] == "pass");
}

TEST_CASE("run output is deterministic and theorem2 rows pass") {
  const auto csv = scratch("det.csv").string();
  const auto path = write_config("det.json", R"({"preset": "advdiff_dirichlet_steady",
    "operator": {"interior_order": [2, 4], "variant": ["wide", "narrow"]},
    "omega_mode": ["eigen", "q_eps"], "N": [16, 32], "output": {"csv": ")" + csv + R"("}})");
  REQUIRE(invoke({"run", path}).code == kOk);
  std::ifstream f1(csv);
  const std::string first((std::istreambuf_iterator<char>(f1)), {});
  REQUIRE(invoke({"run", path}).code == kOk);
  std::ifstream f2(csv);
  const std::string second((std::istreambuf_iterator<char>(f2)), {});
  CHECK(first == second);
  CHECK(count_lines(first) == 1 + 2 * 2 * 2 * 2);
  CHECK(first.find(",fail") == std::string::npos);
  CHECK(std::filesystem::exists(csv + ".certificates.json"));
}

TEST_CASE("certify exits 1 for dual-inconsistent theorem2-free configs only when unstable") {
  const auto ok = write_config("cert_ok.json", R"({"preset": "heat_dirichlet_steady", "N": [16, 24]})");
  const auto r = invoke({"certify", ok});
  CHECK(r.code == kOk);
  CHECK(r.out.find("dual_consistent") != std::string::npos);
  const auto m = write_config("cert_m1.json",
                              R"({"preset": "heat_dirichlet_steady", "penalty_flavor": "method1", "N": 16})");
  const auto rm = invoke({"certify", m});
  CHECK(rm.code == kOk);
  CHECK(rm.out.find("dual_inconsistent") != std::string::npos);
}

TEST_CASE("sweep emits one row per omega") {
  const auto path = write_config("sweep.json", R"({"preset": "heat_dirichlet_steady", "operator": {"interior_order": 4},
    "N": 32, "omegas": [1, 10, 100]})");
  const auto r = invoke({"sweep", path});
  CHECK(r.code == kOk);
  CHECK(count_lines(r.out) == 4);
  const auto none = write_config("sweep_none.json", R"({"preset": "heat_dirichlet_steady", "N": 32})");
  CHECK(invoke({"sweep", none}).code == kUsage);
}

TEST_CASE("numerical failures map to exit 3") {
  CHECK(exit_code_for(Error(ErrorKind::BlowUp, "x")) == kNumerical);
  CHECK(exit_code_for(Error(ErrorKind::SingularMatrix, "x")) == kNumerical);
  CHECK(exit_code_for(Error(ErrorKind::DualityViolated, "x")) == kCheckFailed);
  CHECK(exit_code_for(Error(ErrorKind::GridTooSmall, "x")) == kUsage);
}

TEST_CASE("shipped configs parse") {
  for (const auto& e : std::filesystem::directory_iterator(SBPSAT_CONFIG_DIR)) {
    INFO(e.path());
    CHECK_NOTHROW(load_config(e.path().string()));
  }
}

TEST_CASE("format_double keeps 17 significant digits and blanks NaN") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")).empty());
}
