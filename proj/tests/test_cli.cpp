#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout and stderr combined
};

std::string cli_path() {
  const char* env = std::getenv("LIECO_CLI");
  REQUIRE_MESSAGE(env != nullptr, "LIECO_CLI must point at the built binary");
  return env;
}

RunResult run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 512> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string temp_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/lieco_cli_XXXXXX";
    REQUIRE(mkdtemp(tmpl) != nullptr);
    return std::string(tmpl);
  }();
  return dir;
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string path = temp_dir() + "/" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> last_data_row(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, last;
  std::getline(in, line);  // header
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') last = line;
  std::vector<double> row;
  std::istringstream fields(last);
  std::string field;
  while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
  return row;
}

double report_value(const std::string& output, const std::string& key) {
  const auto at = output.find(key + ":");
  REQUIRE(at != std::string::npos);
  return std::stod(output.substr(at + key.size() + 1));
}

}  // namespace

TEST_CASE("simulate writes the dual-path trajectory with a tiny deviation") {
  const std::string out_csv = temp_dir() + "/sim.csv";
  const std::string config = write_config("sim.json", R"json({
    "task": "simulate",
    "model": "rigid-body-2osc",
    "controls": [{"kind":"constant","value":1.0},{"kind":"constant","value":1.0}],
    "initial_state": [0,0,0],
    "grid": {"t0":0.0,"t1":1.0,"nodes":101},
    "output": {"path":")json" + out_csv + R"json("}
  })json");
  const RunResult r = run("simulate --config " + config);
  CHECK(r.exit_code == 0);
  CHECK(report_value(r.output, "sup_deviation") <= 1e-8);

  const std::string csv = slurp(out_csv);
  CHECK(csv.rfind("time,wn_x1,wn_x2,wn_theta,ode_x1,ode_x2,ode_theta\n", 0) == 0);
  CHECK(csv.find("# ode_tol=") != std::string::npos);
  const std::vector<double> last = last_data_row(csv);
  REQUIRE(last.size() == 7);
  CHECK(last[0] == doctest::Approx(1.0));
  CHECK(last[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(last[2] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(last[3]) < 1e-9);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  const std::string out1 = temp_dir() + "/det1.csv";
  const std::string out2 = temp_dir() + "/det2.csv";
  const std::string config = write_config("det.json", R"json({
    "task": "simulate",
    "model": "car-chained",
    "controls": [{"kind":"expr","text":"sin(t)"},{"kind":"expr","text":"cos(t)"}],
    "initial_state": [0.1,-0.2,0.3,0.0],
    "grid": {"t0":0.0,"t1":2.0,"nodes":51},
    "seed": 7
  })json");
  CHECK(run("simulate --config " + config + " --out " + out1).exit_code == 0);
  CHECK(run("simulate --config " + config + " --out " + out2).exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("simulate covers every shipped model") {
  // brockett has a Wei-Norman path through H(3)
  const std::string brockett = write_config("sim_brockett.json", R"json({
    "task": "simulate",
    "model": "brockett",
    "controls": [{"kind":"expr","text":"sin(t)"},{"kind":"expr","text":"cos(t)"}],
    "initial_state": [0.1,0.2,0.3],
    "grid": {"t0":0.0,"t1":2.0,"nodes":21}
  })json");
  const RunResult rb = run("simulate --config " + brockett);
  CHECK(rb.exit_code == 0);
  CHECK(report_value(rb.output, "sup_deviation") <= 1e-7);

  // the raw car integrates its oracle only
  const std::string raw = write_config("sim_raw.json", R"json({
    "task": "simulate",
    "model": "car-raw",
    "controls": [{"kind":"constant","value":0.5},{"kind":"constant","value":0.1}],
    "initial_state": [0,0,0,0],
    "grid": {"t0":0.0,"t1":1.0,"nodes":11}
  })json");
  const RunResult rr = run("simulate --config " + raw);
  CHECK(rr.exit_code == 0);
  CHECK(rr.output.find("sup_deviation") == std::string::npos);
  CHECK(rr.output.find("final_state:") != std::string::npos);
}

TEST_CASE("wn reports the plan and the closed-form endpoint") {
  const std::string out_csv = temp_dir() + "/wn.csv";
  const std::string config = write_config("wn.json", R"json({
    "task": "wn",
    "algebra": "g4bar",
    "controls": [{"kind":"constant","value":1.0},{"kind":"constant","value":1.0}],
    "grid": {"t0":0.0,"t1":1.0,"nodes":11},
    "output": {"path":")json" + out_csv + R"json("}
  })json");
  const RunResult r = run("wn --config " + config);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("quadrature_plan: v1, v2, v3(v1), v4(v1)") != std::string::npos);
  CHECK(r.output.find("solvable_by_quadratures: true") != std::string::npos);
  const std::vector<double> last = last_data_row(slurp(out_csv));
  REQUIRE(last.size() == 5);
  CHECK(last[4] == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("wn accepts inline algebra definitions") {
  const std::string config = write_config("wn_inline.json", R"json({
    "task": "wn",
    "algebra": {"basis": ["a1","a2","a3"], "brackets": [["a1","a2","a3",1.0]]},
    "controls": [{"kind":"constant","value":1.0},{"kind":"constant","value":1.0}],
    "grid": {"t0":0.0,"t1":1.0,"nodes":5}
  })json");
  const RunResult r = run("wn --config " + config);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("quadrature_plan: v1, v2, v3(v1)") != std::string::npos);
}

TEST_CASE("reduce emits the reduced equation and a small reconstruction residual") {
  const std::string out_csv = temp_dir() + "/red.csv";
  const std::string config = write_config("red.json", R"json({
    "task": "reduce",
    "space": "g4bar",
    "controls": [{"kind":"expr","text":"sin(t)"},{"kind":"expr","text":"cos(t)"}],
    "grid": {"t0":0.0,"t1":2.0,"nodes":21},
    "output": {"path":")json" + out_csv + R"json("}
  })json");
  const RunResult r = run("reduce --config " + config);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("reduced_equation: ddot=") != std::string::npos);
  CHECK(report_value(r.output, "support_residual") <= 1e-9);
  CHECK(report_value(r.output, "reconstruction_residual") <= 1e-6);
  const std::string csv = slurp(out_csv);
  CHECK(csv.rfind("time,y1,y2,y3,d,g1,g2,g3,g4\n", 0) == 0);
}

TEST_CASE("rank reports the controllability rank at the sample point") {
  const std::string config = write_config("rank.json", R"json({
    "task": "rank",
    "fields": {"set": "car-raw"},
    "points": [[0.0, 0.0, 0.3, 0.2]]
  })json");
  const RunResult r = run("rank --config " + config);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find(") = 4") != std::string::npos);
}

TEST_CASE("close reports closure and non-closure") {
  const std::string closed = write_config("close1.json", R"json({
    "task": "close",
    "fields": {"variables": ["x1","x2","x3","x4"], "components": ["1; 0; x2; x3", "0; 1; 0; 0"]},
    "max_new": 4
  })json");
  const RunResult r1 = run("close --config " + closed);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output.find("closed: true") != std::string::npos);
  CHECK(r1.output.find("[X1,X2] -> 1 X3") != std::string::npos);

  const std::string open = write_config("close2.json", R"json({
    "task": "close",
    "fields": {"set": "car-raw-inputs"},
    "max_new": 8
  })json");
  const RunResult r2 = run("close --config " + open);
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("closed: false") != std::string::npos);
}

TEST_CASE("verify runs the model checks") {
  const std::string config = write_config("verify.json", R"json({
    "task": "verify",
    "model": "rigid-body-2osc"
  })json");
  const RunResult r = run("verify --config " + config);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("[PASS] rigid-body-2osc/wn-closed-form-endpoint") != std::string::npos);
  CHECK(r.output.find("[FAIL]") == std::string::npos);
}

TEST_CASE("error exit codes: config 2, domain 3, numeric 4") {
  const std::string bad = write_config("bad.json", "this is not json");
  CHECK(run("simulate --config " + bad).exit_code == 2);

  const std::string unknown = write_config("unknown.json", R"json({
    "task": "simulate", "model": "unicycle",
    "controls": [{"kind":"constant","value":1.0},{"kind":"constant","value":1.0}],
    "initial_state": [0,0,0], "grid": {"t0":0,"t1":1,"nodes":5}
  })json");
  CHECK(run("simulate --config " + unknown).exit_code == 2);

  const std::string domain = write_config("domain.json", R"json({
    "task": "simulate", "model": "car-raw",
    "controls": [{"kind":"constant","value":1.0},{"kind":"constant","value":3.0}],
    "initial_state": [0,0,0,0], "grid": {"t0":0,"t1":3,"nodes":11}
  })json");
  const RunResult dom = run("simulate --config " + domain);
  CHECK(dom.exit_code == 3);
  CHECK(dom.output.find("domain error") != std::string::npos);

  const std::string numeric = write_config("numeric.json", R"json({
    "task": "simulate", "model": "car-chained",
    "controls": [{"kind":"expr","text":"1/(1-t)"},{"kind":"constant","value":0.0}],
    "initial_state": [0,0,0,0], "grid": {"t0":0,"t1":1,"nodes":5}
  })json");
  const RunResult num = run("simulate --config " + numeric);
  CHECK(num.exit_code == 4);
  CHECK(num.output.find("numeric error") != std::string::npos);
}
