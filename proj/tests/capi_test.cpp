#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "qfc.h"

namespace {

const std::string kData = QFC_TEST_DATA;

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

struct Cfg {
  qfc_config* ptr = nullptr;
  ~Cfg() { qfc_config_free(ptr); }
};

Cfg load(const std::string& file) {
  Cfg c;
  char err[256] = {0};
  REQUIRE(qfc_config_load((kData + "/" + file).c_str(), &c.ptr, err,
                          sizeof err) == QFC_OK);
  REQUIRE(c.ptr != nullptr);
  return c;
}

}  // namespace

TEST_CASE("library reports its version") {
  CHECK(std::string(qfc_version()) == "0.1.0");
}

TEST_CASE("null and invalid arguments are rejected as usage errors") {
  char err[128] = {0};
  qfc_config* cfg = nullptr;
  CHECK(qfc_config_load(nullptr, &cfg, err, sizeof err) == QFC_ERR_USAGE);
  CHECK(qfc_config_load("x.cfg", nullptr, err, sizeof err) == QFC_ERR_USAGE);
  CHECK(qfc_config_set_seed(nullptr, 1) == QFC_ERR_USAGE);
  CHECK(qfc_config_set_n_traj(nullptr, 1) == QFC_ERR_USAGE);
  CHECK(qfc_config_set_threads(nullptr, 1) == QFC_ERR_USAGE);
  CHECK(qfc_config_set_out_dir(nullptr, "x") == QFC_ERR_USAGE);
  CHECK(qfc_simulate(nullptr, err, sizeof err) == QFC_ERR_USAGE);
  CHECK(qfc_trajectory(nullptr, err, sizeof err) == QFC_ERR_USAGE);
  int nf = 0;
  CHECK(qfc_check(nullptr, &nf, err, sizeof err) == QFC_ERR_USAGE);
  CHECK(qfc_bellman(nullptr, nullptr, err, sizeof err) == QFC_ERR_USAGE);
  CHECK(qfc_sweep(nullptr, err, sizeof err) == QFC_ERR_USAGE);
  qfc_config_free(nullptr);  // must be a no-op

  qfc_config* d = qfc_config_default();
  REQUIRE(d != nullptr);
  CHECK(qfc_config_set_n_traj(d, 0) == QFC_ERR_USAGE);
  qfc_config_free(d);
}

TEST_CASE("loading a missing or invalid config reports the problem") {
  qfc_config* cfg = nullptr;
  char err[256] = {0};
  CHECK(qfc_config_load("/no/such/file.cfg", &cfg, err, sizeof err) ==
        QFC_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::strlen(err) > 0);
}

TEST_CASE("simulate writes outputs and is reproducible byte for byte") {
  Cfg c = load("tiny.cfg");
  const fs::path out1 = fresh_dir("capi_sim1");
  const fs::path out2 = fresh_dir("capi_sim2");
  char err[256] = {0};

  REQUIRE(qfc_config_set_out_dir(c.ptr, out1.string().c_str()) == QFC_OK);
  REQUIRE(qfc_config_set_threads(c.ptr, 2) == QFC_OK);
  REQUIRE(qfc_simulate(c.ptr, err, sizeof err) == QFC_OK);
  CHECK(fs::exists(out1 / "stats.csv"));
  CHECK(fs::exists(out1 / "run.json"));
  CHECK(first_line(out1 / "stats.csv") ==
        "t,rms,mean_energy,mean_purity,mean_abs_u");

  REQUIRE(qfc_config_set_out_dir(c.ptr, out2.string().c_str()) == QFC_OK);
  REQUIRE(qfc_config_set_threads(c.ptr, 1) == QFC_OK);
  REQUIRE(qfc_simulate(c.ptr, err, sizeof err) == QFC_OK);
  CHECK(slurp(out1 / "stats.csv") == slurp(out2 / "stats.csv"));
}

TEST_CASE("seed and trajectory-count overrides change the output") {
  Cfg c = load("tiny.cfg");
  const fs::path out1 = fresh_dir("capi_seed1");
  const fs::path out2 = fresh_dir("capi_seed2");
  char err[256] = {0};
  REQUIRE(qfc_config_set_out_dir(c.ptr, out1.string().c_str()) == QFC_OK);
  REQUIRE(qfc_simulate(c.ptr, err, sizeof err) == QFC_OK);
  REQUIRE(qfc_config_set_seed(c.ptr, 43) == QFC_OK);
  REQUIRE(qfc_config_set_out_dir(c.ptr, out2.string().c_str()) == QFC_OK);
  REQUIRE(qfc_simulate(c.ptr, err, sizeof err) == QFC_OK);
  CHECK(slurp(out1 / "stats.csv") != slurp(out2 / "stats.csv"));
}

TEST_CASE("per-trajectory dumps appear when enabled") {
  Cfg c = load("tiny.cfg");
  const fs::path out = fresh_dir("capi_dump");
  char err[256] = {0};
  REQUIRE(qfc_config_set_out_dir(c.ptr, out.string().c_str()) == QFC_OK);
  REQUIRE(qfc_config_set_write_trajectories(c.ptr, 1) == QFC_OK);
  REQUIRE(qfc_config_set_n_traj(c.ptr, 3) == QFC_OK);
  REQUIRE(qfc_simulate(c.ptr, err, sizeof err) == QFC_OK);
  CHECK(fs::exists(out / "traj_0000.csv"));
  CHECK(fs::exists(out / "traj_0002.csv"));
}

TEST_CASE("single-trajectory runs write the detailed record") {
  Cfg c = load("tiny.cfg");
  const fs::path out = fresh_dir("capi_traj");
  char err[256] = {0};
  REQUIRE(qfc_config_set_out_dir(c.ptr, out.string().c_str()) == QFC_OK);
  REQUIRE(qfc_trajectory(c.ptr, err, sizeof err) == QFC_OK);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "run.json"));
  CHECK(first_line(out / "trajectory.csv") ==
        "t,x_true,p_true,x_est,p_est,Vx,Vp,C,u,dQ,energy");
}

TEST_CASE("an over-threshold abort rate surfaces as an integration error") {
  Cfg c = load("abort.cfg");
  const fs::path out = fresh_dir("capi_abort");
  char err[256] = {0};
  REQUIRE(qfc_config_set_out_dir(c.ptr, out.string().c_str()) == QFC_OK);
  CHECK(qfc_simulate(c.ptr, err, sizeof err) == QFC_ERR_INTEGRATION);
  CHECK(std::strlen(err) > 0);
  CHECK(qfc_trajectory(c.ptr, err, sizeof err) == QFC_ERR_INTEGRATION);
}

TEST_CASE("the self-consistency battery passes on defaults") {
  qfc_config* d = qfc_config_default();
  REQUIRE(d != nullptr);
  int n_failed = -1;
  char err[256] = {0};
  CHECK(qfc_check(d, &n_failed, err, sizeof err) == QFC_OK);
  CHECK(n_failed == 0);
  qfc_config_free(d);
}

TEST_CASE("strategy optimization runs from a problem file") {
  const fs::path out = fresh_dir("capi_bellman");
  char err[256] = {0};
  REQUIRE(qfc_bellman((kData + "/qubit_adaptive.json").c_str(),
                      out.string().c_str(), err, sizeof err) == QFC_OK);
  CHECK(fs::exists(out / "strategy.json"));
  const std::string body = slurp(out / "strategy.json");
  CHECK(body.find("\"first_control\"") != std::string::npos);

  // no output directory requested: still solves
  CHECK(qfc_bellman((kData + "/qubit_adaptive.json").c_str(), nullptr, err,
                    sizeof err) == QFC_OK);

  CHECK(qfc_bellman((kData + "/bad_kraus.json").c_str(), nullptr, err,
                    sizeof err) == QFC_ERR_CONFIG);
  CHECK(std::strlen(err) > 0);
  CHECK(qfc_bellman("/no/such/problem.json", nullptr, err, sizeof err) ==
        QFC_ERR_CONFIG);
}

TEST_CASE("sweeps write one row per parameter cell") {
  Cfg c = load("sweep_tiny.cfg");
  const fs::path out = fresh_dir("capi_sweep");
  char err[256] = {0};
  REQUIRE(qfc_config_set_out_dir(c.ptr, out.string().c_str()) == QFC_OK);
  REQUIRE(qfc_sweep(c.ptr, err, sizeof err) == QFC_OK);
  REQUIRE(fs::exists(out / "sweep.csv"));
  CHECK(first_line(out / "sweep.csv") ==
        "k,Gamma,plateau_rms,tau,aborted,n_traj");
  std::ifstream in(out / "sweep.csv");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);  // header plus two k values
}
