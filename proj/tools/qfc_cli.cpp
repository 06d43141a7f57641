#include <qfc.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int n_traj = 0;
  int threads = 0;
  bool write_traj = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* n_traj_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* write_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key = value configuration file");
  f.seed_opt = cmd->add_option("--seed", f.seed, "master seed override");
  f.n_traj_opt =
      cmd->add_option("--n-traj", f.n_traj, "trajectory count override");
  f.out_opt = cmd->add_option("--out", f.out_dir, "output directory override");
  f.threads_opt =
      cmd->add_option("--threads", f.threads,
                      "worker threads (0 = hardware concurrency)");
  f.write_opt = cmd->add_flag("--write-trajectories", f.write_traj,
                              "write one CSV per trajectory");
}

using ConfigPtr = std::unique_ptr<qfc_config, decltype(&qfc_config_free)>;

int build_config(const CommonFlags& f, ConfigPtr& out) {
  char err[512] = {0};
  qfc_config* cfg = nullptr;
  if (f.config_path.empty()) {
    cfg = qfc_config_default();
    if (!cfg) {
      std::fprintf(stderr, "error: out of memory\n");
      return QFC_ERR_FAIL;
    }
  } else {
    const int rc = qfc_config_load(f.config_path.c_str(), &cfg, err,
                                   sizeof(err));
    if (rc != QFC_OK) {
      std::fprintf(stderr, "error: %s\n", err);
      return rc;
    }
  }
  out = ConfigPtr(cfg, &qfc_config_free);
  if (f.seed_opt && f.seed_opt->count()) qfc_config_set_seed(cfg, f.seed);
  if (f.n_traj_opt && f.n_traj_opt->count()) {
    if (qfc_config_set_n_traj(cfg, f.n_traj) != QFC_OK) {
      std::fprintf(stderr, "error: --n-traj must be at least 1\n");
      return QFC_ERR_CONFIG;
    }
  }
  if (f.threads_opt && f.threads_opt->count())
    qfc_config_set_threads(cfg, f.threads);
  if (f.out_opt && f.out_opt->count())
    qfc_config_set_out_dir(cfg, f.out_dir.c_str());
  if (f.write_opt && f.write_opt->count())
    qfc_config_set_write_trajectories(cfg, f.write_traj ? 1 : 0);
  return QFC_OK;
}

int map_exit(int rc) {
  // contract: 0 ok, 2 config, 3 integration; CLI misuse folds into 2
  if (rc == QFC_ERR_USAGE) return QFC_ERR_CONFIG;
  return rc;
}

int run_simple(const CommonFlags& f,
               int (*fn)(const qfc_config*, char*, size_t)) {
  ConfigPtr cfg(nullptr, &qfc_config_free);
  const int rc = build_config(f, cfg);
  if (rc != QFC_OK) return map_exit(rc);
  char err[512] = {0};
  const int run_rc = fn(cfg.get(), err, sizeof(err));
  if (run_rc != QFC_OK) std::fprintf(stderr, "error: %s\n", err);
  return map_exit(run_rc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-measurement feedback cooling toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qfc_version());

  CommonFlags sim_f, traj_f, check_f, sweep_f;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "closed-loop ensemble run");
  add_common(sim_cmd, sim_f);
  CLI::App* traj_cmd =
      app.add_subcommand("trajectory", "single trajectory, full dump");
  add_common(traj_cmd, traj_f);
  CLI::App* check_cmd =
      app.add_subcommand("check", "self-consistency battery");
  add_common(check_cmd, check_f);
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "ensemble per (k, Gamma) grid cell");
  add_common(sweep_cmd, sweep_f);

  std::string problem_path, bellman_out;
  CLI::App* bell_cmd =
      app.add_subcommand("bellman", "measurement-strategy optimization");
  bell_cmd->add_option("--problem", problem_path, "problem JSON file")
      ->required();
  bell_cmd->add_option("--out", bellman_out,
                       "directory for strategy.json (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sim_cmd->parsed()) return run_simple(sim_f, &qfc_simulate);
  if (traj_cmd->parsed()) return run_simple(traj_f, &qfc_trajectory);
  if (sweep_cmd->parsed()) return run_simple(sweep_f, &qfc_sweep);

  if (check_cmd->parsed()) {
    ConfigPtr cfg(nullptr, &qfc_config_free);
    const int rc = build_config(check_f, cfg);
    if (rc != QFC_OK) return map_exit(rc);
    char err[512] = {0};
    int n_failed = 0;
    const int run_rc = qfc_check(cfg.get(), &n_failed, err, sizeof(err));
    if (run_rc != QFC_OK) {
      std::fprintf(stderr, "error: %s\n", err);
      return map_exit(run_rc);
    }
    if (n_failed > 0) {
      std::fprintf(stderr, "%d check(s) failed\n", n_failed);
      return 1;
    }
    std::printf("all checks passed\n");
    return 0;
  }

  if (bell_cmd->parsed()) {
    char err[512] = {0};
    const int rc = qfc_bellman(problem_path.c_str(),
                               bellman_out.empty() ? nullptr
                                                   : bellman_out.c_str(),
                               err, sizeof(err));
    if (rc != QFC_OK) std::fprintf(stderr, "error: %s\n", err);
    return map_exit(rc);
  }

  return 2;
}
