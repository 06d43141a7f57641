#include "qfc.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bellman.hpp"
#include "experiments.hpp"
#include "rng.hpp"

struct qfc_config {
  qfc::SimConfig sim;
  int threads = 0;
};

namespace {

void set_err(char* errbuf, size_t errlen, const std::string& msg) {
  if (!errbuf || errlen == 0) return;
  const size_t n = std::min(msg.size(), errlen - 1);
  std::memcpy(errbuf, msg.data(), n);
  errbuf[n] = '\0';
}

template <typename F>
int guarded(char* errbuf, size_t errlen, F&& f) {
  try {
    return f();
  } catch (const qfc::ConfigError& e) {
    set_err(errbuf, errlen, e.what());
    return QFC_ERR_CONFIG;
  } catch (const qfc::IntegrationError& e) {
    set_err(errbuf, errlen, e.what());
    return QFC_ERR_INTEGRATION;
  } catch (const std::exception& e) {
    set_err(errbuf, errlen, e.what());
    return QFC_ERR_FAIL;
  }
}

}  // namespace

extern "C" {

const char* qfc_version(void) { return "0.1.0"; }

qfc_config* qfc_config_default(void) { return new (std::nothrow) qfc_config; }

int qfc_config_load(const char* path, qfc_config** out, char* errbuf,
                    size_t errlen) {
  if (!path || !out) {
    set_err(errbuf, errlen, "null argument");
    return QFC_ERR_USAGE;
  }
  *out = nullptr;
  return guarded(errbuf, errlen, [&] {
    auto* cfg = new qfc_config;
    try {
      cfg->sim = qfc::parse_config(path);
    } catch (...) {
      delete cfg;
      throw;
    }
    *out = cfg;
    return QFC_OK;
  });
}

void qfc_config_free(qfc_config* cfg) { delete cfg; }

int qfc_config_set_seed(qfc_config* cfg, uint64_t seed) {
  if (!cfg) return QFC_ERR_USAGE;
  cfg->sim.master_seed = seed;
  return QFC_OK;
}

int qfc_config_set_n_traj(qfc_config* cfg, int n_traj) {
  if (!cfg || n_traj < 1) return QFC_ERR_USAGE;
  cfg->sim.n_traj = n_traj;
  return QFC_OK;
}

int qfc_config_set_threads(qfc_config* cfg, int threads) {
  if (!cfg) return QFC_ERR_USAGE;
  cfg->threads = threads;
  return QFC_OK;
}

int qfc_config_set_out_dir(qfc_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return QFC_ERR_USAGE;
  cfg->sim.out_dir = out_dir;
  return QFC_OK;
}

int qfc_config_set_write_trajectories(qfc_config* cfg, int enable) {
  if (!cfg) return QFC_ERR_USAGE;
  cfg->sim.write_trajectories = enable != 0;
  return QFC_OK;
}

int qfc_simulate(const qfc_config* cfg, char* errbuf, size_t errlen) {
  if (!cfg) {
    set_err(errbuf, errlen, "null config");
    return QFC_ERR_USAGE;
  }
  return guarded(errbuf, errlen, [&] {
    cfg->sim.validate();
    const qfc::EnsembleStats st = qfc::run_ensemble(cfg->sim, cfg->threads);
    const std::filesystem::path dir(cfg->sim.out_dir);
    std::filesystem::create_directories(dir);
    qfc::write_stats_csv((dir / "stats.csv").string(), st);
    qfc::write_run_json((dir / "run.json").string(), cfg->sim, st);
    if (st.failed) {
      set_err(errbuf, errlen,
              "aborted trajectory fraction exceeds the configured threshold");
      return QFC_ERR_INTEGRATION;
    }
    return QFC_OK;
  });
}

int qfc_trajectory(const qfc_config* cfg, char* errbuf, size_t errlen) {
  if (!cfg) {
    set_err(errbuf, errlen, "null config");
    return QFC_ERR_USAGE;
  }
  return guarded(errbuf, errlen, [&] {
    cfg->sim.validate();
    const qfc::Grid grid({cfg->sim.grid_n, cfg->sim.grid_x_max});
    qfc::SseEngine engine(grid, cfg->sim.model(), cfg->sim.dt);
    const qfc::TrajectoryRecord rec =
        qfc::run_trajectory(cfg->sim, engine, 0);
    const std::filesystem::path dir(cfg->sim.out_dir);
    std::filesystem::create_directories(dir);
    qfc::write_trajectory_csv((dir / "trajectory.csv").string(), rec);
    qfc::EnsembleStats st;
    st.completed = rec.aborted ? 0 : 1;
    st.aborted = rec.aborted ? 1 : 0;
    st.resets = rec.resets;
    st.failed = rec.aborted;
    qfc::write_run_json((dir / "run.json").string(), cfg->sim, st);
    if (rec.aborted) {
      set_err(errbuf, errlen, "trajectory aborted");
      return QFC_ERR_INTEGRATION;
    }
    return QFC_OK;
  });
}

namespace {

struct CheckReport {
  int failed = 0;
  void result(const char* name, bool ok, const std::string& detail = "") {
    if (ok) {
      std::printf("PASS %s\n", name);
    } else {
      ++failed;
      if (detail.empty())
        std::printf("FAIL %s\n", name);
      else
        std::printf("FAIL %s: %s\n", name, detail.c_str());
    }
  }
};

void check_variance_fixed_point(CheckReport& rep, const qfc::SimConfig& sim) {
  // free-particle steady state of the covariance flow, closed form
  qfc::FilterParams f = sim.filter();
  f.A = 0.0;
  f.B = 0.0;
  const double cs = f.hbar * std::sqrt((f.k + f.beta) / (4.0 * f.k));
  const double vxs = std::sqrt(cs / (4.0 * f.k));
  const double vps = 8.0 * f.k * cs * vxs;
  qfc::Belief b = sim.fresh_belief();
  const double dt = 1e-4;
  for (int i = 0; i < 400000; ++i) b = qfc::filter_step(b, f, 0.0, b.x * dt, dt);
  const double err = std::abs(b.c - cs) + std::abs(b.vx - vxs) +
                     std::abs(b.vp - vps);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "closed form (%.6f, %.6f, %.6f), reached (%.6f, %.6f, %.6f)",
                cs, vxs, vps, b.c, b.vx, b.vp);
  rep.result("variance_fixed_point", err < 1e-4, buf);
}

void check_gain_identity(CheckReport& rep, const qfc::SimConfig& sim) {
  double worst = 0.0;
  for (double x : {-3.0, -1.0, 0.0, 0.7, 2.5})
    for (double gam : {1.0, 10.0, sim.ctrl_Gamma}) {
      const qfc::ControlLaw law = qfc::lqg_feedback(
          x, 0.3, 0.0, 0.0, sim.potential_A, sim.potential_B, gam);
      const double slope = 2.0 * sim.potential_A -
                           12.0 * sim.potential_B * x * x;
      worst = std::max(worst,
                       std::abs(law.u_tilde * (law.u_tilde - 2.0 * slope) -
                                gam));
    }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max residual %.3g", worst);
  rep.result("gain_identity", worst < 1e-9, buf);
}

void check_linear_filter_match(CheckReport& rep, const qfc::SimConfig& sim) {
  qfc::FilterParams f = sim.filter();
  f.B = 0.0;
  const qfc::LinearSystemSpec spec = qfc::matched_linear_spec(f);
  qfc::Belief b{0.4, -0.2, 0.5, 0.5, 0.0};
  qfc::KbState s;
  s.m << b.x, b.p;
  s.P << b.vx, b.c, b.c, b.vp;
  qfc::GaussianStream gs(987654321u, 0);
  const double dt = 1e-3;
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double dW = gs.wiener(i, std::sqrt(dt));
    const double dq = b.x * dt + dW;
    const double u = -0.5 * b.x;
    b = qfc::filter_step(b, f, u, dq, dt);
    s = qfc::kalman_bucy_step(s, spec, u, dq, dt);
    worst = std::max({worst, std::abs(b.x - s.m(0)), std::abs(b.p - s.m(1)),
                      std::abs(b.vx - s.P(0, 0)), std::abs(b.vp - s.P(1, 1)),
                      std::abs(b.c - s.P(0, 1))});
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max deviation %.3g", worst);
  rep.result("linear_filter_match", worst < 1e-8, buf);
}

void check_density_step_structure(CheckReport& rep) {
  const qfc::Grid g({64, 8.0});
  qfc::SmeEngine eng(g, {2.0, 2.0 / 18.0, 0.3, 0.1}, 1e-3);
  qfc::QuantumState st;
  st.psi = qfc::gaussian_packet(g, -1.0, 0.5, 0.5);
  qfc::MatrixXcd rho = st.density();
  qfc::GaussianStream gs(24680u, 0);
  double herm = 0.0, tr = 0.0;
  for (int i = 0; i < 100; ++i) {
    eng.step(rho, 0.3, gs.wiener(i, std::sqrt(1e-3)));
    herm = std::max(herm, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    tr = std::max(tr, std::abs(rho.trace().real() - 1.0));
  }
  const double mineig = qfc::min_eigenvalue(rho);
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "hermiticity %.3g, trace drift %.3g, min eig %.3g", herm, tr,
                mineig);
  rep.result("density_step_structure",
             herm < 1e-10 && tr < 1e-10 && mineig > -1e-6, buf);
}

void check_determinism(CheckReport& rep, const qfc::SimConfig& sim) {
  qfc::SimConfig cfg = sim;
  cfg.grid_n = 64;
  cfg.grid_x_max = 8.0;
  cfg.t_end = 0.2;
  cfg.n_traj = 4;
  cfg.write_trajectories = false;
  const qfc::EnsembleStats a = qfc::run_ensemble(cfg, 1);
  const qfc::EnsembleStats b = qfc::run_ensemble(cfg, 4);
  bool same = a.rms.size() == b.rms.size();
  for (std::size_t i = 0; same && i < a.rms.size(); ++i)
    same = a.rms[i] == b.rms[i] && a.mean_energy[i] == b.mean_energy[i] &&
           a.mean_abs_u[i] == b.mean_abs_u[i];
  rep.result("thread_determinism", same,
             same ? "" : "1-thread and 4-thread reductions differ");
}

void check_record_consistency(CheckReport& rep, const qfc::SimConfig& sim) {
  qfc::SimConfig cfg = sim;
  cfg.grid_n = 64;
  cfg.t_end = 0.2;
  cfg.output_stride = 1;
  const qfc::Grid grid({cfg.grid_n, cfg.grid_x_max});
  qfc::SseEngine engine(grid, cfg.model(), cfg.dt);
  const qfc::TrajectoryRecord rec = qfc::run_trajectory(cfg, engine, 7);
  const qfc::GaussianStream gs(cfg.master_seed, 7);
  double worst = rec.aborted ? 1.0 : 0.0;
  const double sq = std::sqrt(cfg.dt);
  for (std::size_t i = 0; i < rec.t.size(); ++i) {
    const double dW0 = gs.wiener(2 * i, sq);
    worst = std::max(worst,
                     std::abs(rec.dq[i] - rec.x_true[i] * cfg.dt - dW0));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max residual %.3g", worst);
  rep.result("record_consistency", worst < 1e-12, buf);
}

}  // namespace

int qfc_check(const qfc_config* cfg, int* n_failed, char* errbuf,
              size_t errlen) {
  if (!cfg || !n_failed) {
    set_err(errbuf, errlen, "null argument");
    return QFC_ERR_USAGE;
  }
  *n_failed = 0;
  return guarded(errbuf, errlen, [&] {
    cfg->sim.validate();
    CheckReport rep;
    check_variance_fixed_point(rep, cfg->sim);
    check_gain_identity(rep, cfg->sim);
    check_linear_filter_match(rep, cfg->sim);
    check_density_step_structure(rep);
    check_determinism(rep, cfg->sim);
    check_record_consistency(rep, cfg->sim);
    *n_failed = rep.failed;
    return QFC_OK;
  });
}

int qfc_bellman(const char* problem_path, const char* out_dir, char* errbuf,
                size_t errlen) {
  if (!problem_path) {
    set_err(errbuf, errlen, "null problem path");
    return QFC_ERR_USAGE;
  }
  return guarded(errbuf, errlen, [&] {
    const qfc::BellmanProblem p = qfc::load_problem(problem_path);
    const qfc::BellmanResult r = qfc::bellman_solve(p);
    std::printf("cost = %.12g\n", r.cost);
    std::printf("first_control = %s\n",
                r.root.control >= 0 ? p.controls[r.root.control].name.c_str()
                                    : "none");
    if (out_dir && out_dir[0]) {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      std::ofstream out(dir / "strategy.json");
      if (!out)
        throw qfc::IntegrationError("cannot write strategy.json");
      out << qfc::strategy_to_json(r, p) << '\n';
    }
    return QFC_OK;
  });
}

int qfc_sweep(const qfc_config* cfg, char* errbuf, size_t errlen) {
  if (!cfg) {
    set_err(errbuf, errlen, "null config");
    return QFC_ERR_USAGE;
  }
  return guarded(errbuf, errlen, [&] {
    cfg->sim.validate();
    const std::vector<qfc::SweepRow> rows =
        qfc::run_sweep(cfg->sim, cfg->threads);
    const std::filesystem::path dir(cfg->sim.out_dir);
    std::filesystem::create_directories(dir);
    qfc::write_sweep_csv((dir / "sweep.csv").string(), rows);
    return QFC_OK;
  });
}

}  // extern "C"
