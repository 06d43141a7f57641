#include "experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "rng.hpp"

namespace qfc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + s + "'");
  }
}

long long parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad seed value for " + key + ": '" + s + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ConfigError("bad boolean value for " + key + ": '" + s + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

void require(bool cond, const char* msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace

void apply_config_entry(SimConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "grid_n")
    cfg.grid_n = static_cast<int>(parse_int(key, value));
  else if (key == "grid_x_max")
    cfg.grid_x_max = parse_double(key, value);
  else if (key == "potential_A")
    cfg.potential_A = parse_double(key, value);
  else if (key == "potential_B")
    cfg.potential_B = parse_double(key, value);
  else if (key == "model_k")
    cfg.model_k = parse_double(key, value);
  else if (key == "model_beta")
    cfg.model_beta = parse_double(key, value);
  else if (key == "ctrl_Gamma")
    cfg.ctrl_Gamma = parse_double(key, value);
  else if (key == "ctrl_u_max")
    cfg.ctrl_u_max = parse_double(key, value);
  else if (key == "schedule_times")
    cfg.schedule_times = parse_list(key, value);
  else if (key == "schedule_targets")
    cfg.schedule_targets = parse_list(key, value);
  else if (key == "dt")
    cfg.dt = parse_double(key, value);
  else if (key == "t_end")
    cfg.t_end = parse_double(key, value);
  else if (key == "n_traj")
    cfg.n_traj = static_cast<int>(parse_int(key, value));
  else if (key == "master_seed")
    cfg.master_seed = parse_u64(key, value);
  else if (key == "hbar")
    cfg.hbar = parse_double(key, value);
  else if (key == "initial_x")
    cfg.initial_x = parse_double(key, value);
  else if (key == "initial_p")
    cfg.initial_p = parse_double(key, value);
  else if (key == "initial_vx")
    cfg.initial_vx = parse_double(key, value);
  else if (key == "belief_x")
    cfg.belief_x = parse_double(key, value);
  else if (key == "belief_p")
    cfg.belief_p = parse_double(key, value);
  else if (key == "belief_vx")
    cfg.belief_vx = parse_double(key, value);
  else if (key == "belief_vp")
    cfg.belief_vp = parse_double(key, value);
  else if (key == "belief_c")
    cfg.belief_c = parse_double(key, value);
  else if (key == "out_dir")
    cfg.out_dir = value;
  else if (key == "write_trajectories")
    cfg.write_trajectories = parse_bool(key, value);
  else if (key == "output_stride")
    cfg.output_stride = static_cast<int>(parse_int(key, value));
  else if (key == "abort_threshold")
    cfg.abort_threshold = parse_double(key, value);
  else if (key == "sweep_k")
    cfg.sweep_k = parse_list(key, value);
  else if (key == "sweep_gamma")
    cfg.sweep_gamma = parse_list(key, value);
  else
    throw ConfigError("unknown config key: " + key);
}

SimConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not key = value");
    apply_config_entry(cfg, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

void SimConfig::validate() const {
  require(grid_n >= 16 && (grid_n & (grid_n - 1)) == 0,
          "grid_n must be a power of two, at least 16");
  require(grid_x_max > 0.0, "grid_x_max must be positive");
  require(potential_B >= 0.0, "potential_B must be nonnegative");
  require(model_k > 0.0, "model_k must be positive");
  require(model_beta >= 0.0, "model_beta must be nonnegative");
  require(ctrl_Gamma >= 0.0, "ctrl_Gamma must be nonnegative");
  require(ctrl_u_max >= 0.0, "ctrl_u_max must be nonnegative");
  require(dt > 0.0, "dt must be positive");
  require(t_end >= dt, "t_end must be at least dt");
  require(n_traj >= 1, "n_traj must be at least 1");
  require(hbar > 0.0, "hbar must be positive");
  require(initial_vx > 0.0, "initial_vx must be positive");
  require(belief_vx > 0.0, "belief_vx must be positive");
  require(belief_vp > 0.0, "belief_vp must be positive");
  require(output_stride >= 1, "output_stride must be at least 1");
  require(abort_threshold >= 0.0 && abort_threshold <= 1.0,
          "abort_threshold must lie in [0, 1]");
  schedule().validate();
  require(schedule_times.front() <= 0.0,
          "schedule must start at or before t = 0");
  for (double k : sweep_k) require(k > 0.0, "sweep_k entries must be positive");
  for (double g : sweep_gamma)
    require(g >= 0.0, "sweep_gamma entries must be nonnegative");
}

int SimConfig::n_steps() const {
  return static_cast<int>(std::llround(t_end / dt));
}

int SimConfig::n_samples() const {
  return (n_steps() + output_stride - 1) / output_stride;
}

ModelParams SimConfig::model() const {
  return {potential_A, potential_B, model_k, model_beta};
}

FilterParams SimConfig::filter() const {
  return {potential_A, potential_B, model_k, model_beta, hbar};
}

ControlParams SimConfig::control() const { return {ctrl_Gamma, ctrl_u_max}; }

TargetSchedule SimConfig::schedule() const {
  return {schedule_times, schedule_targets};
}

Belief SimConfig::fresh_belief() const {
  return {belief_x, belief_p, belief_vx, belief_vp, belief_c};
}

TrajectoryRecord run_trajectory(const SimConfig& cfg, SseEngine& engine,
                                std::uint64_t traj_id) {
  const Grid& g = engine.grid();
  const int steps = cfg.n_steps();
  const int stride = cfg.output_stride;
  const double dt = cfg.dt;
  const double sq_dt = std::sqrt(dt);
  const FilterParams fp = cfg.filter();
  const ControlParams cp = cfg.control();
  const TargetSchedule sched = cfg.schedule();
  const Belief fresh = cfg.fresh_belief();

  TrajectoryRecord rec;
  const int n_samples = cfg.n_samples();
  for (auto* v : {&rec.t, &rec.x_true, &rec.p_true, &rec.x_est, &rec.p_est,
                  &rec.vx, &rec.vp, &rec.c, &rec.u, &rec.dq, &rec.energy,
                  &rec.var_x})
    v->reserve(n_samples);

  VectorXcd psi = gaussian_packet(g, cfg.initial_x, cfg.initial_p,
                                  cfg.initial_vx);
  Belief bel = fresh;
  GaussianStream gs(cfg.master_seed, traj_id);

  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    const double x_tgt = sched.at(t);
    const ControlLaw law = lqg_feedback(bel.x, bel.p, x_tgt, 0.0,
                                        cfg.potential_A, cfg.potential_B,
                                        cp.Gamma);
    const double u = clamp_control(law.u, cp.u_max);

    const bool sampling = (i % stride == 0);
    double xm = 0.0, pm = 0.0, vxs = 0.0, en = 0.0;
    Belief bel_pre = bel;
    if (sampling) {
      xm = engine.mean_x(psi);
      pm = engine.mean_p(psi);
      vxs = engine.var_x(psi);
      en = engine.energy(psi);
    }

    const double dW0 = gs.wiener(2 * static_cast<std::uint64_t>(i), sq_dt);
    const double dW1 = gs.wiener(2 * static_cast<std::uint64_t>(i) + 1, sq_dt);
    SseEngine::StepResult info;
    try {
      info = engine.step(psi, u, dW0, dW1);
    } catch (const IntegrationError&) {
      rec.aborted = true;
      break;
    }
    if (!std::isfinite(info.x_mean_pre)) {
      rec.aborted = true;
      break;
    }
    const double dq = record_increment(info.x_mean_pre, dt, dW0);
    bel = filter_step(bel, fp, u, dq, dt);
    if (belief_needs_reset(bel)) {
      bel = belief_reset(bel, fresh);
      ++rec.resets;
    }

    if (sampling) {
      rec.t.push_back(t);
      rec.x_true.push_back(xm);
      rec.p_true.push_back(pm);
      rec.x_est.push_back(bel_pre.x);
      rec.p_est.push_back(bel_pre.p);
      rec.vx.push_back(bel_pre.vx);
      rec.vp.push_back(bel_pre.vp);
      rec.c.push_back(bel_pre.c);
      rec.u.push_back(u);
      rec.dq.push_back(dq);
      rec.energy.push_back(en);
      rec.var_x.push_back(vxs);
    }
  }
  return rec;
}

namespace {

struct BlockPartial {
  std::vector<double> dev2, en, absu, full2;
  int completed = 0;
  int aborted = 0;
  int resets = 0;
};

std::string traj_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "traj_%04d.csv", index);
  return buf;
}

}  // namespace

EnsembleStats run_ensemble(const SimConfig& cfg, int threads) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const Grid grid({cfg.grid_n, cfg.grid_x_max});
  const int n_samples = cfg.n_samples();
  const int stride = cfg.output_stride;
  const TargetSchedule sched = cfg.schedule();

  std::vector<double> sample_t(n_samples), sample_target(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    sample_t[s] = static_cast<double>(s) * stride * cfg.dt;
    sample_target[s] = sched.at(sample_t[s]);
  }

  const std::filesystem::path out_dir(cfg.out_dir);
  const bool dump = cfg.write_trajectories && !cfg.out_dir.empty();
  if (dump) std::filesystem::create_directories(out_dir);

  constexpr int kBlock = 8;
  const int n_blocks = (cfg.n_traj + kBlock - 1) / kBlock;
  std::vector<BlockPartial> partials(n_blocks);
  std::atomic<int> next_block{0};
  std::atomic<bool> io_failed{false};

  int n_workers = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min(n_workers, n_blocks));

  auto worker = [&]() {
    const ModelParams mp = {cfg.potential_A, cfg.potential_B, cfg.model_k,
                            cfg.model_beta};
    SseEngine engine(grid, mp, cfg.dt);
    for (;;) {
      const int b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      BlockPartial& bp = partials[b];
      bp.dev2.assign(n_samples, 0.0);
      bp.en.assign(n_samples, 0.0);
      bp.absu.assign(n_samples, 0.0);
      bp.full2.assign(n_samples, 0.0);
      const int jmax = std::min(cfg.n_traj, (b + 1) * kBlock);
      for (int j = b * kBlock; j < jmax; ++j) {
        TrajectoryRecord rec =
            run_trajectory(cfg, engine, static_cast<std::uint64_t>(j));
        bp.resets += rec.resets;
        if (rec.aborted ||
            static_cast<int>(rec.t.size()) != n_samples) {
          ++bp.aborted;
          continue;
        }
        ++bp.completed;
        for (int s = 0; s < n_samples; ++s) {
          const double d = rec.x_true[s] - sample_target[s];
          bp.dev2[s] += d * d;
          bp.en[s] += rec.energy[s];
          bp.absu[s] += std::abs(rec.u[s]);
          bp.full2[s] += d * d + rec.var_x[s];
        }
        if (dump) {
          try {
            write_trajectory_csv((out_dir / traj_filename(j)).string(), rec);
          } catch (const std::exception&) {
            io_failed = true;
          }
        }
      }
    }
  };

  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (io_failed) throw IntegrationError("failed to write trajectory output");

  EnsembleStats st;
  st.t = sample_t;
  st.rms.assign(n_samples, 0.0);
  st.mean_energy.assign(n_samples, 0.0);
  st.mean_purity.assign(n_samples, 1.0);  // the generated states are pure
  st.mean_abs_u.assign(n_samples, 0.0);
  st.rms_full.assign(n_samples, 0.0);
  std::vector<double> dev2(n_samples, 0.0), en(n_samples, 0.0),
      absu(n_samples, 0.0), full2(n_samples, 0.0);
  for (const BlockPartial& bp : partials) {
    st.completed += bp.completed;
    st.aborted += bp.aborted;
    st.resets += bp.resets;
    for (int s = 0; s < n_samples; ++s) {
      dev2[s] += bp.dev2[s];
      en[s] += bp.en[s];
      absu[s] += bp.absu[s];
      full2[s] += bp.full2[s];
    }
  }
  if (st.completed > 0) {
    const double inv = 1.0 / st.completed;
    for (int s = 0; s < n_samples; ++s) {
      st.rms[s] = std::sqrt(dev2[s] * inv);
      st.mean_energy[s] = en[s] * inv;
      st.mean_abs_u[s] = absu[s] * inv;
      st.rms_full[s] = std::sqrt(full2[s] * inv);
    }
  }
  st.failed = st.completed == 0 ||
              st.aborted > cfg.abort_threshold * cfg.n_traj;
  st.wall_time_s = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
  return st;
}

double rms_deviation(const std::vector<double>& xs, double target) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  for (double x : xs) acc += (x - target) * (x - target);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

double rms_deviation(const std::vector<double>& xs,
                     const std::vector<double>& targets) {
  if (xs.empty() || xs.size() != targets.size())
    return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    acc += (xs[i] - targets[i]) * (xs[i] - targets[i]);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

double window_rms(const std::vector<double>& ts,
                  const std::vector<double>& vals, double t0, double t1) {
  double acc = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < ts.size() && i < vals.size(); ++i)
    if (ts[i] >= t0 && ts[i] < t1) {
      acc += vals[i] * vals[i];
      ++n;
    }
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(acc / n);
}

namespace {

struct TauFit {
  double sse = std::numeric_limits<double>::infinity();
  double a = 0.0;
  double c = 0.0;
};

TauFit fit_at_tau(const std::vector<double>& s, const std::vector<double>& y,
                  double tau) {
  const int n = static_cast<int>(s.size());
  double sff = 0.0, sf = 0.0, sfy = 0.0, sy = 0.0;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) {
    f[i] = std::exp(-s[i] / tau);
    sff += f[i] * f[i];
    sf += f[i];
    sfy += f[i] * y[i];
    sy += y[i];
  }
  const double det = sff * n - sf * sf;
  TauFit out;
  if (std::abs(det) < 1e-14 * std::max(1.0, sff * n)) return out;
  out.a = (sfy * n - sf * sy) / det;
  out.c = (sff * sy - sf * sfy) / det;
  out.sse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = out.a * f[i] + out.c - y[i];
    out.sse += r * r;
  }
  return out;
}

}  // namespace

RelaxationFit fit_relaxation(const std::vector<double>& ts,
                             const std::vector<double>& ys, double t_switch) {
  RelaxationFit fit;
  std::vector<double> s, y;
  for (std::size_t i = 0; i < ts.size() && i < ys.size(); ++i)
    if (ts[i] >= t_switch - 1e-12 && std::isfinite(ys[i])) {
      s.push_back(ts[i] - t_switch);
      y.push_back(ys[i]);
    }
  if (s.size() < 4) return fit;
  const double s_max = s.back();
  if (!(s_max > 0.0)) return fit;

  const double lo = std::log(s_max / 500.0);
  const double hi = std::log(s_max * 50.0);
  constexpr int kGrid = 80;
  int best = -1;
  double best_sse = std::numeric_limits<double>::infinity();
  auto tau_at = [&](int i) {
    return std::exp(lo + (hi - lo) * i / (kGrid - 1));
  };
  for (int i = 0; i < kGrid; ++i) {
    const TauFit tf = fit_at_tau(s, y, tau_at(i));
    if (tf.sse < best_sse) {
      best_sse = tf.sse;
      best = i;
    }
  }
  if (best < 0) return fit;
  const bool interior = best > 0 && best < kGrid - 1;

  // golden-section refinement in log(tau) between the bracketing grid points
  double a = best > 0 ? std::log(tau_at(best - 1)) : lo;
  double b = best < kGrid - 1 ? std::log(tau_at(best + 1)) : hi;
  constexpr double kGold = 0.61803398874989485;
  double x1 = b - kGold * (b - a);
  double x2 = a + kGold * (b - a);
  double f1 = fit_at_tau(s, y, std::exp(x1)).sse;
  double f2 = fit_at_tau(s, y, std::exp(x2)).sse;
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGold * (b - a);
      f1 = fit_at_tau(s, y, std::exp(x1)).sse;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGold * (b - a);
      f2 = fit_at_tau(s, y, std::exp(x2)).sse;
    }
  }
  const double tau = std::exp(0.5 * (a + b));
  const TauFit tf = fit_at_tau(s, y, tau);
  fit.tau = tau;
  fit.amplitude = tf.a;
  fit.offset = tf.c;
  fit.ok = interior && std::isfinite(tf.sse) && tf.a > 0.0 &&
           std::isfinite(tau);
  return fit;
}

std::vector<SweepRow> run_sweep(const SimConfig& base, int threads) {
  base.validate();
  std::vector<double> ks = base.sweep_k;
  if (ks.empty()) ks.push_back(base.model_k);
  std::vector<double> gammas = base.sweep_gamma;
  if (gammas.empty()) gammas.push_back(base.ctrl_Gamma);

  const double t_sw = base.schedule_times.size() > 1
                          ? base.schedule_times.back()
                          : base.t_end;
  const double plateau_lo = std::min(10.0, 0.5 * t_sw);

  std::vector<SweepRow> rows;
  for (double k : ks)
    for (double g : gammas) {
      SimConfig cfg = base;
      cfg.model_k = k;
      cfg.ctrl_Gamma = g;
      cfg.write_trajectories = false;
      const EnsembleStats st = run_ensemble(cfg, threads);
      SweepRow row;
      row.k = k;
      row.Gamma = g;
      row.plateau_rms = window_rms(st.t, st.rms, plateau_lo, t_sw);
      const RelaxationFit fit = fit_relaxation(st.t, st.rms, t_sw);
      row.tau = fit.ok ? fit.tau : std::numeric_limits<double>::quiet_NaN();
      row.aborted = st.aborted;
      row.n_traj = cfg.n_traj;
      rows.push_back(row);
    }
  return rows;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IntegrationError("cannot open output file: " + path);
  out << std::setprecision(12);
  return out;
}

}  // namespace

void write_stats_csv(const std::string& path, const EnsembleStats& stats) {
  auto out = open_out(path);
  out << "t,rms,mean_energy,mean_purity,mean_abs_u\n";
  for (std::size_t i = 0; i < stats.t.size(); ++i)
    out << stats.t[i] << ',' << stats.rms[i] << ',' << stats.mean_energy[i]
        << ',' << stats.mean_purity[i] << ',' << stats.mean_abs_u[i] << '\n';
}

void write_trajectory_csv(const std::string& path,
                          const TrajectoryRecord& rec) {
  auto out = open_out(path);
  out << "t,x_true,p_true,x_est,p_est,Vx,Vp,C,u,dQ,energy\n";
  for (std::size_t i = 0; i < rec.t.size(); ++i)
    out << rec.t[i] << ',' << rec.x_true[i] << ',' << rec.p_true[i] << ','
        << rec.x_est[i] << ',' << rec.p_est[i] << ',' << rec.vx[i] << ','
        << rec.vp[i] << ',' << rec.c[i] << ',' << rec.u[i] << ','
        << rec.dq[i] << ',' << rec.energy[i] << '\n';
}

void write_run_json(const std::string& path, const SimConfig& cfg,
                    const EnsembleStats& stats) {
  nlohmann::json j;
  nlohmann::json c;
  c["grid_n"] = cfg.grid_n;
  c["grid_x_max"] = cfg.grid_x_max;
  c["potential_A"] = cfg.potential_A;
  c["potential_B"] = cfg.potential_B;
  c["model_k"] = cfg.model_k;
  c["model_beta"] = cfg.model_beta;
  c["ctrl_Gamma"] = cfg.ctrl_Gamma;
  c["ctrl_u_max"] = cfg.ctrl_u_max;
  c["schedule_times"] = cfg.schedule_times;
  c["schedule_targets"] = cfg.schedule_targets;
  c["dt"] = cfg.dt;
  c["t_end"] = cfg.t_end;
  c["n_traj"] = cfg.n_traj;
  c["master_seed"] = cfg.master_seed;
  c["hbar"] = cfg.hbar;
  c["initial_x"] = cfg.initial_x;
  c["initial_p"] = cfg.initial_p;
  c["initial_vx"] = cfg.initial_vx;
  c["belief_x"] = cfg.belief_x;
  c["belief_p"] = cfg.belief_p;
  c["belief_vx"] = cfg.belief_vx;
  c["belief_vp"] = cfg.belief_vp;
  c["belief_c"] = cfg.belief_c;
  c["out_dir"] = cfg.out_dir;
  c["write_trajectories"] = cfg.write_trajectories;
  c["output_stride"] = cfg.output_stride;
  c["abort_threshold"] = cfg.abort_threshold;
  c["sweep_k"] = cfg.sweep_k;
  c["sweep_gamma"] = cfg.sweep_gamma;
  j["config"] = c;
  j["seed"] = cfg.master_seed;
  j["n_traj"] = cfg.n_traj;
  j["completed"] = stats.completed;
  j["aborted"] = stats.aborted;
  j["resets"] = stats.resets;
  j["failed"] = stats.failed;
  j["wall_time_s"] = stats.wall_time_s;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "k,Gamma,plateau_rms,tau,aborted,n_traj\n";
  for (const auto& r : rows)
    out << r.k << ',' << r.Gamma << ',' << r.plateau_rms << ',' << r.tau
        << ',' << r.aborted << ',' << r.n_traj << '\n';
}

}  // namespace qfc
