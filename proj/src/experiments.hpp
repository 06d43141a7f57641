#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "control.hpp"
#include "dynamics.hpp"
#include "estimator.hpp"
#include "grid.hpp"

namespace qfc {

// Closed-loop run description; field names double as config-file keys.
struct SimConfig {
  int grid_n = 256;
  double grid_x_max = 8.0;
  double potential_A = 2.0;
  double potential_B = 2.0 / 18.0;
  double model_k = 0.3;
  double model_beta = 0.1;
  double ctrl_Gamma = 100.0;
  double ctrl_u_max = 0.0;
  std::vector<double> schedule_times{0.0, 20.0};
  std::vector<double> schedule_targets{-3.0, 3.0};
  double dt = 1e-3;
  double t_end = 40.0;
  int n_traj = 200;
  std::uint64_t master_seed = 12345;
  double hbar = 1.0;
  double initial_x = -3.0;
  double initial_p = 0.0;
  double initial_vx = 0.5;
  double belief_x = -3.0;
  double belief_p = 0.0;
  double belief_vx = 0.5;
  double belief_vp = 0.5;
  double belief_c = 0.0;
  std::string out_dir = "out";
  bool write_trajectories = false;
  int output_stride = 10;
  double abort_threshold = 0.05;
  std::vector<double> sweep_k;
  std::vector<double> sweep_gamma;

  void validate() const;
  int n_steps() const;
  int n_samples() const;
  ModelParams model() const;
  FilterParams filter() const;
  ControlParams control() const;
  TargetSchedule schedule() const;
  Belief fresh_belief() const;
};

// key = value lines, # comments; unknown keys are errors.
SimConfig parse_config(const std::string& path);
void apply_config_entry(SimConfig& cfg, const std::string& key,
                        const std::string& value);

// Sampled every output_stride steps: state and belief before the step,
// control and record increment of the step itself.
struct TrajectoryRecord {
  std::vector<double> t, x_true, p_true, x_est, p_est, vx, vp, c, u, dq,
      energy;
  std::vector<double> var_x;  // spread of the true state, for diagnostics
  bool aborted = false;
  int resets = 0;
};

TrajectoryRecord run_trajectory(const SimConfig& cfg, SseEngine& engine,
                                std::uint64_t traj_id);

struct EnsembleStats {
  std::vector<double> t;
  std::vector<double> rms;         // rms of <x> about the target
  std::vector<double> mean_energy;
  std::vector<double> mean_purity;
  std::vector<double> mean_abs_u;
  std::vector<double> rms_full;    // includes per-state spread about the target
  int completed = 0;
  int aborted = 0;
  int resets = 0;
  bool failed = false;
  double wall_time_s = 0.0;
};

// Aborted trajectories are excluded from the averages; the run fails when
// their fraction exceeds abort_threshold. Reduction order is fixed, so the
// result is independent of the thread count.
EnsembleStats run_ensemble(const SimConfig& cfg, int threads);

double rms_deviation(const std::vector<double>& xs, double target);
double rms_deviation(const std::vector<double>& xs,
                     const std::vector<double>& targets);

// sqrt of the time average of vals^2 over t0 <= t < t1; NaN when empty.
double window_rms(const std::vector<double>& ts,
                  const std::vector<double>& vals, double t0, double t1);

struct RelaxationFit {
  double tau = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  bool ok = false;
};

// Least-squares a*exp(-(t - t_switch)/tau) + c on samples with t >= t_switch;
// log grid over tau with a golden-section refinement, (a, c) solved linearly.
RelaxationFit fit_relaxation(const std::vector<double>& ts,
                             const std::vector<double>& ys, double t_switch);

struct SweepRow {
  double k = 0.0;
  double Gamma = 0.0;
  double plateau_rms = 0.0;
  double tau = 0.0;
  int aborted = 0;
  int n_traj = 0;
};

// Cross product of sweep_k and sweep_gamma (falling back to the base values
// when a list is empty), one ensemble per cell.
std::vector<SweepRow> run_sweep(const SimConfig& base, int threads);

void write_stats_csv(const std::string& path, const EnsembleStats& stats);
void write_trajectory_csv(const std::string& path,
                          const TrajectoryRecord& rec);
void write_run_json(const std::string& path, const SimConfig& cfg,
                    const EnsembleStats& stats);
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows);

}  // namespace qfc
