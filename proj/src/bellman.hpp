#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "grid.hpp"

namespace qfc {

// One selectable operation: a Kraus set (single element = deterministic map,
// several = measurement with that many outcomes), plus an optional scalar
// running cost charged per step when chosen.
struct ControlOption {
  std::string name;
  std::vector<MatrixXcd> kraus;
  double cost = 0.0;
};

struct BellmanProblem {
  int dim = 2;
  int n_steps = 1;
  double dt = 1.0;
  MatrixXcd rho0;
  MatrixXcd stage_cost;  // observable charged dt * tr(rho S) each step
  MatrixXcd final_cost;  // observable charged tr(rho F) at the horizon
  std::vector<ControlOption> controls;
};

// Completeness sum_y K_y^dag K_y = I to 1e-10, Hermitian costs, physical rho0.
void validate_problem(const BellmanProblem& p);

// Decision tree: which control to apply, then one subtree per outcome
// (empty subtree = branch of negligible probability, never visited).
struct StrategyNode {
  int control = -1;
  std::vector<StrategyNode> branches;
};

struct BellmanResult {
  double cost = 0.0;
  StrategyNode root;
};

// Backward dynamic programming over belief states; outcome branches with
// probability <= 1e-12 are excluded.
BellmanResult bellman_solve(const BellmanProblem& p);

// Independent oracle: explicitly enumerates every adaptive strategy tree and
// evaluates each by forward propagation; exponential, for small instances.
double brute_force_search(const BellmanProblem& p);

// Expected cost of a fixed decision tree (shared by the oracle and tests).
double evaluate_strategy(const BellmanProblem& p, const StrategyNode& root);

BellmanProblem load_problem(const std::string& path);
std::string strategy_to_json(const BellmanResult& r,
                             const BellmanProblem& p);

}  // namespace qfc
