#include "bellman.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

namespace qfc {

namespace {

constexpr double kBranchEps = 1e-12;
constexpr double kKrausTol = 1e-10;

double re_trace_prod(const MatrixXcd& a, const MatrixXcd& rho) {
  // tr(a rho), real part; a Hermitian observable
  cplx t(0.0, 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t += a(i, j) * rho(j, i);
  return t.real();
}

void require_hermitian(const MatrixXcd& m, const char* what) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kKrausTol)
    throw ConfigError(std::string(what) + " must be Hermitian");
}

std::pair<double, StrategyNode> solve_from(const BellmanProblem& p,
                                           const MatrixXcd& rho, int step) {
  if (step == p.n_steps)
    return {re_trace_prod(p.final_cost, rho), StrategyNode{}};
  const double stage = re_trace_prod(p.stage_cost, rho) * p.dt;
  double best = std::numeric_limits<double>::infinity();
  StrategyNode best_node;
  for (int ci = 0; ci < static_cast<int>(p.controls.size()); ++ci) {
    const auto& ctrl = p.controls[ci];
    double total = stage + ctrl.cost * p.dt;
    std::vector<StrategyNode> branches(ctrl.kraus.size());
    for (std::size_t y = 0; y < ctrl.kraus.size(); ++y) {
      MatrixXcd sig = ctrl.kraus[y] * rho * ctrl.kraus[y].adjoint();
      const double py = sig.trace().real();
      if (py <= kBranchEps) continue;
      auto [v, node] = solve_from(p, MatrixXcd(sig / py), step + 1);
      total += py * v;
      branches[y] = std::move(node);
    }
    if (total < best) {
      best = total;
      best_node.control = ci;
      best_node.branches = std::move(branches);
    }
  }
  return {best, std::move(best_node)};
}

double eval_from(const BellmanProblem& p, const StrategyNode* node,
                 const MatrixXcd& rho, int step) {
  if (step == p.n_steps) return re_trace_prod(p.final_cost, rho);
  const auto& ctrl = p.controls[node->control];
  double total = re_trace_prod(p.stage_cost, rho) * p.dt + ctrl.cost * p.dt;
  for (std::size_t y = 0; y < ctrl.kraus.size(); ++y) {
    MatrixXcd sig = ctrl.kraus[y] * rho * ctrl.kraus[y].adjoint();
    const double py = sig.trace().real();
    if (py <= kBranchEps) continue;
    const StrategyNode* child =
        node->branches.empty() ? nullptr : &node->branches[y];
    total += py * eval_from(p, child, MatrixXcd(sig / py), step + 1);
  }
  return total;
}

// every decision tree of the given depth, outcome branches expanded
std::vector<StrategyNode> all_trees(const BellmanProblem& p, int steps) {
  std::vector<StrategyNode> out;
  if (steps <= 0) return out;
  for (int ci = 0; ci < static_cast<int>(p.controls.size()); ++ci) {
    const int ny = static_cast<int>(p.controls[ci].kraus.size());
    if (steps == 1) {
      StrategyNode node;
      node.control = ci;
      out.push_back(std::move(node));
      continue;
    }
    const std::vector<StrategyNode> subs = all_trees(p, steps - 1);
    std::vector<std::vector<StrategyNode>> partial;
    partial.emplace_back();
    for (int y = 0; y < ny; ++y) {
      std::vector<std::vector<StrategyNode>> next;
      for (const auto& pref : partial)
        for (const auto& s : subs) {
          auto ext = pref;
          ext.push_back(s);
          next.push_back(std::move(ext));
        }
      partial = std::move(next);
    }
    for (auto& combo : partial) {
      StrategyNode node;
      node.control = ci;
      node.branches = std::move(combo);
      out.push_back(std::move(node));
    }
  }
  return out;
}

MatrixXcd json_matrix(const nlohmann::json& j, int dim, const char* what) {
  if (!j.contains("re"))
    throw ConfigError(std::string(what) + ": missing re array");
  MatrixXcd m = MatrixXcd::Zero(dim, dim);
  const auto& re = j.at("re");
  if (static_cast<int>(re.size()) != dim)
    throw ConfigError(std::string(what) + ": wrong row count");
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(re[i].size()) != dim)
      throw ConfigError(std::string(what) + ": wrong column count");
    for (int jx = 0; jx < dim; ++jx)
      m(i, jx) = cplx(re[i][jx].get<double>(), 0.0);
  }
  if (j.contains("im")) {
    const auto& im = j.at("im");
    if (static_cast<int>(im.size()) != dim)
      throw ConfigError(std::string(what) + ": wrong imaginary row count");
    for (int i = 0; i < dim; ++i)
      for (int jx = 0; jx < dim; ++jx)
        m(i, jx) += cplx(0.0, im[i][jx].get<double>());
  }
  return m;
}

nlohmann::json node_json(const StrategyNode& n, const BellmanProblem& p) {
  if (n.control < 0) return nullptr;
  nlohmann::json j;
  j["control"] = p.controls[n.control].name;
  if (!n.branches.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : n.branches) arr.push_back(node_json(b, p));
    j["branches"] = arr;
  }
  return j;
}

}  // namespace

void validate_problem(const BellmanProblem& p) {
  if (p.dim < 1) throw ConfigError("problem dim must be >= 1");
  if (p.n_steps < 0) throw ConfigError("n_steps must be >= 0");
  if (!(p.dt > 0.0)) throw ConfigError("dt must be positive");
  if (p.rho0.rows() != p.dim || p.rho0.cols() != p.dim)
    throw ConfigError("rho0 has wrong shape");
  require_hermitian(p.rho0, "rho0");
  if (std::abs(p.rho0.trace().real() - 1.0) > kKrausTol)
    throw ConfigError("rho0 must have unit trace");
  if (min_eigenvalue(p.rho0) < -kKrausTol)
    throw ConfigError("rho0 must be positive semidefinite");
  require_hermitian(p.stage_cost, "stage cost");
  require_hermitian(p.final_cost, "final cost");
  if (p.controls.empty()) throw ConfigError("need at least one control");
  for (const auto& c : p.controls) {
    if (c.kraus.empty())
      throw ConfigError("control " + c.name + " has no Kraus operators");
    MatrixXcd sum = MatrixXcd::Zero(p.dim, p.dim);
    for (const auto& k : c.kraus) {
      if (k.rows() != p.dim || k.cols() != p.dim)
        throw ConfigError("control " + c.name + " has wrong Kraus shape");
      sum += k.adjoint() * k;
    }
    if ((sum - MatrixXcd::Identity(p.dim, p.dim)).cwiseAbs().maxCoeff() >
        kKrausTol)
      throw ConfigError("control " + c.name + " is not trace preserving");
  }
}

BellmanResult bellman_solve(const BellmanProblem& p) {
  validate_problem(p);
  auto [cost, root] = solve_from(p, p.rho0, 0);
  BellmanResult r;
  r.cost = cost;
  r.root = std::move(root);
  return r;
}

double evaluate_strategy(const BellmanProblem& p, const StrategyNode& root) {
  return eval_from(p, &root, p.rho0, 0);
}

double brute_force_search(const BellmanProblem& p) {
  validate_problem(p);
  if (p.n_steps == 0) return re_trace_prod(p.final_cost, p.rho0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& tree : all_trees(p, p.n_steps))
    best = std::min(best, eval_from(p, &tree, p.rho0, 0));
  return best;
}

BellmanProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("problem file parse error: ") + e.what());
  }
  BellmanProblem p;
  try {
    p.dim = j.at("dim").get<int>();
    p.n_steps = j.at("n_steps").get<int>();
    p.dt = j.value("dt", 1.0);
    p.rho0 = json_matrix(j.at("rho0"), p.dim, "rho0");
    p.final_cost = json_matrix(j.at("final_cost"), p.dim, "final_cost");
    p.stage_cost = j.contains("stage_cost")
                       ? json_matrix(j.at("stage_cost"), p.dim, "stage_cost")
                       : MatrixXcd::Zero(p.dim, p.dim);
    for (const auto& cj : j.at("controls")) {
      ControlOption c;
      c.name = cj.value("name", "control_" + std::to_string(p.controls.size()));
      c.cost = cj.value("cost", 0.0);
      for (const auto& kj : cj.at("kraus"))
        c.kraus.push_back(json_matrix(kj, p.dim, c.name.c_str()));
      p.controls.push_back(std::move(c));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("problem file structure error: ") + e.what());
  }
  validate_problem(p);
  return p;
}

std::string strategy_to_json(const BellmanResult& r, const BellmanProblem& p) {
  nlohmann::json j;
  j["cost"] = r.cost;
  j["first_control"] =
      r.root.control >= 0 ? p.controls[r.root.control].name : "";
  j["tree"] = node_json(r.root, p);
  return j.dump(2);
}

}  // namespace qfc
