#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace svrdn {

// Tube regression with per-sample insensitivity eps and slack penalty c,
// precomputed kernel, no bias term. Solved in the dual: minimize
//   1/2 a'Ka - y'a + sum_i eps_i |a_i|   subject to |a_i| <= c_i.
// The kernel matrix is shared (patches at the same size reuse one Gram
// matrix), hence the shared_ptr.
struct SvrProblem {
    std::shared_ptr<const Eigen::MatrixXd> K;
    Eigen::VectorXd y;
    Eigen::VectorXd eps;
    Eigen::VectorXd c;

    int n() const { return static_cast<int>(y.size()); }
    void validate() const;
};

struct SvrSolution {
    Eigen::VectorXd alpha;    // signed dual coefficients, |alpha_i| <= c_i
    Eigen::VectorXd estimate; // K * alpha
    double objective = 0.0;
    double kkt_max_violation = 0.0;
    int iterations = 0;
};

// Stationarity conditions, with r = y - K*alpha:
//   alpha_i = 0        requires |r_i| <= eps_i
//   alpha_i in (0,c)   requires r_i = eps_i      (mirrored for negative)
//   alpha_i = c        requires r_i >= eps_i
double kkt_violation(const SvrProblem& prob, const Eigen::VectorXd& alpha,
                     const Eigen::VectorXd& estimate);

// Exact cyclic coordinate descent with an active-set pass. max_iter counts
// full sweeps. Throws on non-convergence.
SvrSolution solve(const SvrProblem& prob, double tol = 1e-6, int max_iter = 20000);

// Independent accelerated proximal-gradient solver, for validation only.
// Limited to n <= 64.
SvrSolution reference_solve(const SvrProblem& prob, double tol = 1e-8);

// Per-sample classification of a solution against the conditions above.
struct KktReport {
    std::vector<std::string> state; // inside-tube / on-tube / at-bound / bound-violating
    std::vector<double> violation;
    double max_violation = 0.0;
};

KktReport kkt_report(const SvrProblem& prob, const SvrSolution& sol);

double svr_objective(const SvrProblem& prob, const Eigen::VectorXd& alpha);

} // namespace svrdn
