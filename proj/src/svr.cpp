#include "svrdn/svr.hpp"

#include <cmath>
#include <stdexcept>

namespace svrdn {

namespace {

double soft(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

double clip(double z, double lim) { return std::max(-lim, std::min(lim, z)); }

double sample_violation(double alpha, double r, double eps, double c) {
    if (alpha == 0.0) return std::max(0.0, std::abs(r) - eps);
    if (alpha > 0.0) {
        if (alpha >= c) return std::max(std::max(0.0, eps - r), alpha - c);
        return std::abs(r - eps);
    }
    if (alpha <= -c) return std::max(std::max(0.0, eps + r), -c - alpha);
    return std::abs(r + eps);
}

} // namespace

void SvrProblem::validate() const {
    if (!K) throw std::invalid_argument("SvrProblem: missing kernel matrix");
    int n = static_cast<int>(y.size());
    if (n < 1 || K->rows() != n || K->cols() != n || eps.size() != n || c.size() != n)
        throw std::invalid_argument("SvrProblem: dimension mismatch");
    for (int i = 0; i < n; ++i) {
        if (!(eps[i] >= 0.0)) throw std::invalid_argument("SvrProblem: eps must be >= 0");
        if (!(c[i] > 0.0)) throw std::invalid_argument("SvrProblem: c must be > 0");
        if (!((*K)(i, i) > 0.0))
            throw std::invalid_argument("SvrProblem: kernel diagonal must be positive");
    }
    double asym = ((*K) - K->transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, K->cwiseAbs().maxCoeff()))
        throw std::invalid_argument("SvrProblem: kernel matrix not symmetric");
}

double svr_objective(const SvrProblem& prob, const Eigen::VectorXd& alpha) {
    return 0.5 * alpha.dot((*prob.K) * alpha) - prob.y.dot(alpha) +
           prob.eps.dot(alpha.cwiseAbs());
}

double kkt_violation(const SvrProblem& prob, const Eigen::VectorXd& alpha,
                     const Eigen::VectorXd& estimate) {
    double worst = 0.0;
    for (int i = 0; i < prob.n(); ++i) {
        double r = prob.y[i] - estimate[i];
        worst = std::max(worst, sample_violation(alpha[i], r, prob.eps[i], prob.c[i]));
    }
    return worst;
}

SvrSolution solve(const SvrProblem& prob, double tol, int max_iter) {
    prob.validate();
    int n = prob.n();
    const Eigen::MatrixXd& K = *prob.K;

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n); // K * alpha, kept incrementally
    std::vector<char> active(n, 1);

    auto update_coord = [&](int i) {
        double kii = K(i, i);
        double z = prob.y[i] - (q[i] - kii * alpha[i]);
        double next = clip(soft(z, prob.eps[i]) / kii, prob.c[i]);
        double delta = next - alpha[i];
        if (delta != 0.0) {
            q.noalias() += K.col(i) * delta;
            alpha[i] = next;
        }
        return std::abs(delta);
    };

    int sweeps = 0;
    double worst = 0.0;
    while (true) {
        // Sweep the active set until it stops moving, then rescan everything.
        double moved = 0.0;
        for (int i = 0; i < n; ++i)
            if (active[i]) moved = std::max(moved, update_coord(i));
        ++sweeps;
        if (sweeps >= max_iter)
            throw std::runtime_error("svr solve: not converged within max_iter sweeps");
        if (moved > 0.1 * tol) {
            for (int i = 0; i < n; ++i)
                if (active[i] && alpha[i] == 0.0 &&
                    sample_violation(0.0, prob.y[i] - q[i], prob.eps[i], prob.c[i]) == 0.0)
                    active[i] = 0;
            continue;
        }
        worst = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = sample_violation(alpha[i], prob.y[i] - q[i], prob.eps[i], prob.c[i]);
            if (v > tol) active[i] = 1;
            worst = std::max(worst, v);
        }
        if (worst <= tol) break;
    }

    SvrSolution sol;
    sol.alpha = std::move(alpha);
    sol.estimate = K * sol.alpha;
    sol.objective = svr_objective(prob, sol.alpha);
    sol.kkt_max_violation = kkt_violation(prob, sol.alpha, sol.estimate);
    sol.iterations = sweeps;
    return sol;
}

SvrSolution reference_solve(const SvrProblem& prob, double tol) {
    prob.validate();
    int n = prob.n();
    if (n > 64) throw std::invalid_argument("reference_solve: problem too large (n > 64)");
    const Eigen::MatrixXd& K = *prob.K;

    // PSD check is affordable at this size and guards the oracle's premise.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    double lmax = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(lmax, 1.0))
        throw std::invalid_argument("reference_solve: kernel matrix not PSD");
    double step = 1.0 / (lmax * 1.001 + 1e-12);

    auto prox = [&](Eigen::VectorXd w) {
        for (int i = 0; i < n; ++i) w[i] = clip(soft(w[i], step * prob.eps[i]), prob.c[i]);
        return w;
    };

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n), z = x;
    double theta = 1.0;
    double fprev = svr_objective(prob, x);
    int it = 0;
    const int cap = 2000000;
    for (; it < cap; ++it) {
        Eigen::VectorXd grad = K * z - prob.y;
        Eigen::VectorXd xn = prox(z - step * grad);
        double th_n = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        z = xn + ((theta - 1.0) / th_n) * (xn - x);
        x = std::move(xn);
        theta = th_n;
        if (it % 64 == 0) {
            double f = svr_objective(prob, x);
            if (f > fprev) { // adaptive restart keeps momentum honest
                z = x;
                theta = 1.0;
            }
            fprev = f;
            if (kkt_violation(prob, x, K * x) <= tol) break;
        }
    }
    if (it >= cap) throw std::runtime_error("reference_solve: not converged");

    SvrSolution sol;
    sol.alpha = std::move(x);
    sol.estimate = K * sol.alpha;
    sol.objective = svr_objective(prob, sol.alpha);
    sol.kkt_max_violation = kkt_violation(prob, sol.alpha, sol.estimate);
    sol.iterations = it;
    return sol;
}

KktReport kkt_report(const SvrProblem& prob, const SvrSolution& sol) {
    prob.validate();
    if (sol.alpha.size() != prob.n() || sol.estimate.size() != prob.n())
        throw std::invalid_argument("kkt_report: shape mismatch");
    KktReport rep;
    rep.state.reserve(prob.n());
    rep.violation.reserve(prob.n());
    for (int i = 0; i < prob.n(); ++i) {
        double a = sol.alpha[i], c = prob.c[i];
        double r = prob.y[i] - sol.estimate[i];
        const char* s;
        if (std::abs(a) > c)
            s = "bound-violating";
        else if (a == 0.0)
            s = "inside-tube";
        else if (std::abs(a) == c)
            s = "at-bound";
        else
            s = "on-tube";
        rep.state.emplace_back(s);
        rep.violation.push_back(sample_violation(a, r, prob.eps[i], c));
        rep.max_violation = std::max(rep.max_violation, rep.violation.back());
    }
    return rep;
}

} // namespace svrdn
