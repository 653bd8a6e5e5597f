#include "svrdn/kernel.hpp"
#include "svrdn/rng.hpp"
#include "svrdn/svr.hpp"

#include <catch2/catch.hpp>

#include <memory>

using namespace svrdn;

namespace {

SvrProblem one_sample(double y, double eps, double c) {
    SvrProblem p;
    auto K = std::make_shared<Eigen::MatrixXd>(1, 1);
    (*K)(0, 0) = 1.0;
    p.K = K;
    p.y = Eigen::VectorXd::Constant(1, y);
    p.eps = Eigen::VectorXd::Constant(1, eps);
    p.c = Eigen::VectorXd::Constant(1, c);
    return p;
}

SvrProblem random_problem(int n, Rng& rng, double eps_scale, double c_scale) {
    // PSD Gram via an anisotropic kernel over scattered positions (unique).
    std::vector<PixelPos> pos;
    int side = 4 * n;
    std::vector<char> used(static_cast<size_t>(side) * side, 0);
    while (static_cast<int>(pos.size()) < n) {
        int r = rng.uniform_int(0, side - 1), c = rng.uniform_int(0, side - 1);
        if (used[static_cast<size_t>(r) * side + c]) continue;
        used[static_cast<size_t>(r) * side + c] = 1;
        pos.emplace_back(r, c);
    }
    double sigma2 = rng.uniform(0.8, 2.0);
    KernelSpec spec{sigma2 * rng.uniform(1.0, 3.0), sigma2, rng.uniform(0.0, 3.1), false};
    SvrProblem p;
    p.K = std::make_shared<Eigen::MatrixXd>(kernel_matrix(pos, spec));
    p.y.resize(n);
    p.eps.resize(n);
    p.c.resize(n);
    for (int i = 0; i < n; ++i) {
        p.y[i] = 30.0 * rng.gaussian();
        p.eps[i] = eps_scale * rng.uniform(0.2, 1.5);
        p.c[i] = c_scale * rng.uniform(0.5, 2.0);
    }
    return p;
}

} // namespace

TEST_CASE("single sample solution is analytic") {
    // K = [1], y = 5, eps = 1, huge c: alpha = y - eps = 4, estimate 4.
    SvrProblem p = one_sample(5.0, 1.0, 100.0);
    SvrSolution s = solve(p);
    REQUIRE(s.alpha[0] == Approx(4.0).margin(1e-8));
    REQUIRE(s.estimate[0] == Approx(4.0).margin(1e-8));
    REQUIRE(s.objective == Approx(0.5 * 16.0 - 20.0 + 4.0).margin(1e-8));

    // Negative side mirrors.
    SvrSolution sn = solve(one_sample(-5.0, 1.0, 100.0));
    REQUIRE(sn.alpha[0] == Approx(-4.0).margin(1e-8));

    // The box clamps when c binds before the tube.
    SvrSolution sc = solve(one_sample(5.0, 1.0, 2.5));
    REQUIRE(sc.alpha[0] == Approx(2.5).margin(1e-8));
}

TEST_CASE("tube wider than every target returns the zero solution") {
    Rng rng(17);
    SvrProblem p = random_problem(16, rng, 1.0, 50.0);
    double ymax = p.y.cwiseAbs().maxCoeff();
    p.eps = Eigen::VectorXd::Constant(16, ymax * 1.0001);
    SvrSolution s = solve(p);
    REQUIRE(s.alpha.cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(s.objective == 0.0);
}

TEST_CASE("vanishing tube with a loose box interpolates the targets") {
    Rng rng(23);
    SvrProblem p = random_problem(12, rng, 0.0, 0.0);
    p.eps.setZero();
    p.c = Eigen::VectorXd::Constant(12, 1e6);
    SvrSolution s = solve(p, 1e-10, 200000);
    REQUIRE((s.estimate - p.y).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("solver agrees with the independent reference on random problems") {
    Rng rng(31);
    int checked = 0;
    for (int n : {2, 8, 32}) {
        for (int rep = 0; rep < 25; ++rep) {
            SvrProblem p = random_problem(n, rng, rng.uniform(0.5, 8.0), 40.0);
            SvrSolution a = solve(p, 1e-8);
            SvrSolution b = reference_solve(p, 1e-9);
            double scale = std::max(1.0, std::abs(b.objective));
            REQUIRE(std::abs(a.objective - b.objective) / scale < 1e-6);
            REQUIRE((a.estimate - b.estimate).cwiseAbs().maxCoeff() < 1e-5);
            REQUIRE(kkt_violation(p, a.alpha, a.estimate) < 1e-6);
            ++checked;
        }
    }
    REQUIRE(checked == 75);
}

TEST_CASE("uniformly widening the tube never grows the coefficients") {
    Rng rng(37);
    SvrProblem p = random_problem(20, rng, 2.0, 30.0);
    SvrSolution base = solve(p, 1e-9);
    SvrProblem wider = p;
    wider.eps = p.eps.array() + 1.5;
    SvrSolution w = solve(wider, 1e-9);
    REQUIRE(w.alpha.lpNorm<1>() <= base.alpha.lpNorm<1>() + 1e-6);
    // And the support shrinks or stays.
    int nz_base = 0, nz_wide = 0;
    for (int i = 0; i < 20; ++i) {
        nz_base += base.alpha[i] != 0.0;
        nz_wide += w.alpha[i] != 0.0;
    }
    REQUIRE(nz_wide <= nz_base);
}

TEST_CASE("solution scales with the targets when nothing saturates") {
    Rng rng(41);
    SvrProblem p = random_problem(10, rng, 1.0, 1e5);
    SvrSolution s1 = solve(p, 1e-10);
    SvrProblem p2 = p;
    p2.y *= 2.0;
    p2.eps *= 2.0;
    SvrSolution s2 = solve(p2, 1e-10);
    REQUIRE((s2.alpha - 2.0 * s1.alpha).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("inactive samples produce exact zeros") {
    Rng rng(43);
    SvrProblem p = random_problem(24, rng, 6.0, 30.0);
    SvrSolution s = solve(p, 1e-8);
    int exact_zero = 0;
    for (int i = 0; i < 24; ++i) exact_zero += s.alpha[i] == 0.0;
    REQUIRE(exact_zero > 0);
}

TEST_CASE("state report classifies every regime") {
    SvrProblem p = one_sample(5.0, 1.0, 2.5);
    SvrSolution s = solve(p);
    KktReport rep = kkt_report(p, s);
    REQUIRE(rep.state[0] == "at-bound");

    SvrSolution interior = solve(one_sample(5.0, 1.0, 100.0));
    REQUIRE(kkt_report(one_sample(5.0, 1.0, 100.0), interior).state[0] == "on-tube");

    SvrSolution zero = solve(one_sample(0.5, 1.0, 100.0));
    REQUIRE(kkt_report(one_sample(0.5, 1.0, 100.0), zero).state[0] == "inside-tube");

    SvrSolution corrupt = interior;
    corrupt.alpha[0] = 150.0;
    corrupt.estimate[0] = 150.0;
    KktReport bad = kkt_report(one_sample(5.0, 1.0, 100.0), corrupt);
    REQUIRE(bad.state[0] == "bound-violating");
    REQUIRE(bad.max_violation > 1.0);
}

TEST_CASE("problem validation rejects malformed inputs") {
    SvrProblem p = one_sample(5.0, 1.0, 2.0);
    p.eps[0] = -0.1;
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    p = one_sample(5.0, 1.0, 2.0);
    p.c[0] = 0.0;
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    p = one_sample(5.0, 1.0, 2.0);
    p.y.resize(2);
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    p = one_sample(5.0, 1.0, 2.0);
    auto K = std::make_shared<Eigen::MatrixXd>(2, 2);
    *K << 1.0, 0.5, 0.2, 1.0; // asymmetric
    p.K = K;
    p.y = Eigen::VectorXd::Constant(2, 1.0);
    p.eps = Eigen::VectorXd::Constant(2, 0.1);
    p.c = Eigen::VectorXd::Constant(2, 1.0);
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("reference solver refuses oversized problems") {
    Rng rng(47);
    SvrProblem p = random_problem(65, rng, 1.0, 10.0);
    REQUIRE_THROWS_AS(reference_solve(p), std::invalid_argument);
}
