#include "svrdn/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace svrdn {

namespace {

struct Metric {
    double ca, sa, inv1, inv2;

    explicit Metric(const KernelSpec& spec) {
        double s1 = spec.sigma1, s2 = spec.sigma2;
        if (spec.isotropic) s1 = s2 = 0.5 * (spec.sigma1 + spec.sigma2);
        ca = std::cos(spec.alpha);
        sa = std::sin(spec.alpha);
        inv1 = 1.0 / s1;
        inv2 = 1.0 / s2;
    }

    double operator()(double dr, double dc) const {
        double u1 = ca * dr + sa * dc;
        double u2 = -sa * dr + ca * dc;
        return std::exp(-std::sqrt(u1 * u1 * inv1 + u2 * u2 * inv2));
    }
};

double golden_min(double lo, double hi, int iters, const std::function<double(double)>& f);

} // namespace

void KernelSpec::validate() const {
    if (!(sigma2 > 0.0) || !(sigma1 >= sigma2))
        throw std::invalid_argument("KernelSpec: need sigma1 >= sigma2 > 0");
}

double kernel_value(const PixelPos& p_i, const PixelPos& p_j, const KernelSpec& spec) {
    spec.validate();
    return Metric(spec)(p_i.first - p_j.first, p_i.second - p_j.second);
}

Eigen::MatrixXd kernel_matrix(const std::vector<PixelPos>& positions, const KernelSpec& spec) {
    spec.validate();
    if (positions.empty()) throw std::invalid_argument("kernel_matrix: no positions");
    {
        std::vector<PixelPos> sorted = positions;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("kernel_matrix: duplicate positions");
    }
    int n = static_cast<int>(positions.size());
    Metric m(spec);
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
        K(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            double v = m(positions[i].first - positions[j].first,
                         positions[i].second - positions[j].second);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    if (n <= 256) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
        double lmin = es.eigenvalues().minCoeff();
        double lmax = es.eigenvalues().maxCoeff();
        if (lmin < -1e-10 * std::max(lmax, 1.0))
            throw std::runtime_error("kernel_matrix: Gram matrix not PSD");
    }
    return K;
}

namespace {

double golden_min(double lo, double hi, int iters, const std::function<double(double)>& f) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

std::pair<double, double> fit_widths(const MIMap& mimap, bool constrain_ratio) {
    int m = mimap.max_offset;
    double center = mimap.at(0, 0);
    if (!(center > 0.0)) throw std::invalid_argument("fit_widths: degenerate MI map");

    std::vector<double> target(mimap.values.size());
    double tmin = 1e300, tmax = -1e300;
    for (size_t k = 0; k < mimap.values.size(); ++k) {
        target[k] = mimap.values[k] / center;
        int dy = static_cast<int>(k) / mimap.side() - m;
        int dx = static_cast<int>(k) % mimap.side() - m;
        if (dy != 0 || dx != 0) {
            tmin = std::min(tmin, target[k]);
            tmax = std::max(tmax, target[k]);
        }
    }
    if (tmax - tmin < 1e-9 && tmax > 1.0 - 1e-9)
        throw std::invalid_argument("fit_widths: flat MI map");

    double ca = std::cos(mimap.alpha), sa = std::sin(mimap.alpha);
    auto sse = [&](double sigma2, double ratio) {
        double inv1 = 1.0 / (sigma2 * ratio), inv2 = 1.0 / sigma2;
        double e = 0.0;
        for (int dy = -m; dy <= m; ++dy)
            for (int dx = -m; dx <= m; ++dx) {
                double u1 = ca * dy + sa * dx;
                double u2 = -sa * dy + ca * dx;
                double model = std::exp(-std::sqrt(u1 * u1 * inv1 + u2 * u2 * inv2));
                double d = model - target[static_cast<size_t>(dy + m) * mimap.side() + (dx + m)];
                e += d * d;
            }
        return e;
    };

    const double s2_lo = 0.2, s2_hi = 30.0, r_lo = 1.0, r_hi = 8.0;
    double best_s2 = 1.0, best_r = constrain_ratio ? 2.0 : 1.0, best_e = 1e300;
    for (int i = 0; i < 48; ++i) {
        double s2 = s2_lo * std::pow(s2_hi / s2_lo, i / 47.0);
        if (constrain_ratio) {
            double e = sse(s2, 2.0);
            if (e < best_e) {
                best_e = e;
                best_s2 = s2;
            }
        } else {
            for (int j = 0; j < 32; ++j) {
                double r = r_lo + (r_hi - r_lo) * j / 31.0;
                double e = sse(s2, r);
                if (e < best_e) {
                    best_e = e;
                    best_s2 = s2;
                    best_r = r;
                }
            }
        }
    }
    // Alternate 1D refinements around the grid optimum.
    for (int round = 0; round < 4; ++round) {
        double lo = std::max(s2_lo, best_s2 / 2), hi = std::min(s2_hi, best_s2 * 2);
        best_s2 = golden_min(lo, hi, 60, [&](double s) { return sse(s, best_r); });
        if (!constrain_ratio) {
            double rl = std::max(r_lo, best_r - 1.0), rh = std::min(r_hi, best_r + 1.0);
            best_r = golden_min(rl, rh, 60, [&](double r) { return sse(best_s2, r); });
        }
    }
    return {best_s2 * best_r, best_s2};
}

} // namespace svrdn
