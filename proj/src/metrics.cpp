#include "svrdn/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace svrdn {

namespace {

constexpr int kWin = 11;
constexpr double kWinSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

std::vector<double> gauss_taps() {
    std::vector<double> w(kWin);
    double sum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        double d = i - (kWin - 1) / 2.0;
        w[i] = std::exp(-d * d / (2.0 * kWinSigma * kWinSigma));
        sum += w[i];
    }
    for (double& x : w) x /= sum;
    return w;
}

// Separable 'valid' correlation with the window taps.
Grid conv_valid(const Grid& g, const std::vector<double>& w) {
    int r = g.rows, c = g.cols, vr = r - kWin + 1, vc = c - kWin + 1;
    Grid h(r, vc);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < vc; ++j) {
            double s = 0.0;
            for (int k = 0; k < kWin; ++k) s += w[k] * g.at(i, j + k);
            h.at(i, j) = s;
        }
    Grid out(vr, vc);
    for (int i = 0; i < vr; ++i)
        for (int j = 0; j < vc; ++j) {
            double s = 0.0;
            for (int k = 0; k < kWin; ++k) s += w[k] * h.at(i + k, j);
            out.at(i, j) = s;
        }
    return out;
}

void check_same_dims(const Image& a, const Image& b, const char* who) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

} // namespace

double rmse(const Image& a, const Image& b) {
    check_same_dims(a, b, "rmse");
    if (a.v.empty()) throw std::invalid_argument("rmse: empty images");
    double s = 0.0;
    for (size_t k = 0; k < a.v.size(); ++k) {
        double d = a.v[k] - b.v[k];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.v.size()));
}

double ssim(const Image& a, const Image& b) {
    check_same_dims(a, b, "ssim");
    if (a.rows < kWin || a.cols < kWin)
        throw std::invalid_argument("ssim: images smaller than the window");

    std::vector<double> w = gauss_taps();
    Grid aa(a.rows, a.cols), bb(a.rows, a.cols), ab(a.rows, a.cols);
    for (size_t k = 0; k < a.v.size(); ++k) {
        aa.v[k] = a.v[k] * a.v[k];
        bb.v[k] = b.v[k] * b.v[k];
        ab.v[k] = a.v[k] * b.v[k];
    }
    Grid mu_a = conv_valid(a, w), mu_b = conv_valid(b, w);
    Grid m_aa = conv_valid(aa, w), m_bb = conv_valid(bb, w), m_ab = conv_valid(ab, w);

    double acc = 0.0;
    for (size_t k = 0; k < mu_a.v.size(); ++k) {
        double ma = mu_a.v[k], mb = mu_b.v[k];
        double va = m_aa.v[k] - ma * ma;
        double vb = m_bb.v[k] - mb * mb;
        double cov = m_ab.v[k] - ma * mb;
        double num = (2.0 * ma * mb + kC1) * (2.0 * cov + kC2);
        double den = (ma * ma + mb * mb + kC1) * (va + vb + kC2);
        acc += num / den;
    }
    return acc / static_cast<double>(mu_a.v.size());
}

ResidualReport residual_report(const Image& residual) {
    ResidualReport rep;
    rep.hist = pair_hist(residual, 0, 1, kPairBins, kNoiseLo, kNoiseHi);

    double n = static_cast<double>(residual.v.size());
    double mean = 0.0;
    for (double v : residual.v) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : residual.v) var += (v - mean) * (v - mean);
    rep.variance = var / n;

    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0, cnt = 0.0;
    for (int r = 0; r < residual.rows; ++r)
        for (int c = 0; c + 1 < residual.cols; ++c) {
            double x = residual.at(r, c), y = residual.at(r, c + 1);
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
            cnt += 1.0;
        }
    double vx = sxx / cnt - (sx / cnt) * (sx / cnt);
    double vy = syy / cnt - (sy / cnt) * (sy / cnt);
    double cov = sxy / cnt - (sx / cnt) * (sy / cnt);
    rep.pair_corr = (vx > 0.0 && vy > 0.0) ? cov / std::sqrt(vx * vy) : 0.0;
    return rep;
}

void write_residual_viz_csv(const ResidualReport& rep, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open file for writing: " + path);
    f << "variance," << fmt_num(rep.variance) << "\n";
    f << "pair_corr," << fmt_num(rep.pair_corr) << "\n";
    const Hist2D& h = rep.hist;
    for (int i = 0; i < h.n_bins; ++i) {
        for (int j = 0; j < h.n_bins; ++j)
            f << (j ? "," : "") << fmt_num(std::pow(h.p(i, j), 0.25));
        f << "\n";
    }
}

} // namespace svrdn
