#include "svrdn/stats.hpp"

#include "svrdn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace svrdn {

namespace {

std::vector<double> uniform_edges(int n_bins, double lo, double hi) {
    std::vector<double> e(n_bins + 1);
    double w = (hi - lo) / n_bins;
    for (int i = 0; i <= n_bins; ++i) e[i] = lo + w * i;
    e[n_bins] = hi;
    return e;
}

int bin_of(double x, int n_bins, double lo, double hi) {
    double w = (hi - lo) / n_bins;
    int b = static_cast<int>(std::floor((x - lo) / w));
    return std::clamp(b, 0, n_bins - 1);
}

void check_range(double lo, double hi, const char* who) {
    if (!(hi > lo)) throw std::invalid_argument(std::string(who) + ": degenerate range");
}

double xlogx_ratio(double p, double q) {
    // p * log2(p/q); 0 when p == 0.
    if (p <= 0.0) return 0.0;
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    return p * std::log2(p / q);
}

void normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    if (s <= 0.0) throw std::invalid_argument("histogram: no mass");
    for (double& x : v) x /= s;
}

bool edges_match(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) return false;
    return true;
}

} // namespace

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

Hist1D hist1d(const std::vector<double>& xs, int n_bins, double lo, double hi) {
    if (xs.empty()) throw std::invalid_argument("hist1d: empty input");
    if (n_bins < 1) throw std::invalid_argument("hist1d: need at least one bin");
    check_range(lo, hi, "hist1d");
    Hist1D h;
    h.edges = uniform_edges(n_bins, lo, hi);
    h.prob.assign(n_bins, 0.0);
    for (double x : xs) h.prob[bin_of(x, n_bins, lo, hi)] += 1.0;
    normalize(h.prob);
    return h;
}

Hist2D hist2d(const std::vector<std::pair<double, double>>& pairs, int n_bins,
              double xlo, double xhi, double ylo, double yhi) {
    if (pairs.empty()) throw std::invalid_argument("hist2d: empty input");
    if (n_bins < 1) throw std::invalid_argument("hist2d: need at least one bin");
    check_range(xlo, xhi, "hist2d");
    check_range(ylo, yhi, "hist2d");
    Hist2D h;
    h.n_bins = n_bins;
    h.edges_x = uniform_edges(n_bins, xlo, xhi);
    h.edges_y = uniform_edges(n_bins, ylo, yhi);
    h.prob.assign(static_cast<size_t>(n_bins) * n_bins, 0.0);
    for (const auto& [x, y] : pairs)
        h.p(bin_of(x, n_bins, xlo, xhi), bin_of(y, n_bins, ylo, yhi)) += 1.0;
    normalize(h.prob);
    return h;
}

double entropy(const std::vector<double>& prob) {
    double hv = 0.0;
    for (double p : prob)
        if (p > 0.0) hv -= p * std::log2(p);
    return hv;
}

double mutual_info(const Hist2D& h) {
    double total = 0.0;
    for (double p : h.prob) total += p;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("mutual_info: unnormalized histogram");
    int n = h.n_bins;
    std::vector<double> px(n, 0.0), py(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            px[i] += h.p(i, j);
            py[j] += h.p(i, j);
        }
    double mi = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double p = h.p(i, j);
            if (p > 0.0) mi += p * std::log2(p / (px[i] * py[j]));
        }
    return std::max(0.0, mi);
}

namespace {

double kld_impl(const std::vector<double>& p, const std::vector<double>& q, double smooth) {
    std::vector<double> ps = p, qs = q;
    if (smooth > 0.0) {
        for (double& x : ps) x += smooth;
        for (double& x : qs) x += smooth;
    }
    normalize(ps);
    normalize(qs);
    double d = 0.0;
    for (size_t i = 0; i < ps.size(); ++i) {
        double t = xlogx_ratio(ps[i], qs[i]);
        if (std::isinf(t)) return t;
        d += t;
    }
    return std::max(0.0, d);
}

} // namespace

double kld(const Hist1D& p, const Hist1D& q, double smooth) {
    if (!edges_match(p.edges, q.edges))
        throw std::invalid_argument("kld: binning mismatch");
    return kld_impl(p.prob, q.prob, smooth);
}

double kld(const Hist2D& p, const Hist2D& q, double smooth) {
    if (p.n_bins != q.n_bins || !edges_match(p.edges_x, q.edges_x) ||
        !edges_match(p.edges_y, q.edges_y))
        throw std::invalid_argument("kld: binning mismatch");
    return kld_impl(p.prob, q.prob, smooth);
}

void pair_accumulate(const Grid& g, int dr, int dc, int n_bins, double lo, double hi,
                     std::vector<double>& counts) {
    if (counts.size() != static_cast<size_t>(n_bins) * n_bins)
        throw std::invalid_argument("pair_accumulate: bad counts buffer");
    int r0 = std::max(0, -dr), r1 = std::min(g.rows, g.rows - dr);
    int c0 = std::max(0, -dc), c1 = std::min(g.cols, g.cols - dc);
    if (r0 >= r1 || c0 >= c1)
        throw std::invalid_argument("pair_hist: grid too small for shift");
    for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) {
            int bx = bin_of(g.at(r, c), n_bins, lo, hi);
            int by = bin_of(g.at(r + dr, c + dc), n_bins, lo, hi);
            counts[static_cast<size_t>(bx) * n_bins + by] += 1.0;
        }
}

Hist2D counts_to_hist(const std::vector<double>& counts, int n_bins, double lo, double hi) {
    Hist2D h;
    h.n_bins = n_bins;
    h.edges_x = uniform_edges(n_bins, lo, hi);
    h.edges_y = h.edges_x;
    h.prob = counts;
    normalize(h.prob);
    return h;
}

Hist2D pair_hist(const Grid& g, int dr, int dc, int n_bins, double lo, double hi) {
    if (n_bins < 1) throw std::invalid_argument("pair_hist: need at least one bin");
    check_range(lo, hi, "pair_hist");
    std::vector<double> counts(static_cast<size_t>(n_bins) * n_bins, 0.0);
    pair_accumulate(g, dr, dc, n_bins, lo, hi, counts);
    return counts_to_hist(counts, n_bins, lo, hi);
}

MIMap mi_map(const std::vector<Grid>& bands, int n_bins, int max_offset) {
    if (bands.empty()) throw std::invalid_argument("mi_map: no bands");
    int need = 2 * max_offset + 1;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Grid& b : bands) {
        if (b.rows < need || b.cols < need)
            throw std::invalid_argument("mi_map: bands too small");
        for (double v : b.v) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(hi > lo)) throw std::invalid_argument("mi_map: degenerate bands");

    MIMap m;
    m.max_offset = max_offset;
    m.values.assign(static_cast<size_t>(need) * need, 0.0);
    std::vector<double> counts(static_cast<size_t>(n_bins) * n_bins);
    for (int dy = -max_offset; dy <= max_offset; ++dy)
        for (int dx = -max_offset; dx <= max_offset; ++dx) {
            std::fill(counts.begin(), counts.end(), 0.0);
            for (const Grid& b : bands) pair_accumulate(b, dy, dx, n_bins, lo, hi, counts);
            m.at(dy, dx) = mutual_info(counts_to_hist(counts, n_bins, lo, hi));
        }
    return m;
}

namespace {

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(const Grid& g) {
        for (double v : g.v) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
};

Image white_image(Rng& rng, int rows, int cols) {
    Image img(rows, cols);
    for (auto& v : img.v) v = rng.gaussian();
    return img;
}

// Accumulates one corpus (natural or iid) into per-distance pair counts.
void profile_pass(const std::vector<Image>& corpus, const std::string& kind,
                  const SteerableTransform& xf, int n_bins,
                  const std::vector<int>& dists,
                  std::vector<Extent>* extents, // pass 1 when non-null
                  std::vector<std::vector<double>>* counts,
                  const Extent* fine_ext, const std::vector<Extent>* far_ext) {
    int K = xf.spec().n_orients;
    for (const Image& img : corpus) {
        Pyramid pyr = xf.forward(img);
        for (size_t di = 0; di < dists.size(); ++di) {
            int d = dists[di];
            for (int o = 0; o < K; ++o) {
                const Grid& fine = pyr.bands[0][o];
                if (kind == "spatial") {
                    if (extents) {
                        (*extents)[di].add(fine);
                    } else {
                        pair_accumulate(fine, 0, d, n_bins, fine_ext->lo, fine_ext->hi,
                                        (*counts)[di]);
                    }
                } else if (kind == "orientation") {
                    const Grid& other = pyr.bands[0][(o + d) % K];
                    if (extents) {
                        (*extents)[di].add(fine);
                    } else {
                        for (size_t k = 0; k < fine.v.size(); ++k) {
                            int bx = std::clamp(
                                static_cast<int>(std::floor((fine.v[k] - fine_ext->lo) /
                                                            (fine_ext->hi - fine_ext->lo) * n_bins)),
                                0, n_bins - 1);
                            int by = std::clamp(
                                static_cast<int>(std::floor((other.v[k] - fine_ext->lo) /
                                                            (fine_ext->hi - fine_ext->lo) * n_bins)),
                                0, n_bins - 1);
                            (*counts)[di][static_cast<size_t>(bx) * n_bins + by] += 1.0;
                        }
                    }
                } else { // scale
                    const Grid& coarse = pyr.bands[d][o];
                    if (extents) {
                        if (di == 0) (*extents).back().add(fine);
                        (*extents)[di].add(coarse);
                    } else {
                        double flo = fine_ext->lo, fhi = fine_ext->hi;
                        double clo = (*far_ext)[di].lo, chi = (*far_ext)[di].hi;
                        for (int r = 0; r < fine.rows; ++r)
                            for (int c = 0; c < fine.cols; ++c) {
                                double a = fine.at(r, c);
                                double b = coarse.at(r >> d, c >> d);
                                int bx = std::clamp(
                                    static_cast<int>(std::floor((a - flo) / (fhi - flo) * n_bins)),
                                    0, n_bins - 1);
                                int by = std::clamp(
                                    static_cast<int>(std::floor((b - clo) / (chi - clo) * n_bins)),
                                    0, n_bins - 1);
                                (*counts)[di][static_cast<size_t>(bx) * n_bins + by] += 1.0;
                            }
                    }
                }
            }
        }
    }
}

std::vector<double> profile_curve(const std::vector<Image>& corpus, const std::string& kind,
                                  const SteerableTransform& xf, int n_bins,
                                  const std::vector<int>& dists) {
    bool is_scale = (kind == "scale");
    // Pass 1: value ranges. For the scale curve the last extent slot holds the
    // finest band range; other kinds share one range across both axes.
    std::vector<Extent> ext(dists.size() + (is_scale ? 1 : 0));
    profile_pass(corpus, kind, xf, n_bins, dists, &ext, nullptr, nullptr, nullptr);
    Extent fine = is_scale ? ext.back() : ext[0];
    if (!is_scale) {
        for (size_t i = 1; i < ext.size(); ++i) {
            fine.lo = std::min(fine.lo, ext[i].lo);
            fine.hi = std::max(fine.hi, ext[i].hi);
        }
    }
    if (!(fine.hi > fine.lo)) throw std::invalid_argument("mi_profiles: degenerate corpus");

    std::vector<std::vector<double>> counts(
        dists.size(), std::vector<double>(static_cast<size_t>(n_bins) * n_bins, 0.0));
    profile_pass(corpus, kind, xf, n_bins, dists, nullptr, &counts, &fine, &ext);

    std::vector<double> mi(dists.size());
    for (size_t i = 0; i < dists.size(); ++i)
        mi[i] = mutual_info(counts_to_hist(counts[i], n_bins, 0.0, 1.0));
    return mi;
}

} // namespace

MICurve mi_profiles(const std::vector<Image>& corpus, const std::string& kind,
                    const SteerableSpec& spec, int n_bins, std::uint64_t iid_seed) {
    if (corpus.size() < 10) throw std::invalid_argument("mi_profiles: corpus too small");
    if (kind != "spatial" && kind != "orientation" && kind != "scale")
        throw std::invalid_argument("mi_profiles: unknown kind " + kind);
    int rows = corpus[0].rows, cols = corpus[0].cols;
    for (const Image& img : corpus)
        if (img.rows != rows || img.cols != cols)
            throw std::invalid_argument("mi_profiles: images must share dimensions");

    std::vector<int> dists;
    if (kind == "spatial") {
        dists = {1, 2, 3, 4};
    } else if (kind == "orientation") {
        for (int d = 1; d <= spec.n_orients / 2; ++d) dists.push_back(d);
    } else {
        for (int d = 1; d <= std::min(3, spec.n_scales - 1); ++d) dists.push_back(d);
    }
    if (dists.empty()) throw std::invalid_argument("mi_profiles: no measurable distances");

    SteerableTransform xf(rows, cols, spec);

    Rng rng(iid_seed);
    std::vector<Image> iid;
    iid.reserve(corpus.size());
    for (size_t i = 0; i < corpus.size(); ++i) iid.push_back(white_image(rng, rows, cols));

    MICurve c;
    c.kind = kind;
    c.distance = dists;
    c.natural = profile_curve(corpus, kind, xf, n_bins, dists);
    c.iid = profile_curve(iid, kind, xf, n_bins, dists);
    return c;
}

void write_hist2d_csv(const Hist2D& h, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open file for writing: " + path);
    f << "edges_x";
    for (double e : h.edges_x) f << "," << fmt_num(e);
    f << "\nedges_y";
    for (double e : h.edges_y) f << "," << fmt_num(e);
    f << "\n";
    for (int i = 0; i < h.n_bins; ++i) {
        for (int j = 0; j < h.n_bins; ++j) f << (j ? "," : "") << fmt_num(h.p(i, j));
        f << "\n";
    }
}

void write_mimap_csv(const MIMap& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open file for writing: " + path);
    f << "alpha," << fmt_num(m.alpha) << "\n";
    for (int dy = -m.max_offset; dy <= m.max_offset; ++dy) {
        for (int dx = -m.max_offset; dx <= m.max_offset; ++dx)
            f << (dx > -m.max_offset ? "," : "") << fmt_num(m.at(dy, dx));
        f << "\n";
    }
}

void write_curve_csv(const MICurve& c, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open file for writing: " + path);
    f << "distance,mi_natural,mi_iid\n";
    for (size_t i = 0; i < c.distance.size(); ++i)
        f << c.distance[i] << "," << fmt_num(c.natural[i]) << "," << fmt_num(c.iid[i]) << "\n";
}

} // namespace svrdn
