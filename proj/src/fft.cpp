#include "svrdn/fft.hpp"

#include <fftw3.h>

#include <stdexcept>

namespace svrdn {

namespace {

// Circular row/col rotation so that index `shift` lands at 0.
void roll2(cvec& a, int rows, int cols, int rshift, int cshift) {
    cvec tmp(a.size());
    for (int r = 0; r < rows; ++r) {
        int rr = (r + rshift) % rows;
        for (int c = 0; c < cols; ++c) {
            int cc = (c + cshift) % cols;
            tmp[static_cast<size_t>(rr) * cols + cc] = a[static_cast<size_t>(r) * cols + c];
        }
    }
    a.swap(tmp);
}

} // namespace

Fft2::Fft2(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("Fft2: dimensions must be positive");
    // FFTW_UNALIGNED lets plans execute on plain std::vector storage.
    cvec scratch(static_cast<size_t>(rows) * cols);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    plan_fwd_ = fftw_plan_dft_2d(rows, cols, p, p, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_2d(rows, cols, p, p, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_fwd_ || !plan_bwd_)
        throw std::runtime_error("Fft2: plan creation failed");
}

Fft2::~Fft2() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft2::forward(const cvec& in, cvec& out) const {
    if (static_cast<int>(in.size()) != rows_ * cols_)
        throw std::invalid_argument("Fft2::forward: size mismatch");
    out = in;
    auto* p = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), p, p);
}

void Fft2::inverse(const cvec& in, cvec& out) const {
    if (static_cast<int>(in.size()) != rows_ * cols_)
        throw std::invalid_argument("Fft2::inverse: size mismatch");
    out = in;
    auto* p = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), p, p);
    double scale = 1.0 / (static_cast<double>(rows_) * cols_);
    for (auto& z : out) z *= scale;
}

void fftshift2(cvec& a, int rows, int cols) {
    roll2(a, rows, cols, rows / 2, cols / 2);
}

void ifftshift2(cvec& a, int rows, int cols) {
    roll2(a, rows, cols, (rows + 1) / 2, (cols + 1) / 2);
}

} // namespace svrdn
