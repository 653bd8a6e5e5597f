#pragma once

#include <complex>
#include <vector>

namespace svrdn {

using cvec = std::vector<std::complex<double>>;

// 2D FFT plan pair for one array size, backed by FFTW. Plan creation is not
// thread-safe (FFTW global planner); execution is.
class Fft2 {
public:
    Fft2(int rows, int cols);
    ~Fft2();
    Fft2(const Fft2&) = delete;
    Fft2& operator=(const Fft2&) = delete;

    // Unnormalized forward DFT.
    void forward(const cvec& in, cvec& out) const;
    // Inverse DFT including the 1/(rows*cols) factor.
    void inverse(const cvec& in, cvec& out) const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    int rows_, cols_;
    void* plan_fwd_;
    void* plan_bwd_;
};

// Moves DC from index 0 to the centered position (floor(n/2) per axis).
void fftshift2(cvec& a, int rows, int cols);
// Inverse of fftshift2 (differs from it for odd sizes).
void ifftshift2(cvec& a, int rows, int cols);

} // namespace svrdn
