#pragma once

#include <complex>
#include <span>

namespace spinflow {

/// Complex 2-D DFT on an ny-by-nx row-major array (x fastest), FFTW backed.
/// backward() includes the 1/(nx ny) normalisation.
class Fft2d {
public:
    Fft2d(int nx, int ny);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }

    void forward(std::span<std::complex<double>> data);
    void backward(std::span<std::complex<double>> data);

private:
    void run(void* plan, std::span<std::complex<double>> data);

    int nx_;
    int ny_;
    void* buffer_ = nullptr;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
};

}  // namespace spinflow
