#include "spinflow/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "spinflow/common.hpp"

namespace spinflow {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft2d::Fft2d(int nx, int ny) : nx_(nx), ny_(ny) {
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* buf = fftw_alloc_complex(n);
    if (!buf) throw Error("FFT buffer allocation failed");
    buffer_ = buf;
    forward_plan_ = fftw_plan_dft_2d(ny, nx, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_2d(ny, nx, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    if (buffer_) fftw_free(buffer_);
}

void Fft2d::run(void* plan, std::span<std::complex<double>> data) {
    const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
    if (data.size() != n) throw ConfigError("FFT size mismatch");
    std::memcpy(buffer_, data.data(), n * sizeof(fftw_complex));
    fftw_execute(static_cast<fftw_plan>(plan));
    std::memcpy(data.data(), buffer_, n * sizeof(fftw_complex));
}

void Fft2d::forward(std::span<std::complex<double>> data) { run(forward_plan_, data); }

void Fft2d::backward(std::span<std::complex<double>> data) {
    run(backward_plan_, data);
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    for (auto& v : data) v *= scale;
}

}  // namespace spinflow
