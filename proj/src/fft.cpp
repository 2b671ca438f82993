#include "tlao/fft.hpp"

#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace tlao {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FftPlan::FftPlan(std::size_t n) : FftPlan(1, n) {}

FftPlan::FftPlan(std::size_t rows, std::size_t cols) : size_(rows * cols) {
    std::vector<std::complex<double>> scratch(size_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    if (rows == 1) {
        const int n = static_cast<int>(cols);
        forward_ = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD, flags);
    } else {
        const int r = static_cast<int>(rows), c = static_cast<int>(cols);
        forward_ = fftw_plan_dft_2d(r, c, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_2d(r, c, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD, flags);
    }
    if (!forward_ || !backward_) throw std::runtime_error("FFTW planning failed");
}

FftPlan::~FftPlan() {
    if (!forward_ && !backward_) return;
    std::lock_guard lock(planner_mutex());
    if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

FftPlan::FftPlan(FftPlan&& other) noexcept
    : forward_(std::exchange(other.forward_, nullptr)),
      backward_(std::exchange(other.backward_, nullptr)),
      size_(other.size_) {}

FftPlan& FftPlan::operator=(FftPlan&& other) noexcept {
    if (this != &other) {
        FftPlan tmp(std::move(other));
        std::swap(forward_, tmp.forward_);
        std::swap(backward_, tmp.backward_);
        std::swap(size_, tmp.size_);
    }
    return *this;
}

void FftPlan::forward(std::span<std::complex<double>> data) const {
    fftw_execute_dft(static_cast<fftw_plan>(forward_), as_fftw(data.data()), as_fftw(data.data()));
}

void FftPlan::backward(std::span<std::complex<double>> data) const {
    fftw_execute_dft(static_cast<fftw_plan>(backward_), as_fftw(data.data()), as_fftw(data.data()));
}

}  // namespace tlao
