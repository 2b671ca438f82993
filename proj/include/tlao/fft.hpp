#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace tlao {

/// Unnormalised complex FFT of fixed shape (1D or 2D row-major).
/// Plans use FFTW_ESTIMATE so results are bit-reproducible across runs;
/// plan creation is serialised internally, execution is thread-safe.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);
    FftPlan(std::size_t rows, std::size_t cols);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    FftPlan(FftPlan&& other) noexcept;
    FftPlan& operator=(FftPlan&& other) noexcept;

    void forward(std::span<std::complex<double>> data) const;
    void backward(std::span<std::complex<double>> data) const;
    std::size_t size() const { return size_; }

private:
    void* forward_ = nullptr;
    void* backward_ = nullptr;
    std::size_t size_ = 0;
};

}  // namespace tlao
