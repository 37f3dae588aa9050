#ifndef MODSPACE_FFT_HPP
#define MODSPACE_FFT_HPP

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "modspace/error.hpp"

namespace modspace::detail {

/// Unnormalized multi-dimensional DFT on an N^d row-major array.
/// Plans are created once per (d, N, sign) under a lock; execution goes
/// through the new-array interface, which FFTW documents as thread-safe.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

    ~FftPlans() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    /// In-place transform. sign = FFTW_FORWARD (e^{-i}) or FFTW_BACKWARD (e^{+i}).
    void execute(int d, int n, int sign, std::complex<double>* data) {
        fftw_plan plan = get(d, n, sign);
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(plan, p, p);
    }

private:
    FftPlans() = default;

    fftw_plan get(int d, int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_tuple(d, n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
        std::vector<std::complex<double>> scratch(total);
        std::vector<int> dims(static_cast<std::size_t>(d), n);
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft(d, dims.data(), p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw Error("FFTW failed to create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void dft_forward(int d, int n, std::vector<std::complex<double>>& data) {
    FftPlans::instance().execute(d, n, FFTW_FORWARD, data.data());
}

inline void dft_backward(int d, int n, std::vector<std::complex<double>>& data) {
    FftPlans::instance().execute(d, n, FFTW_BACKWARD, data.data());
}

}  // namespace modspace::detail

#endif  // MODSPACE_FFT_HPP
