#pragma once

#include "fbm/core/grid.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

namespace fbm::fft {

namespace detail {

// FFTW's planner is not thread-safe; plans are created once per shape under
// a lock and then executed through the new-array interface, which is.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int dim, int points, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(dim, points, sign);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;

        std::size_t total = 1;
        int dims[3];
        for (int d = 0; d < dim; ++d) {
            dims[d] = points;
            total *= static_cast<std::size_t>(points);
        }
        std::vector<std::complex<double>> in(total), out(total);
        fftw_plan plan = fftw_plan_dft(dim, dims, reinterpret_cast<fftw_complex*>(in.data()),
                                       reinterpret_cast<fftw_complex*>(out.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

  private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void execute(const Grid& grid, int sign, std::span<const std::complex<double>> in,
                    std::span<std::complex<double>> out) {
    if (in.size() != grid.size() || out.size() != grid.size())
        throw dimension_error("fft: buffer size does not match grid");
    fftw_plan plan = PlanCache::instance().get(grid.dim(), grid.points(), sign);
    // new-array execute never writes to the input for out-of-place c2c plans
    fftw_execute_dft(plan, const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace detail

// Unnormalized sum_j x_j exp(-i k.x_j).
inline void forward(const Grid& grid, std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    detail::execute(grid, FFTW_FORWARD, in, out);
}

// Unnormalized sum_k c_k exp(+i k.x_j).
inline void backward(const Grid& grid, std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    detail::execute(grid, FFTW_BACKWARD, in, out);
}

} // namespace fbm::fft
