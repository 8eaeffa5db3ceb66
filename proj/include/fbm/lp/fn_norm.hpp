#pragma once

#include "fbm/lp/morrey.hpp"
#include "fbm/lp/partition.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace fbm {

struct BlockNorm {
    int k = 0;
    double block_norm = 0.0; // ||phi_k f^||_{M_{p,mu}}
    double weight = 0.0;     // 2^{k s}
    double weighted = 0.0;
};

struct FnReport {
    NormParams params;
    MorreySearch search;
    std::vector<BlockNorm> blocks;
    double value = 0.0;
};

//
// Homogeneous Fourier-Besov-Morrey norm over the resolved band:
//   q = inf:  sup_k 2^{ks} ||phi_k f^||_{M_{p,mu}}
//   q < inf:  (sum_k (2^{ks} ||phi_k f^||_{M_{p,mu}})^q)^{1/q}
//
inline FnReport fbm_norm_report(const SpectralField& f, const DyadicPartition& part, const NormParams& np,
                                const MorreySearch& search = {}) {
    require_same_grid(f.grid(), part.grid(), "fbm_norm");
    np.validate(f.grid().dim());
    FnReport report{np, search, {}, 0.0};
    std::vector<Complex> block(f.size());
    long double acc = 0.0L;
    for (int k = part.k_min(); k <= part.k_max(); ++k) {
        const auto& w = part.weights(k);
        for (std::size_t i = 0; i < block.size(); ++i)
            block[i] = w[i] * f[i];
        BlockNorm b;
        b.k = k;
        b.block_norm = morrey_norm(f.grid(), block, np.p, np.mu, search);
        b.weight = std::pow(2.0, k * np.s);
        b.weighted = b.weight * b.block_norm;
        if (std::isinf(np.q))
            report.value = std::max(report.value, b.weighted);
        else
            acc += std::pow(static_cast<long double>(b.weighted), static_cast<long double>(np.q));
        report.blocks.push_back(b);
    }
    if (!std::isinf(np.q))
        report.value = static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(np.q)));
    return report;
}

inline double fbm_norm(const SpectralField& f, const DyadicPartition& part, const NormParams& np,
                       const MorreySearch& search = {}) {
    return fbm_norm_report(f, part, np, search).value;
}

// A configured FN norm, reusable across many fields on the same grid.
class FnNorm {
  public:
    FnNorm(DyadicPartition part, NormParams np, MorreySearch search = {})
        : part_(std::move(part)), np_(np), search_(search) {
        np_.validate(part_.grid().dim());
        validate_search(search_);
    }

    double operator()(const SpectralField& f) const { return fbm_norm(f, part_, np_, search_); }
    FnReport report(const SpectralField& f) const { return fbm_norm_report(f, part_, np_, search_); }

    const DyadicPartition& partition() const noexcept { return part_; }
    const NormParams& params() const noexcept { return np_; }
    const MorreySearch& search() const noexcept { return search_; }
    const Grid& grid() const noexcept { return part_.grid(); }

  private:
    DyadicPartition part_;
    NormParams np_;
    MorreySearch search_;
};

// CSV rows (k, block_norm, weight, weighted) with a header line.
inline void write_norm_csv(std::ostream& os, const FnReport& r) {
    os << "k,block_norm,weight,weighted\n";
    os.precision(17);
    for (const auto& b : r.blocks)
        os << b.k << ',' << b.block_norm << ',' << b.weight << ',' << b.weighted << '\n';
}

} // namespace fbm
