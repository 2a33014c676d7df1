#pragma once

#include <cmath>
#include <cstdint>

namespace nlrd::rng {

/// Counter-based generator (Philox 4x32-10): a keyed bijection of a 128-bit
/// counter. State is just {key, counter}, so streams are reproducible and
/// replicas get independent streams from distinct keys (seed ^ replica).
class Philox {
public:
    explicit Philox(std::uint64_t seed) noexcept
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)) {}

    std::uint64_t seed() const noexcept {
        return (static_cast<std::uint64_t>(key1_) << 32) | key0_;
    }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint32_t next_u32() noexcept {
        if (have_ == 0) {
            fill_block();
            have_ = 4;
        }
        return out_[4 - have_--];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform double in [0, 1).
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Marsaglia polar rejection.
    double normal() noexcept {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    /// Poisson variate. Knuth multiplication below mean 30, PTRD above.
    std::uint64_t poisson(double mean) noexcept {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) {
            const double limit = std::exp(-mean);
            std::uint64_t k = 0;
            double p = 1.0;
            do {
                ++k;
                p *= uniform();
            } while (p > limit);
            return k - 1;
        }
        return poisson_ptrd(mean);
    }

private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                        std::uint32_t& lo) noexcept {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void fill_block() noexcept {
        std::uint32_t c0 = static_cast<std::uint32_t>(counter_);
        std::uint32_t c1 = static_cast<std::uint32_t>(counter_ >> 32);
        std::uint32_t c2 = 0, c3 = 0;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, c0, hi0, lo0);
            mulhilo(0xCD9E8D57u, c2, hi1, lo1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = c0;
        out_[1] = c1;
        out_[2] = c2;
        out_[3] = c3;
        ++counter_;
    }

    // Hoermann's PTRD transformed rejection, exact for mean >= 10.
    std::uint64_t poisson_ptrd(double mu) noexcept {
        const double smu = std::sqrt(mu);
        const double b = 0.931 + 2.53 * smu;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mu = std::log(mu);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform();
            const double us = 0.5 - std::abs(u);
            const double kd = std::floor((2.0 * a / us + b) * u + mu + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kd);
            if (kd < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                kd * log_mu - mu - std::lgamma(kd + 1.0))
                return static_cast<std::uint64_t>(kd);
        }
    }

    std::uint32_t key0_, key1_;
    std::uint64_t counter_ = 0;
    std::uint32_t out_[4] = {};
    int have_ = 0;
};

}  // namespace nlrd::rng
