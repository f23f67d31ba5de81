// Deterministic randomness. A single master seed fans out to per-trial streams
// through a counter-based derivation, so adding trials never disturbs earlier ones.
// Categorical draws over exact rational weights are performed with GMP integers,
// so sampling probabilities are exact (no 2^-64 quantization bias).
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "degnet/rational.hpp"

namespace degnet {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t counter) {
    return splitmix64(master ^ splitmix64(counter + 0x5851f42d4c957f2dULL));
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        gmp_randinit_mt(state_);
        gmp_randseed_ui(state_, static_cast<unsigned long>(seed ^ (seed >> 32)) | 1UL);
        // mix in the full 64 bits; gmp_randseed_ui only takes an unsigned long
        mpz_class full;
        mpz_import(full.get_mpz_t(), 1, 1, sizeof(seed), 0, 0, &seed);
        gmp_randseed(state_, full.get_mpz_t());
    }
    RandomStream(const RandomStream&) = delete;
    RandomStream& operator=(const RandomStream&) = delete;
    ~RandomStream() { gmp_randclear(state_); }

    // Uniform integer in [0, bound).
    mpz_class below(const mpz_class& bound) {
        mpz_class r;
        mpz_urandomm(r.get_mpz_t(), state_, bound.get_mpz_t());
        return r;
    }

    std::uint64_t next_u64() {
        mpz_class r;
        mpz_urandomb(r.get_mpz_t(), state_, 64);
        std::uint64_t out = 0;
        mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
        return out;
    }

    // Index i with probability weights[i] / sum(weights), exactly.
    size_t categorical(const std::vector<Rat>& weights) {
        if (weights.empty()) throw std::invalid_argument("categorical: no weights");
        Rat total(0);
        for (const auto& w : weights) {
            if (w < 0) throw std::invalid_argument("categorical: negative weight");
            total += w;
        }
        if (total == 0) throw std::invalid_argument("categorical: zero total weight");
        mpz_class den = total.get_den();
        for (const auto& w : weights) den = lcm(den, w.get_den());
        mpz_class scale_total = total.get_num() * (den / total.get_den());
        mpz_class u = below(scale_total);
        mpz_class cum(0);
        for (size_t i = 0; i < weights.size(); ++i) {
            cum += weights[i].get_num() * (den / weights[i].get_den());
            if (u < cum) return i;
        }
        return weights.size() - 1;  // unreachable for exact weights
    }

    // Bernoulli with exact probability p in [0,1].
    bool bernoulli(const Rat& p) {
        if (p <= 0) return false;
        if (p >= 1) return true;
        mpz_class u = below(p.get_den());
        return u < p.get_num();
    }

    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    gmp_randstate_t state_;
};

}  // namespace degnet
