#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace bcuav {

// Deterministic random source. All sampling transforms are written out here
// instead of using std::*_distribution, so a given seed produces the same
// stream on every platform and standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next() { return gen_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // {0, 1, ..., n-1}, unbiased via rejection
    uint64_t uniform_int(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % n;
    }

    // standard normal, Box-Muller with cached second draw
    double normal() {
        if (has_cache_) {
            has_cache_ = false;
            return cache_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cache_ = r * std::sin(a);
        has_cache_ = true;
        return r * std::cos(a);
    }

    // k distinct indices from {0,...,n-1} (Floyd), order not significant
    std::vector<size_t> sample_without_replacement(size_t n, size_t k) {
        std::vector<size_t> out;
        out.reserve(k);
        for (size_t j = n - k; j < n; ++j) {
            const size_t t = static_cast<size_t>(uniform_int(j + 1));
            bool seen = false;
            for (size_t v : out)
                if (v == t) { seen = true; break; }
            out.push_back(seen ? j : t);
        }
        return out;
    }

    // splitmix64 step; used to derive independent substream seeds
    static uint64_t mix(uint64_t a, uint64_t b) {
        uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
    double cache_ = 0.0;
    bool has_cache_ = false;
};

}  // namespace bcuav
