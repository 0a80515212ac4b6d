#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace netiv {

// Deterministic seed derivation: FNV-1a over the tag bytes (0xFF separators so
// tag boundaries and order are unambiguous), finalized with the SplitMix64
// mixer. Same (master, tags) always yields the same stream seed.
inline std::uint64_t derive_seed(std::uint64_t master, const std::vector<std::string>& tags) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ master;
    auto eat = [&h](unsigned char b) {
        h ^= b;
        h *= 0x100000001b3ULL;
    };
    for (const auto& t : tags) {
        for (unsigned char c : t) eat(c);
        eat(0xFF);
    }
    // SplitMix64 finalizer for avalanche.
    h ^= master;
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

// Random stream with explicit sampling algorithms. std::mt19937_64 is fully
// specified by the standard; the distributions here are written out so that
// replay is bit-identical regardless of standard-library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; second variate cached.
    double normal() {
        if (has_cache_) {
            has_cache_ = false;
            return cache_;
        }
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cache_ = r * std::sin(a);
        has_cache_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double cache_ = 0.0;
    bool has_cache_ = false;
};

} // namespace netiv
