#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "botsim/errors.hpp"

namespace botsim {

// SplitMix64 finalizer. Stateless, so the same (seed, counter...) tuple always
// yields the same value regardless of evaluation order.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(mix64(a) ^ b); }
inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) { return mix64(mix64(a, b) ^ c); }

// Uniform double in [0, 1) from a hashed 64-bit word.
inline double to_unit(uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Derives an independent child seed for a named sub-stream. `tag` is a short
// label hashed bytewise; trial/index separate parallel streams.
inline uint64_t derive_seed(uint64_t master, const char* tag, uint64_t index = 0) {
    uint64_t h = mix64(master);
    for (const char* p = tag; *p; ++p) h = mix64(h, static_cast<uint64_t>(*p));
    return mix64(h, index);
}

using Rng = std::mt19937_64;

// Walker/Vose alias table: O(n) build, O(1) sample from a discrete
// distribution proportional to nonnegative weights.
class AliasTable {
public:
    AliasTable() = default;

    explicit AliasTable(const std::vector<double>& weights) {
        const size_t n = weights.size();
        if (n == 0) throw ConfigError("alias table: empty weight vector");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ConfigError("alias table: negative weight");
            total += w;
        }
        if (total <= 0.0) throw ConfigError("alias table: all weights zero");
        prob_.assign(n, 0.0);
        alias_.assign(n, 0);
        std::vector<size_t> small, large;
        std::vector<double> scaled(n);
        for (size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * static_cast<double>(n) / total;
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            const size_t s = small.back();
            const size_t l = large.back();
            small.pop_back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (size_t s : small) prob_[s] = 1.0;
        for (size_t l : large) prob_[l] = 1.0;
    }

    size_t sample(Rng& rng) const {
        const size_t n = prob_.size();
        const size_t idx = std::uniform_int_distribution<size_t>(0, n - 1)(rng);
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return u < prob_[idx] ? idx : alias_[idx];
    }

    size_t size() const { return prob_.size(); }

private:
    std::vector<double> prob_;
    std::vector<size_t> alias_;
};

}  // namespace botsim
