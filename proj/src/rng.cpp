#include "partitions/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "partitions/special_functions.hpp"

namespace partitions {

namespace {

constexpr std::uint64_t kMultHi = 2549297995355413924ULL;
constexpr std::uint64_t kMultLo = 4865540595714422341ULL;

inline unsigned __int128 pcg_mult() {
    return (unsigned __int128)kMultHi << 64 | kMultLo;
}

inline std::uint64_t rotr64(std::uint64_t v, unsigned rot) {
    return (v >> rot) | (v << ((-rot) & 63u));
}

}  // namespace

Pcg64::Pcg64(std::uint64_t initstate, std::uint64_t initseq) {
    state_ = 0;
    inc_ = ((unsigned __int128)initseq << 1) | 1u;
    state_ = state_ * pcg_mult() + inc_;
    state_ += (unsigned __int128)initstate;
    state_ = state_ * pcg_mult() + inc_;
}

std::uint64_t Pcg64::next_u64() {
    state_ = state_ * pcg_mult() + inc_;
    const std::uint64_t hi = (std::uint64_t)(state_ >> 64);
    const std::uint64_t lo = (std::uint64_t)state_;
    const unsigned rot = (unsigned)(state_ >> 122);
    return rotr64(hi ^ lo, rot);
}

std::uint64_t Pcg64::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be >= 1");
    // Lemire's method with rejection for exact uniformity.
    unsigned __int128 m = (unsigned __int128)next_u64() * bound;
    std::uint64_t l = (std::uint64_t)m;
    if (l < bound) {
        const std::uint64_t t = (0 - bound) % bound;
        while (l < t) {
            m = (unsigned __int128)next_u64() * bound;
            l = (std::uint64_t)m;
        }
    }
    return (std::uint64_t)(m >> 64);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Pcg64 replica_rng(std::uint64_t seed, std::uint64_t replica) {
    const std::uint64_t s0 = splitmix64(seed);
    const std::uint64_t initstate = splitmix64(s0 + replica);
    return Pcg64(initstate, replica);
}

namespace {

// Inversion by sequential search on the multiplicative form: products of
// uniforms against exp(-mean). Exact for small means; expected draws = mean+1.
std::int64_t poisson_inversion(Pcg64& rng, double mean) {
    const double limit = std::exp(-mean);
    double prod = rng.next_double();
    std::int64_t n = 0;
    while (prod > limit) {
        prod *= rng.next_double();
        ++n;
    }
    return n;
}

// Hörmann (1993), "The transformed rejection method for generating Poisson
// random variables", algorithm PTRD. Exact (accept/reject against the true
// pmf via lgamma); bounded expected draw count for all means >= 10.
std::int64_t poisson_ptrd(Pcg64& rng, double mean) {
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        double u;
        double v = rng.next_double();
        if (v <= 0.86 * v_r) {
            u = v / v_r - 0.43;
            return (std::int64_t)std::floor(
                (2.0 * a / (0.5 - std::fabs(u)) + b) * u + mean + 0.445);
        }

        if (v >= v_r) {
            u = rng.next_double() - 0.5;
        } else {
            u = v / v_r - 0.93;
            u = (u < 0 ? -0.5 : 0.5) - u;
            v = rng.next_double() * v_r;
        }

        const double us = 0.5 - std::fabs(u);
        if (us < 0.013 && v > us) continue;

        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
        v = v * inv_alpha / (a / (us * us) + b);

        const double log_sqrt_2pi = 0.91893853320467274178;
        if (k >= 10.0) {
            const double t = (k + 0.5) * std::log(mean / k) - mean -
                             log_sqrt_2pi + k -
                             (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k;
            if (std::log(v * smu) <= t) return (std::int64_t)k;
        } else if (k >= 0.0) {
            const double t = k * std::log(mean) - mean - log_gamma(k + 1.0);
            if (std::log(v) <= t) return (std::int64_t)k;
        }
    }
}

}  // namespace

std::int64_t sample_poisson(Pcg64& rng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("sample_poisson: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_inversion(rng, mean);
    return poisson_ptrd(rng, mean);
}

AliasTable::AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("AliasTable: empty weight vector");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("AliasTable: weights must be finite and >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("AliasTable: total weight must be > 0");

    norm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) norm_[i] = weights[i] / total;

    prob_.assign(n, 0.0);
    alias_.assign(n, 0);

    // Vose's stable two-worklist construction. Scaled probabilities p*n are
    // partitioned into small (< 1) and large (>= 1); each small cell is
    // paired with a large donor. Index order is deterministic.
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = norm_[i] * double(n);

    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (scaled[i] < 1.0)
            small.push_back((std::uint32_t)i);
        else
            large.push_back((std::uint32_t)i);
    }

    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        small.pop_back();
        const std::uint32_t l = large.back();
        large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0)
            small.push_back(l);
        else
            large.push_back(l);
    }
    // Residue cells get probability 1 (they alias to themselves).
    while (!large.empty()) {
        prob_[large.back()] = 1.0;
        alias_[large.back()] = large.back();
        large.pop_back();
    }
    while (!small.empty()) {
        prob_[small.back()] = 1.0;
        alias_[small.back()] = small.back();
        small.pop_back();
    }
}

std::size_t AliasTable::sample(Pcg64& rng) const {
    const std::size_t i = (std::size_t)rng.next_below(prob_.size());
    const double coin = rng.next_double();
    return coin < prob_[i] ? i : alias_[i];
}

}  // namespace partitions
