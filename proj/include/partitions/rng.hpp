#pragma once

#include <cstdint>
#include <vector>

namespace partitions {

// PCG64 (setseq_xsl_rr_128_64): 128-bit LCG state with stream selection and
// the XSL-RR output permutation. Chosen over <random> engines because its
// output is specified bit-exactly and therefore reproducible across
// platforms and standard libraries. Output semantics match the reference
// implementation (and numpy's PCG64 bit generator).
class Pcg64 {
public:
    Pcg64(std::uint64_t initstate, std::uint64_t initseq);

    std::uint64_t next_u64();

    // 53-bit uniform in [0, 1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, bound), bound >= 1 (Lemire with rejection).
    std::uint64_t next_below(std::uint64_t bound);

private:
    unsigned __int128 state_;
    unsigned __int128 inc_;
};

// Replica stream derivation (documented reproducibility contract):
//   s0        = splitmix64(seed)
//   initstate = splitmix64(s0 + replica)
//   initseq   = replica            (distinct streams by construction)
std::uint64_t splitmix64(std::uint64_t x);
Pcg64 replica_rng(std::uint64_t seed, std::uint64_t replica);

// Exact Poisson variate: inversion (multiplication method) for mean < 10,
// Hörmann's PTRD transformed rejection for mean >= 10. Never a normal
// approximation. mean must be finite and >= 0.
std::int64_t sample_poisson(Pcg64& rng, double mean);

// Walker/Vose alias table over a fixed finite distribution. Construction is
// deterministic (stable index order); sampling consumes exactly two RNG
// draws (index, coin).
class AliasTable {
public:
    AliasTable() = default;  // empty; sampling an empty table throws
    explicit AliasTable(const std::vector<double>& weights);

    std::size_t size() const { return prob_.size(); }
    std::size_t sample(Pcg64& rng) const;

    // Normalized probability of cell i (for tests).
    double probability(std::size_t i) const { return norm_[i]; }

private:
    std::vector<double> prob_;   // acceptance threshold per cell
    std::vector<std::uint32_t> alias_;
    std::vector<double> norm_;
};

}  // namespace partitions
