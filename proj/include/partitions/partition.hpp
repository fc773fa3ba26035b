#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace partitions {

// Integer partition stored sparsely: counts maps a component size k >= 1 to
// its multiplicity n_k >= 1 (absent sizes mean n_k = 0). Immutable after
// construction; Σ k·n_k = total is checked on construction.
class Partition {
public:
    using CountsMap = std::map<std::int64_t, std::int64_t>;

    Partition() = default;  // the empty partition, N = 0

    static Partition from_counts(CountsMap counts);

    // Builds from a multiset of parts, e.g. {3,3,1} -> {1:1, 3:2}.
    static Partition from_parts(const std::vector<std::int64_t>& parts);

    std::int64_t total() const { return total_; }
    const CountsMap& counts() const { return counts_; }

    std::int64_t multiplicity(std::int64_t k) const;

    // ν(0): total number of components.
    std::int64_t component_count() const;

    // q_N: largest component size; 0 for the empty partition.
    std::int64_t largest_component() const;

    // Number of components of size >= j (integer tail sum).
    std::int64_t tail_count(std::int64_t j) const;

    // Mass carried by components of size >= j: Σ_{k>=j} k·n_k.
    std::int64_t tail_mass(std::int64_t j) const;

    // ν(u) = Σ_{k >= ceil(u)} n_k (coincides with Σ_{k>=u} at integer u).
    std::int64_t nu(double u) const;

    // JSON round trip: {"N": int, "counts": [[k, n_k], ...]} sorted by k.
    std::string to_json() const;
    static Partition from_json(const std::string& text);

    bool operator==(const Partition& other) const {
        return total_ == other.total_ && counts_ == other.counts_;
    }

private:
    CountsMap counts_;
    std::int64_t total_ = 0;
};

// Young-diagram boundary as a non-increasing step function. samples[i] is a
// point (u_i, value_i); the curve equals value_i on the piece (u_{i-1}, u_i]
// and value_0 on [0, u_0] (u_0 = 0 always), and 0 beyond the last abscissa.
struct YoungCurve {
    struct Point {
        double u;
        double value;
    };
    std::vector<Point> samples;
    bool scaled = false;
    double scale_factor = 1.0;  // r_N when scaled
};

// Unscaled boundary ν(u), or the scaled ν̃(u) = (r/N)·ν(r·u) when r is given.
// For N = 0 returns the zero curve.
YoungCurve young_curve(const Partition& eta, std::optional<double> r = std::nullopt);

// Step-function evaluation of a YoungCurve at u >= 0.
double curve_value(const YoungCurve& curve, double u);

// Exact step-function integral: Σ_i value_i (u_i - u_{i-1}).
double curve_integral(const YoungCurve& curve);

// q_N(η); 0 for the empty partition.
std::int64_t largest_component(const Partition& eta);

}  // namespace partitions
