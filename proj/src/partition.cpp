#include "partitions/partition.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace partitions {

Partition Partition::from_counts(CountsMap counts) {
    Partition eta;
    std::int64_t total = 0;
    for (const auto& [k, n] : counts) {
        if (k < 1) throw std::invalid_argument("Partition: component size must be >= 1");
        if (n < 1) throw std::invalid_argument("Partition: stored multiplicity must be >= 1");
        total += k * n;
    }
    eta.counts_ = std::move(counts);
    eta.total_ = total;
    return eta;
}

Partition Partition::from_parts(const std::vector<std::int64_t>& parts) {
    CountsMap counts;
    for (std::int64_t k : parts) {
        if (k < 1) throw std::invalid_argument("Partition: part must be >= 1");
        ++counts[k];
    }
    return from_counts(std::move(counts));
}

std::int64_t Partition::multiplicity(std::int64_t k) const {
    auto it = counts_.find(k);
    return it == counts_.end() ? 0 : it->second;
}

std::int64_t Partition::component_count() const {
    std::int64_t nu0 = 0;
    for (const auto& [k, n] : counts_) {
        (void)k;
        nu0 += n;
    }
    return nu0;
}

std::int64_t Partition::largest_component() const {
    return counts_.empty() ? 0 : counts_.rbegin()->first;
}

std::int64_t Partition::tail_count(std::int64_t j) const {
    std::int64_t acc = 0;
    for (auto it = counts_.lower_bound(j); it != counts_.end(); ++it) acc += it->second;
    return acc;
}

std::int64_t Partition::tail_mass(std::int64_t j) const {
    std::int64_t acc = 0;
    for (auto it = counts_.lower_bound(j); it != counts_.end(); ++it)
        acc += it->first * it->second;
    return acc;
}

std::int64_t Partition::nu(double u) const {
    if (u <= 0.0) return component_count();
    double c = std::ceil(u);
    if (c > double(total_)) return 0;
    return tail_count(std::int64_t(c));
}

std::string Partition::to_json() const {
    nlohmann::json j;
    j["N"] = total_;
    auto arr = nlohmann::json::array();
    for (const auto& [k, n] : counts_) arr.push_back({k, n});
    j["counts"] = std::move(arr);
    return j.dump();
}

Partition Partition::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CountsMap counts;
    for (const auto& pair : j.at("counts")) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("Partition: counts entries must be [k, n_k] pairs");
        counts[pair[0].get<std::int64_t>()] = pair[1].get<std::int64_t>();
    }
    Partition eta = from_counts(std::move(counts));
    if (j.contains("N") && j["N"].get<std::int64_t>() != eta.total())
        throw std::invalid_argument("Partition: declared N does not match counts");
    return eta;
}

YoungCurve young_curve(const Partition& eta, std::optional<double> r) {
    if (r && !(*r > 0.0)) throw std::invalid_argument("young_curve: scaling must be positive");
    YoungCurve curve;
    curve.scaled = r.has_value();
    curve.scale_factor = r.value_or(1.0);

    const std::int64_t n_total = eta.total();
    if (n_total == 0) {
        curve.samples.push_back({0.0, 0.0});
        return curve;
    }
    const double value_scale = curve.scaled ? curve.scale_factor / double(n_total) : 1.0;
    const double u_scale = curve.scaled ? 1.0 / curve.scale_factor : 1.0;

    // Tail counts at each distinct size present, descending scan.
    std::vector<YoungCurve::Point> pts;
    std::int64_t tail = 0;
    for (auto it = eta.counts().rbegin(); it != eta.counts().rend(); ++it) {
        tail += it->second;
        pts.push_back({double(it->first) * u_scale, double(tail) * value_scale});
    }
    curve.samples.push_back({0.0, double(tail) * value_scale});  // ν(0)
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) curve.samples.push_back(*it);
    return curve;
}

double curve_value(const YoungCurve& curve, double u) {
    if (curve.samples.empty()) return 0.0;
    if (u <= curve.samples.front().u) return curve.samples.front().value;
    // First sample with u_i >= u carries the value on (u_{i-1}, u_i].
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        if (u <= curve.samples[i].u) return curve.samples[i].value;
    }
    return 0.0;
}

double curve_integral(const YoungCurve& curve) {
    double acc = 0.0;
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        acc += curve.samples[i].value * (curve.samples[i].u - curve.samples[i - 1].u);
    }
    return acc;
}

std::int64_t largest_component(const Partition& eta) { return eta.largest_component(); }

}  // namespace partitions
