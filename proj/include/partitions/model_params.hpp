#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace partitions {

// Parameter function a_k of the measure. Either the power-law family
// a_k = C·k^(p-1) with C > 0, p > 0, or an explicit finite table a_1..a_max
// of positive reals (sizes beyond the table are undefined and error).
class ModelParams {
public:
    enum class Kind { PowerLaw, Explicit };

    static ModelParams power_law(double C, double p);
    static ModelParams explicit_table(std::vector<double> a);

    Kind kind() const { return kind_; }
    bool is_power_law() const { return kind_ == Kind::PowerLaw; }

    double C() const;  // PowerLaw only
    double p() const;  // PowerLaw only

    // Largest size with a defined a_k (INT64_MAX for PowerLaw).
    std::int64_t max_size() const;

    double a(std::int64_t k) const;
    double log_a(std::int64_t k) const;

    const std::vector<double>& table() const { return a_; }

    std::string describe() const;

private:
    Kind kind_ = Kind::PowerLaw;
    double C_ = 1.0;
    double p_ = 1.0;
    double logC_ = 0.0;
    std::vector<double> a_;
};

}  // namespace partitions
