#include "partitions/model_params.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace partitions {

ModelParams ModelParams::power_law(double C, double p) {
    if (!(C > 0.0)) throw std::invalid_argument("ModelParams: C must be positive");
    if (!(p > 0.0)) throw std::invalid_argument("ModelParams: p must be positive");
    ModelParams m;
    m.kind_ = Kind::PowerLaw;
    m.C_ = C;
    m.p_ = p;
    m.logC_ = std::log(C);
    return m;
}

ModelParams ModelParams::explicit_table(std::vector<double> a) {
    if (a.empty()) throw std::invalid_argument("ModelParams: explicit table must be non-empty");
    for (double v : a) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("ModelParams: every a_k must be positive and finite");
    }
    ModelParams m;
    m.kind_ = Kind::Explicit;
    m.a_ = std::move(a);
    return m;
}

double ModelParams::C() const {
    if (kind_ != Kind::PowerLaw)
        throw std::invalid_argument("ModelParams: C is defined only for power-law parameters");
    return C_;
}

double ModelParams::p() const {
    if (kind_ != Kind::PowerLaw)
        throw std::invalid_argument("ModelParams: p is defined only for power-law parameters");
    return p_;
}

std::int64_t ModelParams::max_size() const {
    return kind_ == Kind::PowerLaw ? std::numeric_limits<std::int64_t>::max()
                                   : std::int64_t(a_.size());
}

double ModelParams::a(std::int64_t k) const {
    if (k < 1) throw std::invalid_argument("ModelParams: size k must be >= 1");
    if (kind_ == Kind::PowerLaw) return C_ * std::pow(double(k), p_ - 1.0);
    if (k > std::int64_t(a_.size()))
        throw std::invalid_argument("ModelParams: a_k undefined beyond the explicit table");
    return a_[std::size_t(k - 1)];
}

double ModelParams::log_a(std::int64_t k) const {
    if (k < 1) throw std::invalid_argument("ModelParams: size k must be >= 1");
    if (kind_ == Kind::PowerLaw) return logC_ + (p_ - 1.0) * std::log(double(k));
    if (k > std::int64_t(a_.size()))
        throw std::invalid_argument("ModelParams: a_k undefined beyond the explicit table");
    return std::log(a_[std::size_t(k - 1)]);
}

std::string ModelParams::describe() const {
    char buf[96];
    if (kind_ == Kind::PowerLaw) {
        std::snprintf(buf, sizeof buf, "power-law C=%.17g p=%.17g", C_, p_);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "explicit table of %zu sizes", a_.size());
    return buf;
}

}  // namespace partitions
