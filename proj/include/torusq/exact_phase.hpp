#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace torusq {

/// Unimodular complex number e^{i*pi*num/den}, kept as an exact rational
/// exponent.  The exponent is reduced mod 2 and stored in lowest terms, so
/// products of phases never touch floating point.
class ExactPhase {
public:
    ExactPhase() : num_(0), den_(1) {}

    /// Phase e^{i*pi*num/den}.
    ExactPhase(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::invalid_argument("ExactPhase: zero denominator");
        if (den < 0) { den = -den; num = -num; }
        num_ = num; den_ = den;
        reduce();
    }

    /// e_N(x) = e^{2*pi*i*x/N} as an exact phase.
    static ExactPhase root_of_unity(std::int64_t x, std::int64_t n) {
        return ExactPhase(2 * x, n);
    }

    static ExactPhase one() { return ExactPhase(); }
    static ExactPhase minus_one() { return ExactPhase(1, 1); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    ExactPhase operator*(const ExactPhase& o) const {
        const std::int64_t g = std::gcd(den_, o.den_);
        // num/den + onum/oden with lcm denominator; operands stay small
        // because exponents are reduced mod 2 on construction.
        ExactPhase r;
        r.den_ = den_ / g * o.den_;
        r.num_ = num_ * (o.den_ / g) + o.num_ * (den_ / g);
        r.reduce();
        return r;
    }

    ExactPhase conj() const { return ExactPhase(-num_, den_); }
    ExactPhase inverse() const { return conj(); }

    /// Principal L-th root; remaining roots are obtained by multiplying with
    /// root_of_unity(m, L).
    ExactPhase root(std::int64_t l) const {
        if (l <= 0) throw std::invalid_argument("ExactPhase::root: order must be positive");
        return ExactPhase(num_, den_ * l);
    }

    ExactPhase pow(std::int64_t k) const { return ExactPhase(num_ * k, den_); }

    bool operator==(const ExactPhase& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const ExactPhase& o) const { return !(*this == o); }

    bool is_one() const { return num_ == 0; }

    std::complex<double> to_complex() const {
        constexpr double pi = 3.141592653589793238462643383279502884;
        return std::polar(1.0, pi * static_cast<double>(num_) / static_cast<double>(den_));
    }

    /// Exponent as a real in [0,2), i.e. the angle divided by pi.
    double exponent() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    void reduce() {
        const std::int64_t two_den = 2 * den_;
        num_ %= two_den;
        if (num_ < 0) num_ += two_den;
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ >= 2 * den_) num_ -= 2 * den_;
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace torusq
