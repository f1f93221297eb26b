#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace torusq {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// A real number given in one of three exact forms, with a high-precision
/// evaluator.
class RealTarget {
public:
    enum class Kind { Quadratic, ContinuedFraction, Rational };

    /// (a + b*sqrt(d)) / c, c > 0, d >= 0.
    static RealTarget quadratic(BigInt a, BigInt b, BigInt d, BigInt c);
    static RealTarget sqrt_of(long d) { return quadratic(0, 1, d, 1); }
    static RealTarget rational(BigInt p, BigInt q);
    /// Defined by its partial quotients [q0; q1, q2, ...].
    static RealTarget from_quotients(std::vector<BigInt> quotients);

    Kind kind() const { return kind_; }

    /// Rational r with |alpha - r| < 2^-bits.  A continued-fraction target
    /// whose stored quotients run out first returns its final convergent,
    /// which is within 1/d^2 of the underlying number (d its denominator).
    BigRational evaluate(unsigned bits) const;

    double to_double() const;

    /// First `count` partial quotients [q0; q1, ...].  A rational target may
    /// return fewer (its expansion terminates); an irrational target always
    /// fills the request or throws (continued-fraction kind, list exhausted).
    std::vector<BigInt> partial_quotients(std::size_t count) const;

    bool is_rational() const { return kind_ == Kind::Rational; }
    const BigRational& rational_value() const { return rat_; }

private:
    Kind kind_ = Kind::Rational;
    // quadratic data
    BigInt qa_, qb_, qd_, qc_;
    // rational data
    BigRational rat_;
    // continued-fraction data
    std::vector<BigInt> quotients_;
};

/// Continued-fraction convergent c/d at a given index (standard recurrence,
/// index 0 = the integer part).
struct Convergent {
    BigInt c;
    BigInt d;
    std::size_t index = 0;
};

struct DiophantineReport {
    double gamma = 0.0;
    double c_estimate = 0.0;  // min over the scan of |n1 a1 + n2 a2 + k| * ||n||^gamma
    double min_gap = 0.0;     // the un-normalized minimal gap
    long witness_n1 = 0, witness_n2 = 0, witness_k = 0;
    long n_max = 0;
    std::string to_json() const;
};

struct BetaConstruction {
    RealTarget beta;                     // [0; b1, b2, ...]
    std::vector<BigInt> partial_quotients;  // b1..b_{levels+1}
    std::vector<Convergent> convergents;    // c_n/d_n for n = 1..levels+1
};

/// First `count` convergents via the standard recurrence, exact integers.
std::vector<Convergent> convergents(const RealTarget& target, std::size_t count);

/// Nearest-integer numerators a_i = round(N * alpha_i), round-half-to-even;
/// guarantees |alpha_i - a_i/N| <= 1/(2N).
std::pair<long, long> best_approx(const RealTarget& alpha1, const RealTarget& alpha2, int N);

/// Exhaustive scan of |n1 a1 + n2 a2 + k| * ||n||_inf^gamma over
/// 0 < ||n||_inf <= n_max with k the nearest integer.
DiophantineReport diophantine_scan(const RealTarget& alpha1, const RealTarget& alpha2, double gamma,
                                   long n_max);

/// Builds beta with partial quotients b1 = 1, b_{n+1} = ceil(F(d_n)/d_n^2),
/// so that F(d_n) <= b_{n+1} d_n^2 and |beta - c_n/d_n| < 1/F(d_n) hold at
/// every level; both inequalities are asserted in exact integer arithmetic.
BetaConstruction construct_beta(const std::function<BigInt(const BigInt&)>& F, std::size_t levels);

/// Generalized inverse F = G^{-1} for G(x) = power * log(x), defined as
/// F(y) = min{x >= 1 : G(x) >= y} = ceil(e^{y/power}).  Used by the
/// slow-convergence driver with g(x) = x^power, G = log g.
BigInt generalized_inverse_exp(const BigInt& y, double power);

}  // namespace torusq
