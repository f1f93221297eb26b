#include "torusq/diophantine.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace torusq {

namespace mp = boost::multiprecision;

namespace {

// floor(num/den) for den > 0.
BigInt floor_div(const BigInt& num, const BigInt& den) {
    BigInt q = num / den;
    if (num % den != 0 && ((num < 0) != (den < 0))) --q;
    return q;
}

// round(num/den) half-to-even, den > 0.
BigInt round_half_even(const BigInt& num, const BigInt& den) {
    BigInt t = floor_div(num, den);
    const BigInt rem2 = 2 * (num - t * den);
    if (rem2 > den) return t + 1;
    if (rem2 < den) return t;
    return (t % 2 == 0) ? t : t + 1;
}

unsigned bit_length(const BigInt& x) { return x == 0 ? 1u : static_cast<unsigned>(mp::msb(mp::abs(x))) + 1u; }

}  // namespace

RealTarget RealTarget::quadratic(BigInt a, BigInt b, BigInt d, BigInt c) {
    if (c <= 0) throw std::invalid_argument("RealTarget::quadratic: denominator must be positive");
    if (d < 0) throw std::invalid_argument("RealTarget::quadratic: d must be nonnegative");
    const BigInt s = mp::sqrt(d);
    if (s * s == d) return rational(a + b * s, c);  // degenerate: actually rational
    RealTarget t;
    t.kind_ = Kind::Quadratic;
    t.qa_ = std::move(a);
    t.qb_ = std::move(b);
    t.qd_ = std::move(d);
    t.qc_ = std::move(c);
    return t;
}

RealTarget RealTarget::rational(BigInt p, BigInt q) {
    if (q == 0) throw std::invalid_argument("RealTarget::rational: zero denominator");
    RealTarget t;
    t.kind_ = Kind::Rational;
    t.rat_ = BigRational(std::move(p), std::move(q));
    return t;
}

RealTarget RealTarget::from_quotients(std::vector<BigInt> quotients) {
    if (quotients.empty()) throw std::invalid_argument("RealTarget::from_quotients: empty expansion");
    for (std::size_t i = 1; i < quotients.size(); ++i)
        if (quotients[i] < 1) throw std::invalid_argument("RealTarget::from_quotients: partial quotients must be >= 1");
    RealTarget t;
    t.kind_ = Kind::ContinuedFraction;
    t.quotients_ = std::move(quotients);
    return t;
}

BigRational RealTarget::evaluate(unsigned bits) const {
    switch (kind_) {
        case Kind::Rational:
            return rat_;
        case Kind::Quadratic: {
            const unsigned m = bits + bit_length(qb_) + 2;
            const BigInt s = mp::sqrt(BigInt(qd_ << (2 * m)));  // floor(sqrt(d) * 2^m)
            // |alpha - (a*2^m + b*s) / (c*2^m)| <= |b| 2^-m / c < 2^-bits
            return BigRational(qa_ * (BigInt(1) << m) + qb_ * s, qc_ * (BigInt(1) << m));
        }
        case Kind::ContinuedFraction: {
            BigInt h0 = 1, k0 = 0;  // index -1
            BigInt h1 = quotients_[0], k1 = 1;
            for (std::size_t i = 1; i < quotients_.size(); ++i) {
                BigInt h2 = quotients_[i] * h1 + h0;
                BigInt k2 = quotients_[i] * k1 + k0;
                h0 = h1; k0 = k1; h1 = h2; k1 = k2;
                // |alpha - h1/k1| < 1/(k1*k0) <= sought precision?
                if (k0 * k1 > (BigInt(1) << bits)) return BigRational(h1, k1);
            }
            // Expansion exhausted: the final convergent is the best value this
            // target can provide (exact for a complete finite expansion,
            // within 1/k^2 of the underlying number for a truncated one).
            return BigRational(h1, k1);
        }
    }
    throw std::logic_error("RealTarget::evaluate: bad kind");
}

double RealTarget::to_double() const {
    const BigRational r = evaluate(80);
    return static_cast<double>(r);
}

std::vector<BigInt> RealTarget::partial_quotients(std::size_t count) const {
    std::vector<BigInt> out;
    switch (kind_) {
        case Kind::ContinuedFraction: {
            if (quotients_.size() < count)
                throw std::runtime_error(
                    "RealTarget::partial_quotients: stored expansion shorter than requested; raise working "
                    "precision by supplying more quotients");
            out.assign(quotients_.begin(), quotients_.begin() + static_cast<long>(count));
            return out;
        }
        case Kind::Rational: {
            BigInt p = mp::numerator(rat_), q = mp::denominator(rat_);
            while (q != 0 && out.size() < count) {
                const BigInt a = floor_div(p, q);
                out.push_back(a);
                BigInt r = p - a * q;
                p = q;
                q = r;
            }
            return out;
        }
        case Kind::Quadratic: {
            // surd algorithm for (P + sqrt(D)) / Q with Q | D - P^2
            BigInt P = qa_ * qc_;
            BigInt D = qb_ * qb_ * qd_ * qc_ * qc_;
            BigInt Q = qc_ * qc_;
            if (qb_ < 0) throw std::invalid_argument("partial_quotients: negative surd coefficient unsupported");
            const BigInt s = mp::sqrt(D);
            while (out.size() < count) {
                if (Q <= 0) throw std::runtime_error("partial_quotients: surd iteration left canonical form");
                const BigInt a = floor_div(P + s, Q);
                out.push_back(a);
                P = a * Q - P;
                Q = (D - P * P) / Q;
            }
            return out;
        }
    }
    throw std::logic_error("partial_quotients: bad kind");
}

std::vector<Convergent> convergents(const RealTarget& target, std::size_t count) {
    const std::vector<BigInt> q = target.partial_quotients(count);
    std::vector<Convergent> out;
    out.reserve(q.size());
    BigInt h_prev = 1, k_prev = 0;  // index -1
    BigInt h_prev2 = 0, k_prev2 = 1;  // index -2
    for (std::size_t i = 0; i < q.size(); ++i) {
        const BigInt h = q[i] * h_prev + h_prev2;
        const BigInt k = q[i] * k_prev + k_prev2;
        out.push_back({h, k, i});
        h_prev2 = h_prev; k_prev2 = k_prev;
        h_prev = h; k_prev = k;
    }
    return out;
}

std::pair<long, long> best_approx(const RealTarget& alpha1, const RealTarget& alpha2, int N) {
    if (N < 1) throw std::invalid_argument("best_approx: N must be positive");
    auto one = [&](const RealTarget& t) {
        const BigRational r = t.evaluate(64 + bit_length(BigInt(N)));
        const BigInt a = round_half_even(BigInt(N) * mp::numerator(r), mp::denominator(r));
        return static_cast<long>(a);
    };
    return {one(alpha1), one(alpha2)};
}

DiophantineReport diophantine_scan(const RealTarget& alpha1, const RealTarget& alpha2, double gamma,
                                   long n_max) {
    if (gamma <= 0.0) throw std::invalid_argument("diophantine_scan: gamma must be positive");
    if (n_max < 1) throw std::invalid_argument("diophantine_scan: n_max must be positive");

    // Work with alpha_i * 2^s as integers; the induced error in any scanned
    // combination is below (|n1|+|n2|) * 2^-s, far under double resolution.
    constexpr unsigned s = 192;
    const BigInt scale = BigInt(1) << s;
    auto scaled = [&](const RealTarget& t) {
        const BigRational r = t.evaluate(s + 8);
        return round_half_even(mp::numerator(r) * scale, mp::denominator(r));
    };
    const BigInt A1 = scaled(alpha1), A2 = scaled(alpha2);
    const bool exact = alpha1.is_rational() && alpha2.is_rational();

    DiophantineReport rep;
    rep.gamma = gamma;
    rep.n_max = n_max;
    bool first = true;
    const double inv_scale = std::ldexp(1.0, -static_cast<int>(s));
    for (long n1 = -n_max; n1 <= n_max; ++n1) {
        for (long n2 = -n_max; n2 <= n_max; ++n2) {
            if (n1 == 0 && n2 == 0) continue;
            BigInt v;
            if (exact) {
                // keep rationals exact so a true resonance reports gap 0
                const BigRational rv = BigRational(n1) * alpha1.rational_value() +
                                       BigRational(n2) * alpha2.rational_value();
                const BigInt num = mp::numerator(rv), den = mp::denominator(rv);
                const BigInt k = -round_half_even(num, den);
                const BigRational gapr = mp::abs(rv + k);
                const double gap = static_cast<double>(gapr);
                const double norm = static_cast<double>(std::max(std::labs(n1), std::labs(n2)));
                const double c = gap * std::pow(norm, gamma);
                if (first || c < rep.c_estimate) {
                    first = false;
                    rep.c_estimate = c;
                    rep.min_gap = gap;
                    rep.witness_n1 = n1; rep.witness_n2 = n2; rep.witness_k = static_cast<long>(k);
                }
                continue;
            }
            v = n1 * A1 + n2 * A2;
            const BigInt k = -round_half_even(v, scale);
            const BigInt diff = mp::abs(v + k * scale);
            const double gap = static_cast<double>(diff) * inv_scale;
            const double norm = static_cast<double>(std::max(std::labs(n1), std::labs(n2)));
            const double c = gap * std::pow(norm, gamma);
            if (first || c < rep.c_estimate) {
                first = false;
                rep.c_estimate = c;
                rep.min_gap = gap;
                rep.witness_n1 = n1; rep.witness_n2 = n2; rep.witness_k = static_cast<long>(k);
            }
        }
    }
    return rep;
}

std::string DiophantineReport::to_json() const {
    nlohmann::ordered_json j;
    j["gamma"] = gamma;
    j["n_max"] = n_max;
    j["c_estimate"] = c_estimate;
    j["min_gap"] = min_gap;
    j["witness"] = {witness_n1, witness_n2, witness_k};
    return j.dump(2);
}

BetaConstruction construct_beta(const std::function<BigInt(const BigInt&)>& F, std::size_t levels) {
    std::vector<BigInt> b;       // b_1..b_{levels+1}
    std::vector<Convergent> cv;  // lemma-indexed convergents c_n/d_n, n >= 1
    b.push_back(1);

    BigInt c_prev = 1, d_prev = 0;  // index 0 values are c_0 = 0, d_0 = 1
    BigInt c_cur = 0, d_cur = 1;
    for (std::size_t n = 1; n <= levels + 1; ++n) {
        const BigInt& bn = b.back();
        BigInt c_next = bn * c_cur + c_prev;
        BigInt d_next = bn * d_cur + d_prev;
        c_prev = c_cur; d_prev = d_cur;
        c_cur = c_next; d_cur = d_next;
        cv.push_back({c_cur, d_cur, n});
        if (n <= levels) {
            const BigInt fd = F(d_cur);
            if (fd <= 0) throw std::invalid_argument("construct_beta: F must be positive");
            BigInt bn1 = floor_div(fd + d_cur * d_cur - 1, d_cur * d_cur);  // ceil(F(d)/d^2)
            if (bn1 < 1) bn1 = 1;
            b.push_back(bn1);
            // lemma inequality (1), exact
            if (!(fd <= bn1 * d_cur * d_cur))
                throw std::logic_error("construct_beta: F(d_n) <= b_{n+1} d_n^2 violated");
        }
    }
    // lemma inequality (2) via the classical bracket |beta - c_n/d_n| < 1/(d_n d_{n+1})
    for (std::size_t n = 0; n + 1 < cv.size(); ++n) {
        const BigInt fd = F(cv[n].d);
        if (!(cv[n].d * cv[n + 1].d >= fd))
            throw std::logic_error("construct_beta: |beta - c_n/d_n| < 1/F(d_n) not certified");
    }

    std::vector<BigInt> quots;
    quots.reserve(b.size() + 1);
    quots.push_back(0);
    for (const BigInt& x : b) quots.push_back(x);

    BetaConstruction out{RealTarget::from_quotients(std::move(quots)), std::move(b), std::move(cv)};
    return out;
}

BigInt generalized_inverse_exp(const BigInt& y, double power) {
    if (power <= 0.0) throw std::invalid_argument("generalized_inverse_exp: power must be positive");
    if (y <= 0) return 1;
    const long double x = static_cast<long double>(static_cast<double>(y)) / static_cast<long double>(power);
    if (x > 11000.0L)
        throw std::overflow_error("generalized_inverse_exp: level too deep for the exponential inverse");
    // exp(x) fits in long double up to x ~ 11356; split x to keep double
    // rounding controlled: e^x = (e^{x/m})^m with each factor in range.
    const long double v = std::exp(x);
    if (v < 9.0e18L) {
        BigInt r = static_cast<BigInt>(static_cast<unsigned long long>(std::ceil(v)));
        if (r < 1) r = 1;
        return r;
    }
    // large case: compute ceil via a scaled integer power. Use
    // e^x = 2^{x/ln 2}; split into integer exponent and mantissa.
    const long double log2e = 1.4426950408889634073599246810018921L;
    const long double t = x * log2e;
    const auto e2 = static_cast<long long>(std::floor(t));
    const long double frac = t - static_cast<long double>(e2);  // in [0,1)
    const long double mant = std::exp2(frac);                   // in [1,2)
    // 63-bit fixed-point mantissa, rounded up so the result stays >= e^x.
    const auto m63 = static_cast<unsigned long long>(std::ceil(mant * 9223372036854775808.0L));
    BigInt r = BigInt(m63);
    if (e2 >= 63)
        r <<= static_cast<unsigned>(e2 - 63);
    else
        r = (r >> static_cast<unsigned>(63 - e2)) + 1;
    if (r < 1) r = 1;
    return r;
}

}  // namespace torusq
