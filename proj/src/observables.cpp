#include "torusq/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace torusq {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kCoeffDropTol = 1e-14;

cplx e_of(double x) { return std::polar(1.0, 2.0 * kPi * x); }
}  // namespace

TrigPolynomial TrigPolynomial::harmonic(const WeylIndex& n, cplx c) {
    TrigPolynomial f;
    f.set_coeff(n, c);
    return f;
}

TrigPolynomial TrigPolynomial::constant(cplx c) { return harmonic({0, 0}, c); }

TrigPolynomial TrigPolynomial::cosine_p(long k, double amplitude) {
    TrigPolynomial f;
    f.set_coeff({k, 0}, {amplitude / 2.0, 0.0});
    f.set_coeff({-k, 0}, {amplitude / 2.0, 0.0});
    return f;
}

cplx TrigPolynomial::coeff(const WeylIndex& n) const {
    auto it = coeffs_.find(n);
    return it == coeffs_.end() ? cplx{0.0, 0.0} : it->second;
}

void TrigPolynomial::set_coeff(const WeylIndex& n, cplx c) {
    if (c == cplx{0.0, 0.0})
        coeffs_.erase(n);
    else
        coeffs_[n] = c;
}

void TrigPolynomial::add_coeff(const WeylIndex& n, cplx c) { set_coeff(n, coeff(n) + c); }

bool TrigPolynomial::is_real_valued(double tol) const {
    for (const auto& [n, c] : coeffs_)
        if (std::abs(coeff(-n) - std::conj(c)) > tol) return false;
    return true;
}

bool TrigPolynomial::is_p_only() const {
    for (const auto& [n, c] : coeffs_)
        if (n.n2 != 0) return false;
    return true;
}

long TrigPolynomial::max_sup_norm() const {
    long r = 0;
    for (const auto& [n, c] : coeffs_) r = std::max({r, std::abs(n.n1), std::abs(n.n2)});
    return r;
}

cplx TrigPolynomial::evaluate(double p, double q) const {
    cplx s{0.0, 0.0};
    for (const auto& [n, c] : coeffs_) s += c * e_of(static_cast<double>(n.n1) * p + static_cast<double>(n.n2) * q);
    return s;
}

TrigPolynomial TrigPolynomial::conjugate() const {
    TrigPolynomial r;
    for (const auto& [n, c] : coeffs_) r.set_coeff(-n, std::conj(c));
    return r;
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& o) const {
    TrigPolynomial r = *this;
    for (const auto& [n, c] : o.coeffs_) r.add_coeff(n, c);
    return r;
}

TrigPolynomial TrigPolynomial::operator-(const TrigPolynomial& o) const {
    TrigPolynomial r = *this;
    for (const auto& [n, c] : o.coeffs_) r.add_coeff(n, -c);
    return r;
}

TrigPolynomial TrigPolynomial::operator*(cplx s) const {
    TrigPolynomial r;
    for (const auto& [n, c] : coeffs_) r.set_coeff(n, c * s);
    return r;
}

TrigPolynomial TrigPolynomial::operator*(const TrigPolynomial& o) const {
    TrigPolynomial r;
    for (const auto& [m, cm] : coeffs_)
        for (const auto& [n, cn] : o.coeffs_) r.add_coeff(m + n, cm * cn);
    return r;
}

double TrigPolynomial::prune(double eps) {
    double dropped = 0.0;
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (std::abs(it->second) <= eps) {
            dropped += std::abs(it->second);
            it = coeffs_.erase(it);
        } else {
            ++it;
        }
    }
    return dropped;
}

std::string TrigPolynomial::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [n, c] : coeffs_) {
        std::ostringstream key;
        key << n.n1 << "," << n.n2;
        j[key.str()] = {c.real(), c.imag()};
    }
    return j.dump();
}

TrigPolynomial TrigPolynomial::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TrigPolynomial f;
    for (const auto& [key, val] : j.items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("TrigPolynomial: bad key " + key);
        const long n1 = std::stol(key.substr(0, comma));
        const long n2 = std::stol(key.substr(comma + 1));
        f.set_coeff({n1, n2}, {val.at(0).get<double>(), val.at(1).get<double>()});
    }
    return f;
}

StateVector QuantizedObservable::apply_to(const StateVector& psi) const {
    StateVector out(dim);
    for (const auto& [c, op] : terms) {
        const StateVector t = apply(op, psi);
        for (int q = 0; q < dim; ++q) out(q) += c * t(q);
    }
    return out;
}

QuantizedObservable quantize(const TrigPolynomial& f, int N, long max_support) {
    if (f.max_sup_norm() > max_support)
        throw std::invalid_argument("quantize: observable support exceeds the configured cap");
    QuantizedObservable op;
    op.dim = N;
    for (const auto& [n, c] : f.coeffs()) op.terms.emplace_back(c, weyl_operator(n, N));
    return op;
}

TrigPolynomial compose_translation(const TrigPolynomial& f, long a1, long a2, int N) {
    TrigPolynomial r;
    for (const auto& [n, c] : f.coeffs()) {
        // e(n . a/N), exact
        const ExactPhase ph = ExactPhase::root_of_unity(n.n1 * a1 + n.n2 * a2, N);
        r.set_coeff(n, c * ph.to_complex());
    }
    return r;
}

TrigPolynomial compose_translation(const TrigPolynomial& f, double alpha1, double alpha2) {
    TrigPolynomial r;
    for (const auto& [n, c] : f.coeffs())
        r.set_coeff(n, c * e_of(static_cast<double>(n.n1) * alpha1 + static_cast<double>(n.n2) * alpha2));
    return r;
}

SmoothTruncation compose_shear(const TrigPolynomial& f, const TrigPolynomial& h, int K) {
    if (!h.is_p_only()) throw std::invalid_argument("compose_shear: h must depend on p only");
    if (K < 4 || (K & (K - 1)) != 0) throw std::invalid_argument("compose_shear: K must be a power of two >= 4");

    // Group f by q-frequency: f(p, q + h(p)) = sum_{n2} e(n2 q) G_{n2}(p),
    // G_{n2}(p) = e(n2 h(p)) sum_{n1} fhat(n1,n2) e(n1 p).
    std::map<long, std::vector<std::pair<long, cplx>>> rows;
    for (const auto& [n, c] : f.coeffs()) rows[n.n2].emplace_back(n.n1, c);

    SmoothTruncation out;
    double dropped = 0.0;
    std::vector<cplx> samples(static_cast<std::size_t>(K));
    for (const auto& [n2, terms] : rows) {
        for (int j = 0; j < K; ++j) {
            const double p = static_cast<double>(j) / static_cast<double>(K);
            cplx g{0.0, 0.0};
            for (const auto& [n1, c] : terms) g += c * e_of(static_cast<double>(n1) * p);
            const cplx hp = h.evaluate(p, 0.0);
            samples[static_cast<std::size_t>(j)] =
                g * std::exp(cplx{0.0, 2.0 * kPi} * (static_cast<double>(n2) * hp));
        }
        // direct DFT of the samples; frequencies mapped to (-K/2, K/2]
        for (int m = 0; m < K; ++m) {
            cplx c{0.0, 0.0};
            for (int j = 0; j < K; ++j)
                c += samples[static_cast<std::size_t>(j)] *
                     e_of(-static_cast<double>((static_cast<long>(m) * j) % K) / static_cast<double>(K));
            c /= static_cast<double>(K);
            const long n1 = m <= K / 2 ? m : m - K;
            if (std::abs(c) > kCoeffDropTol)
                out.poly.add_coeff({n1, n2}, c);
            else
                dropped += std::abs(c);
        }
    }
    dropped += out.poly.prune(kCoeffDropTol);
    out.radius = static_cast<double>(out.poly.max_sup_norm());
    out.tail_bound = dropped;
    return out;
}

TrigPolynomial time_average(const TrigPolynomial& f, long a1, long a2, int N, long T) {
    TrigPolynomial r;
    for (const auto& [n, c] : f.coeffs()) {
        const long na = n.n1 * a1 + n.n2 * a2;
        if (T == N) {
            // exact case split: survive iff n.a = 0 (mod N)
            if (mod_n(na, N) == 0) r.set_coeff(n, c);
            continue;
        }
        cplx s{0.0, 0.0};
        for (long t = 0; t < T; ++t) s += ExactPhase::root_of_unity(na * t, N).to_complex();
        r.set_coeff(n, c * s / static_cast<double>(T));
    }
    return r;
}

TrigPolynomial poisson_bracket(const TrigPolynomial& f, const TrigPolynomial& g) {
    TrigPolynomial r;
    for (const auto& [m, cm] : f.coeffs())
        for (const auto& [n, cn] : g.coeffs()) {
            const long w = symplectic(m, n);
            if (w != 0) r.add_coeff(m + n, cm * cn * (-4.0 * kPi * kPi * static_cast<double>(w)));
        }
    return r;
}

TrigPolynomial antiderivative_p(const TrigPolynomial& f) {
    if (!f.is_p_only()) throw std::invalid_argument("antiderivative_p: argument must be p-only");
    if (std::abs(f.mean()) > 1e-15) throw std::invalid_argument("antiderivative_p: argument must have zero mean");
    TrigPolynomial w;
    for (const auto& [n, c] : f.coeffs())
        w.set_coeff(n, c / (cplx{0.0, 2.0 * kPi} * static_cast<double>(n.n1)));
    return w;
}

SmoothTruncation gaussian_family(const WeylIndex& n0, double decay) {
    if (decay <= 0.0) throw std::invalid_argument("gaussian_family: decay must be positive");
    if (n0.n1 == 0 && n0.n2 == 0) throw std::invalid_argument("gaussian_family: n0 must be nonzero");
    const double step = decay * std::hypot(static_cast<double>(n0.n1), static_cast<double>(n0.n2));

    SmoothTruncation out;
    long k = 1;
    for (; std::exp(-step * static_cast<double>(k)) > kCoeffDropTol; ++k) {
        const double c = std::exp(-step * static_cast<double>(k));
        out.poly.add_coeff({k * n0.n1, k * n0.n2}, {c, 0.0});
        out.poly.add_coeff({-k * n0.n1, -k * n0.n2}, {c, 0.0});
    }
    // geometric tail: 2 sum_{j >= k} e^{-step j}
    out.tail_bound = 2.0 * std::exp(-step * static_cast<double>(k)) / (1.0 - std::exp(-step));
    out.radius = static_cast<double>(out.poly.max_sup_norm());
    return out;
}

TrigPolynomial slow_conv_observable(const std::vector<long>& d) {
    TrigPolynomial f;
    for (long dn : d) f.add_coeff({0, dn}, {std::exp(-static_cast<double>(dn)), 0.0});
    return f;
}

}  // namespace torusq
