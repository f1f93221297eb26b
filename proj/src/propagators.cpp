#include "torusq/propagators.hpp"

#include <cmath>
#include <stdexcept>

#include "torusq/oracle.hpp"

namespace torusq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

cplx e_of(double x) { return std::polar(1.0, 2.0 * kPi * x); }

// frac(k * alpha) evaluated through the exact rational approximation, so the
// reduction mod 1 happens before any double rounding.
double frac_multiple(const RealTarget& alpha, long k) {
    const BigRational r = BigRational(k) * alpha.evaluate(160);
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    BigInt f = num % den;
    if (f < 0) f += den;
    return static_cast<double>(BigRational(f, den));
}

// least-squares slope of log(y) vs log(x), positive y only
double loglog_slope(const std::vector<int>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] <= 0.0) continue;
        const double lx = std::log(static_cast<double>(xs[i]));
        const double ly = std::log(ys[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

StateVector ShearPropagator::apply_to(const StateVector& psi) const {
    StateVector hat = dft(psi);
    for (int p = 0; p < N; ++p) hat(p) *= diagonal[static_cast<std::size_t>(p)];
    return inverse_dft(hat);
}

StateVector ShearPropagator::apply_inverse_to(const StateVector& psi) const {
    StateVector hat = dft(psi);
    for (int p = 0; p < N; ++p) hat(p) *= std::conj(diagonal[static_cast<std::size_t>(p)]);
    return inverse_dft(hat);
}

StateVector PerturbedPropagator::apply_to(const StateVector& psi) const {
    return conj.apply_inverse_to(kron.apply_to(conj.apply_to(psi)));
}

KroneckerPropagator kronecker(const RealTarget& alpha1, const RealTarget& alpha2, int N) {
    if (N < 1) throw std::invalid_argument("kronecker: N must be positive");
    const auto [a1, a2] = best_approx(alpha1, alpha2, N);
    KroneckerPropagator u;
    u.N = N;
    u.a1 = a1;
    u.a2 = a2;
    u.op = weyl_operator({-a2, a1}, N);
    return u;
}

TrigPolynomial h_series(const TrigPolynomial& V, const RealTarget& alpha1, long K) {
    if (!V.is_p_only()) throw std::invalid_argument("h_series: V must depend on p only");
    if (std::abs(V.mean()) > 1e-15) throw std::invalid_argument("h_series: V must have zero mean");
    if (alpha1.is_rational())
        throw std::invalid_argument("h_series: alpha1 must be irrational (rational alpha1 kills a divisor)");

    TrigPolynomial h;
    for (const auto& [n, c] : V.coeffs()) {
        const long k = n.n1;
        if (k == 0 || std::labs(k) > K) continue;
        const double x = frac_multiple(alpha1, k);
        // e(x) - 1 = 2 i sin(pi x) e^{i pi x}, stable near x = 0 or 1
        const cplx divisor = cplx{0.0, 2.0 * std::sin(kPi * x)} * std::polar(1.0, kPi * x);
        h.set_coeff(n, c / divisor);
    }
    return h;
}

ShearPropagator shear(const TrigPolynomial& W, int N, int sign) {
    if (!W.is_p_only()) throw std::invalid_argument("shear: W must depend on p only");
    if (std::abs(W.mean()) > 1e-12) throw std::invalid_argument("shear: W must have zero mean");
    if (sign != 1 && sign != -1) throw std::invalid_argument("shear: sign must be +1 or -1");
    ShearPropagator u;
    u.N = N;
    u.W = W;
    u.sign = sign;
    u.diagonal.resize(static_cast<std::size_t>(N));
    for (int p = 0; p < N; ++p) {
        const double w = W.evaluate(static_cast<double>(p) / static_cast<double>(N), 0.0).real();
        u.diagonal[static_cast<std::size_t>(p)] = e_of(static_cast<double>(sign) * static_cast<double>(N) * w);
    }
    return u;
}

CalibrationResult calibrate_sign(const TrigPolynomial& V, const RealTarget& /*alpha1*/,
                                 const std::vector<int>& N_list) {
    CalibrationResult res;
    if (V.empty()) {
        res.degenerate = true;
        res.sign = +1;
        return res;
    }
    if (N_list.size() < 3) throw std::invalid_argument("calibrate_sign: need at least three N values");

    const TrigPolynomial f = TrigPolynomial::harmonic({0, 1});
    const int K = 256;
    const SmoothTruncation fcirc = compose_shear(f, V, K);
    const TrigPolynomial W = antiderivative_p(V);

    double slope[2] = {0.0, 0.0};
    const int signs[2] = {+1, -1};
    for (int si = 0; si < 2; ++si) {
        std::vector<double> defects;
        for (int N : N_list) {
            const ShearPropagator u = shear(W, N, signs[si]);
            const EgorovDefect d = egorov_defect(UnitaryRef::of(u), f, fcirc.poly);
            defects.push_back(d.op_norm + fcirc.tail_bound);
        }
        slope[si] = loglog_slope(N_list, defects);
    }

    const bool pass_plus = slope[0] <= -1.5;
    const bool pass_minus = slope[1] <= -1.5;
    if (pass_plus == pass_minus)
        throw std::runtime_error(
            "calibrate_sign: both or neither sign convention passes the decay fit; upstream convention bug");
    res.sign = pass_plus ? +1 : -1;
    res.slope_pass = pass_plus ? slope[0] : slope[1];
    res.slope_fail = pass_plus ? slope[1] : slope[0];
    return res;
}

PerturbedPropagator perturbed(const RealTarget& alpha1, const RealTarget& alpha2,
                              const TrigPolynomial& V, int N, int sign) {
    PerturbedPropagator u;
    u.N = N;
    u.kron = kronecker(alpha1, alpha2, N);
    if (V.empty()) {
        u.conj = shear(TrigPolynomial{}, N, sign);
        return u;
    }
    const TrigPolynomial h = h_series(V, alpha1, V.max_sup_norm());
    u.conj = shear(antiderivative_p(h), N, sign);
    u.h_tail_bound = 0.0;  // trig-polynomial V: the series is exact
    return u;
}

EigenBasis perturbed_eigenbasis(const PerturbedPropagator& P) {
    EigenBasis basis = eigenbasis_monomial(P.kron.op);
    for (StateVector& v : basis.vectors) v = P.conj.apply_inverse_to(v);
    return basis;
}

UnitaryRef UnitaryRef::of(const KroneckerPropagator& u) {
    UnitaryRef r;
    r.N = u.N;
    const MonomialOperator inv = adjoint(u.op);
    r.apply = [op = u.op](const StateVector& psi) { return torusq::apply(op, psi); };
    r.apply_inverse = [inv](const StateVector& psi) { return torusq::apply(inv, psi); };
    return r;
}

UnitaryRef UnitaryRef::of(const ShearPropagator& u) {
    UnitaryRef r;
    r.N = u.N;
    r.apply = [u](const StateVector& psi) { return u.apply_to(psi); };
    r.apply_inverse = [u](const StateVector& psi) { return u.apply_inverse_to(psi); };
    return r;
}

UnitaryRef UnitaryRef::of(const PerturbedPropagator& u) {
    UnitaryRef r;
    r.N = u.N;
    r.apply = [u](const StateVector& psi) { return u.apply_to(psi); };
    r.apply_inverse = [u](const StateVector& psi) {
        return u.conj.apply_inverse_to(torusq::apply(adjoint(u.kron.op), u.conj.apply_to(psi)));
    };
    return r;
}

EgorovDefect egorov_defect(const UnitaryRef& u, const TrigPolynomial& f, const TrigPolynomial& fcirc,
                           const EigenBasis* basis, double tail_budget) {
    const int N = u.N;
    const QuantizedObservable qf = quantize(f, N, std::max(kDefaultMaxSupport, f.max_sup_norm()));
    const QuantizedObservable qfc =
        quantize(fcirc, N, std::max(kDefaultMaxSupport, fcirc.max_sup_norm()));

    auto defect_apply = [&](const StateVector& psi) {
        const StateVector lhs = u.apply_inverse(qf.apply_to(u.apply(psi)));
        const StateVector rhs = qfc.apply_to(psi);
        StateVector out(N);
        for (int q = 0; q < N; ++q) out(q) = lhs(q) - rhs(q);
        return out;
    };

    EgorovDefect d;
    d.tail_budget = tail_budget;
    d.op_norm = operator_norm(materialize_action(N, defect_apply));
    if (basis != nullptr) {
        double mx = 0.0;
        for (const StateVector& psi : basis->vectors)
            mx = std::max(mx, std::abs(inner(defect_apply(psi), psi)));
        d.basis_max = mx;
    }
    return d;
}

}  // namespace torusq
