#pragma once

#include <map>
#include <string>
#include <vector>

#include "torusq/weyl.hpp"

namespace torusq {

/// Classical observable f(x) = sum_n fhat(n) e(n.x), x = (p,q), as a finite
/// Fourier series.
class TrigPolynomial {
public:
    using CoeffMap = std::map<WeylIndex, cplx>;

    TrigPolynomial() = default;

    static TrigPolynomial harmonic(const WeylIndex& n, cplx c = {1.0, 0.0});
    static TrigPolynomial constant(cplx c);
    /// amplitude * cos(2 pi k p), a p-only real observable.
    static TrigPolynomial cosine_p(long k, double amplitude);

    const CoeffMap& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }

    cplx coeff(const WeylIndex& n) const;
    void set_coeff(const WeylIndex& n, cplx c);
    void add_coeff(const WeylIndex& n, cplx c);

    /// mean(f) = integral over T^2 = fhat(0,0).
    cplx mean() const { return coeff({0, 0}); }

    /// True iff fhat(-n) = conj(fhat(n)) for all stored n (within tol).
    bool is_real_valued(double tol = 1e-12) const;

    /// f depends on p only (all n2 = 0).
    bool is_p_only() const;

    long max_sup_norm() const;  // max ||n||_inf over the support

    cplx evaluate(double p, double q) const;

    TrigPolynomial conjugate() const;
    TrigPolynomial operator+(const TrigPolynomial& o) const;
    TrigPolynomial operator-(const TrigPolynomial& o) const;
    TrigPolynomial operator*(cplx s) const;
    /// Pointwise product (coefficient convolution).
    TrigPolynomial operator*(const TrigPolynomial& o) const;

    /// Drop coefficients with |c| <= eps; returns the dropped mass.
    double prune(double eps);

    std::string to_json() const;
    static TrigPolynomial from_json(const std::string& text);

private:
    CoeffMap coeffs_;
};

/// Truncated series with a certified bound on the dropped tail.
struct SmoothTruncation {
    TrigPolynomial poly;
    double radius = 0.0;      // truncation cutoff in ||n||
    double tail_bound = 0.0;  // >= sum over dropped |fhat(n)|
};

/// Op_N(f) = sum_n fhat(n) T_N(n), kept as coefficient-weighted monomials.
struct QuantizedObservable {
    int dim = 0;
    std::vector<std::pair<cplx, MonomialOperator>> terms;

    StateVector apply_to(const StateVector& psi) const;
};

/// Default cap on observable support; larger supports need explicit opt-in.
inline constexpr long kDefaultMaxSupport = 64;

QuantizedObservable quantize(const TrigPolynomial& f, int N, long max_support = kDefaultMaxSupport);

/// f o tau_{a/N}: each coefficient picks up the exact phase e(n.a/N).
TrigPolynomial compose_translation(const TrigPolynomial& f, long a1, long a2, int N);
/// f o tau_alpha with a real shift.
TrigPolynomial compose_translation(const TrigPolynomial& f, double alpha1, double alpha2);

/// Fourier re-expansion of f(p, q + h(p)) for p-only h, sampled on a K-point
/// grid per q-frequency.  K must be a power of two >= 4 * (max frequency
/// involved).  Coefficients below 1e-14 are dropped and accounted in the
/// returned tail bound.
SmoothTruncation compose_shear(const TrigPolynomial& f, const TrigPolynomial& h, int K);

/// f^T = (1/T) sum_{t<T} f o tau_{a/N}^t.  For T = N a coefficient survives
/// exactly when n1*a1 + n2*a2 = 0 (mod N) and is annihilated otherwise.
TrigPolynomial time_average(const TrigPolynomial& f, long a1, long a2, int N, long T);

/// {f,g} = f_p g_q - g_p f_q; on basis terms
/// {e_m, e_n} = -4 pi^2 omega(m,n) e_{m+n}.
/// The -4 pi^2 normalization comes from the e(n.x) convention.
TrigPolynomial poisson_bracket(const TrigPolynomial& f, const TrigPolynomial& g);

/// Mean-zero antiderivative in p of a mean-zero p-only polynomial:
/// What(k) = fhat(k) / (2 pi i k).
TrigPolynomial antiderivative_p(const TrigPolynomial& f);

/// Real observable supported on the lattice ray {k*n0}: coefficients
/// fhat(+-k n0) = e^{-decay * k * ||n0||_2}, truncated where they drop below
/// 1e-14, with a geometric-series tail certificate.
SmoothTruncation gaussian_family(const WeylIndex& n0, double decay);

/// The slow-convergence observable sum_n e^{-d_n} e(d_n q) truncated to the
/// given denominators d_1..d_k.
TrigPolynomial slow_conv_observable(const std::vector<long>& d);

}  // namespace torusq
