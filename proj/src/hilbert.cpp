#include "torusq/hilbert.hpp"

#include <cmath>
#include <stdexcept>

namespace torusq {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// e_N(x) with the index reduced mod N first, so the angle stays in [0,2pi)
// and large Q*P products do not lose precision.
cplx unit_root(long x, int n) {
    const int r = mod_n(x, n);
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
}
}  // namespace

StateVector::StateVector(int n, std::vector<cplx> e) : dim(n), entries(std::move(e)) {
    if (dim < 1 || entries.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("StateVector: entries must have exactly dim components");
}

const cplx& StateVector::at_mod(long q) const { return entries[static_cast<std::size_t>(mod_n(q, dim))]; }

cplx inner(const StateVector& psi, const StateVector& phi) {
    if (psi.dim != phi.dim) throw std::invalid_argument("inner: dimension mismatch");
    cplx s{0.0, 0.0};
    for (int q = 0; q < psi.dim; ++q) s += psi(q) * std::conj(phi(q));
    return s / static_cast<double>(psi.dim);
}

double norm_sq(const StateVector& psi) {
    double s = 0.0;
    for (const cplx& z : psi.entries) s += std::norm(z);
    return s / static_cast<double>(psi.dim);
}

StateVector dft(const StateVector& psi) {
    const int n = psi.dim;
    StateVector out(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int p = 0; p < n; ++p) {
        cplx s{0.0, 0.0};
        for (int q = 0; q < n; ++q) s += psi(q) * unit_root(-static_cast<long>(q) * p, n);
        out(p) = scale * s;
    }
    return out;
}

StateVector inverse_dft(const StateVector& psihat) {
    const int n = psihat.dim;
    StateVector out(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int q = 0; q < n; ++q) {
        cplx s{0.0, 0.0};
        for (int p = 0; p < n; ++p) s += psihat(p) * unit_root(static_cast<long>(p) * q, n);
        out(q) = scale * s;
    }
    return out;
}

}  // namespace torusq
