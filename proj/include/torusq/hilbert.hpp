#pragma once

#include <complex>
#include <vector>

namespace torusq {

using cplx = std::complex<double>;

/// State in H_N = L^2(Z/NZ) with the 1/N-weighted inner product.
/// Entries are psi(Q), Q = 0..N-1.  Planck's constant is h = 1/N.
struct StateVector {
    int dim = 0;
    std::vector<cplx> entries;

    StateVector() = default;
    explicit StateVector(int n) : dim(n), entries(static_cast<std::size_t>(n), cplx{0.0, 0.0}) {}
    StateVector(int n, std::vector<cplx> e);

    cplx& operator()(int q) { return entries[static_cast<std::size_t>(q)]; }
    const cplx& operator()(int q) const { return entries[static_cast<std::size_t>(q)]; }

    /// Entry at an arbitrary integer index, reduced mod N.
    const cplx& at_mod(long q) const;
};

/// <psi,phi> = (1/N) sum_Q psi(Q) conj(phi(Q)).
cplx inner(const StateVector& psi, const StateVector& phi);

/// norm^2 under the 1/N inner product.
double norm_sq(const StateVector& psi);

/// psihat(P) = (1/sqrt N) sum_Q psi(Q) e_N(-QP).  Direct O(N^2) summation.
StateVector dft(const StateVector& psi);

/// psi(Q) = (1/sqrt N) sum_P psihat(P) e_N(+PQ).
StateVector inverse_dft(const StateVector& psihat);

/// q reduced to the canonical range 0..N-1.
inline int mod_n(long q, int n) {
    long r = q % n;
    if (r < 0) r += n;
    return static_cast<int>(r);
}

}  // namespace torusq
