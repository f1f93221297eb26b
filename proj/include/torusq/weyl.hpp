#pragma once

#include <vector>

#include "torusq/exact_phase.hpp"
#include "torusq/hilbert.hpp"

namespace torusq {

/// Frequency vector n = (n1,n2) in Z^2.
struct WeylIndex {
    long n1 = 0;
    long n2 = 0;

    WeylIndex() = default;
    WeylIndex(long a, long b) : n1(a), n2(b) {}

    WeylIndex operator+(const WeylIndex& o) const { return {n1 + o.n1, n2 + o.n2}; }
    WeylIndex operator-() const { return {-n1, -n2}; }
    bool operator==(const WeylIndex& o) const { return n1 == o.n1 && n2 == o.n2; }
    bool operator<(const WeylIndex& o) const { return n1 != o.n1 ? n1 < o.n1 : n2 < o.n2; }
};

/// Symplectic form omega(m,n) = m1*n2 - m2*n1.
inline long symplectic(const WeylIndex& m, const WeylIndex& n) { return m.n1 * n.n2 - m.n2 * n.n1; }

/// Unitary with exactly one unimodular entry per row and column:
/// (A psi)(Q) = phase[Q] * psi(sigma(Q)).  Every T_N(n) has this shape, and
/// the shape is closed under products and adjoints with exact phases.
struct MonomialOperator {
    int dim = 0;
    std::vector<int> sigma;         // bijection of 0..N-1
    std::vector<ExactPhase> phase;  // one exact phase per row

    MonomialOperator() = default;
    explicit MonomialOperator(int n)
        : dim(n), sigma(static_cast<std::size_t>(n)), phase(static_cast<std::size_t>(n)) {
        for (int q = 0; q < n; ++q) sigma[static_cast<std::size_t>(q)] = q;
    }

    static MonomialOperator identity(int n) { return MonomialOperator(n); }

    /// Same operator with every entry multiplied by a global phase.
    MonomialOperator scaled(const ExactPhase& s) const;

    bool operator==(const MonomialOperator& o) const {
        return dim == o.dim && sigma == o.sigma && phase == o.phase;
    }
};

/// Orthonormal eigenbasis under the 1/N inner product.
struct EigenBasis {
    int dim = 0;
    std::vector<StateVector> vectors;
    std::vector<cplx> eigenvalues;
    std::vector<ExactPhase> exact_eigenvalues;  // filled by the structured path
};

/// Joint eigenbasis of a commuting pair; vector j has eigenvalue
/// eigenvalues_a[j] for the first operator and eigenvalues_b[j] for the second.
struct JointEigenBasis {
    int dim = 0;
    std::vector<StateVector> vectors;
    std::vector<cplx> eigenvalues_a;
    std::vector<cplx> eigenvalues_b;
};

/// T_N(n) psi(Q) = e^{i pi n1 n2 / N} e_N(n2 Q) psi(Q + n1).
MonomialOperator weyl_operator(const WeylIndex& n, int N);

/// Operator product A*B with exact phase arithmetic.
MonomialOperator compose(const MonomialOperator& a, const MonomialOperator& b);

/// Adjoint (= inverse, the operator is unitary).
MonomialOperator adjoint(const MonomialOperator& a);

StateVector apply(const MonomialOperator& a, const StateVector& psi);

/// Exact cycle-based diagonalization: on a cycle of length L with accumulated
/// phase Pi, the eigenvalues are the L-th roots of Pi and the eigenvectors are
/// supported on the cycle with unimodular entries scaled by sqrt(N/L).
/// Eigenvalues are sorted by phase angle in [0,2pi), ties broken by cycle base
/// index.
EigenBasis eigenbasis_monomial(const MonomialOperator& a);

/// Simultaneous orthonormal diagonalization of an exactly commuting pair.
/// Throws if A*B != B*A (checked with exact phases and permutations).
JointEigenBasis joint_eigenbasis(const MonomialOperator& a, const MonomialOperator& b);

}  // namespace torusq
