#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "torusq/weyl.hpp"

using namespace torusq;

namespace {

StateVector random_state(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    StateVector psi(n);
    for (int q = 0; q < n; ++q) psi(q) = {g(rng), g(rng)};
    return psi;
}

double max_entry_diff(const StateVector& a, const StateVector& b) {
    double m = 0.0;
    for (int q = 0; q < a.dim; ++q) m = std::max(m, std::abs(a(q) - b(q)));
    return m;
}

}  // namespace

TEST_CASE("weyl action formula") {
    // T_N(n) psi(Q) = e^{i pi n1 n2/N} e_N(n2 Q) psi(Q+n1)
    const int N = 7;
    const WeylIndex n{3, 2};
    const MonomialOperator t = weyl_operator(n, N);
    const StateVector psi = random_state(N, 1);
    const StateVector out = apply(t, psi);
    constexpr double pi = 3.141592653589793238462643383279502884;
    for (int q = 0; q < N; ++q) {
        const cplx expected = std::polar(1.0, pi * (3.0 * 2.0 + 2.0 * 2.0 * q) / N) * psi.at_mod(q + 3);
        CHECK(std::abs(out(q) - expected) < 1e-13);
    }
}

TEST_CASE("composition law with the exact symplectic phase") {
    // T(m) T(n) = e_N(omega(m,n)/2) T(m+n), checked as exact operators
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> idx(-12, 12);
    std::uniform_int_distribution<int> dims(2, 24);
    for (int t = 0; t < 100; ++t) {
        const int N = dims(rng);
        const WeylIndex m{idx(rng), idx(rng)}, n{idx(rng), idx(rng)};
        const MonomialOperator lhs = compose(weyl_operator(m, N), weyl_operator(n, N));
        const MonomialOperator rhs =
            weyl_operator(m + n, N).scaled(ExactPhase(symplectic(m, n), N));  // e_N(w/2) = e^{i pi w/N}
        CHECK(lhs == rhs);
    }
}

TEST_CASE("Heisenberg commutation: T(m)T(n) = e_N(omega) T(n)T(m)") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> idx(-10, 10);
    for (int t = 0; t < 100; ++t) {
        const int N = 2 + t % 20;
        const WeylIndex m{idx(rng), idx(rng)}, n{idx(rng), idx(rng)};
        const MonomialOperator lhs = compose(weyl_operator(m, N), weyl_operator(n, N));
        const MonomialOperator rhs = compose(weyl_operator(n, N), weyl_operator(m, N))
                                         .scaled(ExactPhase::root_of_unity(symplectic(m, n), N));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("adjoint equals T(-n) and inverts") {
    for (int N : {2, 5, 12}) {
        const WeylIndex n{3, -4};
        const MonomialOperator t = weyl_operator(n, N);
        CHECK(adjoint(t) == weyl_operator(-n, N));
        CHECK(compose(t, adjoint(t)) == MonomialOperator::identity(N));
        CHECK(compose(adjoint(t), t) == MonomialOperator::identity(N));
    }
}

TEST_CASE("Fourier conjugation of the generators") {
    // F t1 F^{-1} = t2 and F t2 F^{-1} = t1^{-1} on random states
    for (int N : {5, 8, 13}) {
        const MonomialOperator t1 = weyl_operator({1, 0}, N);
        const MonomialOperator t2 = weyl_operator({0, 1}, N);
        const MonomialOperator t1inv = adjoint(t1);
        const StateVector psi = random_state(N, 40 + static_cast<unsigned>(N));
        CHECK(max_entry_diff(dft(apply(t1, inverse_dft(psi))), apply(t2, psi)) < 1e-12);
        CHECK(max_entry_diff(dft(apply(t2, inverse_dft(psi))), apply(t1inv, psi)) < 1e-12);
    }
}

TEST_CASE("structured eigenbasis: residuals, orthonormality, completeness") {
    for (const WeylIndex n : {WeylIndex{3, 0}, WeylIndex{-17, 14}, WeylIndex{4, 6}, WeylIndex{0, 5}}) {
        const int N = 60;
        const MonomialOperator a = weyl_operator(n, N);
        const EigenBasis basis = eigenbasis_monomial(a);
        REQUIRE(static_cast<int>(basis.vectors.size()) == N);
        for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
            const StateVector av = apply(a, basis.vectors[j]);
            StateVector lv(N);
            for (int q = 0; q < N; ++q) lv(q) = basis.eigenvalues[j] * basis.vectors[j](q);
            CHECK(max_entry_diff(av, lv) < 1e-12);
            CHECK(std::abs(basis.eigenvalues[j] - basis.exact_eigenvalues[j].to_complex()) < 1e-14);
        }
        for (std::size_t j = 0; j < basis.vectors.size(); ++j)
            for (std::size_t k = j; k < basis.vectors.size(); ++k) {
                const cplx ip = inner(basis.vectors[j], basis.vectors[k]);
                CHECK(std::abs(ip - (j == k ? cplx{1, 0} : cplx{0, 0})) < 1e-12);
            }
    }
}

TEST_CASE("eigenvalues sorted by angle with deterministic ties") {
    const MonomialOperator a = weyl_operator({-17, 14}, 60);
    const EigenBasis b1 = eigenbasis_monomial(a);
    const EigenBasis b2 = eigenbasis_monomial(a);
    for (std::size_t j = 0; j + 1 < b1.exact_eigenvalues.size(); ++j)
        CHECK(b1.exact_eigenvalues[j].exponent() <= b1.exact_eigenvalues[j + 1].exponent());
    for (std::size_t j = 0; j < b1.vectors.size(); ++j)
        CHECK(max_entry_diff(b1.vectors[j], b2.vectors[j]) == 0.0);  // fully deterministic
}

TEST_CASE("T_8(3,0) spectrum is the 8th roots of unity, each once") {
    const EigenBasis basis = eigenbasis_monomial(weyl_operator({3, 0}, 8));
    std::map<std::pair<long, long>, int> counts;
    for (const ExactPhase& p : basis.exact_eigenvalues) ++counts[{p.num(), p.den()}];
    CHECK(counts.size() == 8);
    for (const auto& [k, c] : counts) CHECK(c == 1);
}

TEST_CASE("joint eigenbasis of an exactly commuting pair") {
    // slow-convergence level-2 pair: N = 64, A = T(0,4), B = T(-48,91)
    const int N = 64;
    const MonomialOperator A = weyl_operator({0, 4}, N);
    const MonomialOperator B = weyl_operator({-48, 91}, N);
    REQUIRE(compose(A, B) == compose(B, A));
    const JointEigenBasis joint = joint_eigenbasis(A, B);
    REQUIRE(static_cast<int>(joint.vectors.size()) == N);
    for (std::size_t j = 0; j < joint.vectors.size(); ++j) {
        const StateVector& v = joint.vectors[j];
        StateVector la(N), lb(N);
        for (int q = 0; q < N; ++q) {
            la(q) = joint.eigenvalues_a[j] * v(q);
            lb(q) = joint.eigenvalues_b[j] * v(q);
        }
        CHECK(max_entry_diff(apply(A, v), la) < 1e-9);
        CHECK(max_entry_diff(apply(B, v), lb) < 1e-9);
    }
    for (std::size_t j = 0; j < joint.vectors.size(); ++j)
        for (std::size_t k = j; k < joint.vectors.size(); ++k) {
            const cplx ip = inner(joint.vectors[j], joint.vectors[k]);
            CHECK(std::abs(ip - (j == k ? cplx{1, 0} : cplx{0, 0})) < 1e-9);
        }
}

TEST_CASE("joint eigenbasis rejects non-commuting pairs") {
    const MonomialOperator A = weyl_operator({1, 0}, 8);
    const MonomialOperator B = weyl_operator({0, 1}, 8);
    CHECK_THROWS(joint_eigenbasis(A, B));
}
