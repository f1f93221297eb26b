#include "torusq/weyl.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace torusq {

MonomialOperator MonomialOperator::scaled(const ExactPhase& s) const {
    MonomialOperator r = *this;
    for (auto& p : r.phase) p = p * s;
    return r;
}

MonomialOperator weyl_operator(const WeylIndex& n, int N) {
    if (N < 1) throw std::invalid_argument("weyl_operator: N must be positive");
    MonomialOperator a(N);
    for (int q = 0; q < N; ++q) {
        a.sigma[static_cast<std::size_t>(q)] = mod_n(q + n.n1, N);
        // e^{i pi n1 n2 / N} * e_N(n2 Q) = e^{i pi (n1 n2 + 2 n2 Q) / N}
        a.phase[static_cast<std::size_t>(q)] = ExactPhase(n.n1 * n.n2 + 2 * n.n2 * q, N);
    }
    return a;
}

MonomialOperator compose(const MonomialOperator& a, const MonomialOperator& b) {
    if (a.dim != b.dim) throw std::invalid_argument("compose: dimension mismatch");
    MonomialOperator r(a.dim);
    for (int q = 0; q < a.dim; ++q) {
        const int mid = a.sigma[static_cast<std::size_t>(q)];
        r.sigma[static_cast<std::size_t>(q)] = b.sigma[static_cast<std::size_t>(mid)];
        r.phase[static_cast<std::size_t>(q)] =
            a.phase[static_cast<std::size_t>(q)] * b.phase[static_cast<std::size_t>(mid)];
    }
    return r;
}

MonomialOperator adjoint(const MonomialOperator& a) {
    MonomialOperator r(a.dim);
    for (int q = 0; q < a.dim; ++q) {
        const int img = a.sigma[static_cast<std::size_t>(q)];
        r.sigma[static_cast<std::size_t>(img)] = q;
        r.phase[static_cast<std::size_t>(img)] = a.phase[static_cast<std::size_t>(q)].conj();
    }
    return r;
}

StateVector apply(const MonomialOperator& a, const StateVector& psi) {
    if (a.dim != psi.dim) throw std::invalid_argument("apply: dimension mismatch");
    StateVector out(a.dim);
    for (int q = 0; q < a.dim; ++q)
        out(q) = a.phase[static_cast<std::size_t>(q)].to_complex() *
                 psi(a.sigma[static_cast<std::size_t>(q)]);
    return out;
}

namespace {

// Exact angle order on phases: exponent/pi lies in [0,2), compare as rationals.
bool phase_angle_less(const ExactPhase& x, const ExactPhase& y) {
    return x.num() * y.den() < y.num() * x.den();
}

struct EigenEntry {
    ExactPhase value;
    int cycle_base;
    StateVector vec;
};

}  // namespace

EigenBasis eigenbasis_monomial(const MonomialOperator& a) {
    const int n = a.dim;
    // sigma_inv drives the cycle walk: A maps the indicator at Q to the
    // indicator at sigma^{-1}(Q).
    std::vector<int> sigma_inv(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) sigma_inv[static_cast<std::size_t>(a.sigma[static_cast<std::size_t>(q)])] = q;

    std::vector<EigenEntry> entries;
    entries.reserve(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);

    for (int base = 0; base < n; ++base) {
        if (seen[static_cast<std::size_t>(base)]) continue;
        std::vector<int> cycle;
        for (int q = base; !seen[static_cast<std::size_t>(q)]; q = sigma_inv[static_cast<std::size_t>(q)]) {
            seen[static_cast<std::size_t>(q)] = true;
            cycle.push_back(q);
        }
        const auto len = static_cast<std::int64_t>(cycle.size());
        ExactPhase total;
        for (int q : cycle) total = total * a.phase[static_cast<std::size_t>(q)];

        const double amp = std::sqrt(static_cast<double>(n) / static_cast<double>(len));
        const ExactPhase principal = total.root(len);
        for (std::int64_t m = 0; m < len; ++m) {
            const ExactPhase lambda = principal * ExactPhase::root_of_unity(m, len);
            const ExactPhase lambda_inv = lambda.inverse();
            StateVector v(n);
            ExactPhase cum;  // c_j / c_0, unimodular
            v(cycle[0]) = amp * cum.to_complex();
            for (std::size_t j = 1; j < cycle.size(); ++j) {
                cum = cum * a.phase[static_cast<std::size_t>(cycle[j])] * lambda_inv;
                v(cycle[j]) = amp * cum.to_complex();
            }
            entries.push_back({lambda, base, std::move(v)});
        }
    }

    std::stable_sort(entries.begin(), entries.end(), [](const EigenEntry& x, const EigenEntry& y) {
        if (x.value != y.value) return phase_angle_less(x.value, y.value);
        return x.cycle_base < y.cycle_base;
    });

    EigenBasis basis;
    basis.dim = n;
    basis.vectors.reserve(entries.size());
    basis.eigenvalues.reserve(entries.size());
    basis.exact_eigenvalues.reserve(entries.size());
    for (auto& e : entries) {
        basis.eigenvalues.push_back(e.value.to_complex());
        basis.exact_eigenvalues.push_back(e.value);
        basis.vectors.push_back(std::move(e.vec));
    }
    return basis;
}

JointEigenBasis joint_eigenbasis(const MonomialOperator& a, const MonomialOperator& b) {
    if (a.dim != b.dim) throw std::invalid_argument("joint_eigenbasis: dimension mismatch");
    if (!(compose(a, b) == compose(b, a)))
        throw std::invalid_argument("joint_eigenbasis: operators do not commute exactly");

    const EigenBasis ea = eigenbasis_monomial(a);
    const int n = a.dim;

    JointEigenBasis out;
    out.dim = n;
    out.vectors.reserve(static_cast<std::size_t>(n));
    out.eigenvalues_a.reserve(static_cast<std::size_t>(n));
    out.eigenvalues_b.reserve(static_cast<std::size_t>(n));

    // Eigenvalues are exact, so grouping is exact as well; the list is already
    // sorted, equal eigenvalues are contiguous.
    std::size_t lo = 0;
    while (lo < ea.vectors.size()) {
        std::size_t hi = lo + 1;
        while (hi < ea.vectors.size() && ea.exact_eigenvalues[hi] == ea.exact_eigenvalues[lo]) ++hi;
        const auto g = static_cast<Eigen::Index>(hi - lo);

        // B restricted to this eigenspace of A, in the orthonormal basis {v_k}.
        std::vector<StateVector> bimg;
        bimg.reserve(static_cast<std::size_t>(g));
        for (std::size_t l = lo; l < hi; ++l) bimg.push_back(apply(b, ea.vectors[l]));
        Eigen::MatrixXcd m(g, g);
        for (Eigen::Index col = 0; col < g; ++col)
            for (Eigen::Index row = 0; row < g; ++row)
                m(row, col) = inner(bimg[static_cast<std::size_t>(col)],
                                    ea.vectors[lo + static_cast<std::size_t>(row)]);

        // Schur of a unitary block: T is diagonal up to roundoff and the Schur
        // vectors are orthonormal, giving an orthonormal joint basis directly.
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m, true);
        const Eigen::MatrixXcd& qs = schur.matrixU();
        const Eigen::MatrixXcd& t = schur.matrixT();

        std::vector<std::size_t> order(static_cast<std::size_t>(g));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            auto ang = [&](std::size_t i) {
                double v = std::arg(t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
                return v < 0 ? v + 2.0 * 3.141592653589793238462643383279502884 : v;
            };
            return ang(x) < ang(y);
        });

        for (std::size_t idx : order) {
            StateVector w(n);
            for (Eigen::Index k = 0; k < g; ++k) {
                const cplx c = qs(k, static_cast<Eigen::Index>(idx));
                const StateVector& v = ea.vectors[lo + static_cast<std::size_t>(k)];
                for (int q = 0; q < n; ++q) w(q) += c * v(q);
            }
            out.vectors.push_back(std::move(w));
            out.eigenvalues_a.push_back(ea.eigenvalues[lo]);
            out.eigenvalues_b.push_back(t(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)));
        }
        lo = hi;
    }
    return out;
}

}  // namespace torusq
