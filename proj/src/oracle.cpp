#include "torusq/oracle.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "torusq/propagators.hpp"

namespace torusq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_guard(int n) {
    if (n > kDenseGuard)
        throw std::invalid_argument(
            "materialize: N exceeds the dense guard (512); use the structured path or raise the guard "
            "deliberately in a test build");
}

// Matrix entries are action coefficients: (A psi)(i) = sum_j M(i,j) psi(j).
// The inner-product weight 1/N is uniform, so adjoints, unitarity, and
// singular values agree with the standard Euclidean ones.
StateVector basis_state(int N, int q) {
    StateVector v(N);
    v(q) = {1.0, 0.0};
    return v;
}

}  // namespace

DenseOperator materialize_action(int N, const std::function<StateVector(const StateVector&)>& act) {
    check_guard(N);
    DenseOperator a(N);
    for (int q = 0; q < N; ++q) {
        const StateVector col = act(basis_state(N, q));
        for (int i = 0; i < N; ++i) a.entries(i, q) = col(i);
    }
    return a;
}

DenseOperator materialize(const MonomialOperator& op) {
    check_guard(op.dim);
    DenseOperator a(op.dim);
    // (A psi)(Q) = phase[Q] psi(sigma(Q)): one entry per row, exact phase.
    for (int q = 0; q < op.dim; ++q)
        a.entries(q, op.sigma[static_cast<std::size_t>(q)]) = op.phase[static_cast<std::size_t>(q)].to_complex();
    return a;
}

DenseOperator materialize(const QuantizedObservable& op) {
    check_guard(op.dim);
    DenseOperator a(op.dim);
    for (const auto& [c, m] : op.terms) a.entries += c * materialize(m).entries;
    return a;
}

DenseOperator materialize(const KroneckerPropagator& u) { return materialize(u.op); }

DenseOperator materialize(const ShearPropagator& u) {
    return materialize_action(u.N, [&u](const StateVector& psi) { return u.apply_to(psi); });
}

DenseOperator materialize(const PerturbedPropagator& u) {
    return materialize_action(u.N, [&u](const StateVector& psi) { return u.apply_to(psi); });
}

EigenBasis dense_eig(const DenseOperator& a) {
    const int n = a.dim;
    const double scale = std::max(1.0, a.entries.norm());
    const Eigen::MatrixXcd comm = a.entries * a.entries.adjoint() - a.entries.adjoint() * a.entries;
    if (comm.norm() > 1e-8 * scale * scale)
        throw std::invalid_argument("dense_eig: input is not normal to 1e-8");

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a.entries, true);
    if (schur.info() != Eigen::Success) throw std::runtime_error("dense_eig: Schur iteration failed");
    const Eigen::MatrixXcd& qs = schur.matrixU();
    const Eigen::MatrixXcd& t = schur.matrixT();

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto angle = [&](std::size_t i) {
        double v = std::arg(t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
        if (v < 0) v += 2.0 * kPi;
        if (v > 2.0 * kPi - 1e-9) v = 0.0;  // keep near-1 eigenvalues from wrapping
        return v;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return angle(x) < angle(y); });

    EigenBasis out;
    out.dim = n;
    const double amp = std::sqrt(static_cast<double>(n));  // unit weighted norm
    for (std::size_t idx : order) {
        const cplx lambda = t(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx));
        StateVector v(n);
        for (int q = 0; q < n; ++q) v(q) = amp * qs(q, static_cast<Eigen::Index>(idx));
        const Eigen::VectorXcd col = qs.col(static_cast<Eigen::Index>(idx));
        const double residual = (a.entries * col - lambda * col).norm();
        if (residual > 1e-8 * scale)
            throw std::runtime_error("dense_eig: eigenpair residual exceeds 1e-8");
        out.eigenvalues.push_back(lambda);
        out.vectors.push_back(std::move(v));  // exact_eigenvalues stay empty on the numeric path
    }
    return out;
}

double operator_norm(const DenseOperator& a) {
    const int n = a.dim;
    if (n == 0) return 0.0;
    const Eigen::MatrixXcd g = a.entries.adjoint() * a.entries;

    auto run = [&](unsigned seed) {
        // deterministic LCG start, independent of global RNG state
        Eigen::VectorXcd v(n);
        std::uint64_t s = 0x9e3779b97f4a7c15ULL ^ (seed * 0xbf58476d1ce4e5b9ULL);
        for (int i = 0; i < n; ++i) {
            s = s * 6364136223846793005ULL + 1442695040888963407ULL;
            const double re = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
            s = s * 6364136223846793005ULL + 1442695040888963407ULL;
            const double im = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
            v(i) = {re, im};
        }
        if (v.norm() == 0.0) v(0) = {1.0, 0.0};
        v.normalize();
        double lambda = 0.0;
        for (int it = 0; it < 10000; ++it) {
            Eigen::VectorXcd w = g * v;
            const double next = w.norm();
            if (next == 0.0) return 0.0;
            w /= next;
            if (std::abs(next - lambda) <= 1e-10 * std::max(next, 1.0)) {
                lambda = next;
                break;
            }
            lambda = next;
            v = std::move(w);
        }
        return lambda;
    };

    const double first = run(1);
    const double second = run(2);  // one restart guards against an unlucky start
    return std::sqrt(std::max(first, second));
}

}  // namespace torusq
