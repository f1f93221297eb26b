#pragma once

#include <Eigen/Dense>
#include <functional>

#include "torusq/observables.hpp"

namespace torusq {

struct KroneckerPropagator;
struct ShearPropagator;
struct PerturbedPropagator;

/// Dense brute-force ground truth; test/calibration path only.
struct DenseOperator {
    int dim = 0;
    Eigen::MatrixXcd entries;

    explicit DenseOperator(int n = 0) : dim(n), entries(Eigen::MatrixXcd::Zero(n, n)) {}
};

/// Dimension cap for dense materialization.
inline constexpr int kDenseGuard = 512;

DenseOperator materialize(const MonomialOperator& op);
DenseOperator materialize(const QuantizedObservable& op);
DenseOperator materialize(const KroneckerPropagator& u);
DenseOperator materialize(const ShearPropagator& u);
DenseOperator materialize(const PerturbedPropagator& u);

/// Dense matrix of any linear map given by its action on basis states.
DenseOperator materialize_action(int N, const std::function<StateVector(const StateVector&)>& act);

/// Numeric spectral decomposition of a normal matrix; eigenvalues sorted by
/// angle in [0, 2 pi), residuals <= 1e-8 guaranteed or an exception is
/// thrown.  Rejects non-normal input.
EigenBasis dense_eig(const DenseOperator& a);

/// Largest singular value via power iteration on A*A (deterministic seeded
/// start plus one restart, relative tolerance 1e-10).
double operator_norm(const DenseOperator& a);

}  // namespace torusq
