#pragma once

#include <optional>
#include <vector>

#include "torusq/diophantine.hpp"
#include "torusq/observables.hpp"

namespace torusq {

/// U_N(tau_alpha) = T_N(-a2, a1), the exact quantization of translation by
/// a/N.
struct KroneckerPropagator {
    int N = 0;
    long a1 = 0, a2 = 0;  // nearest-integer numerators of N * alpha
    MonomialOperator op;

    StateVector apply_to(const StateVector& psi) const { return apply(op, psi); }
};

/// Momentum-diagonal unitary with diagonal entries e(sign * N * W(P/N)),
/// realized as dft^{-1} . diag . dft.
struct ShearPropagator {
    int N = 0;
    TrigPolynomial W;  // mean-zero, p-only
    int sign = +1;
    std::vector<cplx> diagonal;  // the momentum-space entries

    StateVector apply_to(const StateVector& psi) const;
    StateVector apply_inverse_to(const StateVector& psi) const;
};

/// U_N = U_h^{-1} U_tau U_h with the factors retained for eigenbasis
/// transport.
struct PerturbedPropagator {
    int N = 0;
    KroneckerPropagator kron;
    ShearPropagator conj;         // built from h_V
    double h_tail_bound = 0.0;    // residual budget from the h_series truncation

    StateVector apply_to(const StateVector& psi) const;
};

KroneckerPropagator kronecker(const RealTarget& alpha1, const RealTarget& alpha2, int N);

/// h_V(p) = sum_{0<|k|<=K} Vhat(k) e(kp) / (e(k alpha1) - 1), the solution of
/// the cocycle equation h(p + alpha1) - h(p) = V(p).  V must be mean-zero and
/// p-only; alpha1 must be irrational.
TrigPolynomial h_series(const TrigPolynomial& V, const RealTarget& alpha1, long K);

ShearPropagator shear(const TrigPolynomial& W, int N, int sign);

struct CalibrationResult {
    int sign = +1;
    bool degenerate = false;  // V = 0: both signs trivially pass, +1 by convention
    double slope_pass = 0.0;  // fitted slope of the winning sign
    double slope_fail = 0.0;  // fitted slope of the losing sign
};

/// Runs both sign conventions of the shear against the probe f = e_{(0,1)}
/// across N_list and returns the one whose operator-norm Egorov defect decays
/// with fitted log-log slope <= -1.5; the other sign must fail the fit.
CalibrationResult calibrate_sign(const TrigPolynomial& V, const RealTarget& alpha1,
                                 const std::vector<int>& N_list);

PerturbedPropagator perturbed(const RealTarget& alpha1, const RealTarget& alpha2,
                              const TrigPolynomial& V, int N, int sign);

/// psi_j = U_h^{-1} psi_j^tau; eigenvalues inherited from the Kronecker
/// factor.
EigenBasis perturbed_eigenbasis(const PerturbedPropagator& P);

struct EgorovDefect {
    double op_norm = 0.0;                  // ||U^{-1} Op(f) U - Op(fcirc)||
    std::optional<double> basis_max;       // max_j |<(...)psi_j, psi_j>| if a basis was given
    double tail_budget = 0.0;              // contribution allowance from truncated fcirc
};

/// Generic unitary for egorov_defect: apply and apply-inverse callbacks keep
/// the defect routine independent of the propagator flavor.
struct UnitaryRef {
    int N = 0;
    std::function<StateVector(const StateVector&)> apply;
    std::function<StateVector(const StateVector&)> apply_inverse;

    static UnitaryRef of(const KroneckerPropagator& u);
    static UnitaryRef of(const ShearPropagator& u);
    static UnitaryRef of(const PerturbedPropagator& u);
};

/// Operator norm of U^{-1} Op_N(f) U - Op_N(fcirc) on the dense
/// materialization, plus the per-eigenvector matrix-element maximum when a
/// basis is supplied.
EgorovDefect egorov_defect(const UnitaryRef& u, const TrigPolynomial& f, const TrigPolynomial& fcirc,
                           const EigenBasis* basis = nullptr, double tail_budget = 0.0);

}  // namespace torusq
