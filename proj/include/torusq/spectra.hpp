#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torusq/observables.hpp"
#include "torusq/propagators.hpp"

namespace torusq {

/// <Op_N(f) psi, psi> = sum_n fhat(n) <T_N(n) psi, psi>, term by term through
/// the monomial action; no dense matrix on this path.  Rejects unnormalized
/// psi (|norm^2 - 1| > 1e-8).
cplx matrix_element(const QuantizedObservable& opsum, const StateVector& psi);

struct QueRemainder {
    double value = 0.0;       // max_j |<Op f psi_j,psi_j> - fhat(0)| (+ tail), clamped
    double raw_max = 0.0;     // un-clamped maximum
    double mean = 0.0;        // basis-averaged remainder (diagnostic)
    bool exact_zero = false;  // raw_max below the 1e-12 clamp
};

/// Remainders below this are reported as exact zeros (raw value retained).
inline constexpr double kExactZeroClamp = 1e-12;

QueRemainder que_remainder(const QuantizedObservable& op, const EigenBasis& basis,
                           double tail_bound = 0.0);

/// All n with ||n||_inf <= R and n1*a1 + n2*a2 = 0 (mod N); n = 0 excluded on
/// request.
std::vector<WeylIndex> resonant_set(long a1, long a2, int N, long R, bool include_zero = true);

struct RateFit {
    bool fitted = false;  // false when every remainder vanished exactly
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int exact_vanishing_count = 0;
    int used_rows = 0;
};

struct SweepRow {
    int N = 0;
    long a1 = 0, a2 = 0;
    double remainder_max = 0.0;
    double remainder_mean = 0.0;
    bool exact_zero = false;
    long resonant_count = 0;
    double seconds = 0.0;
};

struct MatrixElementSweep {
    std::string alpha_desc;
    std::string observable_desc;
    std::vector<SweepRow> rows;  // sorted by N
};

/// Least-squares fit of log(remainder_max) vs log(N) over rows with positive
/// remainder; needs >= 4 such rows, otherwise reports only the exact-vanishing
/// count.
RateFit rate_fit(const MatrixElementSweep& sweep);
RateFit rate_fit(const std::vector<int>& ns, const std::vector<double>& values);

/// CSV with '#' provenance comment lines, then the fixed header
/// "N,a1,a2,remainder_max,remainder_mean,exact_zero,resonant_count,seconds".
/// Deterministic: the seconds column is written as 0 unless include_timing.
std::string sweep_to_csv(const MatrixElementSweep& sweep, const std::vector<std::string>& provenance,
                         bool include_timing = false);

}  // namespace torusq
