#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torusq/diophantine.hpp"
#include "torusq/spectra.hpp"

namespace torusq {

/// One JSON document; CLI flags override individual fields (flag wins).
struct ExperimentConfig {
    std::string experiment;                     // que-kron | slow-conv | perturbed | perturbed-slow | egorov | dioph-scan
    std::vector<std::string> alpha = {"sqrt:2", "sqrt:3"};  // "sqrt:d", "rational:p/q", "quadratic:a,b,d,c"
    std::optional<TrigPolynomial> V;            // perturbation profile, p-only mean-zero
    std::string observable = "harmonic:1,1";    // "harmonic:n1,n2" | "gaussian:n1,n2,decay" | inline JSON coeff map
    std::vector<int> n_list;                    // explicit schedule; wins over the range below
    int n_min = 32;
    int n_max = 512;
    int n_steps = 5;                            // geometric steps from n_min to n_max
    unsigned seed = 1;
    std::string out;                            // output path ("" = stdout)
    int max_dense = 512;
    double gamma = 4.0;                         // dioph-scan exponent
    long scan_radius = 30;                      // dioph-scan ||n||_inf range
    double g_power = 1.0;                       // slow-conv: g(x) = x^power
    int levels = 3;                             // slow-conv construction depth

    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;

    std::vector<int> schedule() const;          // resolved, strictly increasing
    RealTarget alpha_target(std::size_t i) const;
};

RealTarget parse_real_target(const std::string& spec);
TrigPolynomial parse_observable(const std::string& spec);

struct QueKronReport {
    MatrixElementSweep sweep;
    RateFit fit;
    std::optional<int> zero_threshold;  // first N from which every later remainder is exactly zero
    bool non_ue_regime = false;         // rational alpha: resonances persist
};

QueKronReport run_que_kronecker(const ExperimentConfig& cfg);

struct SlowConvLevel {
    std::size_t level = 0;
    BigInt b_next, c_n, d_n;     // construction integers at this level
    BigInt N_exact;              // N = b_{n+1} d_n^2 (may exceed any simulable size)
    bool simulated = false;      // joint eigenbasis actually built (N within guard)
    double unimodular_defect = 0.0;  // max | |<T(0,d)psi,psi>| - 1 |
    double remainder = 0.0;          // max_j |<Op f psi_j,psi_j> - fhat(0)|
    double lower_bound_ratio = 0.0;  // remainder * g(N)
};

struct SlowConvReport {
    std::vector<BigInt> partial_quotients;
    std::vector<SlowConvLevel> levels;
};

SlowConvReport run_slow_convergence(const ExperimentConfig& cfg);

struct PerturbedReport {
    MatrixElementSweep sweep;
    RateFit fit;
    int sign = +1;
    std::vector<double> conj_defects;  // per-N conjugated-Egorov defect
    RateFit conj_fit;
};

PerturbedReport run_perturbed(const ExperimentConfig& cfg);

struct PerturbedSlowLevel {
    SlowConvLevel base;
    double consistency_gap = 0.0;  // |perturbed remainder - unperturbed remainder|
};

struct PerturbedSlowReport {
    std::vector<BigInt> partial_quotients;
    std::vector<PerturbedSlowLevel> levels;
    int sign = +1;
};

PerturbedSlowReport run_perturbed_slow(const ExperimentConfig& cfg);

struct EgorovRow {
    std::string kind;  // kronecker | shear | perturbed
    int N = 0;
    double op_norm_defect = 0.0;
    double basis_max_defect = 0.0;
};

struct EgorovReport {
    std::vector<EgorovRow> rows;
    RateFit shear_fit;
    RateFit perturbed_fit;
    double kron_max = 0.0;
};

EgorovReport run_egorov(const ExperimentConfig& cfg);

std::string slow_conv_to_json(const SlowConvReport& rep);
std::string perturbed_slow_to_json(const PerturbedSlowReport& rep);
std::string egorov_to_json(const EgorovReport& rep);

}  // namespace torusq
