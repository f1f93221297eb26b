#include "torusq/spectra.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace torusq {

cplx matrix_element(const QuantizedObservable& opsum, const StateVector& psi) {
    if (std::abs(norm_sq(psi) - 1.0) > 1e-8)
        throw std::invalid_argument("matrix_element: state is not normalized");
    cplx s{0.0, 0.0};
    for (const auto& [c, op] : opsum.terms) s += c * inner(apply(op, psi), psi);
    return s;
}

QueRemainder que_remainder(const QuantizedObservable& op, const EigenBasis& basis,
                           double tail_bound) {
    cplx mean_val{0.0, 0.0};
    for (const auto& [c, m] : op.terms)
        if (m == MonomialOperator::identity(op.dim)) mean_val += c;

    QueRemainder r;
    double sum = 0.0;
    for (const StateVector& psi : basis.vectors) {
        const double v = std::abs(matrix_element(op, psi) - mean_val);
        r.raw_max = std::max(r.raw_max, v);
        sum += v;
    }
    r.mean = basis.vectors.empty() ? 0.0 : sum / static_cast<double>(basis.vectors.size());
    r.exact_zero = r.raw_max < kExactZeroClamp;
    r.value = (r.exact_zero ? 0.0 : r.raw_max) + tail_bound;
    return r;
}

std::vector<WeylIndex> resonant_set(long a1, long a2, int N, long R, bool include_zero) {
    std::vector<WeylIndex> out;
    for (long n1 = -R; n1 <= R; ++n1)
        for (long n2 = -R; n2 <= R; ++n2) {
            if (n1 == 0 && n2 == 0 && !include_zero) continue;
            if (mod_n(n1 * a1 + n2 * a2, N) == 0) out.push_back({n1, n2});
        }
    return out;
}

RateFit rate_fit(const std::vector<int>& ns, const std::vector<double>& values) {
    if (ns.size() != values.size()) throw std::invalid_argument("rate_fit: length mismatch");
    RateFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (values[i] <= 0.0) {
            ++fit.exact_vanishing_count;
            continue;
        }
        const double lx = std::log(static_cast<double>(ns[i]));
        const double ly = std::log(values[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
        ++n;
    }
    fit.used_rows = n;
    if (n < 4) return fit;  // exact-vanishing report only
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (values[i] <= 0.0) continue;
        const double pred = fit.intercept + fit.slope * std::log(static_cast<double>(ns[i]));
        const double err = std::log(values[i]) - pred;
        ss_res += err * err;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.fitted = true;
    return fit;
}

RateFit rate_fit(const MatrixElementSweep& sweep) {
    std::vector<int> ns;
    std::vector<double> vals;
    for (const SweepRow& row : sweep.rows) {
        ns.push_back(row.N);
        vals.push_back(row.exact_zero ? 0.0 : row.remainder_max);
    }
    return rate_fit(ns, vals);
}

std::string sweep_to_csv(const MatrixElementSweep& sweep, const std::vector<std::string>& provenance,
                         bool include_timing) {
    std::ostringstream out;
    out << "# alpha: " << sweep.alpha_desc << "\n";
    out << "# observable: " << sweep.observable_desc << "\n";
    for (const std::string& line : provenance) out << "# " << line << "\n";
    out << "N,a1,a2,remainder_max,remainder_mean,exact_zero,resonant_count,seconds\n";
    out << std::setprecision(17);
    for (const SweepRow& row : sweep.rows) {
        out << row.N << "," << row.a1 << "," << row.a2 << "," << row.remainder_max << ","
            << row.remainder_mean << "," << (row.exact_zero ? 1 : 0) << "," << row.resonant_count << ","
            << (include_timing ? row.seconds : 0.0) << "\n";
    }
    return out.str();
}

}  // namespace torusq
