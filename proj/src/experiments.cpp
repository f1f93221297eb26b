#include "torusq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "torusq/oracle.hpp"

namespace torusq {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// The observable plus its truncation certificate; trig-poly specs carry a
// zero tail.
SmoothTruncation parse_observable_trunc(const std::string& spec) {
    SmoothTruncation out;
    if (spec.rfind("harmonic:", 0) == 0) {
        const auto parts = split(spec.substr(9), ',');
        if (parts.size() != 2) throw std::invalid_argument("observable: harmonic wants n1,n2");
        out.poly = TrigPolynomial::harmonic({std::stol(parts[0]), std::stol(parts[1])});
        out.radius = static_cast<double>(out.poly.max_sup_norm());
        return out;
    }
    if (spec.rfind("gaussian:", 0) == 0) {
        const auto parts = split(spec.substr(9), ',');
        if (parts.size() != 3) throw std::invalid_argument("observable: gaussian wants n1,n2,decay");
        return gaussian_family({std::stol(parts[0]), std::stol(parts[1])}, std::stod(parts[2]));
    }
    if (!spec.empty() && spec.front() == '{') {
        out.poly = TrigPolynomial::from_json(spec);
        out.radius = static_cast<double>(out.poly.max_sup_norm());
        return out;
    }
    throw std::invalid_argument("observable: unknown spec \"" + spec + "\"");
}

}  // namespace

RealTarget parse_real_target(const std::string& spec) {
    if (spec.rfind("sqrt:", 0) == 0) return RealTarget::sqrt_of(std::stol(spec.substr(5)));
    if (spec.rfind("rational:", 0) == 0) {
        const auto parts = split(spec.substr(9), '/');
        if (parts.size() != 2) throw std::invalid_argument("alpha: rational wants p/q");
        return RealTarget::rational(BigInt(parts[0]), BigInt(parts[1]));
    }
    if (spec.rfind("quadratic:", 0) == 0) {
        const auto parts = split(spec.substr(10), ',');
        if (parts.size() != 4) throw std::invalid_argument("alpha: quadratic wants a,b,d,c");
        return RealTarget::quadratic(BigInt(parts[0]), BigInt(parts[1]), BigInt(parts[2]),
                                     BigInt(parts[3]));
    }
    throw std::invalid_argument("alpha: unknown spec \"" + spec + "\"");
}

TrigPolynomial parse_observable(const std::string& spec) { return parse_observable_trunc(spec).poly; }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("experiment", c.experiment);
    get("alpha", c.alpha);
    if (j.contains("V") && !j.at("V").is_null()) c.V = TrigPolynomial::from_json(j.at("V").dump());
    get("observable", c.observable);
    get("n_list", c.n_list);
    get("n_min", c.n_min);
    get("n_max", c.n_max);
    get("n_steps", c.n_steps);
    get("seed", c.seed);
    get("out", c.out);
    get("max_dense", c.max_dense);
    get("gamma", c.gamma);
    get("scan_radius", c.scan_radius);
    get("g_power", c.g_power);
    get("levels", c.levels);
    return c;
}

std::string ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["alpha"] = alpha;
    if (V)
        j["V"] = nlohmann::json::parse(V->to_json());
    else
        j["V"] = nullptr;
    j["observable"] = observable;
    j["n_list"] = n_list;
    j["n_min"] = n_min;
    j["n_max"] = n_max;
    j["n_steps"] = n_steps;
    j["seed"] = seed;
    j["out"] = out;
    j["max_dense"] = max_dense;
    j["gamma"] = gamma;
    j["scan_radius"] = scan_radius;
    j["g_power"] = g_power;
    j["levels"] = levels;
    return j.dump(2);
}

std::vector<int> ExperimentConfig::schedule() const {
    std::vector<int> ns = n_list;
    if (ns.empty()) {
        if (n_min < 1 || n_max < n_min || n_steps < 1)
            throw std::invalid_argument("config: bad N range");
        if (n_steps == 1) {
            ns.push_back(n_min);
        } else {
            const double ratio = std::pow(static_cast<double>(n_max) / n_min,
                                          1.0 / static_cast<double>(n_steps - 1));
            for (int i = 0; i < n_steps; ++i)
                ns.push_back(static_cast<int>(std::lround(n_min * std::pow(ratio, i))));
        }
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (!ns.empty() && ns.front() < 1) throw std::invalid_argument("config: N must be positive");
    return ns;
}

RealTarget ExperimentConfig::alpha_target(std::size_t i) const {
    if (i >= alpha.size()) throw std::invalid_argument("config: alpha component missing");
    return parse_real_target(alpha[i]);
}

QueKronReport run_que_kronecker(const ExperimentConfig& cfg) {
    const RealTarget a1t = cfg.alpha_target(0);
    const RealTarget a2t = cfg.alpha_target(1);
    const SmoothTruncation f = parse_observable_trunc(cfg.observable);
    const long radius = std::max<long>(1, f.poly.max_sup_norm());

    QueKronReport rep;
    rep.sweep.alpha_desc = cfg.alpha[0] + " " + cfg.alpha[1];
    rep.sweep.observable_desc = cfg.observable;
    rep.non_ue_regime = a1t.is_rational() && a2t.is_rational();

    for (int N : cfg.schedule()) {
        const KroneckerPropagator u = kronecker(a1t, a2t, N);
        const EigenBasis basis = eigenbasis_monomial(u.op);
        const QuantizedObservable op = quantize(f.poly, N, std::max(kDefaultMaxSupport, radius));
        const QueRemainder qr = que_remainder(op, basis, f.tail_bound);
        SweepRow row;
        row.N = N;
        row.a1 = u.a1;
        row.a2 = u.a2;
        row.remainder_max = qr.value;
        row.remainder_mean = qr.mean;
        row.exact_zero = qr.exact_zero && f.tail_bound == 0.0;
        row.resonant_count = static_cast<long>(resonant_set(u.a1, u.a2, N, radius, false).size());
        rep.sweep.rows.push_back(row);
    }

    rep.fit = rate_fit(rep.sweep);
    // first N from which every later row vanishes exactly (polynomial f only)
    if (f.tail_bound == 0.0) {
        std::optional<int> threshold;
        for (auto it = rep.sweep.rows.rbegin(); it != rep.sweep.rows.rend(); ++it) {
            if (!it->exact_zero) break;
            threshold = it->N;
        }
        rep.zero_threshold = threshold;
    }
    return rep;
}

namespace {

// Shared core of the slow-convergence runs: builds beta, the per-level
// integers, and (for simulable levels) the joint eigenbasis, optionally
// transported by U_h^{-1}.
SlowConvReport slow_convergence_core(const ExperimentConfig& cfg, const TrigPolynomial* V, int sign,
                                     std::vector<PerturbedSlowLevel>* pert_out) {
    const double power = cfg.g_power;
    auto F = [power](const BigInt& y) { return generalized_inverse_exp(y, power); };
    const auto levels = static_cast<std::size_t>(cfg.levels);
    const BetaConstruction beta = construct_beta(F, levels);
    const RealTarget sqrt2 = RealTarget::sqrt_of(2);

    std::vector<long> d_list;
    for (std::size_t n = 0; n < levels; ++n) {
        const BigInt& d = beta.convergents[n].d;
        if (d > 1000000) break;  // observable truncation: deeper terms are below 1e-300 anyway
        d_list.push_back(static_cast<long>(d));
    }
    const TrigPolynomial f = slow_conv_observable(d_list);

    SlowConvReport rep;
    rep.partial_quotients = beta.partial_quotients;
    constexpr int kSimGuard = 4096;

    for (std::size_t n = 1; n <= levels; ++n) {
        SlowConvLevel lv;
        lv.level = n;
        lv.c_n = beta.convergents[n - 1].c;
        lv.d_n = beta.convergents[n - 1].d;
        lv.b_next = beta.partial_quotients[n];  // b_{n+1}
        lv.N_exact = lv.b_next * lv.d_n * lv.d_n;
        const BigInt b_big = lv.b_next * lv.c_n * lv.d_n;
        // omega((0,d),(-b,a)) = d*b = c*N must hold in exact integers
        if (lv.d_n * b_big != lv.c_n * lv.N_exact)
            throw std::logic_error("slow-conv: d*b != c*N; construction arithmetic is broken");

        if (lv.N_exact <= kSimGuard) {
            const int N = static_cast<int>(lv.N_exact);
            const long d = static_cast<long>(lv.d_n);
            const long b = static_cast<long>(b_big);
            const long a = best_approx(sqrt2, sqrt2, N).first;
            const MonomialOperator A = weyl_operator({0, d}, N);
            const MonomialOperator B = weyl_operator({-b, a}, N);
            const JointEigenBasis joint = joint_eigenbasis(A, B);

            std::vector<StateVector> vectors = joint.vectors;
            TrigPolynomial f_used = f;
            double tail = 0.0;
            if (V != nullptr) {
                const PerturbedPropagator up = perturbed(sqrt2, beta.beta, *V, N, sign);
                for (StateVector& v : vectors) v = up.conj.apply_inverse_to(v);
                // f~ = f o Phi_h^{-1}, the observable the perturbed statement is about
                const TrigPolynomial h = h_series(*V, sqrt2, V->max_sup_norm());
                const SmoothTruncation ft = compose_shear(f, h * cplx{-1.0, 0.0}, 512);
                f_used = ft.poly;
                tail = ft.tail_bound;
            }
            const QuantizedObservable op =
                quantize(f_used, N, std::max(kDefaultMaxSupport, f_used.max_sup_norm()));

            double unimod = 0.0, rem = 0.0;
            for (const StateVector& psi : vectors) {
                const StateVector av = apply(A, psi);
                unimod = std::max(unimod, std::abs(std::abs(inner(av, psi)) - 1.0));
                rem = std::max(rem, std::abs(matrix_element(op, psi)));
            }
            lv.simulated = true;
            lv.unimodular_defect = unimod;
            lv.remainder = rem + tail;
            lv.lower_bound_ratio =
                lv.remainder * std::pow(static_cast<double>(lv.N_exact), power);

            if (pert_out != nullptr) {
                // unperturbed reference on the same level for the consistency gap
                double rem0 = 0.0;
                const QuantizedObservable op0 =
                    quantize(f, N, std::max(kDefaultMaxSupport, f.max_sup_norm()));
                for (const StateVector& psi : joint.vectors)
                    rem0 = std::max(rem0, std::abs(matrix_element(op0, psi)));
                PerturbedSlowLevel pl;
                pl.base = lv;
                pl.consistency_gap = std::abs((rem + tail) - rem0);
                pert_out->push_back(pl);
            }
        } else if (pert_out != nullptr) {
            PerturbedSlowLevel pl;
            pl.base = lv;
            pert_out->push_back(pl);
        }
        rep.levels.push_back(lv);
    }
    return rep;
}

}  // namespace

SlowConvReport run_slow_convergence(const ExperimentConfig& cfg) {
    return slow_convergence_core(cfg, nullptr, +1, nullptr);
}

PerturbedReport run_perturbed(const ExperimentConfig& cfg) {
    const RealTarget a1t = cfg.alpha_target(0);
    const RealTarget a2t = cfg.alpha_target(1);
    const SmoothTruncation f = parse_observable_trunc(cfg.observable);

    PerturbedReport rep;
    if (!cfg.V || cfg.V->empty()) {
        const QueKronReport base = run_que_kronecker(cfg);
        rep.sweep = base.sweep;
        rep.fit = base.fit;
        return rep;
    }
    const TrigPolynomial& V = *cfg.V;
    const CalibrationResult cal = calibrate_sign(V, a1t, {32, 64, 128, 256});
    rep.sign = cal.sign;

    const TrigPolynomial h = h_series(V, a1t, V.max_sup_norm());
    // U_h Op(f) U_h^{-1} pushes f through the inverse h-flow, so the classical
    // side composes with -h (the calibrated convention for the forward flow is
    // compose_shear(., +h) against conj = shear(antiderivative(h))).
    const SmoothTruncation fh = compose_shear(f.poly, h * cplx{-1.0, 0.0}, 512);

    rep.sweep.alpha_desc = cfg.alpha[0] + " " + cfg.alpha[1];
    rep.sweep.observable_desc = cfg.observable + " (perturbed)";
    std::vector<int> ns;
    for (int N : cfg.schedule()) {
        const PerturbedPropagator u = perturbed(a1t, a2t, V, N, cal.sign);
        const EigenBasis basis = perturbed_eigenbasis(u);
        const QuantizedObservable op =
            quantize(f.poly, N, std::max(kDefaultMaxSupport, f.poly.max_sup_norm()));
        const QueRemainder qr = que_remainder(op, basis, f.tail_bound);
        SweepRow row;
        row.N = N;
        row.a1 = u.kron.a1;
        row.a2 = u.kron.a2;
        row.remainder_max = qr.value;
        row.remainder_mean = qr.mean;
        row.exact_zero = qr.exact_zero && f.tail_bound == 0.0;
        row.resonant_count = static_cast<long>(
            resonant_set(u.kron.a1, u.kron.a2, N, std::max<long>(1, f.poly.max_sup_norm()), false)
                .size());
        rep.sweep.rows.push_back(row);

        // eq:conj_rate: <U_h Op(f) U_h^{-1} psi,psi> - <Op(f o Phi_h) psi,psi>
        // over the Kronecker eigenbasis psi^tau
        const EigenBasis tau_basis = eigenbasis_monomial(u.kron.op);
        const QuantizedObservable oph =
            quantize(fh.poly, N, std::max(kDefaultMaxSupport, fh.poly.max_sup_norm()));
        double defect = 0.0;
        for (const StateVector& psi : tau_basis.vectors) {
            const cplx lhs = inner(u.conj.apply_to(op.apply_to(u.conj.apply_inverse_to(psi))), psi);
            const cplx rhs = inner(oph.apply_to(psi), psi);
            defect = std::max(defect, std::abs(lhs - rhs));
        }
        rep.conj_defects.push_back(defect + fh.tail_bound);
        ns.push_back(N);
    }
    rep.fit = rate_fit(rep.sweep);
    rep.conj_fit = rate_fit(ns, rep.conj_defects);
    return rep;
}

PerturbedSlowReport run_perturbed_slow(const ExperimentConfig& cfg) {
    PerturbedSlowReport rep;
    if (!cfg.V || cfg.V->empty()) {
        const SlowConvReport base = run_slow_convergence(cfg);
        rep.partial_quotients = base.partial_quotients;
        for (const SlowConvLevel& lv : base.levels) rep.levels.push_back({lv, 0.0});
        return rep;
    }
    const CalibrationResult cal = calibrate_sign(*cfg.V, RealTarget::sqrt_of(2), {32, 64, 128, 256});
    rep.sign = cal.sign;
    const SlowConvReport base = slow_convergence_core(cfg, &*cfg.V, cal.sign, &rep.levels);
    rep.partial_quotients = base.partial_quotients;
    return rep;
}

EgorovReport run_egorov(const ExperimentConfig& cfg) {
    const RealTarget a1t = cfg.alpha_target(0);
    const RealTarget a2t = cfg.alpha_target(1);
    const TrigPolynomial probe = TrigPolynomial::harmonic({0, 1});
    const TrigPolynomial V = cfg.V ? *cfg.V : TrigPolynomial::cosine_p(1, 2.0);

    const CalibrationResult cal = calibrate_sign(V, a1t, {32, 64, 128, 256});
    const TrigPolynomial W = antiderivative_p(V);
    const TrigPolynomial h = h_series(V, a1t, V.max_sup_norm());
    const SmoothTruncation probe_shear = compose_shear(probe, V, 256);

    EgorovReport rep;
    std::vector<int> ns;
    std::vector<double> shear_defects, pert_defects;
    for (int N : cfg.schedule()) {
        if (N > cfg.max_dense) continue;  // operator norms need the dense guard
        ns.push_back(N);

        // Kronecker: exact Egorov against the exact rational translation
        const KroneckerPropagator uk = kronecker(a1t, a2t, N);
        const TrigPolynomial fk = compose_translation(probe, uk.a1, uk.a2, N);
        const EigenBasis kb = eigenbasis_monomial(uk.op);
        const EgorovDefect dk = egorov_defect(UnitaryRef::of(uk), probe, fk, &kb);
        rep.rows.push_back({"kronecker", N, dk.op_norm, dk.basis_max.value_or(0.0)});
        rep.kron_max = std::max(rep.kron_max, std::max(dk.op_norm, dk.basis_max.value_or(0.0)));

        // Shear: calibrated sign against f o Phi_V
        const ShearPropagator us = shear(W, N, cal.sign);
        EigenBasis momentum;  // the shear operator is diagonal in momentum
        momentum.dim = N;
        for (int p = 0; p < N; ++p) {
            StateVector v(N);
            for (int q = 0; q < N; ++q)
                v(q) = ExactPhase::root_of_unity(static_cast<long>(p) * q, N).to_complex();
            momentum.vectors.push_back(std::move(v));
        }
        const EgorovDefect ds = egorov_defect(UnitaryRef::of(us), probe, probe_shear.poly, &momentum,
                                              probe_shear.tail_bound);
        rep.rows.push_back({"shear", N, ds.op_norm + probe_shear.tail_bound,
                            ds.basis_max.value_or(0.0) + probe_shear.tail_bound});
        shear_defects.push_back(ds.op_norm + probe_shear.tail_bound);

        // Perturbed: U_N = C^{-1} K C with C the h-shear, so
        // U_N^{-1} Op(f) U_N ~ Op(f o (Phi_h^{-1} o tau_{a/N} o Phi_h));
        // build it inside out: compose with -h, translate, compose with +h.
        const PerturbedPropagator up = perturbed(a1t, a2t, V, N, cal.sign);
        const SmoothTruncation g1 = compose_shear(probe, h * cplx{-1.0, 0.0}, 512);
        const TrigPolynomial g2 = compose_translation(g1.poly, up.kron.a1, up.kron.a2, N);
        const SmoothTruncation g3 = compose_shear(g2, h, 512);
        const EigenBasis pb = perturbed_eigenbasis(up);
        const double tail = g1.tail_bound + g3.tail_bound;
        const EgorovDefect dp = egorov_defect(UnitaryRef::of(up), probe, g3.poly, &pb, tail);
        rep.rows.push_back(
            {"perturbed", N, dp.op_norm + tail, dp.basis_max.value_or(0.0) + tail});
        pert_defects.push_back(dp.op_norm + tail);
    }
    rep.shear_fit = rate_fit(ns, shear_defects);
    rep.perturbed_fit = rate_fit(ns, pert_defects);
    return rep;
}

namespace {
nlohmann::ordered_json level_json(const SlowConvLevel& lv) {
    nlohmann::ordered_json j;
    j["level"] = lv.level;
    j["d_n"] = lv.d_n.str();
    j["c_n"] = lv.c_n.str();
    j["b_next"] = lv.b_next.str();
    j["N"] = lv.N_exact.str();
    j["simulated"] = lv.simulated;
    if (lv.simulated) {
        j["unimodular_defect"] = lv.unimodular_defect;
        j["remainder"] = lv.remainder;
        j["lower_bound_ratio"] = lv.lower_bound_ratio;
    } else {
        j["status"] = "constructed, not simulated";
    }
    return j;
}

nlohmann::ordered_json fit_json(const RateFit& f) {
    nlohmann::ordered_json j;
    j["fitted"] = f.fitted;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r_squared"] = f.r_squared;
    j["exact_vanishing_count"] = f.exact_vanishing_count;
    return j;
}
}  // namespace

std::string slow_conv_to_json(const SlowConvReport& rep) {
    nlohmann::ordered_json j;
    j["partial_quotients"] = nlohmann::json::array();
    for (const BigInt& b : rep.partial_quotients) j["partial_quotients"].push_back(b.str());
    j["levels"] = nlohmann::json::array();
    for (const SlowConvLevel& lv : rep.levels) j["levels"].push_back(level_json(lv));
    return j.dump(2);
}

std::string perturbed_slow_to_json(const PerturbedSlowReport& rep) {
    nlohmann::ordered_json j;
    j["sign"] = rep.sign;
    j["partial_quotients"] = nlohmann::json::array();
    for (const BigInt& b : rep.partial_quotients) j["partial_quotients"].push_back(b.str());
    j["levels"] = nlohmann::json::array();
    for (const PerturbedSlowLevel& lv : rep.levels) {
        auto lj = level_json(lv.base);
        lj["consistency_gap"] = lv.consistency_gap;
        j["levels"].push_back(lj);
    }
    return j.dump(2);
}

std::string egorov_to_json(const EgorovReport& rep) {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::json::array();
    for (const EgorovRow& r : rep.rows) {
        nlohmann::ordered_json rj;
        rj["kind"] = r.kind;
        rj["N"] = r.N;
        rj["op_norm_defect"] = r.op_norm_defect;
        rj["basis_max_defect"] = r.basis_max_defect;
        j["rows"].push_back(rj);
    }
    j["kron_max"] = rep.kron_max;
    j["shear_fit"] = fit_json(rep.shear_fit);
    j["perturbed_fit"] = fit_json(rep.perturbed_fit);
    return j.dump(2);
}

}  // namespace torusq
