#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "torusq/experiments.hpp"

using namespace torusq;

TEST_CASE("config round trip and overrides") {
    ExperimentConfig cfg;
    cfg.experiment = "que-kron";
    cfg.alpha = {"sqrt:2", "sqrt:3"};
    cfg.V = TrigPolynomial::cosine_p(1, 2.0);
    cfg.observable = "gaussian:0,1,1.0";
    cfg.n_min = 16;
    cfg.n_max = 128;
    cfg.n_steps = 4;
    cfg.seed = 42;
    const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(back.alpha == cfg.alpha);
    CHECK(back.V.has_value());
    CHECK(std::abs(back.V->coeff({1, 0}) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(back.seed == 42u);
    CHECK_THROWS(ExperimentConfig::from_json("not json"));
}

TEST_CASE("schedule resolves geometric ranges and explicit lists") {
    ExperimentConfig cfg;
    cfg.n_min = 32;
    cfg.n_max = 512;
    cfg.n_steps = 5;
    const auto ns = cfg.schedule();
    REQUIRE(ns.size() == 5);
    CHECK(ns.front() == 32);
    CHECK(ns.back() == 512);
    for (std::size_t i = 1; i < ns.size(); ++i) CHECK(ns[i] > ns[i - 1]);

    cfg.n_list = {64, 8, 8, 16};
    const auto explicit_ns = cfg.schedule();
    CHECK(explicit_ns == std::vector<int>{8, 16, 64});

    ExperimentConfig bad;
    bad.n_min = 0;
    CHECK_THROWS(bad.schedule());
}

TEST_CASE("alpha and observable spec parsing") {
    CHECK(parse_real_target("sqrt:2").to_double() == doctest::Approx(std::sqrt(2.0)));
    CHECK(parse_real_target("rational:7/3").to_double() == doctest::Approx(7.0 / 3.0));
    CHECK(parse_real_target("quadratic:1,1,5,2").to_double() ==
          doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
    CHECK_THROWS(parse_real_target("pi"));

    const TrigPolynomial h = parse_observable("harmonic:1,1");
    CHECK(h.coeff({1, 1}) == cplx{1.0, 0.0});
    const TrigPolynomial g = parse_observable("gaussian:0,1,1.0");
    CHECK(std::abs(g.coeff({0, 1}) - cplx{std::exp(-1.0), 0.0}) < 1e-15);
    const TrigPolynomial j = parse_observable(R"({"2,0":[0.5,0]})");
    CHECK(j.coeff({2, 0}) == cplx{0.5, 0.0});
    CHECK_THROWS(parse_observable("fourier"));
}

TEST_CASE("run_que_kronecker finds the exact-zero regime") {
    ExperimentConfig cfg;
    cfg.alpha = {"sqrt:2", "sqrt:3"};
    cfg.observable = "harmonic:1,1";
    for (int n = 40; n <= 60; ++n) cfg.n_list.push_back(n);
    const QueKronReport rep = run_que_kronecker(cfg);
    REQUIRE(rep.sweep.rows.size() == cfg.n_list.size());
    CHECK_FALSE(rep.non_ue_regime);
    for (const SweepRow& row : rep.sweep.rows) {
        // e_{(1,1)} is non-resonant at these N, so the remainder is exactly zero
        CHECK(row.resonant_count == 0);
        CHECK(row.exact_zero);
    }
    REQUIRE(rep.zero_threshold.has_value());
    CHECK(*rep.zero_threshold == 40);

    ExperimentConfig rational = cfg;
    rational.alpha = {"rational:1/2", "rational:1/3"};
    CHECK(run_que_kronecker(rational).non_ue_regime);
}

TEST_CASE("run_slow_convergence levels for g(x) = x") {
    ExperimentConfig cfg;
    cfg.g_power = 1.0;
    cfg.levels = 3;
    const SlowConvReport rep = run_slow_convergence(cfg);
    REQUIRE(rep.levels.size() == 3);
    CHECK(rep.levels[0].N_exact == 3);
    CHECK(rep.levels[1].N_exact == 64);
    CHECK(rep.levels[0].simulated);
    CHECK(rep.levels[1].simulated);
    CHECK_FALSE(rep.levels[2].simulated);  // N = b_4 * 17^2, far past the guard
    for (const SlowConvLevel& lv : rep.levels) {
        if (!lv.simulated) continue;
        CHECK(lv.unimodular_defect < 1e-10);
        CHECK(lv.lower_bound_ratio >= 0.3);
    }
    const std::string json = slow_conv_to_json(rep);
    CHECK(json.find("\"simulated\": false") != std::string::npos);
    CHECK(json == slow_conv_to_json(rep));  // deterministic serialization
}

TEST_CASE("run_perturbed with V = 0 reduces to the Kronecker run") {
    ExperimentConfig cfg;
    cfg.alpha = {"sqrt:2", "sqrt:3"};
    cfg.observable = "harmonic:1,1";
    cfg.n_list = {40, 44, 48, 52};
    const PerturbedReport rep = run_perturbed(cfg);
    const QueKronReport base = run_que_kronecker(cfg);
    REQUIRE(rep.sweep.rows.size() == base.sweep.rows.size());
    for (std::size_t i = 0; i < rep.sweep.rows.size(); ++i) {
        CHECK(rep.sweep.rows[i].remainder_max == base.sweep.rows[i].remainder_max);
        CHECK(rep.sweep.rows[i].exact_zero == base.sweep.rows[i].exact_zero);
    }
}

TEST_CASE("deterministic csv across repeated runs") {
    ExperimentConfig cfg;
    cfg.alpha = {"sqrt:2", "sqrt:3"};
    cfg.observable = "gaussian:0,1,1.0";
    cfg.n_list = {16, 24, 32};
    const QueKronReport r1 = run_que_kronecker(cfg);
    const QueKronReport r2 = run_que_kronecker(cfg);
    CHECK(sweep_to_csv(r1.sweep, {"p"}) == sweep_to_csv(r2.sweep, {"p"}));
}

TEST_CASE("run_egorov: exact Kronecker rows on a small schedule") {
    ExperimentConfig cfg;
    cfg.alpha = {"sqrt:2", "sqrt:3"};
    cfg.n_list = {16, 32};
    const EgorovReport rep = run_egorov(cfg);
    REQUIRE(rep.rows.size() == 6);  // three propagator kinds per N
    CHECK(rep.kron_max < 1e-12);
    std::map<std::string, std::vector<double>> by_kind;
    for (const EgorovRow& row : rep.rows) {
        if (row.kind == "kronecker") CHECK(row.op_norm_defect < 1e-12);
        by_kind[row.kind].push_back(row.op_norm_defect);
    }
    // shear and perturbed defects must shrink roughly like N^-2 when N doubles
    for (const char* kind : {"shear", "perturbed"}) {
        REQUIRE(by_kind[kind].size() == 2);
        CHECK(by_kind[kind][1] < 0.5 * by_kind[kind][0]);
        CHECK(by_kind[kind][0] < 0.5);  // and start small, not O(1)
    }
    const std::string json = egorov_to_json(rep);
    CHECK(json.find("\"kind\": \"shear\"") != std::string::npos);
}
