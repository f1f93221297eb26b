#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "torusq/experiments.hpp"

namespace {

using torusq::ExperimentConfig;

struct CommonFlags {
    std::string config_path;
    std::string out;
    int n_min = -1, n_max = -1, n_steps = -1;
    long seed = -1;
    int max_dense = -1;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
    cmd->add_option("--config", fl.config_path, "JSON config file; flags override its fields");
    cmd->add_option("--out", fl.out, "output path (default stdout)");
    cmd->add_option("--n-min", fl.n_min, "smallest N in the schedule");
    cmd->add_option("--n-max", fl.n_max, "largest N in the schedule");
    cmd->add_option("--n-steps", fl.n_steps, "number of geometric steps");
    cmd->add_option("--seed", fl.seed, "deterministic seed");
    cmd->add_option("--max-dense", fl.max_dense, "dense materialization cap");
}

ExperimentConfig load_config(const CommonFlags& fl, const std::string& experiment) {
    ExperimentConfig cfg;
    if (!fl.config_path.empty()) {
        std::ifstream in(fl.config_path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + fl.config_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        cfg = ExperimentConfig::from_json(buf.str());
    }
    cfg.experiment = experiment;
    if (!fl.out.empty()) cfg.out = fl.out;
    if (fl.n_min > 0) cfg.n_min = fl.n_min;
    if (fl.n_max > 0) cfg.n_max = fl.n_max;
    if (fl.n_steps > 0) cfg.n_steps = fl.n_steps;
    if (fl.seed >= 0) cfg.seed = static_cast<unsigned>(fl.seed);
    if (fl.max_dense > 0) cfg.max_dense = fl.max_dense;
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<std::string> provenance(const ExperimentConfig& cfg, const std::string& target) {
    return {"target: " + target, "schedule: n_min=" + std::to_string(cfg.n_min) +
                                     " n_max=" + std::to_string(cfg.n_max) +
                                     " n_steps=" + std::to_string(cfg.n_steps),
            "seed: " + std::to_string(cfg.seed)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantized torus maps: QUE experiments"};
    app.require_subcommand(1);

    CommonFlags fl;
    std::string observable, alpha1, alpha2, v_json;
    double gamma = 4.0, g_power = 1.0;
    long scan_radius = 30;
    int levels = 3;

    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--alpha1", alpha1, "first translation component, e.g. sqrt:2");
        cmd->add_option("--alpha2", alpha2, "second translation component, e.g. sqrt:3");
        cmd->add_option("--observable", observable, "harmonic:n1,n2 | gaussian:n1,n2,decay | JSON");
        cmd->add_option("--perturbation", v_json, "perturbation V as a JSON coefficient map");
    };

    CLI::App* que = app.add_subcommand("que-kron", "matrix-element sweep for the Kronecker map");
    CLI::App* slow = app.add_subcommand("slow-conv", "arbitrarily-slow-convergence construction");
    CLI::App* pert = app.add_subcommand("perturbed", "perturbed Kronecker sweep with rate fit");
    CLI::App* pslow = app.add_subcommand("perturbed-slow", "slow convergence for the perturbed map");
    CLI::App* ego = app.add_subcommand("egorov", "Egorov defect table for all propagators");
    CLI::App* dioph = app.add_subcommand("dioph-scan", "finite diophantine-constant scan");
    for (CLI::App* cmd : {que, slow, pert, pslow, ego, dioph}) add_common(cmd, fl);
    for (CLI::App* cmd : {que, pert, pslow, ego}) add_model_flags(cmd);
    dioph->add_option("--alpha1", alpha1, "first component");
    dioph->add_option("--alpha2", alpha2, "second component");
    dioph->add_option("--gamma", gamma, "exponent in |n.alpha + k| * ||n||^gamma");
    dioph->add_option("--radius", scan_radius, "scan ||n||_inf up to this radius");
    slow->add_option("--g-power", g_power, "target rate g(x) = x^power");
    slow->add_option("--levels", levels, "construction depth");
    pslow->add_option("--g-power", g_power, "target rate g(x) = x^power");
    pslow->add_option("--levels", levels, "construction depth");

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* cmd = app.get_subcommands().front();
        ExperimentConfig cfg = load_config(fl, cmd->get_name());
        if (!alpha1.empty()) cfg.alpha[0] = alpha1;
        if (!alpha2.empty()) cfg.alpha = {alpha1.empty() ? cfg.alpha[0] : alpha1, alpha2};
        if (!observable.empty()) cfg.observable = observable;
        if (!v_json.empty()) cfg.V = torusq::TrigPolynomial::from_json(v_json);
        if (dioph->count("--gamma") || cmd == dioph) cfg.gamma = gamma;
        if (dioph->count("--radius")) cfg.scan_radius = scan_radius;
        if (cmd == slow || cmd == pslow) {
            cfg.g_power = g_power;
            cfg.levels = levels;
        }

        if (cmd == que) {
            const auto rep = torusq::run_que_kronecker(cfg);
            std::vector<std::string> prov = provenance(cfg, "Kronecker-map QUE remainder sweep");
            if (rep.zero_threshold)
                prov.push_back("exact-zero threshold N0: " + std::to_string(*rep.zero_threshold));
            if (rep.non_ue_regime) prov.push_back("regime: non-UE (rational translation)");
            emit(cfg.out, torusq::sweep_to_csv(rep.sweep, prov));
        } else if (cmd == slow) {
            emit(cfg.out, torusq::slow_conv_to_json(torusq::run_slow_convergence(cfg)));
        } else if (cmd == pert) {
            const auto rep = torusq::run_perturbed(cfg);
            std::vector<std::string> prov = provenance(cfg, "perturbed-map remainder sweep");
            prov.push_back("calibrated sign: " + std::to_string(rep.sign));
            if (rep.fit.fitted)
                prov.push_back("fitted slope: " + std::to_string(rep.fit.slope) +
                               " r2: " + std::to_string(rep.fit.r_squared));
            if (rep.conj_fit.fitted)
                prov.push_back("conjugation-defect slope: " + std::to_string(rep.conj_fit.slope));
            emit(cfg.out, torusq::sweep_to_csv(rep.sweep, prov));
        } else if (cmd == pslow) {
            emit(cfg.out, torusq::perturbed_slow_to_json(torusq::run_perturbed_slow(cfg)));
        } else if (cmd == ego) {
            emit(cfg.out, torusq::egorov_to_json(torusq::run_egorov(cfg)));
        } else {
            const auto rep = torusq::diophantine_scan(cfg.alpha_target(0), cfg.alpha_target(1),
                                                      cfg.gamma, cfg.scan_radius);
            emit(cfg.out, rep.to_json() + "\n");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
