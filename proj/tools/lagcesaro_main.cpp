#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "lagcesaro/errors.hpp"
#include "lagcesaro/experiment.hpp"

namespace {

namespace xp = lagcesaro::experiment;

struct FlagValues {
    std::string config_path;
    std::string function_text;
    std::string method;
    std::string format;
    std::string output;
    double alpha = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
    double delta = 0.0;
    double rtol = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    double c = 0.0;
    double theta = 0.0;
    int n_min = 0;
    int n_max = 0;
    int n_count = 0;
};

void add_common_options(CLI::App* cmd, FlagValues& v) {
    cmd->add_option("--alpha", v.alpha, "Laguerre weight exponent (> -1)");
    cmd->add_option("--gamma", v.gamma, "Cesaro order (> -1)");
    cmd->add_option("--eta", v.eta, "rate exponent, needs 0 < eta < (2(gamma-alpha)-1)/4");
    cmd->add_option("--delta", v.delta, "f2 exponent in (0,1], or region constant for lemmas");
    cmd->add_option("--function", v.function_text, "f1 | f2 | const:<c>");
    cmd->add_option("--n-min", v.n_min, "smallest n in the schedule");
    cmd->add_option("--n-max", v.n_max, "largest n in the schedule");
    cmd->add_option("--n-count", v.n_count, "number of schedule points (log-spaced)");
    cmd->add_option("--method", v.method, "direct | kernel | both");
    cmd->add_option("--rtol", v.rtol, "quadrature refinement tolerance");
    cmd->add_option("--format", v.format, "csv | json");
    cmd->add_option("--output", v.output, "output path (stdout when omitted)");
    cmd->add_option("--config", v.config_path, "JSON config file; flags win on conflict");
}

xp::ExperimentConfig merge_config(const CLI::App* cmd, const FlagValues& v, bool lemma_mode) {
    xp::ExperimentConfig cfg;

    if (cmd->count("--config") > 0) {
        std::ifstream in(v.config_path);
        if (!in) {
            throw lagcesaro::ValidationError("cannot open config file '" + v.config_path + "'");
        }
        nlohmann::json parsed;
        try {
            in >> parsed;
            parsed.get_to(cfg);
        } catch (const nlohmann::json::exception& e) {
            throw lagcesaro::ValidationError(std::string("config file: ") + e.what());
        }
    }

    if (cmd->count("--function") > 0) {
        cfg.function = xp::FunctionSpec::parse(v.function_text);
    }
    if (cmd->count("--alpha") > 0) {
        cfg.alpha = v.alpha;
    }
    if (cmd->count("--gamma") > 0) {
        cfg.gamma = v.gamma;
    }
    if (cmd->count("--eta") > 0) {
        cfg.eta = v.eta;
    }
    if (cmd->count("--n-min") > 0) {
        cfg.n_min = v.n_min;
    }
    if (cmd->count("--n-max") > 0) {
        cfg.n_max = v.n_max;
    }
    if (cmd->count("--n-count") > 0) {
        cfg.n_count = v.n_count;
    }
    if (cmd->count("--method") > 0) {
        cfg.method = v.method;
    }
    if (cmd->count("--rtol") > 0) {
        cfg.rtol = v.rtol;
    }
    if (cmd->count("--format") > 0) {
        cfg.format = v.format;
    }
    if (cmd->count("--output") > 0) {
        cfg.output = v.output;
    }
    if (cmd->count("--delta") > 0) {
        if (lemma_mode) {
            cfg.delta = v.delta;
        } else if (cfg.function.kind == xp::FunctionSpec::Kind::f2) {
            cfg.function.delta = v.delta;
        } else {
            throw lagcesaro::ValidationError("--delta needs --function f2 here");
        }
    }
    if (lemma_mode) {
        if (cmd->count("--beta") > 0) {
            cfg.beta = v.beta;
        }
        if (cmd->count("--lambda") > 0) {
            cfg.lambda = v.lambda;
        }
        if (cmd->count("--c") > 0) {
            cfg.c = v.c;
        }
        if (cmd->count("--theta") > 0) {
            cfg.theta = v.theta;
        }
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier-Laguerre expansions: coefficients, Cesaro-mean deviation sweeps, "
                 "hypothesis checks, and polynomial growth envelopes"};
    app.require_subcommand(1);

    FlagValues v;
    CLI::App* coeffs = app.add_subcommand("coeffs", "expansion coefficients of a function");
    CLI::App* sweep = app.add_subcommand("sweep", "deviation-vs-n sweep with bound curves");
    CLI::App* conditions =
        app.add_subcommand("check-conditions", "growth and tail hypothesis checkers");
    CLI::App* lemmas =
        app.add_subcommand("verify-lemmas", "polynomial growth-envelope verification");

    for (CLI::App* cmd : {coeffs, sweep, conditions, lemmas}) {
        add_common_options(cmd, v);
    }
    lemmas->add_option("--beta", v.beta, "Laguerre order of the envelopes");
    lemmas->add_option("--lambda", v.lambda, "weight power of the weighted envelope");
    lemmas->add_option("--c", v.c, "regime split constant (regime A ends at c/n)");
    lemmas->add_option("--theta", v.theta, "weighted regime-A margin, 0 < theta < 4");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        nlohmann::json report;
        xp::ExperimentConfig cfg;
        if (coeffs->parsed()) {
            cfg = merge_config(coeffs, v, false);
            report = xp::run_coeffs(cfg);
        } else if (sweep->parsed()) {
            cfg = merge_config(sweep, v, false);
            report = xp::run_sweep(cfg);
        } else if (conditions->parsed()) {
            cfg = merge_config(conditions, v, false);
            report = xp::run_check_conditions(cfg);
        } else {
            cfg = merge_config(lemmas, v, true);
            report = xp::run_verify_lemmas(cfg);
        }
        xp::emit_report(cfg, report);
        return 0;
    } catch (const lagcesaro::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lagcesaro::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}
