#include "lagcesaro/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "lagcesaro/errors.hpp"
#include "lagcesaro/expansion.hpp"
#include "lagcesaro/ratelab.hpp"

namespace lagcesaro::experiment {

namespace {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = text.find_last_not_of(" \t");
    return text.substr(begin, end - begin + 1);
}

expansion::MeanMethod parse_method(const std::string& method) {
    if (method == "direct") {
        return expansion::MeanMethod::direct;
    }
    if (method == "kernel") {
        return expansion::MeanMethod::kernel;
    }
    if (method == "both") {
        return expansion::MeanMethod::both;
    }
    throw ValidationError("method = '" + method + "' is not one of direct | kernel | both");
}

void validate_format(const std::string& format) {
    if (format != "csv" && format != "json") {
        throw ValidationError("format = '" + format + "' is not one of csv | json");
    }
}

void validate_rtol(double rtol) {
    if (!(rtol > 0.0) || !std::isfinite(rtol)) {
        std::ostringstream oss;
        oss << "rtol = " << rtol << " violates rtol > 0";
        throw ValidationError(oss.str());
    }
}

nlohmann::json report_shell(const char* command, const ExperimentConfig& config) {
    nlohmann::json report;
    report["command"] = command;
    report["config"] = config;
    report["tolerances"] = {{"rtol", config.rtol}};
    return report;
}

nlohmann::json condition_json(const conditions::ConditionReport& report) {
    return {{"sup_ratio", report.sup_ratio}, {"argmax_u", report.argmax_u},
            {"passed", report.passed},       {"stable", report.stable},
            {"grid", report.grid}};
}

nlohmann::json regime_json(const ratelab::RegimeEnvelope& regime) {
    return {{"sup", regime.sup},           {"argmax_x", regime.argmax_x},
            {"argmax_n", regime.argmax_n}, {"stable", regime.stable},
            {"evaluated", regime.evaluated}};
}

nlohmann::json envelope_json(const ratelab::EnvelopeReport& report) {
    return {{"regime_a", regime_json(report.regime_a)},
            {"regime_b", regime_json(report.regime_b)},
            {"grid", report.grid}};
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& line : warnings) {
        std::cerr << "warning: " << line << "\n";
    }
}

} // namespace

FunctionSpec FunctionSpec::parse(const std::string& text) {
    const std::string name = trim(text);
    FunctionSpec spec;
    if (name == "f1") {
        spec.kind = Kind::f1;
        return spec;
    }
    if (name == "f2") {
        spec.kind = Kind::f2;
        return spec;
    }
    if (name.rfind("const:", 0) == 0) {
        spec.kind = Kind::constant;
        const std::string payload = name.substr(6);
        std::size_t used = 0;
        try {
            spec.c = std::stod(payload, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (payload.empty() || used != payload.size()) {
            throw ValidationError("function = '" + name + "' has an unreadable constant");
        }
        return spec;
    }
    throw ValidationError("function = '" + name + "' is not one of f1 | f2 | const:<c>");
}

void FunctionSpec::validate(int depth) const {
    switch (kind) {
    case Kind::f1:
        return;
    case Kind::f2:
        if (!(delta > 0.0 && delta <= 1.0)) {
            std::ostringstream oss;
            oss << "delta = " << delta << " violates 0 < delta <= 1";
            throw ValidationError(oss.str());
        }
        return;
    case Kind::constant:
        if (!std::isfinite(c)) {
            throw ValidationError("constant term must be finite");
        }
        return;
    case Kind::combo:
        if (depth >= 2) {
            throw ValidationError("function nesting depth exceeds 2");
        }
        if (combo.empty()) {
            throw ValidationError("linear-combo needs at least one term");
        }
        for (const auto& [coefficient, child] : combo) {
            if (!std::isfinite(coefficient)) {
                throw ValidationError("linear-combo coefficients must be finite");
            }
            child.validate(depth + 1);
        }
        return;
    }
    throw ValidationError("unknown function kind");
}

std::string FunctionSpec::label() const {
    switch (kind) {
    case Kind::f1:
        return "f1";
    case Kind::f2: {
        std::ostringstream oss;
        oss << "f2[delta=" << delta << "]";
        return oss.str();
    }
    case Kind::constant: {
        std::ostringstream oss;
        oss << "const:" << c;
        return oss.str();
    }
    case Kind::combo: {
        std::ostringstream oss;
        bool first = true;
        for (const auto& [coefficient, child] : combo) {
            if (!first) {
                oss << " + ";
            }
            oss << coefficient << "*(" << child.label() << ")";
            first = false;
        }
        return oss.str();
    }
    }
    return "?";
}

std::function<double(double)> make_function(const FunctionSpec& spec) {
    switch (spec.kind) {
    case FunctionSpec::Kind::f1:
        return [](double t) { return std::exp(-0.5 * t); };
    case FunctionSpec::Kind::f2: {
        const double delta = spec.delta;
        return [delta](double t) { return std::pow(t, delta); };
    }
    case FunctionSpec::Kind::constant: {
        const double c = spec.c;
        return [c](double) { return c; };
    }
    case FunctionSpec::Kind::combo: {
        std::vector<std::pair<double, std::function<double(double)>>> terms;
        terms.reserve(spec.combo.size());
        for (const auto& [coefficient, child] : spec.combo) {
            terms.emplace_back(coefficient, make_function(child));
        }
        return [terms](double t) {
            double acc = 0.0;
            for (const auto& [coefficient, fn] : terms) {
                acc += coefficient * fn(t);
            }
            return acc;
        };
    }
    }
    throw ValidationError("unknown function kind");
}

double value_at_zero(const FunctionSpec& spec) {
    switch (spec.kind) {
    case FunctionSpec::Kind::f1:
        return 1.0;
    case FunctionSpec::Kind::f2:
        return 0.0;
    case FunctionSpec::Kind::constant:
        return spec.c;
    case FunctionSpec::Kind::combo: {
        double acc = 0.0;
        for (const auto& [coefficient, child] : spec.combo) {
            acc += coefficient * value_at_zero(child);
        }
        return acc;
    }
    }
    throw ValidationError("unknown function kind");
}

conditions::ModulusFunction make_modulus(const FunctionSpec& spec) {
    switch (spec.kind) {
    case FunctionSpec::Kind::f1:
        return conditions::modulus_linear();
    case FunctionSpec::Kind::f2:
        return conditions::modulus_power(spec.delta);
    case FunctionSpec::Kind::constant:
        return conditions::modulus_zero();
    case FunctionSpec::Kind::combo: {
        std::vector<std::pair<double, conditions::ModulusFunction>> terms;
        terms.reserve(spec.combo.size());
        std::ostringstream label;
        label << "combo(";
        bool first = true;
        for (const auto& [coefficient, child] : spec.combo) {
            terms.emplace_back(std::abs(coefficient), make_modulus(child));
            if (!first) {
                label << " + ";
            }
            label << std::abs(coefficient) << "*" << terms.back().second.label;
            first = false;
        }
        label << ")";
        conditions::ModulusFunction out;
        out.label = label.str();
        out.eval = [terms](double t) {
            double acc = 0.0;
            for (const auto& [weight, omega] : terms) {
                acc += weight * omega.eval(t);
            }
            return acc;
        };
        return out;
    }
    }
    throw ValidationError("unknown function kind");
}

void to_json(nlohmann::json& j, const FunctionSpec& spec) {
    switch (spec.kind) {
    case FunctionSpec::Kind::f1:
        j = {{"kind", "f1"}};
        return;
    case FunctionSpec::Kind::f2:
        j = {{"kind", "f2"}, {"delta", spec.delta}};
        return;
    case FunctionSpec::Kind::constant:
        j = {{"kind", "constant"}, {"c", spec.c}};
        return;
    case FunctionSpec::Kind::combo: {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [coefficient, child] : spec.combo) {
            terms.push_back({{"coefficient", coefficient}, {"spec", child}});
        }
        j = {{"kind", "linear-combo"}, {"combo", std::move(terms)}};
        return;
    }
    }
}

void from_json(const nlohmann::json& j, FunctionSpec& spec) {
    const std::string kind = j.at("kind").get<std::string>();
    spec = FunctionSpec{};
    if (kind == "f1") {
        spec.kind = FunctionSpec::Kind::f1;
    } else if (kind == "f2") {
        spec.kind = FunctionSpec::Kind::f2;
        spec.delta = j.value("delta", spec.delta);
    } else if (kind == "constant") {
        spec.kind = FunctionSpec::Kind::constant;
        spec.c = j.value("c", 0.0);
    } else if (kind == "linear-combo") {
        spec.kind = FunctionSpec::Kind::combo;
        for (const auto& term : j.at("combo")) {
            FunctionSpec child = term.at("spec").get<FunctionSpec>();
            spec.combo.emplace_back(term.at("coefficient").get<double>(), std::move(child));
        }
    } else {
        throw ValidationError("function kind '" + kind +
                              "' is not one of f1 | f2 | constant | linear-combo");
    }
}

void to_json(nlohmann::json& j, const ExperimentConfig& config) {
    j = nlohmann::json{
        {"function", config.function},
        {"alpha", config.alpha},
        {"gamma", config.gamma},
        {"eta", config.eta ? nlohmann::json(*config.eta) : nlohmann::json(nullptr)},
        {"n_min", config.n_min},
        {"n_max", config.n_max},
        {"n_count", config.n_count},
        {"method", config.method},
        {"rtol", config.rtol},
        {"output", config.output},
        {"format", config.format},
        {"beta", config.beta},
        {"lambda", config.lambda},
        {"c", config.c},
        {"delta", config.delta},
        {"theta", config.theta},
    };
}

void from_json(const nlohmann::json& j, ExperimentConfig& config) {
    if (j.contains("function")) {
        config.function = j.at("function").get<FunctionSpec>();
    }
    if (j.contains("eta")) {
        if (j.at("eta").is_null()) {
            config.eta.reset();
        } else {
            config.eta = j.at("eta").get<double>();
        }
    }
    auto scalar = [&](const char* key, auto& field) {
        if (j.contains(key)) {
            j.at(key).get_to(field);
        }
    };
    scalar("alpha", config.alpha);
    scalar("gamma", config.gamma);
    scalar("n_min", config.n_min);
    scalar("n_max", config.n_max);
    scalar("n_count", config.n_count);
    scalar("method", config.method);
    scalar("rtol", config.rtol);
    scalar("output", config.output);
    scalar("format", config.format);
    scalar("beta", config.beta);
    scalar("lambda", config.lambda);
    scalar("c", config.c);
    scalar("delta", config.delta);
    scalar("theta", config.theta);
}

std::vector<int> make_schedule(int n_min, int n_max, int n_count) {
    if (n_min < 1) {
        std::ostringstream oss;
        oss << "n_min = " << n_min << " violates n_min >= 1";
        throw ValidationError(oss.str());
    }
    if (n_max < n_min) {
        std::ostringstream oss;
        oss << "n_max = " << n_max << " violates n_max >= n_min";
        throw ValidationError(oss.str());
    }
    if (n_count < 1) {
        std::ostringstream oss;
        oss << "n_count = " << n_count << " violates n_count >= 1";
        throw ValidationError(oss.str());
    }
    std::vector<int> schedule;
    if (n_min == n_max || n_count == 1) {
        schedule.push_back(n_min);
        return schedule;
    }
    const double llo = std::log(static_cast<double>(n_min));
    const double lhi = std::log(static_cast<double>(n_max));
    for (int i = 0; i < n_count; ++i) {
        const double t = static_cast<double>(i) / (n_count - 1);
        int v = static_cast<int>(std::lround(std::exp(llo + t * (lhi - llo))));
        v = std::clamp(v, n_min, n_max);
        if (schedule.empty() || v > schedule.back()) {
            schedule.push_back(v);
        }
    }
    if (schedule.back() < n_max) {
        schedule.push_back(n_max);
    }
    return schedule;
}

int worker_count() {
    int cap = 8;
    if (const char* raw = std::getenv("LAGUERRE_CESARO_THREADS")) {
        char* end = nullptr;
        const long parsed = std::strtol(raw, &end, 10);
        if (end != raw && *end == '\0' && parsed >= 1) {
            cap = static_cast<int>(std::min<long>(parsed, 64));
        }
    }
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    return std::min(cap, hw);
}

std::vector<std::string> pairing_warnings(const ExperimentConfig& config) {
    std::vector<std::string> out;
    const auto& spec = config.function;
    if (spec.kind == FunctionSpec::Kind::f1) {
        if (!(config.alpha + 0.5 < config.gamma && config.gamma < config.alpha + 8.0 / 3.0)) {
            std::ostringstream oss;
            oss << "gamma = " << config.gamma
                << " lies outside the f1 sharpness window alpha + 1/2 < gamma < alpha + 8/3; "
                   "tail-condition constants are not guaranteed";
            out.push_back(oss.str());
        }
    } else if (spec.kind == FunctionSpec::Kind::f2) {
        if (!(config.alpha + 0.5 < config.gamma &&
              config.gamma < config.alpha + 2.0 * spec.delta + 2.0 / 3.0)) {
            std::ostringstream oss;
            oss << "gamma = " << config.gamma
                << " lies outside the f2 sharpness window alpha + 1/2 < gamma < alpha + "
                   "2*delta + 2/3; tail-condition constants are not guaranteed";
            out.push_back(oss.str());
        }
    }
    return out;
}

nlohmann::json run_coeffs(const ExperimentConfig& config) {
    config.function.validate();
    validate_format(config.format);
    validate_rtol(config.rtol);
    const expansion::ExpansionParams params(config.alpha, config.gamma, config.eta);
    (void)params;

    const auto table = expansion::fourier_laguerre_coeffs(
        make_function(config.function), config.alpha, config.n_max, config.rtol,
        config.function.label());

    nlohmann::json report = report_shell("coeffs", config);
    report["tolerances"]["achieved_rtol"] = table.achieved_rtol;

    nlohmann::json nu = nlohmann::json::array();
    nlohmann::json values = nlohmann::json::array();
    nlohmann::json rtols = nlohmann::json::array();
    nlohmann::json converged = nlohmann::json::array();
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        nu.push_back(static_cast<int>(i));
        values.push_back(table.values[i]);
        rtols.push_back(table.achieved_rtols[i]);
        converged.push_back(table.converged[i] != 0);
    }
    report["results"] = {{"nu", std::move(nu)},
                         {"a_nu", std::move(values)},
                         {"achieved_rtol", std::move(rtols)},
                         {"converged", std::move(converged)}};
    return report;
}

nlohmann::json run_sweep(const ExperimentConfig& config) {
    config.function.validate();
    validate_format(config.format);
    validate_rtol(config.rtol);
    const expansion::ExpansionParams params(config.alpha, config.gamma, config.eta);
    print_warnings(pairing_warnings(config));

    const auto schedule = make_schedule(config.n_min, config.n_max, config.n_count);
    const auto method = parse_method(config.method);
    const auto f = make_function(config.function);
    const double f0 = value_at_zero(config.function);
    const auto omega = make_modulus(config.function);

    const auto sweep = ratelab::deviation_sweep(f, f0, params, schedule, method,
                                                config.eta ? &omega : nullptr, config.rtol,
                                                worker_count());

    nlohmann::json report = report_shell("sweep", config);
    report["tolerances"]["max_method_gap"] = sweep.max_method_gap;

    nlohmann::json results;
    results["n"] = sweep.n_values;
    results["method"] = sweep.method;
    if (!sweep.deviation_direct.empty()) {
        results["deviation_direct"] = sweep.deviation_direct;
    }
    if (!sweep.deviation_kernel.empty()) {
        results["deviation_kernel"] = sweep.deviation_kernel;
    }
    if (!sweep.bound_theorem.empty()) {
        results["bound_theorem"] = sweep.bound_theorem;
        results["bound_corollary_refined"] = sweep.bound_corollary_refined;
        results["bound_corollary_special"] = sweep.bound_corollary_special;
        results["ratio"] = sweep.ratios;
        results["eta_special"] = sweep.eta_special;
        results["corollary_refined_ok"] = sweep.corollary_refined_ok;
        results["corollary_special_ok"] = sweep.corollary_special_ok;
    }
    results["slope_defined"] = sweep.slope_defined;
    results["fitted_slope"] =
        sweep.slope_defined ? nlohmann::json(sweep.fitted_slope) : nlohmann::json(nullptr);
    results["max_method_gap"] = sweep.max_method_gap;
    report["results"] = std::move(results);
    return report;
}

nlohmann::json run_check_conditions(const ExperimentConfig& config) {
    config.function.validate();
    validate_format(config.format);
    const expansion::ExpansionParams params(config.alpha, config.gamma, config.eta);
    (void)params;
    print_warnings(pairing_warnings(config));

    const auto f = make_function(config.function);
    const double f0 = value_at_zero(config.function);
    const auto omega = make_modulus(config.function);

    const auto growth = conditions::check_condition_growth(f, f0, config.alpha, omega);
    const auto tail =
        conditions::check_condition_tail(f, f0, config.alpha, config.gamma, omega);

    nlohmann::json report = report_shell("check-conditions", config);
    report["results"] = {{"omega", omega.label},
                         {"growth", condition_json(growth)},
                         {"tail", condition_json(tail)}};
    return report;
}

nlohmann::json run_verify_lemmas(const ExperimentConfig& config) {
    validate_format(config.format);
    const auto schedule = make_schedule(config.n_min, config.n_max, config.n_count);

    const auto growth =
        ratelab::laguerre_growth_envelope(config.beta, config.c, config.delta, schedule);
    const auto weighted = ratelab::weighted_laguerre_envelope(config.beta, config.lambda,
                                                              config.delta, config.theta,
                                                              schedule);

    nlohmann::json report = report_shell("verify-lemmas", config);
    report["results"] = {
        {"growth_envelope", envelope_json(growth)},
        {"weighted_envelope", envelope_json(weighted)},
        {"weighted_exponents",
         {{"regime_a", ratelab::weighted_envelope_exponent_a(config.beta, config.lambda)},
          {"regime_b", ratelab::weighted_envelope_exponent_b(config.beta, config.lambda)}}},
    };
    return report;
}

namespace {

std::string csv_coeffs(const nlohmann::json& results) {
    std::ostringstream oss;
    oss << "nu,a_nu,achieved_rtol\n";
    const auto& nu = results.at("nu");
    const auto& values = results.at("a_nu");
    const auto& rtols = results.at("achieved_rtol");
    for (std::size_t i = 0; i < nu.size(); ++i) {
        oss << nu[i].get<int>() << "," << format_double(values[i].get<double>()) << ","
            << format_double(rtols[i].get<double>()) << "\n";
    }
    return oss.str();
}

std::string csv_sweep(const nlohmann::json& results) {
    std::ostringstream oss;
    oss << "n,deviation_direct,deviation_kernel,bound_theorem,bound_corollary_refined,"
           "bound_corollary_special,ratio\n";
    const auto& n = results.at("n");
    auto cell = [&](const char* key, std::size_t i) -> std::string {
        if (!results.contains(key)) {
            return "";
        }
        return format_double(results.at(key)[i].get<double>());
    };
    for (std::size_t i = 0; i < n.size(); ++i) {
        oss << n[i].get<int>() << "," << cell("deviation_direct", i) << ","
            << cell("deviation_kernel", i) << "," << cell("bound_theorem", i) << ","
            << cell("bound_corollary_refined", i) << "," << cell("bound_corollary_special", i)
            << "," << cell("ratio", i) << "\n";
    }
    return oss.str();
}

std::string csv_conditions(const nlohmann::json& results) {
    std::ostringstream oss;
    oss << "condition,sup_ratio,argmax_u,passed,stable\n";
    for (const char* key : {"growth", "tail"}) {
        const auto& row = results.at(key);
        oss << key << "," << format_double(row.at("sup_ratio").get<double>()) << ","
            << format_double(row.at("argmax_u").get<double>()) << ","
            << (row.at("passed").get<bool>() ? 1 : 0) << ","
            << (row.at("stable").get<bool>() ? 1 : 0) << "\n";
    }
    return oss.str();
}

std::string csv_lemmas(const nlohmann::json& results) {
    std::ostringstream oss;
    oss << "check,regime,sup,argmax_x,argmax_n,stable,evaluated\n";
    for (const char* key : {"growth_envelope", "weighted_envelope"}) {
        const auto& block = results.at(key);
        for (const char* regime : {"regime_a", "regime_b"}) {
            const auto& row = block.at(regime);
            oss << key << "," << regime << "," << format_double(row.at("sup").get<double>())
                << "," << format_double(row.at("argmax_x").get<double>()) << ","
                << row.at("argmax_n").get<int>() << ","
                << (row.at("stable").get<bool>() ? 1 : 0) << ","
                << (row.at("evaluated").get<bool>() ? 1 : 0) << "\n";
        }
    }
    return oss.str();
}

} // namespace

std::string to_csv(const nlohmann::json& report) {
    const std::string command = report.at("command").get<std::string>();
    const auto& results = report.at("results");
    if (command == "coeffs") {
        return csv_coeffs(results);
    }
    if (command == "sweep") {
        return csv_sweep(results);
    }
    if (command == "check-conditions") {
        return csv_conditions(results);
    }
    if (command == "verify-lemmas") {
        return csv_lemmas(results);
    }
    throw ValidationError("unknown report command '" + command + "'");
}

void write_output(const ExperimentConfig& config, const std::string& text) {
    if (config.output.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(config.output);
    if (!out) {
        throw ValidationError("cannot open output file '" + config.output + "'");
    }
    out << text;
    if (!out) {
        throw ValidationError("failed while writing '" + config.output + "'");
    }
}

void emit_report(const ExperimentConfig& config, const nlohmann::json& report) {
    validate_format(config.format);
    if (config.format == "json") {
        write_output(config, report.dump(2) + "\n");
    } else {
        write_output(config, to_csv(report));
    }
}

} // namespace lagcesaro::experiment
