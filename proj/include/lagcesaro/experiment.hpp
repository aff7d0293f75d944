#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lagcesaro/conditions.hpp"

namespace lagcesaro::experiment {

/// Built-in test-function family: f1(t) = e^{-t/2}, f2(t) = t^delta,
/// constants, and linear combinations of those (nesting depth at most 2).
struct FunctionSpec {
    enum class Kind { f1, f2, constant, combo };

    Kind kind = Kind::f1;
    double delta = 0.5;
    double c = 0.0;
    std::vector<std::pair<double, FunctionSpec>> combo;

    /// Parses the flag grammar: "f1", "f2", or "const:<c>".
    static FunctionSpec parse(const std::string& text);

    void validate(int depth = 0) const;
    std::string label() const;
};

std::function<double(double)> make_function(const FunctionSpec& spec);
double value_at_zero(const FunctionSpec& spec);

/// Natural modulus pairing: f1 -> t, f2 -> t^delta, constant -> 0,
/// combinations -> sum of |coefficient| * modulus.
conditions::ModulusFunction make_modulus(const FunctionSpec& spec);

void to_json(nlohmann::json& j, const FunctionSpec& spec);
void from_json(const nlohmann::json& j, FunctionSpec& spec);

/// One experiment run. The same struct backs every subcommand; beta, lambda,
/// c, delta and theta only matter for verify-lemmas (there, delta is the
/// region constant; elsewhere the f2 exponent lives in function.delta).
struct ExperimentConfig {
    FunctionSpec function;
    double alpha = 0.0;
    double gamma = 1.0;
    std::optional<double> eta;
    int n_min = 8;
    int n_max = 512;
    int n_count = 16;
    std::string method = "direct";
    double rtol = 1e-10;
    std::string output;
    std::string format = "csv";
    double beta = 0.0;
    double lambda = 0.0;
    double c = 1.0;
    double delta = 1.0;
    double theta = 2.0;
};

void to_json(nlohmann::json& j, const ExperimentConfig& config);
/// Overlays only the keys present in j; absent keys keep their prior values,
/// which is what gives the defaults < config-file < flags precedence.
void from_json(const nlohmann::json& j, ExperimentConfig& config);

/// Log-spaced integer schedule from n_min to n_max with at most n_count
/// entries (duplicates collapse), endpoints exact, strictly increasing.
std::vector<int> make_schedule(int n_min, int n_max, int n_count);

/// Worker count for kernel sweeps: hardware concurrency capped by the
/// LAGUERRE_CESARO_THREADS environment variable (and by 8 when unset).
int worker_count();

/// Emits pairing-window advisories (Example windows on gamma) on stderr;
/// returns the messages for testability. Never throws: these windows gate
/// the sharpness claims, not the computation itself.
std::vector<std::string> pairing_warnings(const ExperimentConfig& config);

/// Each runner validates, computes, and returns the full JSON report
/// {command, config, tolerances, results}. Throws ValidationError or
/// NumericalError; file writing is a separate step.
nlohmann::json run_coeffs(const ExperimentConfig& config);
nlohmann::json run_sweep(const ExperimentConfig& config);
nlohmann::json run_check_conditions(const ExperimentConfig& config);
nlohmann::json run_verify_lemmas(const ExperimentConfig& config);

/// CSV rendering of a report (same numbers as the JSON, 17 significant
/// digits). Unavailable cells are left empty.
std::string to_csv(const nlohmann::json& report);

/// Writes text to config.output, or stdout when the path is empty.
void write_output(const ExperimentConfig& config, const std::string& text);

/// Renders the report in config.format and writes it per write_output.
void emit_report(const ExperimentConfig& config, const nlohmann::json& report);

} // namespace lagcesaro::experiment
