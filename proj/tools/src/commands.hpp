#ifndef SDESYM_TOOLS_COMMANDS_HPP
#define SDESYM_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sdesym/model.hpp"
#include "sdesym/simulate.hpp"

namespace sdesym::cli {

enum ExitCode : int { Success = 0, VerificationFailure = 1, InputFailure = 2 };

/// Bad flags, unknown names, unreadable files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::vector<std::string> candidates;
    std::optional<double> tol;
    std::optional<int> numeric_samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> h, t0, t1;
    std::vector<double> x0;
    std::optional<std::size_t> paths;
    std::optional<std::string> scheme;
    std::optional<std::string> beta;    ///< "b=...,c=..." or an ansatz name
    std::optional<std::string> phi;     ///< map name or expression
    std::optional<std::string> coords;  ///< coordinates name for systems
    std::optional<std::string> to;      ///< convert target
    std::optional<std::string> out;
    double bound = 0.05;                ///< pathwise median error bound for verify
};

struct Outcome {
    nlohmann::json report = nlohmann::json::object();
    int exit_code = Success;
};

Outcome cmd_check(const ModelFile& model, const Options& options);
Outcome cmd_convert(const ModelFile& model, const Options& options);
Outcome cmd_reduce(const ModelFile& model, const Options& options);
Outcome cmd_simulate(const ModelFile& model, const Options& options);
Outcome cmd_verify(const ModelFile& model, const Options& options);

/// FNV-1a 64 of the bytes, as 16 hex digits.
std::string fnv1a64(std::string_view bytes);

/// Model defaults overridden by the flags; throws InputError on an invalid grid.
SimulationConfig resolve_config(const ModelFile& model, const Options& options);

/// dx = f dt + s dw, omitting zero terms.
std::string format_equation(const std::string& var, const Expr& drift, const std::vector<Expr>& noise,
                            const std::vector<std::string>& noises);

/// Full front end: parses argv, loads the model, writes the report to `out`
/// (or --report), returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdesym::cli

#endif  // SDESYM_TOOLS_COMMANDS_HPP
