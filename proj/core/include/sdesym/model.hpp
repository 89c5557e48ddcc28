#ifndef SDESYM_MODEL_HPP
#define SDESYM_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sdesym/domain.hpp"
#include "sdesym/expr.hpp"
#include "sdesym/parse.hpp"

namespace sdesym {

enum class Interpretation { Ito, Stratonovich };

std::string_view to_string(Interpretation i);

/// dx^i = f^i(x,t) dt + sigma^i_k(x,t) dw^k, read as Ito or Stratonovich.
/// For Stratonovich systems `drift` holds b^i.
struct SdeSystem {
    Interpretation interpretation = Interpretation::Ito;
    std::vector<std::string> states;
    std::vector<std::string> noises;
    std::string time = "t";
    std::vector<std::string> parameters;
    std::set<std::string, std::less<>> functions;  ///< declared opaque function names
    std::vector<Expr> drift;                       ///< n entries
    std::vector<std::vector<Expr>> diffusion;      ///< n x m, diffusion[i][k] = sigma^i_k
    Domain domain;

    std::size_t n() const noexcept { return states.size(); }
    std::size_t m() const noexcept { return noises.size(); }
    bool scalar() const noexcept { return n() == 1 && m() == 1; }

    // Scalar aliases: F = f^1, S = sigma^1_1.
    const Expr& F() const { return drift.at(0); }
    const Expr& S() const { return diffusion.at(0).at(0); }
    const std::string& state() const { return states.at(0); }
    const std::string& noise() const { return noises.at(0); }

    ParseOptions parse_options() const { return ParseOptions{functions}; }
    /// Domain box with defaults filled in for every state, t and noise.
    Domain sampling_domain() const;

    /// Throws ModelError on a dimension mismatch, undeclared symbols, or
    /// noise symbols in drift/diffusion.
    void validate() const;
};

/// Builds the system with default validity boxes for every symbol.
SdeSystem make_system(Interpretation interpretation, std::vector<std::string> states,
                      std::vector<std::string> noises, std::vector<Expr> drift,
                      std::vector<std::vector<Expr>> diffusion);

struct Classification {
    bool simple = true;         ///< tau == 0
    bool deterministic = true;  ///< no xi^i depends on a noise symbol
    std::string label() const;  ///< e.g. "simple random"
    bool operator==(const Classification&) const = default;
};

/// X = tau(t) d_t + xi^i(x,t,w) d_i.
struct VectorField {
    std::vector<Expr> xi;
    Expr tau;
};

Classification classify(const VectorField& v, const SdeSystem& sys);
/// Throws ModelError when xi has the wrong length, tau depends on x or w,
/// or an undeclared symbol occurs.
void validate_field(const VectorField& v, const SdeSystem& sys);

struct NamedField {
    std::string name;
    VectorField field;
};

struct NamedMap {
    std::string name;
    Expr phi;  ///< new variable x = phi(y, t, w)
};

/// beta(t, w) = b(t) + c w.
struct FreeFunctionAnsatz {
    std::string name;
    Expr b;
    Expr c;
};

/// Adapted coordinates for system reduction: the first n-r entries are the
/// reduced coordinates y1.., the last r the reconstructed ones z1...
struct NamedCoordinates {
    std::string name;
    std::vector<Expr> coords;   ///< in the original states and t
    std::vector<Expr> inverse;  ///< original states in y1.., z1.. and t; empty when unknown
};

struct SimulationDefaults {
    std::optional<double> t0, t1, h;
    std::optional<std::vector<double>> x0;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::map<std::string, Interval, std::less<>> bounds;
};

struct ModelFile {
    SdeSystem system;
    std::vector<NamedField> candidates;
    std::vector<NamedMap> maps;
    std::vector<FreeFunctionAnsatz> ansatze;
    std::vector<NamedCoordinates> coordinates;
    SimulationDefaults simulation;
    std::vector<std::string> notes;

    const NamedField* find_candidate(std::string_view name) const;
    const NamedMap* find_map(std::string_view name) const;
    const FreeFunctionAnsatz* find_ansatz(std::string_view name) const;
    const NamedCoordinates* find_coordinates(std::string_view name) const;
};

/// Parses and validates the sectioned model format. Throws ParseError
/// (position = 1-based line) or ModelError.
ModelFile load_model(std::string_view text);
ModelFile load_model_file(const std::string& path);
std::string print_model(const ModelFile& model);

}  // namespace sdesym

#endif  // SDESYM_MODEL_HPP
