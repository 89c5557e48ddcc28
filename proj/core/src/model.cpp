#include "sdesym/model.hpp"

#include <algorithm>

#include "sdesym/error.hpp"

namespace sdesym {

std::string_view to_string(Interpretation i) { return i == Interpretation::Ito ? "ito" : "stratonovich"; }

Domain SdeSystem::sampling_domain() const
{
    Domain d = domain;
    for (const auto& s : states) {
        if (!d.boxes.count(s)) d.set(s, kDefaultStateBox);
    }
    if (!d.boxes.count(time)) d.set(time, kDefaultTimeBox);
    for (const auto& w : noises) {
        if (!d.boxes.count(w)) d.set(w, kDefaultNoiseBox);
    }
    return d;
}

namespace {

bool contains(const std::vector<std::string>& v, std::string_view s)
{
    return std::find(v.begin(), v.end(), s) != v.end();
}

void check_symbols(const Expr& e, const SdeSystem& sys, bool allow_noise, const std::string& where)
{
    for (const auto& s : free_symbols(e)) {
        if (contains(sys.noises, s)) {
            if (!allow_noise) throw ModelError(where + " depends on noise symbol '" + s + "'");
            continue;
        }
        if (s == sys.time || contains(sys.states, s) || contains(sys.parameters, s)) continue;
        throw ModelError(where + " references undeclared symbol '" + s + "'");
    }
    for (const auto& f : opaque_names(e)) {
        if (!sys.functions.count(f)) throw ModelError(where + " references undeclared function '" + f + "'");
    }
}

}  // namespace

void SdeSystem::validate() const
{
    if (states.empty()) throw ModelError("system declares no states");
    if (drift.size() != n()) {
        throw ModelError("dimension mismatch: " + std::to_string(drift.size()) + " drift entries for " +
                         std::to_string(n()) + " states");
    }
    if (diffusion.size() != n()) throw ModelError("dimension mismatch: diffusion rows != states");
    for (const auto& row : diffusion) {
        if (row.size() != m()) throw ModelError("dimension mismatch: diffusion columns != noises");
    }
    std::set<std::string, std::less<>> names;
    auto unique = [&](const std::string& s) {
        if (!names.insert(s).second) throw ModelError("symbol '" + s + "' declared twice");
    };
    for (const auto& s : states) unique(s);
    for (const auto& s : noises) unique(s);
    for (const auto& s : parameters) unique(s);
    unique(time);
    for (std::size_t i = 0; i < n(); ++i) {
        check_symbols(drift[i], *this, false, "drift." + std::to_string(i + 1));
        for (std::size_t k = 0; k < m(); ++k) {
            check_symbols(diffusion[i][k], *this, false,
                          "diffusion." + std::to_string(i + 1) + "." + std::to_string(k + 1));
        }
    }
    for (const auto& [name, iv] : domain.boxes) {
        if (iv.empty()) throw ModelError("empty domain for '" + name + "'");
    }
}

SdeSystem make_system(Interpretation interpretation, std::vector<std::string> states, std::vector<std::string> noises,
                      std::vector<Expr> drift, std::vector<std::vector<Expr>> diffusion)
{
    SdeSystem sys;
    sys.interpretation = interpretation;
    sys.states = std::move(states);
    sys.noises = std::move(noises);
    sys.drift = std::move(drift);
    sys.diffusion = std::move(diffusion);
    sys.domain = sys.sampling_domain();
    sys.validate();
    return sys;
}

std::string Classification::label() const
{
    return std::string(simple ? "simple" : "general") + " " + (deterministic ? "deterministic" : "random");
}

Classification classify(const VectorField& v, const SdeSystem& sys)
{
    Classification c;
    c.simple = v.tau.is_zero();
    c.deterministic = std::none_of(v.xi.begin(), v.xi.end(), [&](const Expr& x) {
        return std::any_of(sys.noises.begin(), sys.noises.end(), [&](const std::string& w) { return depends_on(x, w); });
    });
    return c;
}

void validate_field(const VectorField& v, const SdeSystem& sys)
{
    if (v.xi.size() != sys.n()) {
        throw ModelError("dimension mismatch: field has " + std::to_string(v.xi.size()) + " components for " +
                         std::to_string(sys.n()) + " states");
    }
    for (std::size_t i = 0; i < v.xi.size(); ++i) check_symbols(v.xi[i], sys, true, "xi." + std::to_string(i + 1));
    for (const auto& s : free_symbols(v.tau)) {
        if (s != sys.time && !contains(sys.parameters, s)) {
            throw ModelError("tau may depend on " + sys.time + " only, found '" + s + "'");
        }
    }
}

const NamedField* ModelFile::find_candidate(std::string_view name) const
{
    for (const auto& c : candidates) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const NamedMap* ModelFile::find_map(std::string_view name) const
{
    for (const auto& c : maps) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const FreeFunctionAnsatz* ModelFile::find_ansatz(std::string_view name) const
{
    for (const auto& c : ansatze) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const NamedCoordinates* ModelFile::find_coordinates(std::string_view name) const
{
    for (const auto& c : coordinates) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

}  // namespace sdesym
