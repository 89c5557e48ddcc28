#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include "sdesym/calculus.hpp"
#include "sdesym/error.hpp"
#include "sdesym/kozlov.hpp"
#include "sdesym/oracles.hpp"
#include "sdesym/parse.hpp"
#include "sdesym/rng.hpp"
#include "sdesym/symmetry.hpp"

namespace sdesym::cli {

using nlohmann::json;

namespace {

json to_json(const std::vector<Expr>& v)
{
    json out = json::array();
    for (const auto& e : v) out.push_back(to_string(e));
    return out;
}

json to_json(const std::vector<std::vector<Expr>>& v)
{
    json out = json::array();
    for (const auto& row : v) out.push_back(to_json(row));
    return out;
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_top_level(std::string_view s)
{
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            auto item = trim(s.substr(start, i - start));
            if (!item.empty()) out.push_back(item);
            start = i + 1;
        } else if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        }
    }
    return out;
}

CheckOptions check_options(const Options& o)
{
    CheckOptions c;
    if (o.tol) c.equivalence.tolerance = *o.tol;
    if (o.numeric_samples) c.numeric_samples = *o.numeric_samples;
    if (o.seed) {
        c.equivalence.seed = splitmix64(*o.seed);
        c.numeric_seed = splitmix64(*o.seed ^ 0x5eedull);
    }
    return c;
}

std::vector<const NamedField*> selected_candidates(const ModelFile& model, const Options& o)
{
    std::vector<const NamedField*> out;
    if (o.candidates.empty()) {
        for (const auto& c : model.candidates) out.push_back(&c);
        return out;
    }
    for (const auto& name : o.candidates) {
        const auto* c = model.find_candidate(name);
        if (!c) throw InputError("unknown candidate '" + name + "'");
        out.push_back(c);
    }
    return out;
}

const NamedField& single_candidate(const ModelFile& model, const Options& o)
{
    auto all = selected_candidates(model, o);
    if (all.size() != 1) throw InputError("exactly one candidate is required (use --candidate)");
    return *all.front();
}

Expr resolve_phi(const ModelFile& model, const std::string& text)
{
    if (const auto* m = model.find_map(text)) return m->phi;
    try {
        return parse(text, model.system.parse_options());
    } catch (const ParseError& e) {
        throw InputError("--phi is neither a map name nor an expression: " + std::string(e.what()));
    }
}

FreeFunctionAnsatz resolve_beta(const ModelFile& model, const Options& o)
{
    if (!o.beta) return FreeFunctionAnsatz{"zero", Expr(0), Expr(0)};
    if (o.beta->find('=') == std::string::npos) {
        const auto* a = model.find_ansatz(trim(*o.beta));
        if (!a) throw InputError("unknown ansatz '" + *o.beta + "'");
        return *a;
    }
    FreeFunctionAnsatz a{"beta", Expr(0), Expr(0)};
    auto opts = model.system.parse_options();
    opts.opaque_functions.insert("b");
    for (const auto& item : split_top_level(*o.beta)) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("--beta entries must read key=value");
        auto key = trim(std::string_view(item).substr(0, eq));
        auto value = trim(std::string_view(item).substr(eq + 1));
        Expr e;
        try {
            e = parse(value, opts);
        } catch (const ParseError& err) {
            throw InputError("--beta " + key + ": " + err.what());
        }
        if (key == "b") a.b = e;
        else if (key == "c") a.c = e;
        else throw InputError("--beta accepts only b and c");
    }
    return a;
}

bool all_zero(const std::vector<Expr>& v, const Domain& d, const EquivalenceOptions& eq)
{
    return std::all_of(v.begin(), v.end(), [&](const Expr& e) { return equivalent_to_zero(e, d, eq); });
}

json symmetry_json(const SymmetryReport& r)
{
    json out;
    out["kind"] = std::string(to_string(r.kind));
    out["drift"] = to_json(r.drift_residuals);
    out["diffusion"] = to_json(r.diffusion_residuals);
    out["drift_zero"] = r.drift_zero;
    out["diffusion_zero"] = r.diffusion_zero;
    out["verified"] = r.verified();
    return out;
}

json compatibility_json(const CompatibilityData& c)
{
    return json{{"gamma", to_string(c.gamma)}, {"residual", to_string(c.residual)}, {"verdict", c.verdict}};
}

json field_json(const VectorField& v)
{
    return json{{"xi", to_json(v.xi)}, {"tau", to_string(v.tau)}};
}

json reduction_json(const ReductionResult& r, const SdeSystem& sys)
{
    json out;
    out["classification"] = std::string(to_string(r.classification));
    if (r.equations.empty()) {
        out["map"] = {{"Phi", to_string(r.map.Phi)},
                      {"inverse", r.map.inverse ? json(to_string(*r.map.inverse)) : json(nullptr)},
                      {"new_state", r.map.new_state}};
        const auto& t = r.transformed;
        json tr;
        tr["states"] = t.states;
        tr["drift"] = to_json(t.drift);
        tr["noise"] = to_json(t.noise);
        tr["state_free"] = t.state_free;
        tr["noise_free"] = t.noise_free;
        tr["ito_form"] = t.ito_form;
        json eqs = json::array();
        for (std::size_t a = 0; a < t.states.size(); ++a) {
            Expr drift = t.drift[a];
            std::vector<Expr> noise = t.noise[a];
            if (r.map.inverse && sys.n() == 1) {
                const Bindings b{{sys.state(), *r.map.inverse}};
                drift = simplify(substitute(drift, b));
                for (auto& s : noise) s = simplify(substitute(s, b));
            }
            eqs.push_back(format_equation(t.states[a], drift, noise, sys.noises));
        }
        tr["equations"] = eqs;
        out["transformed"] = tr;
    } else {
        out["orbit_dimension"] = r.orbit_dimension;
        out["derived_dimensions"] = r.derived_dimensions;
        json eqs = json::array();
        for (const auto& e : r.equations) {
            eqs.push_back({{"variable", e.variable},
                           {"coordinate", to_string(e.coordinate)},
                           {"drift", to_string(e.drift_new)},
                           {"noise", to_json(e.noise_new)},
                           {"reconstruction", e.reconstruction},
                           {"equation", format_equation(e.variable, e.drift_new, e.noise_new, sys.noises)}});
        }
        out["equations"] = eqs;
    }
    if (r.ansatz) out["ansatz"] = {{"b", to_string(r.ansatz->b)}, {"c", to_string(r.ansatz->c)}};
    json conds = json::array();
    for (const auto& c : r.conditions) {
        conds.push_back({{"name", c.name}, {"residuals", to_json(c.residuals)}, {"satisfied", c.satisfied}});
    }
    out["conditions"] = conds;
    return out;
}

ReductionResult reduce_scalar(const SdeSystem& sys, const VectorField& v, const ModelFile& model, const Options& o,
                              const CheckOptions& copts)
{
    if (classify(v, sys).deterministic) return reduce_deterministic(sys, v, copts);
    RandomReductionOptions ro;
    ro.check = copts;
    return reduce_random(sys, v, resolve_beta(model, o), ro);
}

json config_json(const SimulationConfig& c)
{
    return json{{"t0", c.t0},           {"t1", c.t1},
                {"h", c.h},             {"x0", c.x0},
                {"paths", c.paths},     {"seed", c.seed},
                {"scheme", std::string(to_string(c.scheme))}};
}

json scaling_json(const ScalingResult& s)
{
    return json{{"eps", s.eps},
                {"defects", s.defects},
                {"exponent", s.exponent ? json(*s.exponent) : json(nullptr)},
                {"below_floor", s.below_floor},
                {"points", s.points}};
}

}  // namespace

std::string fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string format_equation(const std::string& var, const Expr& drift, const std::vector<Expr>& noise,
                            const std::vector<std::string>& noises)
{
    auto term = [](const Expr& c, const std::string& d) {
        if (c.is_one()) return d;
        std::string s = to_string(c);
        if (c.kind() == Kind::Add) s = "(" + s + ")";
        return s + " " + d;
    };
    std::vector<std::string> parts;
    if (!drift.is_zero()) parts.push_back(term(drift, "dt"));
    for (std::size_t k = 0; k < noise.size(); ++k) {
        if (!noise[k].is_zero()) parts.push_back(term(noise[k], "d" + (k < noises.size() ? noises[k] : "w")));
    }
    std::string out = "d" + var + " =";
    if (parts.empty()) return out + " 0";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i == 0 ? " " : " + ") + parts[i];
    return out;
}

SimulationConfig resolve_config(const ModelFile& model, const Options& o)
{
    SimulationConfig cfg;
    try {
        cfg = config_from(model);
        if (o.t0) cfg.t0 = *o.t0;
        if (o.t1) cfg.t1 = *o.t1;
        if (o.h) cfg.h = *o.h;
        if (!o.x0.empty()) cfg.x0 = o.x0;
        if (o.paths) cfg.paths = *o.paths;
        if (o.seed) cfg.seed = *o.seed;
        if (o.scheme) cfg.scheme = parse_scheme(*o.scheme);
        cfg.validate();
    } catch (const PreconditionError& e) {
        throw InputError(e.what());
    }
    if (cfg.x0.size() != model.system.n()) throw InputError("--x0 needs one value per state");
    return cfg;
}

Outcome cmd_check(const ModelFile& model, const Options& o)
{
    Outcome res;
    const auto& sys = model.system;
    const auto copts = check_options(o);
    const auto domain = sys.sampling_domain();
    json candidates = json::array();
    json verdicts = json::object();
    json numeric = json::object();
    bool all = true;
    for (const auto* nf : selected_candidates(model, o)) {
        const auto& v = nf->field;
        json one;
        json num;
        one["name"] = nf->name;
        one["field"] = field_json(v);
        const auto cls = classify(v, sys);
        one["classification"] = cls.label();
        bool verified = false;
        if (!v.tau.is_zero()) {
            auto unal = unal_tau_condition(sys, v.tau);
            one["unal"] = {{"residuals", to_json(unal)}, {"satisfied", all_zero(unal, domain, copts.equivalence)}};
            one["note"] = "determining equations with tau != 0 are not evaluated";
        } else {
            const auto rep = check_symmetry(sys, v, copts);
            one["residuals"] = symmetry_json(rep);
            num["max_residual"] = rep.max_numeric_residual;
            verified = rep.verified();
            if (cls.deterministic) {
                const auto cross = sys.interpretation == Interpretation::Ito
                                       ? residual_detstra(sys, v, copts)
                                       : residual_ito(stratonovich_to_ito(sys), v, copts);
                one["cross_check"] = {{"kind", std::string(to_string(cross.kind))},
                                      {"verified", cross.verified()},
                                      {"agrees", cross.verified() == rep.verified()}};
            }
            if (sys.interpretation == Interpretation::Ito) {
                const auto inf = infinitesimal_symbolic_residual(sys, v);
                bool agrees = true;
                for (std::size_t i = 0; i < sys.n(); ++i) {
                    agrees = agrees && equivalent(inf.drift[i], rep.drift_residuals[i], domain, copts.equivalence);
                    for (std::size_t k = 0; k < sys.m(); ++k) {
                        agrees = agrees &&
                                 equivalent(inf.noise[i][k], rep.diffusion_residuals[i][k], domain, copts.equivalence);
                    }
                }
                one["infinitesimal_agrees"] = agrees;
            }
            if (!cls.deterministic && sys.scalar() && sys.interpretation == Interpretation::Ito) {
                try {
                    const auto c = bcomp_check(sys, v.xi.front(), copts);
                    one["bcomp"] = compatibility_json(c);
                    num["bcomp_max_residual"] = c.max_numeric_residual;
                } catch (const PreconditionError& e) {
                    one["bcomp"] = {{"error", e.what()}};
                }
            }
        }
        one["verified"] = verified;
        verdicts[nf->name] = verified;
        numeric[nf->name] = num;
        all = all && verified;
        candidates.push_back(one);
    }
    res.report["candidates"] = candidates;
    res.report["verdicts"] = verdicts;
    res.report["numeric"] = numeric;
    res.exit_code = all ? Success : VerificationFailure;
    return res;
}

Outcome cmd_convert(const ModelFile& model, const Options& o)
{
    if (!o.to) throw InputError("convert needs --to ito|stratonovich");
    Interpretation target;
    if (*o.to == "ito") target = Interpretation::Ito;
    else if (*o.to == "stratonovich" || *o.to == "strat") target = Interpretation::Stratonovich;
    else throw InputError("--to must be ito or stratonovich");

    Outcome res;
    const auto& sys = model.system;
    ModelFile converted = model;
    if (sys.interpretation == target) {
        res.report["notes"] = json::array({"model already uses the target interpretation"});
    } else {
        converted.system = target == Interpretation::Ito ? stratonovich_to_ito(sys) : ito_to_stratonovich(sys);
    }
    const auto back = converted.system.interpretation == Interpretation::Ito ? ito_to_stratonovich(converted.system)
                                                                            : stratonovich_to_ito(converted.system);
    const auto again = back.interpretation == Interpretation::Ito ? ito_to_stratonovich(back) : stratonovich_to_ito(back);
    const auto eq = check_options(o).equivalence;
    const auto domain = sys.sampling_domain();
    bool round_trip = true;
    for (std::size_t i = 0; i < sys.n(); ++i) {
        round_trip = round_trip && equivalent(again.drift[i], converted.system.drift[i], domain, eq);
    }
    json sysj;
    sysj["interpretation"] = std::string(to_string(converted.system.interpretation));
    sysj["drift"] = to_json(converted.system.drift);
    sysj["diffusion"] = to_json(converted.system.diffusion);
    sysj["correction"] = to_json(drift_correction(sys));
    res.report["system"] = sysj;
    res.report["verdicts"] = {{"round_trip", round_trip}};
    const std::string text = print_model(converted);
    if (o.out) {
        std::ofstream f(*o.out, std::ios::binary);
        if (!f) throw InputError("cannot write '" + *o.out + "'");
        f << text;
        res.report["output"] = *o.out;
    } else {
        res.report["model_text"] = text;
    }
    res.exit_code = round_trip ? Success : VerificationFailure;
    return res;
}

Outcome cmd_reduce(const ModelFile& model, const Options& o)
{
    Outcome res;
    const auto& sys = model.system;
    const auto copts = check_options(o);
    if (o.phi) {
        const Expr Phi = resolve_phi(model, *o.phi);
        const auto r = reduce_with_map(sys, Phi, copts);
        const auto nec = necessity_roundtrip(sys, Phi, copts);
        res.report["reduction"] = reduction_json(r, sys);
        json necj;
        necj["field"] = field_json(nec.field);
        necj["symmetry"] = symmetry_json(nec.symmetry);
        necj["bcomp"] = compatibility_json(nec.compatibility);
        necj["passed"] = nec.passed();
        json verdicts{{"necessity", nec.passed()}};
        if (!o.candidates.empty()) {
            const auto& c = single_candidate(model, o);
            const bool same = c.field.xi.size() == 1 &&
                              equivalent(c.field.xi.front(), nec.field.xi.front(), sys.sampling_domain(),
                                         copts.equivalence);
            necj["matches_candidate"] = same;
            verdicts["matches_candidate"] = same;
        }
        res.report["necessity"] = necj;
        res.report["numeric"] = {{"max_residual", nec.symmetry.max_numeric_residual},
                                 {"bcomp_max_residual", nec.compatibility.max_numeric_residual}};
        res.report["verdicts"] = verdicts;
        bool ok = true;
        for (const auto& [k, v] : verdicts.items()) ok = ok && v.get<bool>();
        res.exit_code = ok ? Success : VerificationFailure;
        return res;
    }
    if (sys.n() > 1) {
        std::vector<VectorField> gens;
        for (const auto* c : selected_candidates(model, o)) gens.push_back(c->field);
        std::optional<NamedCoordinates> coords;
        if (o.coords) {
            const auto* c = model.find_coordinates(*o.coords);
            if (!c) throw InputError("unknown coordinates '" + *o.coords + "'");
            coords = *c;
        }
        SystemReductionOptions so;
        so.check = copts;
        const auto r = reduce_system_solvable(sys, gens, coords, so);
        res.report["reduction"] = reduction_json(r, sys);
        res.report["verdicts"] = {{"reduced", true}};
        return res;
    }
    const auto& c = single_candidate(model, o);
    res.report["candidate"] = c.name;
    const auto r = reduce_scalar(sys, c.field, model, o, copts);
    res.report["reduction"] = reduction_json(r, sys);
    res.report["verdicts"] = {{"reduced", true}, {"ito_form", r.transformed.ito_form}};
    return res;
}

Outcome cmd_simulate(const ModelFile& model, const Options& o)
{
    Outcome res;
    const auto cfg = resolve_config(model, o);
    const auto ps = simulate(model.system, cfg);
    if (o.out) {
        std::ofstream f(*o.out, std::ios::binary);
        if (!f) throw InputError("cannot write '" + *o.out + "'");
        write_csv(f, ps);
        res.report["output"] = *o.out;
    } else {
        res.report["notes"] = json::array({"no --out given; paths not written"});
    }
    const auto inc = increment_sanity(ps);
    std::vector<double> mean(ps.n, 0.0), var(ps.n, 0.0);
    std::size_t kept = 0;
    for (std::size_t p = 0; p < ps.paths(); ++p) {
        if (ps.excluded[p]) continue;
        ++kept;
        for (std::size_t i = 0; i < ps.n; ++i) mean[i] += ps.x(p, ps.steps(), i);
    }
    for (auto& v : mean) v = kept ? v / static_cast<double>(kept) : 0.0;
    for (std::size_t p = 0; p < ps.paths(); ++p) {
        if (ps.excluded[p]) continue;
        for (std::size_t i = 0; i < ps.n; ++i) {
            const double d = ps.x(p, ps.steps(), i) - mean[i];
            var[i] += d * d;
        }
    }
    for (auto& v : var) v = kept > 1 ? v / static_cast<double>(kept - 1) : 0.0;
    res.report["config"] = config_json(cfg);
    res.report["numeric"] = {{"excluded", ps.excluded_count},
                             {"final_mean", mean},
                             {"final_variance", var},
                             {"increments",
                              {{"mean", inc.mean},
                               {"variance", inc.variance},
                               {"mean_ok", inc.mean_ok},
                               {"variance_ok", inc.variance_ok},
                               {"gated", inc.gated}}}};
    res.report["verdicts"] = {{"increments", inc.ok()}};
    res.exit_code = inc.ok() ? Success : VerificationFailure;
    return res;
}

Outcome cmd_verify(const ModelFile& model, const Options& o)
{
    Outcome res;
    const auto copts = check_options(o);
    const auto& c = single_candidate(model, o);
    res.report["candidate"] = c.name;
    auto cfg = resolve_config(model, o);
    SdeSystem sys = model.system;
    json notes = json::array();
    if (sys.interpretation == Interpretation::Stratonovich) {
        sys = stratonovich_to_ito(sys);
        cfg.scheme = Scheme::EulerMaruyama;
        notes.push_back("Stratonovich model verified through its Ito form");
    }
    const auto rep = check_symmetry(sys, c.field, copts);
    json numeric;
    json verdicts;
    numeric["max_residual"] = rep.max_numeric_residual;
    verdicts["symmetry"] = rep.verified();
    std::optional<ReductionResult> reduced;
    if (sys.n() == 1) {
        try {
            reduced = o.phi ? reduce_with_map(sys, resolve_phi(model, *o.phi), copts)
                            : reduce_scalar(sys, c.field, model, o, copts);
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            res.report["reduction"] = {{"error", e.what()}};
            verdicts["reduction"] = false;
        }
    } else {
        notes.push_back("pathwise and order checks need a scalar system");
    }
    if (reduced) {
        const auto& r = *reduced;
        res.report["reduction"] = reduction_json(r, sys);
        const auto pw = pathwise_check(sys, r.transformed, r.map.Phi, cfg);
        const auto ord = strong_order_estimate(sys, r.transformed, r.map.Phi, cfg);
        numeric["pathwise"] = {{"median_sup_error", pw.median_sup_error},
                               {"retained", pw.sup_errors.size()},
                               {"excluded", pw.excluded},
                               {"bound", o.bound}};
        numeric["order"] = {{"error_coarse", ord.error_coarse},
                            {"error_fine", ord.error_fine},
                            {"order", ord.order},
                            {"skipped", ord.skipped}};
        verdicts["pathwise"] = !pw.sup_errors.empty() && pw.median_sup_error <= o.bound;
        verdicts["order"] = ord.skipped || (ord.order >= 0.4 && ord.order <= 1.2);
    }
    const auto sc = epsilon_symmetry_scaling(sys, c.field, cfg);
    numeric["scaling"] = scaling_json(sc);
    verdicts["scaling"] = sc.symmetric();
    res.report["config"] = config_json(cfg);
    res.report["numeric"] = numeric;
    res.report["verdicts"] = verdicts;
    if (!notes.empty()) res.report["notes"] = notes;
    bool ok = true;
    for (const auto& [k, v] : verdicts.items()) ok = ok && v.get<bool>();
    res.exit_code = ok ? Success : VerificationFailure;
    return res;
}

}  // namespace sdesym::cli
