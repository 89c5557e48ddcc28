#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "sdesym/error.hpp"
#include "sdesym/model.hpp"

namespace sdesym {
namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// Splits on commas at parenthesis depth zero.
std::vector<std::string> split_list(std::string_view s)
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

struct Entry {
    std::string key;
    std::string value;
    std::size_t line;
};

struct Section {
    std::string kind;
    std::string name;
    std::size_t line;
    std::vector<Entry> entries;
};

std::vector<Section> split_sections(std::string_view text)
{
    std::vector<Section> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        auto hash = raw.find('#');
        auto line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            auto inner = trim(std::string_view(line).substr(1, line.size() - 2));
            auto sp = inner.find_first_of(" \t");
            Section s;
            s.kind = sp == std::string::npos ? inner : inner.substr(0, sp);
            s.name = sp == std::string::npos ? std::string() : trim(std::string_view(inner).substr(sp));
            s.line = line_no;
            out.push_back(std::move(s));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        if (out.empty()) throw ParseError("entry outside of a section", line_no);
        Entry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
        if (e.key.empty()) throw ParseError("empty key", line_no);
        out.back().entries.push_back(std::move(e));
    }
    return out;
}

double to_double(const std::string& s, std::size_t line)
{
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("expected a number, got '" + s + "'", line);
    return v;
}

std::uint64_t to_uint(const std::string& s, std::size_t line)
{
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw ParseError("expected a non-negative integer, got '" + s + "'", line);
    }
    return v;
}

Interval to_interval(const std::string& s, std::size_t line)
{
    auto parts = split_list(s);
    if (parts.size() != 2) throw ParseError("expected 'lo, hi'", line);
    Interval iv{to_double(parts[0], line), to_double(parts[1], line)};
    if (iv.empty()) throw ModelError("empty interval on line " + std::to_string(line));
    return iv;
}

Expr to_expr(const std::string& s, const ParseOptions& opts, std::size_t line)
{
    try {
        return parse(s, opts);
    } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
    }
}

/// Parses "prefix.i" or "prefix.i.k" with 1-based indices.
std::vector<std::size_t> indices(const std::string& key, std::string_view prefix, std::size_t count, std::size_t line)
{
    std::vector<std::size_t> out;
    std::string_view rest = std::string_view(key).substr(prefix.size());
    while (!rest.empty()) {
        if (rest.front() != '.') throw ParseError("malformed key '" + key + "'", line);
        rest.remove_prefix(1);
        auto dot = rest.find('.');
        auto part = std::string(rest.substr(0, dot));
        auto v = to_uint(part, line);
        if (v == 0) throw ParseError("indices are 1-based in '" + key + "'", line);
        out.push_back(static_cast<std::size_t>(v - 1));
        rest = dot == std::string_view::npos ? std::string_view() : rest.substr(dot);
    }
    if (out.size() != count) throw ParseError("malformed key '" + key + "'", line);
    return out;
}

bool has_prefix(const std::string& key, std::string_view p)
{
    return key.size() > p.size() && key.compare(0, p.size(), p) == 0 && key[p.size()] == '.';
}

[[noreturn]] void unknown_key(const Entry& e, const Section& s)
{
    throw ParseError("unknown key '" + e.key + "' in [" + s.kind + "]", e.line);
}

void read_system(const Section& sec, ModelFile& mf)
{
    SdeSystem& sys = mf.system;
    // Declarations first so expressions can be parsed regardless of order.
    for (const auto& e : sec.entries) {
        if (e.key == "interpretation") {
            if (e.value == "ito") sys.interpretation = Interpretation::Ito;
            else if (e.value == "stratonovich") sys.interpretation = Interpretation::Stratonovich;
            else throw ParseError("interpretation must be 'ito' or 'stratonovich'", e.line);
        } else if (e.key == "states") {
            sys.states = split_list(e.value);
        } else if (e.key == "noises") {
            sys.noises = split_list(e.value);
        } else if (e.key == "parameters") {
            sys.parameters = split_list(e.value);
        } else if (e.key == "functions") {
            for (auto& f : split_list(e.value)) sys.functions.insert(f);
        }
    }
    if (sys.states.empty()) throw ModelError("[system] must declare states");
    const std::size_t n = sys.n();
    const std::size_t m = sys.m();
    sys.drift.assign(n, Expr(0));
    sys.diffusion.assign(n, std::vector<Expr>(m, Expr(0)));
    std::vector<bool> seen_drift(n, false);
    const auto opts = sys.parse_options();
    for (const auto& e : sec.entries) {
        if (e.key == "interpretation" || e.key == "states" || e.key == "noises" || e.key == "parameters" ||
            e.key == "functions") {
            continue;
        }
        if (e.key == "note") {
            mf.notes.push_back(e.value);
        } else if (has_prefix(e.key, "drift")) {
            auto idx = indices(e.key, "drift", 1, e.line);
            if (idx[0] >= n) throw ModelError("dimension mismatch: " + e.key + " with " + std::to_string(n) + " states");
            sys.drift[idx[0]] = to_expr(e.value, opts, e.line);
            seen_drift[idx[0]] = true;
        } else if (has_prefix(e.key, "diffusion")) {
            auto idx = indices(e.key, "diffusion", 2, e.line);
            if (idx[0] >= n || idx[1] >= m) {
                throw ModelError("dimension mismatch: " + e.key + " for a " + std::to_string(n) + "x" +
                                 std::to_string(m) + " diffusion matrix");
            }
            sys.diffusion[idx[0]][idx[1]] = to_expr(e.value, opts, e.line);
        } else if (has_prefix(e.key, "domain")) {
            sys.domain.set(e.key.substr(7), to_interval(e.value, e.line));
        } else {
            unknown_key(e, sec);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen_drift[i]) throw ModelError("missing drift." + std::to_string(i + 1));
    }
    sys.domain = sys.sampling_domain();
    sys.validate();
}

void read_candidate(const Section& sec, ModelFile& mf)
{
    const auto& sys = mf.system;
    NamedField nf;
    nf.name = sec.name;
    nf.field.xi.assign(sys.n(), Expr(0));
    nf.field.tau = Expr(0);
    const auto opts = sys.parse_options();
    for (const auto& e : sec.entries) {
        if (e.key == "tau") {
            nf.field.tau = to_expr(e.value, opts, e.line);
        } else if (has_prefix(e.key, "xi")) {
            auto idx = indices(e.key, "xi", 1, e.line);
            if (idx[0] >= sys.n()) throw ModelError("dimension mismatch: " + e.key + " in candidate " + sec.name);
            nf.field.xi[idx[0]] = to_expr(e.value, opts, e.line);
        } else {
            unknown_key(e, sec);
        }
    }
    validate_field(nf.field, sys);
    mf.candidates.push_back(std::move(nf));
}

void read_map(const Section& sec, ModelFile& mf)
{
    NamedMap nm;
    nm.name = sec.name;
    bool seen = false;
    for (const auto& e : sec.entries) {
        if (e.key != "phi") unknown_key(e, sec);
        nm.phi = to_expr(e.value, mf.system.parse_options(), e.line);
        seen = true;
    }
    if (!seen) throw ModelError("[map " + sec.name + "] needs phi");
    mf.maps.push_back(std::move(nm));
}

void read_ansatz(const Section& sec, ModelFile& mf)
{
    FreeFunctionAnsatz a;
    a.name = sec.name;
    a.b = Expr(0);
    a.c = Expr(0);
    auto opts = mf.system.parse_options();
    opts.opaque_functions.insert("b");
    for (const auto& e : sec.entries) {
        if (e.key == "b") a.b = to_expr(e.value, opts, e.line);
        else if (e.key == "c") a.c = to_expr(e.value, opts, e.line);
        else unknown_key(e, sec);
    }
    mf.ansatze.push_back(std::move(a));
}

void read_coords(const Section& sec, ModelFile& mf)
{
    const std::size_t n = mf.system.n();
    NamedCoordinates nc;
    nc.name = sec.name;
    std::vector<std::optional<Expr>> z(n), inv(n);
    const auto opts = mf.system.parse_options();
    for (const auto& e : sec.entries) {
        bool is_inverse = has_prefix(e.key, "inverse");
        if (!is_inverse && !has_prefix(e.key, "coord")) unknown_key(e, sec);
        auto idx = indices(e.key, is_inverse ? "inverse" : "coord", 1, e.line);
        if (idx[0] >= n) throw ModelError("dimension mismatch: " + e.key + " in coords " + sec.name);
        (is_inverse ? inv : z)[idx[0]] = to_expr(e.value, opts, e.line);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!z[i]) throw ModelError("coords " + sec.name + " is missing coord." + std::to_string(i + 1));
        nc.coords.push_back(*z[i]);
    }
    bool any_inverse = std::any_of(inv.begin(), inv.end(), [](const auto& v) { return v.has_value(); });
    if (any_inverse) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!inv[i]) throw ModelError("coords " + sec.name + " is missing inverse." + std::to_string(i + 1));
            nc.inverse.push_back(*inv[i]);
        }
    }
    mf.coordinates.push_back(std::move(nc));
}

void read_simulate(const Section& sec, ModelFile& mf)
{
    auto& s = mf.simulation;
    for (const auto& e : sec.entries) {
        if (e.key == "t0") s.t0 = to_double(e.value, e.line);
        else if (e.key == "t1") s.t1 = to_double(e.value, e.line);
        else if (e.key == "h") s.h = to_double(e.value, e.line);
        else if (e.key == "paths") s.paths = static_cast<std::size_t>(to_uint(e.value, e.line));
        else if (e.key == "seed") s.seed = to_uint(e.value, e.line);
        else if (e.key == "scheme") s.scheme = e.value;
        else if (e.key == "x0") {
            std::vector<double> x0;
            for (const auto& p : split_list(e.value)) x0.push_back(to_double(p, e.line));
            if (x0.size() != mf.system.n()) throw ModelError("dimension mismatch: x0 has wrong length");
            s.x0 = std::move(x0);
        } else if (has_prefix(e.key, "bound")) {
            s.bounds[e.key.substr(6)] = to_interval(e.value, e.line);
        } else {
            unknown_key(e, sec);
        }
    }
}

std::string join(const std::vector<std::string>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
}

std::string num(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

ModelFile load_model(std::string_view text)
{
    auto sections = split_sections(text);
    auto sys_it = std::find_if(sections.begin(), sections.end(), [](const Section& s) { return s.kind == "system"; });
    if (sys_it == sections.end()) throw ModelError("model has no [system] section");
    if (std::count_if(sections.begin(), sections.end(), [](const Section& s) { return s.kind == "system"; }) > 1) {
        throw ModelError("model has more than one [system] section");
    }
    ModelFile mf;
    read_system(*sys_it, mf);
    std::set<std::string, std::less<>> names;
    for (const auto& sec : sections) {
        if (sec.kind == "system") continue;
        if (sec.kind != "simulate") {
            if (sec.name.empty()) throw ParseError("[" + sec.kind + "] needs a name", sec.line);
            if (!names.insert(sec.kind + " " + sec.name).second) {
                throw ModelError("duplicate section [" + sec.kind + " " + sec.name + "]");
            }
        }
        if (sec.kind == "candidate") read_candidate(sec, mf);
        else if (sec.kind == "map") read_map(sec, mf);
        else if (sec.kind == "ansatz") read_ansatz(sec, mf);
        else if (sec.kind == "coords") read_coords(sec, mf);
        else if (sec.kind == "simulate") read_simulate(sec, mf);
        else throw ParseError("unknown section [" + sec.kind + "]", sec.line);
    }
    return mf;
}

ModelFile load_model_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str());
}

std::string print_model(const ModelFile& mf)
{
    const auto& sys = mf.system;
    std::ostringstream os;
    os << "[system]\n";
    os << "interpretation = " << to_string(sys.interpretation) << "\n";
    os << "states = " << join(sys.states) << "\n";
    if (!sys.noises.empty()) os << "noises = " << join(sys.noises) << "\n";
    if (!sys.parameters.empty()) os << "parameters = " << join(sys.parameters) << "\n";
    if (!sys.functions.empty()) {
        os << "functions = " << join(std::vector<std::string>(sys.functions.begin(), sys.functions.end())) << "\n";
    }
    for (std::size_t i = 0; i < sys.n(); ++i) os << "drift." << i + 1 << " = " << sys.drift[i] << "\n";
    for (std::size_t i = 0; i < sys.n(); ++i) {
        for (std::size_t k = 0; k < sys.m(); ++k) {
            os << "diffusion." << i + 1 << "." << k + 1 << " = " << sys.diffusion[i][k] << "\n";
        }
    }
    for (const auto& [name, iv] : sys.domain.boxes) {
        os << "domain." << name << " = " << num(iv.lo) << ", " << num(iv.hi) << "\n";
    }
    for (const auto& note : mf.notes) os << "note = " << note << "\n";
    for (const auto& c : mf.candidates) {
        os << "\n[candidate " << c.name << "]\n";
        for (std::size_t i = 0; i < c.field.xi.size(); ++i) os << "xi." << i + 1 << " = " << c.field.xi[i] << "\n";
        if (!c.field.tau.is_zero()) os << "tau = " << c.field.tau << "\n";
    }
    for (const auto& m : mf.maps) os << "\n[map " << m.name << "]\nphi = " << m.phi << "\n";
    for (const auto& a : mf.ansatze) os << "\n[ansatz " << a.name << "]\nb = " << a.b << "\nc = " << a.c << "\n";
    for (const auto& c : mf.coordinates) {
        os << "\n[coords " << c.name << "]\n";
        for (std::size_t i = 0; i < c.coords.size(); ++i) os << "coord." << i + 1 << " = " << c.coords[i] << "\n";
        for (std::size_t i = 0; i < c.inverse.size(); ++i) os << "inverse." << i + 1 << " = " << c.inverse[i] << "\n";
    }
    const auto& s = mf.simulation;
    if (s.t0 || s.t1 || s.h || s.x0 || s.paths || s.seed || s.scheme || !s.bounds.empty()) {
        os << "\n[simulate]\n";
        if (s.t0) os << "t0 = " << num(*s.t0) << "\n";
        if (s.t1) os << "t1 = " << num(*s.t1) << "\n";
        if (s.h) os << "h = " << num(*s.h) << "\n";
        if (s.x0) {
            os << "x0 = ";
            for (std::size_t i = 0; i < s.x0->size(); ++i) os << (i ? ", " : "") << num((*s.x0)[i]);
            os << "\n";
        }
        if (s.paths) os << "paths = " << *s.paths << "\n";
        if (s.seed) os << "seed = " << *s.seed << "\n";
        if (s.scheme) os << "scheme = " << *s.scheme << "\n";
        for (const auto& [name, iv] : s.bounds) os << "bound." << name << " = " << num(iv.lo) << ", " << num(iv.hi) << "\n";
    }
    return os.str();
}

}  // namespace sdesym
