#include "sdesym/lie.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "sdesym/error.hpp"

namespace sdesym {

VectorField commutator(const VectorField& a, const VectorField& b, const SdeSystem& sys)
{
    if (!a.tau.is_zero() || !b.tau.is_zero()) throw PreconditionError("commutator is defined here for simple fields");
    if (a.xi.size() != sys.n() || b.xi.size() != sys.n()) throw PreconditionError("field dimension mismatch");
    VectorField out;
    out.tau = Expr(0);
    for (std::size_t i = 0; i < sys.n(); ++i) {
        std::vector<Expr> terms;
        for (std::size_t j = 0; j < sys.n(); ++j) {
            terms.push_back(a.xi[j] * differentiate(b.xi[i], sys.states[j]));
            terms.push_back(-(b.xi[j] * differentiate(a.xi[i], sys.states[j])));
        }
        out.xi.push_back(expand(add(std::move(terms))));
    }
    return out;
}

std::size_t numeric_rank(const std::vector<double>& values, std::size_t rows, std::size_t cols, double threshold)
{
    if (rows == 0 || cols == 0) return 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * cols + c];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    const double cut = threshold * std::max(1.0, s(0));
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cut) ++rank;
    }
    return rank;
}

namespace {

std::vector<EvalPoint> sample_points(const std::vector<VectorField>& fields, const SdeSystem& sys,
                                     const LieOptions& options)
{
    std::set<std::string, std::less<>> symbols(sys.states.begin(), sys.states.end());
    symbols.insert(sys.time);
    symbols.insert(sys.noises.begin(), sys.noises.end());
    std::set<std::string, std::less<>> functions;
    for (const auto& f : fields) {
        for (const auto& x : f.xi) {
            for (const auto& s : free_symbols(x)) symbols.insert(s);
            for (const auto& g : opaque_names(x)) functions.insert(g);
        }
    }
    PointSampler sampler(sys.sampling_domain(), symbols, functions, options.seed);
    std::vector<EvalPoint> points;
    for (int i = 0; i < options.sample_points; ++i) {
        bool ok = false;
        for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
            EvalPoint p = sampler.next();
            ok = std::all_of(fields.begin(), fields.end(), [&](const VectorField& f) {
                return std::all_of(f.xi.begin(), f.xi.end(),
                                   [&](const Expr& x) { return evaluate_guarded(x, p).has_value(); });
            });
            if (ok) points.push_back(std::move(p));
        }
        if (!ok) throw SamplingError("no admissible point for the vector fields");
    }
    return points;
}

/// Column-major per field: rows are (point, component).
std::vector<std::vector<double>> field_columns(const std::vector<VectorField>& fields,
                                               const std::vector<EvalPoint>& points)
{
    std::vector<std::vector<double>> cols;
    for (const auto& f : fields) {
        std::vector<double> c;
        for (const auto& p : points) {
            for (const auto& x : f.xi) c.push_back(evaluate(x, p));
        }
        cols.push_back(std::move(c));
    }
    return cols;
}

std::size_t columns_rank(const std::vector<const std::vector<double>*>& cols, double threshold)
{
    if (cols.empty()) return 0;
    const std::size_t rows = cols.front()->size();
    std::vector<double> m(rows * cols.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) m[r * cols.size() + c] = (*cols[c])[r];
    }
    return numeric_rank(m, rows, cols.size(), threshold);
}

/// Indices of a maximal linearly independent subset, chosen greedily.
std::vector<std::size_t> greedy_basis(const std::vector<std::vector<double>>& cols, double threshold)
{
    std::vector<std::size_t> basis;
    std::vector<const std::vector<double>*> chosen;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        chosen.push_back(&cols[i]);
        if (columns_rank(chosen, threshold) > basis.size()) {
            basis.push_back(i);
        } else {
            chosen.pop_back();
        }
    }
    return basis;
}

std::vector<VectorField> pairwise_brackets(const std::vector<VectorField>& basis, const SdeSystem& sys)
{
    std::vector<VectorField> out;
    for (std::size_t a = 0; a < basis.size(); ++a) {
        for (std::size_t b = a + 1; b < basis.size(); ++b) out.push_back(commutator(basis[a], basis[b], sys));
    }
    return out;
}

}  // namespace

std::size_t span_dimension(const std::vector<VectorField>& fields, const SdeSystem& sys, const LieOptions& options)
{
    if (fields.empty()) return 0;
    auto points = sample_points(fields, sys, options);
    return greedy_basis(field_columns(fields, points), options.rank_threshold).size();
}

SolvabilityResult solvable_check(const std::vector<VectorField>& generators, const SdeSystem& sys,
                                 const LieOptions& options)
{
    for (const auto& g : generators) {
        if (!g.tau.is_zero()) throw PreconditionError("solvable_check is defined here for simple fields");
    }
    SolvabilityResult out;
    if (generators.empty()) {
        out.closed = true;
        out.solvable = true;
        out.derived_dimensions = {0};
        return out;
    }
    auto brackets = pairwise_brackets(generators, sys);
    std::vector<VectorField> all = generators;
    all.insert(all.end(), brackets.begin(), brackets.end());
    auto points = sample_points(all, sys, options);
    auto cols = field_columns(all, points);
    std::vector<std::vector<double>> gen_cols(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(generators.size()));
    const auto gen_basis = greedy_basis(gen_cols, options.rank_threshold);
    out.closed = greedy_basis(cols, options.rank_threshold).size() == gen_basis.size();

    std::vector<VectorField> current;
    for (auto i : gen_basis) current.push_back(generators[i]);
    out.derived_dimensions.push_back(current.size());
    while (!current.empty()) {
        auto next = pairwise_brackets(current, sys);
        std::vector<VectorField> nonzero;
        for (auto& f : next) {
            if (std::any_of(f.xi.begin(), f.xi.end(), [](const Expr& x) { return !x.is_zero(); })) {
                nonzero.push_back(std::move(f));
            }
        }
        std::vector<VectorField> basis;
        if (!nonzero.empty()) {
            auto pts = sample_points(nonzero, sys, options);
            for (auto i : greedy_basis(field_columns(nonzero, pts), options.rank_threshold)) basis.push_back(nonzero[i]);
        }
        out.derived_dimensions.push_back(basis.size());
        if (!basis.empty() && basis.size() >= current.size()) break;
        current = std::move(basis);
    }
    out.solvable = out.derived_dimensions.back() == 0;
    return out;
}

std::size_t orbit_rank(const std::vector<VectorField>& generators, const SdeSystem& sys, const EvalPoint& point,
                       double threshold)
{
    const std::size_t n = sys.n();
    const std::size_t r = generators.size();
    std::vector<double> m(n * r);
    for (std::size_t a = 0; a < r; ++a) {
        if (generators[a].xi.size() != n) throw PreconditionError("field dimension mismatch");
        for (std::size_t i = 0; i < n; ++i) m[i * r + a] = evaluate(generators[a].xi[i], point);
    }
    return numeric_rank(m, n, r, threshold);
}

std::vector<std::size_t> sampled_orbit_ranks(const std::vector<VectorField>& generators, const SdeSystem& sys,
                                             const LieOptions& options)
{
    std::vector<std::size_t> out;
    for (const auto& p : sample_points(generators, sys, options)) {
        out.push_back(orbit_rank(generators, sys, p, options.rank_threshold));
    }
    return out;
}

}  // namespace sdesym
