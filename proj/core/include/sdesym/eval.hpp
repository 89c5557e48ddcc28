#ifndef SDESYM_EVAL_HPP
#define SDESYM_EVAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdesym/expr.hpp"

namespace sdesym {

/// Polynomial stand-in for an opaque function, sum_i c_i z^i. Derivative
/// orders evaluate the analytic derivatives of the polynomial.
class TestFunction {
public:
    TestFunction() = default;
    explicit TestFunction(std::vector<double> coefficients) : c_(std::move(coefficients)) {}

    /// Degree-`degree` polynomial with coefficients uniform in [-1, 1].
    static TestFunction random(std::mt19937_64& rng, int degree = 4);
    static TestFunction identity() { return TestFunction({0.0, 1.0}); }

    double operator()(double z, int order = 0) const;
    const std::vector<double>& coefficients() const noexcept { return c_; }

private:
    std::vector<double> c_;
};

struct EvalPoint {
    std::unordered_map<std::string, double> values;
    std::map<std::string, TestFunction, std::less<>> functions;
};

/// Guard thresholds: a point is rejected when a reciprocal base or a log
/// argument comes closer to zero than these, or anything turns non-finite.
struct EvalGuard {
    double min_denominator = 1e-3;
    double min_log_argument = 1e-3;
};

/// Throws sdesym::Error when a symbol or opaque function is unbound.
double evaluate(const Expr& e, const EvalPoint& point);
std::optional<double> evaluate_guarded(const Expr& e, const EvalPoint& point, const EvalGuard& guard = {});

/// Uniform double in [0, 1) built from the top 53 bits (portable across
/// standard libraries, unlike std::uniform_real_distribution).
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Flat postfix program for repeated evaluation with symbols bound to slots.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const std::vector<std::string>& slots,
                 const std::map<std::string, TestFunction, std::less<>>& functions = {});

    double operator()(std::span<const double> slots) const;
    bool constant() const noexcept { return constant_; }

private:
    enum class Op : std::uint8_t { Const, Slot, Add, Mul, Pow, PowInt, Exp, Log, Sin, Cos, Opaque };
    struct Instr {
        Op op;
        std::uint32_t n = 0;   // operand count, slot index, function index or integer power
        int order = 0;
        double value = 0.0;
    };
    void emit(const Expr& e, const std::vector<std::string>& slots,
              const std::map<std::string, TestFunction, std::less<>>& functions);

    std::vector<Instr> code_;
    std::vector<TestFunction> functions_;
    std::map<std::string, std::uint32_t, std::less<>> function_index_;
    bool constant_ = true;
    std::size_t max_stack_ = 0;
};

}  // namespace sdesym

#endif  // SDESYM_EVAL_HPP
