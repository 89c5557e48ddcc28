#include "sdesym/eval.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "sdesym/error.hpp"

namespace sdesym {

TestFunction TestFunction::random(std::mt19937_64& rng, int degree)
{
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    for (auto& v : c) v = 2.0 * uniform01(rng) - 1.0;
    return TestFunction(std::move(c));
}

double TestFunction::operator()(double z, int order) const
{
    // Horner on the order-th derivative coefficients i!/(i-order)! c_i.
    double acc = 0.0;
    const int n = static_cast<int>(c_.size());
    for (int i = n - 1; i >= order; --i) {
        double f = 1.0;
        for (int k = 0; k < order; ++k) f *= static_cast<double>(i - k);
        acc = acc * z + f * c_[static_cast<std::size_t>(i)];
    }
    return acc;
}

namespace {

struct Evaluator {
    const EvalPoint& point;
    const EvalGuard* guard;
    bool rejected = false;

    double reject()
    {
        rejected = true;
        return std::numeric_limits<double>::quiet_NaN();
    }

    double operator()(const Expr& e)
    {
        switch (e.kind()) {
        case Kind::Number: return e.number().value();
        case Kind::Symbol: {
            auto it = point.values.find(e.name());
            if (it == point.values.end()) throw Error("unbound symbol '" + e.name() + "'");
            return it->second;
        }
        case Kind::Add: {
            double s = 0.0;
            for (const auto& t : e.args()) s += (*this)(t);
            return s;
        }
        case Kind::Mul: {
            double p = 1.0;
            for (const auto& f : e.args()) p *= (*this)(f);
            return p;
        }
        case Kind::Pow: {
            double b = (*this)(e.base());
            double x = (*this)(e.exponent());
            if (guard && x < 0.0 && std::fabs(b) < guard->min_denominator) return reject();
            if (e.exponent().is_number() && e.exponent().number().is_integer()) {
                return std::pow(b, static_cast<int>(e.exponent().number().rational().num()));
            }
            return std::pow(b, x);
        }
        case Kind::Function: {
            double u = (*this)(e.arg());
            switch (e.primitive()) {
            case Primitive::Exp: return std::exp(u);
            case Primitive::Log:
                if (guard && u < guard->min_log_argument) return reject();
                return std::log(u);
            case Primitive::Sin: return std::sin(u);
            case Primitive::Cos: return std::cos(u);
            }
            break;
        }
        case Kind::Opaque: {
            auto it = point.functions.find(e.name());
            if (it == point.functions.end()) throw Error("unbound opaque function '" + e.name() + "'");
            return it->second((*this)(e.arg()), e.order());
        }
        }
        return 0.0;
    }
};

}  // namespace

double evaluate(const Expr& e, const EvalPoint& point)
{
    Evaluator ev{point, nullptr};
    return ev(e);
}

std::optional<double> evaluate_guarded(const Expr& e, const EvalPoint& point, const EvalGuard& guard)
{
    Evaluator ev{point, &guard};
    double v = ev(e);
    if (ev.rejected || !std::isfinite(v)) return std::nullopt;
    return v;
}

//---------------------------------------------------------------------------//
// CompiledExpr
//---------------------------------------------------------------------------//

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& slots,
                           const std::map<std::string, TestFunction, std::less<>>& functions)
{
    emit(e, slots, functions);
    // Simulate stack depth.
    std::size_t depth = 0;
    for (const auto& in : code_) {
        switch (in.op) {
        case Op::Const:
        case Op::Slot: ++depth; break;
        case Op::Add:
        case Op::Mul: depth -= in.n - 1; break;
        case Op::Pow: --depth; break;
        default: break;
        }
        max_stack_ = std::max(max_stack_, depth);
    }
}

void CompiledExpr::emit(const Expr& e, const std::vector<std::string>& slots,
                        const std::map<std::string, TestFunction, std::less<>>& functions)
{
    switch (e.kind()) {
    case Kind::Number: code_.push_back({Op::Const, 0, 0, e.number().value()}); return;
    case Kind::Symbol: {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i] == e.name()) {
                code_.push_back({Op::Slot, static_cast<std::uint32_t>(i)});
                constant_ = false;
                return;
            }
        }
        throw Error("unbound symbol '" + e.name() + "' in compiled expression");
    }
    case Kind::Add:
    case Kind::Mul:
        for (const auto& a : e.args()) emit(a, slots, functions);
        code_.push_back({e.kind() == Kind::Add ? Op::Add : Op::Mul, static_cast<std::uint32_t>(e.args().size())});
        return;
    case Kind::Pow:
        emit(e.base(), slots, functions);
        if (e.exponent().is_number() && e.exponent().number().is_integer()) {
            code_.push_back({Op::PowInt, 0, static_cast<int>(e.exponent().number().rational().num())});
        } else {
            emit(e.exponent(), slots, functions);
            code_.push_back({Op::Pow});
        }
        return;
    case Kind::Function: {
        emit(e.arg(), slots, functions);
        Op op = Op::Exp;
        switch (e.primitive()) {
        case Primitive::Exp: op = Op::Exp; break;
        case Primitive::Log: op = Op::Log; break;
        case Primitive::Sin: op = Op::Sin; break;
        case Primitive::Cos: op = Op::Cos; break;
        }
        code_.push_back({op});
        return;
    }
    case Kind::Opaque: {
        auto it = functions.find(e.name());
        if (it == functions.end()) throw Error("unbound opaque function '" + e.name() + "' in compiled expression");
        auto [idx, inserted] = function_index_.emplace(e.name(), static_cast<std::uint32_t>(functions_.size()));
        if (inserted) functions_.push_back(it->second);
        emit(e.arg(), slots, functions);
        code_.push_back({Op::Opaque, idx->second, e.order()});
        return;
    }
    }
}

double CompiledExpr::operator()(std::span<const double> slots) const
{
    constexpr std::size_t kInline = 64;
    std::array<double, kInline> small{};
    std::vector<double> big;
    double* stack = small.data();
    if (max_stack_ > kInline) {
        big.resize(max_stack_);
        stack = big.data();
    }
    std::size_t sp = 0;
    for (const auto& in : code_) {
        switch (in.op) {
        case Op::Const: stack[sp++] = in.value; break;
        case Op::Slot: stack[sp++] = slots[in.n]; break;
        case Op::Add: {
            double s = 0.0;
            for (std::uint32_t i = 0; i < in.n; ++i) s += stack[sp - in.n + i];
            sp -= in.n;
            stack[sp++] = s;
            break;
        }
        case Op::Mul: {
            double p = 1.0;
            for (std::uint32_t i = 0; i < in.n; ++i) p *= stack[sp - in.n + i];
            sp -= in.n;
            stack[sp++] = p;
            break;
        }
        case Op::Pow: {
            double x = stack[--sp];
            stack[sp - 1] = std::pow(stack[sp - 1], x);
            break;
        }
        case Op::PowInt: stack[sp - 1] = std::pow(stack[sp - 1], in.order); break;
        case Op::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
        case Op::Log: stack[sp - 1] = std::log(stack[sp - 1]); break;
        case Op::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
        case Op::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
        case Op::Opaque: stack[sp - 1] = functions_[in.n](stack[sp - 1], in.order); break;
        }
    }
    return stack[0];
}

}  // namespace sdesym
