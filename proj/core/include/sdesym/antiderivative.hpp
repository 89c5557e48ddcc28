#ifndef SDESYM_ANTIDERIVATIVE_HPP
#define SDESYM_ANTIDERIVATIVE_HPP

#include <optional>
#include <string_view>

#include "sdesym/expr.hpp"

namespace sdesym {

/// Rule-table antiderivative in `symbol` with integration constant 0.
///
/// Covers constants, powers of linear arguments (including the logarithmic
/// case), exp/sin/cos/log of linear arguments, derivative-order lowering of
/// opaque functions of linear arguments, linearity, and the substitution
/// u'(s) g(u(s)) for subexpressions u of the integrand. Returns nullopt when
/// no rule applies.
std::optional<Expr> antiderivative(const Expr& e, std::string_view symbol);

}  // namespace sdesym

#endif  // SDESYM_ANTIDERIVATIVE_HPP
