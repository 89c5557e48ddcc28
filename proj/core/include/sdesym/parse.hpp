#ifndef SDESYM_PARSE_HPP
#define SDESYM_PARSE_HPP

#include <iosfwd>
#include <set>
#include <string>
#include <string_view>

#include "sdesym/expr.hpp"

namespace sdesym {

struct ParseOptions {
    /// Names accepted as opaque unary functions, e.g. `eta` for `eta(z)` and
    /// its derivatives `eta'(z)`, `eta''(z)`.
    std::set<std::string, std::less<>> opaque_functions;
};

/// Parses the infix grammar
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('-' | '+') unary | power
///     power   := primary ('^' unary)?
///     primary := number | ident | ident '\''* '(' expr ')' | '(' expr ')'
///
/// Plain decimal literals are exact rationals; literals with an exponent part
/// (`1e-3`) are doubles. Builtins: exp, log, sin, cos, sqrt, neg.
Expr parse(std::string_view text, const ParseOptions& options = {});

/// Prints in the same grammar; parse(to_string(e)) == e.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace sdesym

#endif  // SDESYM_PARSE_HPP
