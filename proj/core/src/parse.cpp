#include "sdesym/parse.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

#include "sdesym/error.hpp"

namespace sdesym {
namespace {

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& options) : text_(text), options_(options) {}

    Expr run()
    {
        skip_ws();
        if (at_end()) throw ParseError("empty expression", pos_);
        Expr e = expr();
        skip_ws();
        if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr expr()
    {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+')) {
                terms.push_back(term());
            } else if (accept('-')) {
                terms.push_back(-term());
            } else {
                break;
            }
        }
        return add(std::move(terms));
    }

    Expr term()
    {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                acc = acc / unary();
            } else {
                break;
            }
        }
        return acc;
    }

    Expr unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power()
    {
        Expr b = primary();
        if (accept('^')) return pow(b, unary());
        return b;
    }

    Expr primary()
    {
        skip_ws();
        if (at_end()) throw ParseError("unexpected end of expression", pos_);
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr number()
    {
        const std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
        bool has_exponent = false;
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
                has_exponent = true;
            } else {
                pos_ = save;
            }
        }
        std::string lit(text_.substr(start, pos_ - start));
        if (!has_exponent) {
            if (auto q = Rational::from_decimal(lit)) return Expr(Number(*q));
        }
        char* end = nullptr;
        double v = std::strtod(lit.c_str(), &end);
        if (end != lit.c_str() + lit.size()) throw ParseError("malformed number '" + lit + "'", start);
        return Expr::real(v);
    }

    Expr identifier()
    {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        int primes = 0;
        while (peek() == '\'') {
            ++primes;
            ++pos_;
        }
        skip_ws();
        if (peek() != '(') {
            if (primes > 0) throw ParseError("derivative mark on non-function '" + name + "'", start);
            return Expr::symbol(std::move(name));
        }
        ++pos_;
        Expr a = expr();
        expect(')');
        if (options_.opaque_functions.count(name) != 0) return opaque(name, primes, a);
        if (primes > 0) throw ParseError("derivative mark on builtin '" + name + "'", start);
        if (name == "exp") return exp(a);
        if (name == "log") return log(a);
        if (name == "sin") return sin(a);
        if (name == "cos") return cos(a);
        if (name == "sqrt") return sqrt(a);
        if (name == "neg") return -a;
        throw ParseError("unknown function '" + name + "'", start);
    }

    std::string_view text_;
    const ParseOptions& options_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options) { return Parser(text, options).run(); }

}  // namespace sdesym
