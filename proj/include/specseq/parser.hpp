#ifndef SPECSEQ_PARSER_HPP
#define SPECSEQ_PARSER_HPP

#include <cctype>
#include <string>

#include "specseq/polynomial.hpp"

namespace specseq {

/* Recursive-descent parser for the polynomial grammar:

     expr       := ['-'] term (('+'|'-') term)*
     term       := factor ('*' factor)*
     factor     := rational | 'i' | identifier ('^' uint)? | '(' expr ')'
     rational   := int ('/' uint)?

   Identifiers match [A-Za-z][A-Za-z0-9_]*, whitespace is ignored and there
   is no implicit multiplication.  The optional leading '-' is accepted so
   printed polynomials parse back verbatim. */
class PolynomialParser {
  public:
    PolynomialParser(std::string text, TablePtr table)
        : text_(std::move(text)), table_(std::move(table)) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != text_.size()) throw syntax_error("unexpected trailing input", pos_);
        return p;
    }

  private:
    Polynomial expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        Polynomial p = term();
        if (neg) p = -p;
        while (true) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                Polynomial t = term();
                p = (c == '+') ? p + t : p - t;
            } else {
                return p;
            }
        }
    }

    Polynomial term() {
        Polynomial p = factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                p = p * factor();
            } else {
                return p;
            }
        }
    }

    Polynomial factor() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            skip_ws();
            if (peek() != ')') throw syntax_error("expected ')'", pos_);
            ++pos_;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return Polynomial::constant(table_, GaussianRational(rational()));
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id = identifier();
            unsigned e = 1;
            skip_ws();
            if (peek() == '^') {
                ++pos_;
                e = uinteger();
            }
            if (id == "i") {
                Polynomial p = Polynomial::constant(table_, GaussianRational::i());
                return p.pow(e);
            }
            auto idx = table_->try_index_of(id);
            if (!idx) throw unknown_variable(id);
            return Polynomial::variable(table_, *idx, e);
        }
        throw syntax_error("expected a factor", pos_);
    }

    BigRational rational() {
        mpz_class num(digits());
        skip_ws();
        if (peek() == '/') {
            ++pos_;
            skip_ws();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw syntax_error("expected denominator", pos_);
            mpz_class den(digits());
            if (den == 0) throw syntax_error("zero denominator", pos_);
            mpq_class q(num, den);
            q.canonicalize();
            return BigRational(q);
        }
        return BigRational(num);
    }

    unsigned uinteger() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw syntax_error("expected an exponent", pos_);
        std::string d = digits();
        if (d.size() > 6) throw syntax_error("exponent too large", pos_);
        return static_cast<unsigned>(std::stoul(d));
    }

    std::string digits() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::string identifier() {
        std::size_t start = pos_;
        ++pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    std::string text_;
    TablePtr table_;
    std::size_t pos_ = 0;
};

inline Polynomial parse_polynomial(const std::string& text, const TablePtr& table) {
    return PolynomialParser(text, table).parse();
}

}  // namespace specseq

#endif
