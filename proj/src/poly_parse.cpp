// Recursive-descent parser for the form grammar:
//
//   poly   := term ('+' term | '-' term)*
//   term   := coeff ('*' factor)* | factor ('*' factor)*
//   factor := 'x' INDEX ('^' EXP)?
//   coeff  := INT | '[' gfpoly ']'
//
// Whitespace is ignored, '-' maps to the additive inverse and INT is reduced
// mod p. A leading '-' before the first term is also accepted.

#include "bertini/error.hpp"
#include "bertini/mpoly.hpp"

#include <cctype>
#include <map>

namespace bertini::mpoly {

namespace {

class Parser {
public:
    Parser(std::string_view text, const WorkingField& field, unsigned n) : text_(text), field_(field), n_(n) {}

    struct Term {
        std::vector<std::uint16_t> exps;
        Elem coeff;
        std::size_t position;
    };

    std::vector<Term> parse() {
        std::vector<Term> terms;
        skip_ws();
        bool negate = false;
        if (peek() == '-') {
            ++pos_;
            negate = true;
        }
        terms.push_back(term(negate));
        for (;;) {
            skip_ws();
            if (at_end()) break;
            char c = peek();
            if (c != '+' && c != '-') throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
            ++pos_;
            terms.push_back(term(c == '-'));
        }
        return terms;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::uint64_t integer(const char* what) {
        skip_ws();
        std::size_t start = pos_;
        std::uint64_t v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            if (v > (std::uint64_t{1} << 40)) throw SyntaxError(start, std::string(what) + " too large");
            v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
            ++pos_;
        }
        if (pos_ == start) throw SyntaxError(pos_, std::string("expected ") + what);
        return v;
    }

    Term term(bool negate) {
        skip_ws();
        Term t{std::vector<std::uint16_t>(n_ + 1, 0), WorkingField::one(), pos_};
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            t.coeff = field_.from_int(static_cast<std::int64_t>(integer("integer") % field_.characteristic()));
        } else if (c == '[') {
            ++pos_;
            std::size_t close = text_.find(']', pos_);
            if (close == std::string_view::npos) throw SyntaxError(pos_, "unterminated '['");
            try {
                t.coeff = field_.parse(text_.substr(pos_, close - pos_));
            } catch (const SyntaxError& e) {
                throw SyntaxError(pos_ + e.position(), "bad field element");
            }
            pos_ = close + 1;
        } else if (c == 'x') {
            factor(t);
        } else {
            throw SyntaxError(pos_, at_end() ? "unexpected end of input" : std::string("unexpected '") + c + "'");
        }
        for (;;) {
            skip_ws();
            if (peek() != '*') break;
            ++pos_;
            skip_ws();
            if (peek() != 'x') throw SyntaxError(pos_, "expected variable after '*'");
            factor(t);
        }
        if (negate) t.coeff = field_.neg(t.coeff);
        return t;
    }

    void factor(Term& t) {
        std::size_t start = pos_;
        ++pos_;  // 'x'
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
            throw SyntaxError(pos_, "expected variable index");
        std::uint64_t idx = integer("variable index");
        if (idx > n_)
            fail(ErrorKind::BadVariableIndex,
                 "x" + std::to_string(idx) + " at position " + std::to_string(start) + " but n = " +
                     std::to_string(n_));
        std::uint64_t exp = 1;
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            exp = integer("exponent");
        }
        if (t.exps[idx] + exp > 4096) throw SyntaxError(start, "exponent too large");
        t.exps[idx] = static_cast<std::uint16_t>(t.exps[idx] + exp);
    }

    std::string_view text_;
    const WorkingField& field_;
    unsigned n_;
    std::size_t pos_ = 0;
};

}  // namespace

HomogPoly poly_parse(std::string_view text, const FieldPtr& field, unsigned n) {
    Parser parser(text, *field, n);
    auto terms = parser.parse();
    unsigned degree = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        unsigned deg = 0;
        for (auto e : terms[i].exps) deg += e;
        if (i == 0) degree = deg;
        else if (deg != degree)
            fail(ErrorKind::NotHomogeneous, "terms of degree " + std::to_string(degree) + " and " +
                                                std::to_string(deg) + " (position " +
                                                std::to_string(terms[i].position) + ")");
    }
    HomogPoly f(field, n, degree);
    for (const auto& t : terms) f.add_term(t.exps, t.coeff);
    return f;
}

}  // namespace bertini::mpoly
