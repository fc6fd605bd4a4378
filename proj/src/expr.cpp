#include "heatlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace heatlab {

namespace {

struct Token {
    enum Kind { number, name, symbol, end } kind = end;
    double value = 0.0;
    std::string text;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) {
            cur_ = Token{};
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.c_str() + pos_;
            char* out = nullptr;
            double v = std::strtod(begin, &out);
            if (out == begin) throw config_error("expr: malformed number at '" + src_.substr(pos_) + "'");
            pos_ += static_cast<std::size_t>(out - begin);
            cur_ = Token{Token::number, v, {}};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            cur_ = Token{Token::name, 0.0, src_.substr(start, pos_ - start)};
            return;
        }
        ++pos_;
        cur_ = Token{Token::symbol, 0.0, std::string(1, c)};
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token cur_;
};

}  // namespace

class ExprParser {
  public:
    explicit ExprParser(const std::string& src) : lex_(src) { out_.source_ = src; }

    Expr run() {
        expr();
        if (lex_.peek().kind != Token::end)
            throw config_error("expr: trailing input at '" + lex_.peek().text + "'");
        return std::move(out_);
    }

  private:
    using Op = Expr::Op;

    bool at_symbol(const char* s) const {
        return lex_.peek().kind == Token::symbol && lex_.peek().text == s;
    }
    void expect_symbol(const char* s) {
        if (!at_symbol(s)) throw config_error(std::string("expr: expected '") + s + "'");
        lex_.take();
    }
    void emit(Op op) { out_.code_.push_back({op, 0.0, 0}); }

    void expr() {
        term();
        while (at_symbol("+") || at_symbol("-")) {
            bool plus = lex_.take().text == "+";
            term();
            emit(plus ? Op::add : Op::sub);
        }
    }

    void term() {
        unary();
        while (at_symbol("*") || at_symbol("/")) {
            bool times = lex_.take().text == "*";
            unary();
            emit(times ? Op::mul : Op::div);
        }
    }

    void unary() {
        if (at_symbol("-")) {
            lex_.take();
            unary();
            emit(Op::neg);
            return;
        }
        power();
    }

    void power() {
        atom();
        if (at_symbol("^")) {
            lex_.take();
            unary();
            emit(Op::pow_);
        }
    }

    void atom() {
        const Token& t = lex_.peek();
        if (t.kind == Token::number) {
            out_.code_.push_back({Op::push_const, lex_.take().value, 0});
            return;
        }
        if (t.kind == Token::name) {
            std::string id = lex_.take().text;
            if (at_symbol("(")) {
                call(id);
                return;
            }
            std::size_t slot = 0;
            while (slot < out_.names_.size() && out_.names_[slot] != id) ++slot;
            if (slot == out_.names_.size()) out_.names_.push_back(id);
            out_.code_.push_back({Op::push_var, 0.0, slot});
            return;
        }
        if (at_symbol("(")) {
            lex_.take();
            expr();
            expect_symbol(")");
            return;
        }
        if (at_symbol("|")) {
            lex_.take();
            expr();
            expect_symbol("|");
            emit(Op::abs_);
            return;
        }
        throw config_error("expr: unexpected '" + t.text + "'");
    }

    void call(const std::string& fn) {
        expect_symbol("(");
        expr();
        if (fn == "abs" || fn == "exp" || fn == "sqrt" || fn == "log") {
            expect_symbol(")");
            emit(fn == "abs"    ? Op::abs_
                 : fn == "exp"  ? Op::exp_
                 : fn == "sqrt" ? Op::sqrt_
                                : Op::log_);
            return;
        }
        if (fn == "min" || fn == "max" || fn == "pow") {
            expect_symbol(",");
            expr();
            expect_symbol(")");
            emit(fn == "min" ? Op::min_ : fn == "max" ? Op::max_ : Op::pow_);
            return;
        }
        throw config_error("expr: unknown function '" + fn + "'");
    }

    Lexer lex_;
    Expr out_;
};

Expr parse_expr(const std::string& src) { return ExprParser(src).run(); }

double Expr::operator()(double x) const { return eval({{"x", x}}); }

double Expr::eval(const std::vector<std::pair<std::string, double>>& vars) const {
    return run(vars, code_.size());
}

double Expr::eval_log(const std::vector<std::pair<std::string, double>>& vars) const {
    if (!code_.empty() && code_.back().op == Op::exp_)
        return run(vars, code_.size() - 1);
    return std::log(run(vars, code_.size()));
}

double Expr::run(const std::vector<std::pair<std::string, double>>& vars,
                 std::size_t count) const {
    double env[8];
    if (names_.size() > 8) throw config_error("expr '" + source_ + "': too many variables");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        bool found = false;
        for (const auto& [name, value] : vars) {
            if (name == names_[i]) {
                env[i] = value;
                found = true;
                break;
            }
        }
        if (!found) throw config_error("expr '" + source_ + "': unbound variable '" + names_[i] + "'");
    }
    double stack[64];
    std::size_t top = 0;
    for (std::size_t ic = 0; ic < count; ++ic) {
        const Instr& in = code_[ic];
        if (top >= 63) throw config_error("expr '" + source_ + "': expression too deep");
        switch (in.op) {
            case Op::push_const: stack[top++] = in.value; break;
            case Op::push_var: stack[top++] = env[in.slot]; break;
            case Op::neg: stack[top - 1] = -stack[top - 1]; break;
            case Op::abs_: stack[top - 1] = std::fabs(stack[top - 1]); break;
            case Op::exp_: stack[top - 1] = std::exp(stack[top - 1]); break;
            case Op::sqrt_: stack[top - 1] = std::sqrt(stack[top - 1]); break;
            case Op::log_: stack[top - 1] = std::log(stack[top - 1]); break;
            case Op::add: --top; stack[top - 1] += stack[top]; break;
            case Op::sub: --top; stack[top - 1] -= stack[top]; break;
            case Op::mul: --top; stack[top - 1] *= stack[top]; break;
            case Op::div: --top; stack[top - 1] /= stack[top]; break;
            case Op::pow_: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
            case Op::min_: --top; stack[top - 1] = std::min(stack[top - 1], stack[top]); break;
            case Op::max_: --top; stack[top - 1] = std::max(stack[top - 1], stack[top]); break;
        }
    }
    return stack[0];
}

}  // namespace heatlab
