#include "adiclab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "adiclab/errors.hpp"
#include "adiclab/grading.hpp"
#include "adiclab/shifts.hpp"

namespace adiclab {

namespace {

const std::string kRadical = "\xE2\x88\x9A";

// --- parser -------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view text) : t_(text) {}

    OpExpr parse_all()
    {
        OpExpr e = expr();
        finish();
        return e;
    }
    PExpr parse_param_all()
    {
        PExpr p = pexpr();
        finish();
        return p;
    }
    FExpr parse_function_all()
    {
        FExpr f = fexpr();
        finish();
        return f;
    }

private:
    std::string_view t_;
    std::size_t pos_ = 0;

    void skip()
    {
        while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    }
    bool at_end()
    {
        skip();
        return pos_ >= t_.size();
    }
    char peek()
    {
        skip();
        return pos_ < t_.size() ? t_[pos_] : '\0';
    }
    bool peek_str(std::string_view s)
    {
        skip();
        return t_.substr(pos_, s.size()) == s;
    }
    bool peek_range() { return peek_str(".."); }
    bool peek_radical() { return peek_str(kRadical); }
    bool accept(char c)
    {
        if (peek() == c && !(c == '.' && peek_range())) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, pos_); }
    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'" + found());
    }
    void expect_str(std::string_view s)
    {
        if (!peek_str(s)) fail("expected '" + std::string(s) + "'" + found());
        pos_ += s.size();
    }
    std::string found()
    {
        if (at_end()) return " but reached end of input";
        return std::string(" but found '") + t_[pos_] + "'";
    }
    void finish()
    {
        if (!at_end()) fail("unexpected trailing input");
    }

    std::string ident()
    {
        skip();
        const std::size_t b = pos_;
        if (pos_ < t_.size() && std::isalpha(static_cast<unsigned char>(t_[pos_]))) {
            while (pos_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[pos_])) || t_[pos_] == '_')) ++pos_;
        }
        if (b == pos_) fail("expected identifier" + found());
        return std::string(t_.substr(b, pos_ - b));
    }
    std::string digits()
    {
        skip();
        const std::size_t b = pos_;
        while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
        if (b == pos_) fail("expected number" + found());
        return std::string(t_.substr(b, pos_ - b));
    }
    bool peek_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

    // NUMBER ['/' NUMBER] [√ (NUMBER | s)]  |  √ (NUMBER | s)
    std::string scalar_text()
    {
        std::string out;
        if (peek_digit()) {
            out = digits();
            if (accept('/')) out += "/" + digits();
        }
        if (peek_radical()) {
            pos_ += kRadical.size();
            out += kRadical;
            if (peek() == 's') {
                ++pos_;
                out += "s";
            } else {
                out += digits();
            }
        }
        if (out.empty()) fail("expected scalar literal" + found());
        return out;
    }
    std::string signed_scalar_text()
    {
        std::string sign = accept('-') ? "-" : "";
        return sign + scalar_text();
    }

    // --- integer parameters ---
    PExpr pexpr()
    {
        PExpr left = pterm();
        for (;;) {
            const std::size_t at = (skip(), pos_);
            char op = peek();
            if (op != '+' && op != '-') return left;
            ++pos_;
            PExpr right = pterm();
            left = PExpr{PExpr::Kind::Bin, 0, std::string(1, op), {std::move(left), std::move(right)}, at};
        }
    }
    PExpr pterm()
    {
        PExpr left = pfactor();
        for (;;) {
            const std::size_t at = (skip(), pos_);
            char op = peek();
            if (op != '*' && op != '/' && op != '%') return left;
            ++pos_;
            PExpr right = pfactor();
            left = PExpr{PExpr::Kind::Bin, 0, std::string(1, op), {std::move(left), std::move(right)}, at};
        }
    }
    PExpr pfactor()
    {
        PExpr base = pbase();
        const std::size_t at = (skip(), pos_);
        if (accept('^')) {
            PExpr exp = pfactor();
            return PExpr{PExpr::Kind::Bin, 0, "^", {std::move(base), std::move(exp)}, at};
        }
        return base;
    }
    PExpr pbase()
    {
        skip();
        const std::size_t at = pos_;
        if (accept('(')) {
            PExpr e = pexpr();
            expect(')');
            return e;
        }
        if (accept('-')) return PExpr{PExpr::Kind::Neg, 0, "", {pbase()}, at};
        if (peek_digit()) {
            const std::string d = digits();
            if (d.size() > 18) throw SyntaxError("integer literal too large", at);
            return PExpr{PExpr::Kind::Int, std::stoll(d), "", {}, at};
        }
        if (std::isalpha(static_cast<unsigned char>(peek()))) return PExpr{PExpr::Kind::Var, 0, ident(), {}, at};
        fail("expected integer expression" + found());
    }
    std::vector<PExpr> param_list(const std::string& name, std::size_t arity, std::size_t at)
    {
        std::vector<PExpr> ps;
        expect('(');
        if (peek() != ')') {
            ps.push_back(pexpr());
            while (accept(',')) ps.push_back(pexpr());
        }
        expect(')');
        if (ps.size() != arity)
            throw ArityError(name + " takes " + std::to_string(arity) + " parameter(s), got " + std::to_string(ps.size()),
                             at);
        return ps;
    }

    // --- functions ---
    FExpr fexpr()
    {
        skip();
        const std::size_t at = pos_;
        if (accept('{')) {
            FExpr f;
            f.kind = FExpr::Kind::Literal;
            f.offset = at;
            const std::string lv = digits();
            if (lv.size() > 2) throw SyntaxError("literal level too large", at);
            f.level = static_cast<unsigned>(std::stoul(lv));
            expect(':');
            expect('[');
            if (peek() != ']') {
                f.values.push_back(signed_scalar_text());
                while (accept(',')) f.values.push_back(signed_scalar_text());
            }
            expect(']');
            expect('}');
            return f;
        }
        const std::string name = ident();
        FExpr f;
        f.offset = at;
        f.name = name;
        if (name == "f" || name == "g" || name == "h" || name == "F" || name == "G") {
            f.kind = FExpr::Kind::Var;
        } else if (name == "one") {
            f.kind = FExpr::Kind::One;
            f.name.clear();
        } else if (name == "zero") {
            f.kind = FExpr::Kind::Zero;
            f.name.clear();
        } else if (name == "chi") {
            f.kind = FExpr::Kind::Chi;
            f.name.clear();
            f.params = param_list("chi", 1, at);
        } else if (name == "ind") {
            f.kind = FExpr::Kind::Ind;
            f.name.clear();
            f.params = param_list("ind", 2, at);
        } else if (name == "aU" || name == "bU" || name == "aV" || name == "bV" || name == "aS" || name == "bS" ||
                   name == "aW" || name == "bW" || name == "lift") {
            f.kind = FExpr::Kind::Map;
            expect('(');
            f.kids.push_back(fexpr());
            expect(')');
        } else {
            throw SyntaxError("unknown function '" + name + "'", at);
        }
        return f;
    }

    // --- operators ---
    OpExpr expr()
    {
        skip();
        const std::size_t at = pos_;
        OpExpr left;
        if (accept('-')) {
            left.kind = OpExpr::Kind::Neg;
            left.offset = at;
            left.kids.push_back(term());
        } else {
            left = term();
        }
        for (;;) {
            const std::size_t op_at = (skip(), pos_);
            OpExpr::Kind k;
            if (accept('+'))
                k = OpExpr::Kind::Add;
            else if (accept('-'))
                k = OpExpr::Kind::Sub;
            else
                return left;
            OpExpr node;
            node.kind = k;
            node.offset = op_at;
            node.kids.push_back(std::move(left));
            node.kids.push_back(term());
            left = std::move(node);
        }
    }
    OpExpr term()
    {
        OpExpr left = postfix();
        for (;;) {
            const std::size_t at = (skip(), pos_);
            if (!accept('.')) return left;
            OpExpr node;
            node.kind = OpExpr::Kind::Compose;
            node.offset = at;
            node.kids.push_back(std::move(left));
            node.kids.push_back(postfix());
            left = std::move(node);
        }
    }
    OpExpr postfix()
    {
        OpExpr e = primary();
        for (;;) {
            const std::size_t at = (skip(), pos_);
            if (accept('*')) {
                OpExpr node;
                node.kind = OpExpr::Kind::Adjoint;
                node.offset = at;
                node.kids.push_back(std::move(e));
                e = std::move(node);
            } else if (accept('^')) {
                OpExpr node;
                node.kind = OpExpr::Kind::Power;
                node.offset = at;
                node.kids.push_back(std::move(e));
                node.params.push_back(pfactor());
                e = std::move(node);
            } else {
                return e;
            }
        }
    }
    OpExpr primary()
    {
        skip();
        const std::size_t at = pos_;
        OpExpr e;
        e.offset = at;
        if (accept('(')) {
            OpExpr inner = expr();
            expect(')');
            return inner;
        }
        if (peek_digit() || peek_radical()) {
            e.kind = OpExpr::Kind::Scalar;
            e.scalars.push_back(scalar_text());
            return e;
        }
        if (accept('$')) {
            e.kind = OpExpr::Kind::Ref;
            e.name = ident();
            return e;
        }
        if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("expected operator" + found());
        const std::string name = ident();
        e.name = name;
        if (name == "U" || name == "V" || name == "S" || name == "W") {
            e.kind = OpExpr::Kind::Shift;
        } else if (name == "I") {
            e.kind = OpExpr::Kind::Identity;
            e.name.clear();
        } else if (name == "s") {
            e.kind = OpExpr::Kind::Scalar;
            e.name.clear();
            e.scalars.push_back("s");
        } else if (name == "P" || name == "PV" || name == "Sj" || name == "CP") {
            e.kind = OpExpr::Kind::Atom;
            e.params = param_list(name, 1, at);
        } else if (name == "PT" || name == "Sw") {
            e.kind = OpExpr::Kind::Atom;
            e.params = param_list(name, 2, at);
        } else if (name == "MU") {
            e.kind = OpExpr::Kind::Atom;
            e.params = param_list(name, 4, at);
        } else if (name == "M" || name == "MT") {
            e.kind = name == "M" ? OpExpr::Kind::Mult : OpExpr::Kind::MultTree;
            e.name.clear();
            if (name == "M" && peek() == '{') {
                e.funcs.push_back(fexpr());
            } else {
                expect('(');
                e.funcs.push_back(fexpr());
                expect(')');
            }
        } else if (name == "adj" || name == "E") {
            e.kind = name == "adj" ? OpExpr::Kind::Adjoint : OpExpr::Kind::Expect;
            e.name.clear();
            expect('(');
            e.kids.push_back(expr());
            expect(')');
        } else if (name == "val") {
            e.kind = OpExpr::Kind::Value;
            e.name.clear();
            expect('(');
            e.funcs.push_back(fexpr());
            expect(',');
            e.params.push_back(pexpr());
            expect(')');
        } else if (name == "delta") {
            e.kind = OpExpr::Kind::Delta;
            e.name.clear();
            e.params = param_list("delta", 2, at);
        } else if (name == "sum") {
            e.kind = OpExpr::Kind::Sum;
            expect('(');
            e.name = ident();
            expect('=');
            e.params.push_back(pexpr());
            expect_str("..");
            e.params.push_back(pexpr());
            expect(';');
            e.kids.push_back(expr());
            expect(')');
        } else if (name == "TU" || name == "TW") {
            e.kind = OpExpr::Kind::Toeplitz;
            expect('(');
            if (peek() != ';') {
                e.funcs.push_back(fexpr());
                while (accept(',')) e.funcs.push_back(fexpr());
            }
            expect(';');
            e.funcs.push_back(fexpr());  // limit is last
            expect(')');
        } else if (name == "TV") {
            e.kind = OpExpr::Kind::Toeplitz;
            expect('(');
            e.funcs.push_back(fexpr());
            if (accept(';')) {
                e.scalars.push_back(signed_scalar_text());
                while (accept(',')) e.scalars.push_back(signed_scalar_text());
            }
            expect(')');
        } else {
            throw SyntaxError("unknown operator '" + name + "'", at);
        }
        return e;
    }
};

// --- printer ------------------------------------------------------------------

int pprec(const PExpr& e)
{
    switch (e.kind) {
    case PExpr::Kind::Int:
    case PExpr::Kind::Var: return 5;
    case PExpr::Kind::Neg: return 4;
    case PExpr::Kind::Bin:
        if (e.name == "+" || e.name == "-") return 1;
        if (e.name == "^") return 3;
        return 2;
    }
    return 0;
}

std::string print_p(const PExpr& e, int min_prec)
{
    std::string out;
    switch (e.kind) {
    case PExpr::Kind::Int: out = std::to_string(e.value); break;
    case PExpr::Kind::Var: out = e.name; break;
    case PExpr::Kind::Neg: out = "-" + print_p(e.kids[0], 4); break;
    case PExpr::Kind::Bin: {
        const int p = pprec(e);
        if (e.name == "^")
            out = print_p(e.kids[0], 4) + "^" + print_p(e.kids[1], 3);
        else
            out = print_p(e.kids[0], p) + " " + e.name + " " + print_p(e.kids[1], p + 1);
        break;
    }
    }
    return pprec(e) < min_prec ? "(" + out + ")" : out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string print_params(const std::vector<PExpr>& ps)
{
    std::vector<std::string> parts;
    for (const auto& p : ps) parts.push_back(print_p(p, 0));
    return "(" + join(parts, ", ") + ")";
}

int oprec(const OpExpr& e)
{
    switch (e.kind) {
    case OpExpr::Kind::Add:
    case OpExpr::Kind::Sub:
    case OpExpr::Kind::Neg: return 1;
    case OpExpr::Kind::Compose: return 2;
    case OpExpr::Kind::Adjoint:
    case OpExpr::Kind::Power: return 3;
    default: return 4;
    }
}

std::string print_op(const OpExpr& e, int min_prec, bool leftmost)
{
    std::string out;
    switch (e.kind) {
    case OpExpr::Kind::Shift: out = e.name; break;
    case OpExpr::Kind::Identity: out = "I"; break;
    case OpExpr::Kind::Atom: out = e.name + print_params(e.params); break;
    case OpExpr::Kind::Mult:
        out = e.funcs[0].kind == FExpr::Kind::Literal ? "M" + print(e.funcs[0]) : "M(" + print(e.funcs[0]) + ")";
        break;
    case OpExpr::Kind::MultTree: out = "MT(" + print(e.funcs[0]) + ")"; break;
    case OpExpr::Kind::Scalar: out = e.scalars[0]; break;
    case OpExpr::Kind::Value: out = "val(" + print(e.funcs[0]) + ", " + print_p(e.params[0], 0) + ")"; break;
    case OpExpr::Kind::Delta: out = "delta" + print_params(e.params); break;
    case OpExpr::Kind::Expect: out = "E(" + print_op(e.kids[0], 0, true) + ")"; break;
    case OpExpr::Kind::Ref: out = "$" + e.name; break;
    case OpExpr::Kind::Sum:
        out = "sum(" + e.name + "=" + print_p(e.params[0], 0) + ".." + print_p(e.params[1], 0) + "; " +
              print_op(e.kids[0], 0, true) + ")";
        break;
    case OpExpr::Kind::Toeplitz: {
        std::vector<std::string> parts;
        if (e.name == "TV") {
            out = "TV(" + print(e.funcs[0]);
            if (!e.scalars.empty()) out += "; " + join(e.scalars, ", ");
            out += ")";
        } else {
            for (std::size_t i = 0; i + 1 < e.funcs.size(); ++i) parts.push_back(print(e.funcs[i]));
            out = e.name + "(" + join(parts, ", ") + "; " + print(e.funcs.back()) + ")";
        }
        break;
    }
    case OpExpr::Kind::Adjoint: out = print_op(e.kids[0], 3, false) + "*"; break;
    case OpExpr::Kind::Power: {
        // A bare exponent would swallow a following '^', so nested powers keep their parentheses.
        std::string base = print_op(e.kids[0], 3, false);
        if (e.kids[0].kind == OpExpr::Kind::Power) base = "(" + base + ")";
        out = base + "^" + print_p(e.params[0], 3);
        break;
    }
    case OpExpr::Kind::Compose: out = print_op(e.kids[0], 2, false) + " . " + print_op(e.kids[1], 3, false); break;
    case OpExpr::Kind::Add:
    case OpExpr::Kind::Sub: {
        const bool wrap = min_prec > 1;
        out = print_op(e.kids[0], 1, wrap || leftmost) + (e.kind == OpExpr::Kind::Add ? " + " : " - ") +
              print_op(e.kids[1], 2, false);
        if (wrap) out = "(" + out + ")";
        return out;
    }
    case OpExpr::Kind::Neg: {
        out = "-" + print_op(e.kids[0], 2, false);
        if (min_prec > 1 || !leftmost) out = "(" + out + ")";
        return out;
    }
    }
    return oprec(e) < min_prec ? "(" + out + ")" : out;
}

// --- evaluation ---------------------------------------------------------------

struct Value {
    std::optional<QuadScalar> scalar;
    std::optional<SparseOperator> op;

    static Value of(QuadScalar c) { return Value{std::move(c), std::nullopt}; }
    static Value of(SparseOperator a) { return Value{std::nullopt, std::move(a)}; }
};

QuadScalar ipow_scalar(const QuadScalar& c, std::int64_t n)
{
    QuadScalar out(1);
    for (std::int64_t i = 0; i < n; ++i) out *= c;
    return out;
}

class Evaluator {
public:
    explicit Evaluator(const EvalContext& ctx) : ctx_(ctx) {}

    SparseOperator to_operator(const Value& v) const
    {
        if (v.op) return *v.op;
        return scalar_mul(*v.scalar, make_identity(ctx_.s, ctx_.N));
    }

    Value eval(const OpExpr& e)
    {
        try {
            return eval_node(e);
        } catch (const ExprError&) {
            throw;
        } catch (const EmptyWindow&) {
            throw;
        } catch (const UnreliableLevel&) {
            throw;
        } catch (const WindowTooDeep&) {
            throw;
        } catch (const std::exception& ex) {
            throw EvalError(ex.what(), e.offset);
        }
    }

    std::int64_t param(const PExpr& e) const
    {
        switch (e.kind) {
        case PExpr::Kind::Int: return e.value;
        case PExpr::Kind::Var: {
            if (auto it = locals_.find(e.name); it != locals_.end()) return it->second;
            if (auto it = ctx_.vars.find(e.name); it != ctx_.vars.end()) return it->second;
            if (e.name == "s") return ctx_.s;
            if (e.name == "N") return ctx_.N;
            throw EvalError("unbound variable '" + e.name + "'", e.offset);
        }
        case PExpr::Kind::Neg: return -param(e.kids[0]);
        case PExpr::Kind::Bin: {
            const std::int64_t a = param(e.kids[0]);
            const std::int64_t b = param(e.kids[1]);
            switch (e.name[0]) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            case '/':
            case '%': {
                if (b == 0) throw EvalError("division by zero in parameter", e.offset);
                std::int64_t q = a / b;
                if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
                return e.name[0] == '/' ? q : a - q * b;
            }
            case '^': {
                if (b < 0) throw EvalError("negative exponent in parameter", e.offset);
                std::int64_t r = 1;
                for (std::int64_t i = 0; i < b; ++i) r *= a;
                return r;
            }
            }
        }
        }
        throw EvalError("bad parameter expression", e.offset);
    }

    std::variant<LCFunction, TreeFunction> function(const FExpr& f) const
    {
        const unsigned s = ctx_.s;
        switch (f.kind) {
        case FExpr::Kind::Var: {
            const bool tree = f.name == "F" || f.name == "G";
            const std::size_t shift = (f.name == "g" || f.name == "G") ? 1 : (f.name == "h" ? 2 : 0);
            if (tree) {
                if (ctx_.trees.empty()) throw EvalError("no random tree functions bound", f.offset);
                return ctx_.trees[(ctx_.r + shift) % ctx_.trees.size()];
            }
            if (ctx_.lc.empty()) throw EvalError("no random functions bound", f.offset);
            return ctx_.lc[(ctx_.r + shift) % ctx_.lc.size()];
        }
        case FExpr::Kind::One: return LCFunction::constant(s, QuadScalar(1));
        case FExpr::Kind::Zero: return LCFunction::constant(s, QuadScalar(0));
        case FExpr::Kind::Chi: {
            const std::int64_t j = param(f.params[0]);
            if (j < 0 || j >= static_cast<std::int64_t>(s)) throw EvalError("chi(j) needs 0 <= j < s", f.offset);
            return LCFunction::chi(s, static_cast<unsigned>(j));
        }
        case FExpr::Kind::Ind: {
            const std::int64_t n = param(f.params[0]);
            const std::int64_t x = param(f.params[1]);
            if (n < 0 || n > 20 || x < 0 || static_cast<std::uint64_t>(x) >= ipow(s, static_cast<unsigned>(n)))
                throw EvalError("ind(n,x) needs 0 <= x < s^n", f.offset);
            return LCFunction::indicator(s, Ball{static_cast<unsigned>(n), static_cast<std::uint64_t>(x)});
        }
        case FExpr::Kind::Literal: {
            std::vector<QuadScalar> v;
            for (const auto& t : f.values) v.push_back(QuadScalar::parse(t, s));
            try {
                return LCFunction(s, f.level, std::move(v));
            } catch (const std::exception& ex) {
                throw EvalError(ex.what(), f.offset);
            }
        }
        case FExpr::Kind::Map: {
            auto inner = function(f.kids[0]);
            if (f.name == "aW" || f.name == "bW") {
                if (!std::holds_alternative<TreeFunction>(inner)) throw EvalError(f.name + " needs a tree function", f.offset);
                const auto& F = std::get<TreeFunction>(inner);
                try {
                    return f.name == "aW" ? endo_aW(F) : transfer_bW(F);
                } catch (const std::exception& ex) {
                    throw EvalError(ex.what(), f.offset);
                }
            }
            if (!std::holds_alternative<LCFunction>(inner))
                throw EvalError(f.name + " needs a locally constant function", f.offset);
            const auto& g = std::get<LCFunction>(inner);
            if (f.name == "lift") return TreeFunction::lift(g, ctx_.N + 1);
            if (f.name == "aU") return endo_aU(g);
            if (f.name == "bU") return endo_bU(g);
            if (f.name == "aV") return endo_aV(g);
            if (f.name == "bV") return endo_bV(g);
            if (f.name == "aS") return endo_aS(g);
            return transfer_bS(g);
        }
        }
        throw EvalError("bad function expression", f.offset);
    }

private:
    const EvalContext& ctx_;
    std::map<std::string, std::int64_t> locals_;
    std::vector<std::string> ref_stack_;

    LCFunction lc_arg(const FExpr& f) const
    {
        auto v = function(f);
        if (!std::holds_alternative<LCFunction>(v)) throw EvalError("expected a locally constant function", f.offset);
        return std::get<LCFunction>(v);
    }

    unsigned nonneg(const PExpr& p, const char* what) const
    {
        const std::int64_t v = param(p);
        if (v < 0 || v > 64) throw EvalError(std::string(what) + " out of range", p.offset);
        return static_cast<unsigned>(v);
    }

    Ball ball(const PExpr& n, const PExpr& x) const
    {
        const unsigned lv = nonneg(n, "level");
        const std::int64_t c = param(x);
        if (lv > ctx_.N || c < 0 || static_cast<std::uint64_t>(c) >= ipow(ctx_.s, lv))
            throw EvalError("ball outside the truncated tree", x.offset);
        return Ball{lv, static_cast<std::uint64_t>(c)};
    }

    Value atom(const OpExpr& e)
    {
        const unsigned s = ctx_.s;
        const unsigned N = ctx_.N;
        const auto& p = e.params;
        if (e.name == "P") return Value::of(make_P(nonneg(p[0], "P index"), s, N));
        if (e.name == "CP") return Value::of(make_calP(nonneg(p[0], "CP index"), s, N));
        if (e.name == "PV") {
            const unsigned n = nonneg(p[0], "PV index");
            if (n > N) throw EvalError("PV index exceeds depth", e.offset);
            return Value::of(make_PV(n, s, N));
        }
        if (e.name == "PT") {
            const unsigned k = nonneg(p[0], "PT row"), l = nonneg(p[1], "PT column");
            if (k > N || l > N) throw EvalError("PT index exceeds depth", e.offset);
            return Value::of(make_matrix_unit_V(k, l, s, N));
        }
        if (e.name == "Sj") {
            const std::int64_t j = param(p[0]);
            if (j < 0 || j >= static_cast<std::int64_t>(s)) throw EvalError("Sj(j) needs 0 <= j < s", e.offset);
            return Value::of(make_Sj(static_cast<unsigned>(j), s, N));
        }
        if (e.name == "Sw") {
            const unsigned n = nonneg(p[0], "word length");
            const std::int64_t x = param(p[1]);
            if (n > N || x < 0 || static_cast<std::uint64_t>(x) >= ipow(s, n))
                throw EvalError("Sw(n,x) needs n <= N and 0 <= x < s^n", e.offset);
            return Value::of(make_S_word(n, static_cast<std::uint64_t>(x), s, N));
        }
        // MU(n, x, m, y)
        return Value::of(make_matrix_unit(ball(p[0], p[1]), ball(p[2], p[3]), s, N));
    }

    static Value compose_values(const Value& a, const Value& b)
    {
        if (a.scalar && b.scalar) return Value::of(*a.scalar * *b.scalar);
        if (a.scalar) return Value::of(scalar_mul(*a.scalar, *b.op));
        if (b.scalar) return Value::of(scalar_mul(*b.scalar, *a.op));
        return Value::of(compose(*a.op, *b.op));
    }

    Value add_values(const Value& a, const Value& b, bool subtract) const
    {
        if (a.scalar && b.scalar) return Value::of(subtract ? *a.scalar - *b.scalar : *a.scalar + *b.scalar);
        const SparseOperator x = to_operator(a);
        const SparseOperator y = to_operator(b);
        return Value::of(subtract ? x - y : x + y);
    }

    Value eval_node(const OpExpr& e)
    {
        const unsigned s = ctx_.s;
        const unsigned N = ctx_.N;
        switch (e.kind) {
        case OpExpr::Kind::Shift: return Value::of(make_shift(shift_from_symbol(e.name[0]), s, N));
        case OpExpr::Kind::Identity: return Value::of(make_identity(s, N));
        case OpExpr::Kind::Atom: return atom(e);
        case OpExpr::Kind::Mult: return Value::of(make_mult(lc_arg(e.funcs[0]), N));
        case OpExpr::Kind::MultTree: {
            auto v = function(e.funcs[0]);
            if (std::holds_alternative<LCFunction>(v)) return Value::of(make_mult(std::get<LCFunction>(v), N));
            return Value::of(make_mult_tree(std::get<TreeFunction>(v), N));
        }
        case OpExpr::Kind::Scalar:
            if (e.scalars[0] == "s") return Value::of(QuadScalar(static_cast<long>(s)));
            return Value::of(QuadScalar::parse(e.scalars[0], s));
        case OpExpr::Kind::Value: {
            const LCFunction f = lc_arg(e.funcs[0]);
            return Value::of(f.at(param(e.params[0])));
        }
        case OpExpr::Kind::Delta: return Value::of(QuadScalar(param(e.params[0]) == param(e.params[1]) ? 1 : 0));
        case OpExpr::Kind::Adjoint: {
            Value v = eval(e.kids[0]);
            if (v.scalar) return v;
            return Value::of(adjoint(*v.op));
        }
        case OpExpr::Kind::Power: {
            const std::int64_t n = param(e.params[0]);
            if (n < 0) throw EvalError("negative power", e.offset);
            Value v = eval(e.kids[0]);
            if (v.scalar) return Value::of(ipow_scalar(*v.scalar, n));
            return Value::of(power(*v.op, static_cast<unsigned>(n)));
        }
        case OpExpr::Kind::Compose: {
            Value a = eval(e.kids[0]);
            Value b = eval(e.kids[1]);
            return compose_values(a, b);
        }
        case OpExpr::Kind::Add:
        case OpExpr::Kind::Sub: {
            Value a = eval(e.kids[0]);
            Value b = eval(e.kids[1]);
            return add_values(a, b, e.kind == OpExpr::Kind::Sub);
        }
        case OpExpr::Kind::Neg: {
            Value v = eval(e.kids[0]);
            if (v.scalar) return Value::of(-*v.scalar);
            return Value::of(-*v.op);
        }
        case OpExpr::Kind::Expect: {
            Value v = eval(e.kids[0]);
            if (v.scalar) return v;
            return Value::of(expectation(*v.op));
        }
        case OpExpr::Kind::Sum: {
            const std::int64_t lo = param(e.params[0]);
            const std::int64_t hi = param(e.params[1]);
            const auto saved = locals_.find(e.name) != locals_.end() ? std::optional(locals_[e.name]) : std::nullopt;
            Value acc = Value::of(QuadScalar(0));
            for (std::int64_t i = lo; i <= hi; ++i) {
                locals_[e.name] = i;
                acc = add_values(acc, eval(e.kids[0]), false);
            }
            if (saved)
                locals_[e.name] = *saved;
            else
                locals_.erase(e.name);
            return acc;
        }
        case OpExpr::Kind::Toeplitz: {
            if (e.name == "TV") {
                std::vector<QuadScalar> xs;
                for (const auto& t : e.scalars) xs.push_back(QuadScalar::parse(t, s));
                return Value::of(toeplitz_V(lc_arg(e.funcs[0]), xs, N));
            }
            LCSequence F;
            for (std::size_t i = 0; i + 1 < e.funcs.size(); ++i) F.terms.push_back(lc_arg(e.funcs[i]));
            F.limit = lc_arg(e.funcs.back());
            return Value::of(e.name == "TU" ? toeplitz_U(F, N) : toeplitz_W(F, N));
        }
        case OpExpr::Kind::Ref: {
            auto it = ctx_.lets.find(e.name);
            if (it == ctx_.lets.end()) throw EvalError("undefined name '$" + e.name + "'", e.offset);
            if (std::find(ref_stack_.begin(), ref_stack_.end(), e.name) != ref_stack_.end())
                throw EvalError("recursive definition of '$" + e.name + "'", e.offset);
            ref_stack_.push_back(e.name);
            Value v = eval(it->second);
            ref_stack_.pop_back();
            return v;
        }
        }
        throw EvalError("bad expression", e.offset);
    }
};

void collect_f(const FExpr& f, std::vector<std::string>& out)
{
    if (f.kind == FExpr::Kind::Var && std::find(out.begin(), out.end(), f.name) == out.end()) out.push_back(f.name);
    for (const auto& k : f.kids) collect_f(k, out);
}

}  // namespace

OpExpr parse(std::string_view text) { return Parser(text).parse_all(); }
PExpr parse_param(std::string_view text) { return Parser(text).parse_param_all(); }
FExpr parse_function(std::string_view text) { return Parser(text).parse_function_all(); }

std::string print(const OpExpr& e) { return print_op(e, 0, true); }
std::string print(const PExpr& e) { return print_p(e, 0); }

std::string print(const FExpr& f)
{
    switch (f.kind) {
    case FExpr::Kind::Var: return f.name;
    case FExpr::Kind::One: return "one";
    case FExpr::Kind::Zero: return "zero";
    case FExpr::Kind::Chi: return "chi" + print_params(f.params);
    case FExpr::Kind::Ind: return "ind" + print_params(f.params);
    case FExpr::Kind::Literal: return "{" + std::to_string(f.level) + ":[" + join(f.values, ", ") + "]}";
    case FExpr::Kind::Map: return f.name + "(" + print(f.kids[0]) + ")";
    }
    return "?";
}

void collect_random_vars(const OpExpr& e, std::vector<std::string>& out, const std::map<std::string, OpExpr>* lets)
{
    for (const auto& f : e.funcs) collect_f(f, out);
    for (const auto& k : e.kids) collect_random_vars(k, out, lets);
    if (e.kind == OpExpr::Kind::Ref && lets != nullptr)
        if (auto it = lets->find(e.name); it != lets->end()) collect_random_vars(it->second, out, nullptr);
}

std::int64_t eval_param(const PExpr& e, const EvalContext& ctx) { return Evaluator(ctx).param(e); }

std::variant<LCFunction, TreeFunction> eval_function(const FExpr& e, const EvalContext& ctx)
{
    return Evaluator(ctx).function(e);
}

SparseOperator eval(const OpExpr& e, const EvalContext& ctx)
{
    Evaluator ev(ctx);
    return ev.to_operator(ev.eval(e));
}

SparseOperator eval(std::string_view text, unsigned s, unsigned N)
{
    EvalContext ctx;
    ctx.s = s;
    ctx.N = N;
    return eval(parse(text), ctx);
}

CheckReport check(const OpExpr& lhs, const OpExpr& rhs, const EvalContext& ctx)
{
    const SparseOperator a = eval(lhs, ctx);
    const SparseOperator b = eval(rhs, ctx);
    CheckReport rep;
    rep.window = std::min(a.reliable(), b.reliable());
    if (rep.window < 0) throw EmptyWindow("no common reliable window");
    rep.first_discrepancy = first_discrepancy(a, b, rep.window);
    rep.equal = !rep.first_discrepancy.has_value();
    return rep;
}

CheckReport check(std::string_view lhs, std::string_view rhs, unsigned s, unsigned N)
{
    EvalContext ctx;
    ctx.s = s;
    ctx.N = N;
    return check(parse(lhs), parse(rhs), ctx);
}

}  // namespace adiclab
