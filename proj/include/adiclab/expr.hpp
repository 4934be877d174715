#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adiclab/operator.hpp"
#include "adiclab/sadic.hpp"

namespace adiclab {

// Integer parameter expression: literals, bound variables, s, N and + - * / % ^.
struct PExpr {
    enum class Kind { Int, Var, Neg, Bin };
    Kind kind = Kind::Int;
    std::int64_t value = 0;
    std::string name;  // variable name, or the operator for Bin
    std::vector<PExpr> kids;
    std::size_t offset = 0;

    friend bool operator==(const PExpr& a, const PExpr& b)
    {
        return a.kind == b.kind && a.value == b.value && a.name == b.name && a.kids == b.kids;
    }
};

// Function expression: f, g, h (random locally constant), F, G (random tree
// functions), one, zero, chi(j), ind(n,x), {level:[values]} and the maps
// aU bU aV bV aS bS aW bW lift applied to a function expression.
struct FExpr {
    enum class Kind { Var, One, Zero, Chi, Ind, Literal, Map };
    Kind kind = Kind::One;
    std::string name;
    std::vector<PExpr> params;
    std::vector<FExpr> kids;
    unsigned level = 0;
    std::vector<std::string> values;
    std::size_t offset = 0;

    friend bool operator==(const FExpr& a, const FExpr& b)
    {
        return a.kind == b.kind && a.name == b.name && a.params == b.params && a.kids == b.kids &&
               a.level == b.level && a.values == b.values;
    }
};

struct OpExpr {
    enum class Kind {
        Shift,     // U V S W
        Identity,  // I
        Atom,      // P PV PT Sj Sw CP MU with integer parameters
        Mult,      // M(fexpr) / M{...}
        MultTree,  // MT(fexpr)
        Scalar,    // literal such as 2, -1/3, 1/2√2, √s, s
        Value,     // val(fexpr, p): f(p) as a scalar
        Delta,     // delta(p, q): 1 or 0
        Adjoint,
        Power,
        Compose,
        Add,
        Sub,
        Neg,
        Expect,    // E(x)
        Sum,       // sum(i=lo..hi; body)
        Toeplitz,  // TU(terms; limit), TW(terms; limit), TV(f; x_0, x_1, ...)
        Ref,       // $name
    };
    Kind kind = Kind::Identity;
    std::string name;
    std::vector<PExpr> params;
    std::vector<FExpr> funcs;
    std::vector<std::string> scalars;
    std::vector<OpExpr> kids;
    std::size_t offset = 0;

    friend bool operator==(const OpExpr& a, const OpExpr& b)
    {
        return a.kind == b.kind && a.name == b.name && a.params == b.params && a.funcs == b.funcs &&
               a.scalars == b.scalars && a.kids == b.kids;
    }
};

// Grammar (LL(1)):
//   expr    := ['-'] term (('+' | '-') term)*
//   term    := postfix ('.' postfix)*
//   postfix := primary ('*' | '^' pfactor)*
OpExpr parse(std::string_view text);
PExpr parse_param(std::string_view text);
FExpr parse_function(std::string_view text);

// Canonical form; parse(print(e)) == e.
std::string print(const OpExpr& e);
std::string print(const PExpr& e);
std::string print(const FExpr& e);

// Collects the random-function variables (f g h F G) an expression reads.
void collect_random_vars(const OpExpr& e, std::vector<std::string>& out,
                         const std::map<std::string, OpExpr>* lets = nullptr);

struct EvalContext {
    unsigned s = 2;
    unsigned N = 4;
    std::map<std::string, std::int64_t> vars;
    std::map<std::string, OpExpr> lets;
    std::vector<LCFunction> lc;       // f, g, h read lc[r], lc[r+1], lc[r+2] (cyclically)
    std::vector<TreeFunction> trees;  // F, G read trees[r], trees[r+1]
    std::size_t r = 0;
};

std::int64_t eval_param(const PExpr& e, const EvalContext& ctx);
std::variant<LCFunction, TreeFunction> eval_function(const FExpr& e, const EvalContext& ctx);
SparseOperator eval(const OpExpr& e, const EvalContext& ctx);
SparseOperator eval(std::string_view text, unsigned s, unsigned N);

struct CheckReport {
    bool equal = false;
    int window = 0;
    std::optional<Discrepancy<TreeSpace>> first_discrepancy;
};

// Compares both sides on their common window; EmptyWindow when it is negative.
CheckReport check(const OpExpr& lhs, const OpExpr& rhs, const EvalContext& ctx);
CheckReport check(std::string_view lhs, std::string_view rhs, unsigned s, unsigned N);

}  // namespace adiclab
