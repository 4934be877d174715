#include <doctest.h>

#include <random>

#include "adiclab/errors.hpp"
#include "adiclab/expr.hpp"
#include "adiclab/manifest.hpp"
#include "adiclab/shifts.hpp"

using namespace adiclab;

namespace {

const char* const kSamples[] = {
    "U* . U",
    "I - U . U*",
    "Sj(0)* . Sj(1)",
    "0",
    "M{1:[1,0]} . S",
    "M{2:[1/2,-3,1/2√2,0]} + 2 . I",
    "-U . U* + I",
    "U^3 . U*^(N-1)",
    "P(2) . PV(1) . PT(1,2) . CP(1) . Sw(2,3) . MU(1,0,2,3)",
    "M(aU(bU(f))) . MT(aW(F)) . M(chi(1)) . M(ind(2,x+1))",
    "sum(i=0..s-1; U^i . P(0) . U*^i)",
    "TU(f, g; h) + TW(f; zero) + TV(f; 1, 2, -1)",
    "E(U . M(f) . U* + U . U)",
    "val(f, 0) . delta(j, k) . √s . PV(n)",
    "(U + V)* . (S - W)",
    "-1/3 . (U . V)^2",
    "$a . U",
};

std::string random_expr(std::mt19937_64& g, int depth)
{
    static const char* const atoms[] = {"U", "V", "S", "W", "I", "0", "P(1)", "PV(0)", "Sj(1)", "CP(0)", "M(f)",
                                        "M{1:[2,-1]}", "1/2", "√s", "MT(F)", "PT(0,1)"};
    if (depth == 0 || g() % 4 == 0) return atoms[g() % std::size(atoms)];
    switch (g() % 6) {
    case 0: return random_expr(g, depth - 1) + " + " + random_expr(g, depth - 1);
    case 1: return random_expr(g, depth - 1) + " - " + random_expr(g, depth - 1);
    case 2: return random_expr(g, depth - 1) + " . " + random_expr(g, depth - 1);
    case 3: return "(" + random_expr(g, depth - 1) + ")*";
    case 4: return "(" + random_expr(g, depth - 1) + ")^" + std::to_string(g() % 3);
    default: return "E(" + random_expr(g, depth - 1) + ")";
    }
}

EvalContext context(unsigned s, unsigned N)
{
    EvalContext ctx;
    ctx.s = s;
    ctx.N = N;
    const RandomData data = make_random_data(s, N, 1, 3);
    ctx.lc = data.lc;
    ctx.trees = data.trees;
    return ctx;
}

}  // namespace

TEST_CASE("parse builds the expected trees")
{
    const OpExpr a = parse("U* . U");
    REQUIRE(a.kind == OpExpr::Kind::Compose);
    REQUIRE(a.kids.size() == 2);
    CHECK(a.kids[0].kind == OpExpr::Kind::Adjoint);
    CHECK(a.kids[0].kids[0].kind == OpExpr::Kind::Shift);
    CHECK(a.kids[0].kids[0].name == "U");
    CHECK(a.kids[1].name == "U");

    const OpExpr b = parse("I - U . U*");
    REQUIRE(b.kind == OpExpr::Kind::Sub);
    CHECK(b.kids[0].kind == OpExpr::Kind::Identity);
    CHECK(b.kids[1].kind == OpExpr::Kind::Compose);
    CHECK(b.kids[1].kids[1].kind == OpExpr::Kind::Adjoint);

    const OpExpr c = parse("Sj(0)* . Sj(1)");
    REQUIRE(c.kind == OpExpr::Kind::Compose);
    CHECK(c.kids[0].kind == OpExpr::Kind::Adjoint);
    CHECK(c.kids[0].kids[0].kind == OpExpr::Kind::Atom);
    CHECK(c.kids[0].kids[0].name == "Sj");
    CHECK(c.kids[1].name == "Sj");

    CHECK(parse("  U*.U ") == a);
}

TEST_CASE("print and parse round-trip")
{
    for (const char* t : kSamples) {
        const OpExpr e = parse(t);
        CHECK_MESSAGE(parse(print(e)) == e, t << " -> " << print(e));
        CHECK(print(parse(print(e))) == print(e));
    }
    std::mt19937_64 g(31);
    for (int i = 0; i < 500; ++i) {
        const std::string t = random_expr(g, 4);
        const OpExpr e = parse(t);
        CHECK_MESSAGE(parse(print(e)) == e, t << " -> " << print(e));
    }
    const PExpr p = parse_param("2*(n-1)+s^2 % 3");
    CHECK(parse_param(print(p)) == p);
    const FExpr f = parse_function("aU({1:[1,-1/2]})");
    CHECK(parse_function(print(f)) == f);
}

TEST_CASE("syntax and arity errors carry offsets")
{
    try {
        parse("U . . V");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse("U +"), SyntaxError);
    CHECK_THROWS_AS(parse("(U"), SyntaxError);
    CHECK_THROWS_AS(parse("U U"), SyntaxError);
    CHECK_THROWS_AS(parse("P(1, 2)"), ArityError);
    CHECK_THROWS_AS(parse("MU(1)"), ArityError);
    CHECK_THROWS_AS(parse("Q"), SyntaxError);
}

TEST_CASE("evaluation examples")
{
    const SparseOperator a = eval("I - U . U*", 2, 4);
    CHECK(equals_on_window(a, make_P(0, 2, 4), a.reliable()));
    const SparseOperator b = eval("Sj(0)* . Sj(0)", 2, 4);
    CHECK(equals_on_window(b, make_identity(2, 4), b.reliable()));
    CHECK(eval("0", 3, 3).nnz() == 0);
    const SparseOperator w = eval("W^2", 2, 4);
    CHECK(w.reliable() == 2);
    CHECK(equals_on_window(eval("√s . √s", 3, 2), scalar_mul(QuadScalar(3), make_identity(3, 2)), 2));
}

TEST_CASE("evaluation errors")
{
    CHECK_THROWS_AS(eval("Sj(2)", 2, 4), ExprError);
    CHECK_THROWS_AS(eval("M(f)", 2, 4), ExprError);
    CHECK_THROWS_AS(eval("$nope", 2, 4), ExprError);
    CHECK_THROWS_AS(eval("U^9", 2, 4), EmptyWindow);
    CHECK_THROWS_AS(eval("M{1:[1,2,3]}", 2, 4), ExprError);
}

TEST_CASE("check examples")
{
    const CheckReport a = check("U* . U", "I", 2, 5);
    CHECK(a.equal);
    CHECK(a.window == 4);
    const CheckReport b = check("M{1:[1,0]} . S", "S . M{1:[1,0]}", 2, 5);
    CHECK_FALSE(b.equal);
    REQUIRE(b.first_discrepancy.has_value());
    CHECK(b.first_discrepancy->lhs != b.first_discrepancy->rhs);
    CHECK(check("0", "0", 2, 3).equal);
    CHECK_THROWS_AS(check("U^3", "I", 2, 2), EmptyWindow);
}

TEST_CASE("random-function variables and contexts")
{
    EvalContext ctx = context(2, 4);
    const OpExpr e = parse("M(f) . U . M(g)");
    std::vector<std::string> vars;
    collect_random_vars(e, vars);
    CHECK(vars == std::vector<std::string>{"f", "g"});
    ctx.r = 1;
    const SparseOperator x = eval(e, ctx);
    CHECK(equals_on_window(x, eval(parse("M(f) . U . M(g)"), ctx), x.reliable()));
    ctx.vars["n"] = 2;
    CHECK(eval_param(parse_param("n*s+1"), ctx) == 5);
}

TEST_CASE("manifest parsing")
{
    const Manifest m = parse_manifest(
        "# comment\n"
        "let $a = U . U*\n"
        "\n"
        "$a == I - P(0)  # [fam.one] first\n"
        "forall n=0..N-2, m=0..1: P(n) . P(m) == delta(n,m) . P(n)  # [fam.two] second\n"
        "M{1:[1,0]} . S != S . M{1:[1,0]}  # [fam.neg]\n");
    CHECK(m.lets.size() == 1);
    REQUIRE(m.lines.size() == 3);
    CHECK(m.lines[0].line == 4);
    CHECK(m.lines[0].family == "fam.one");
    CHECK(m.lines[0].description == "first");
    CHECK(m.lines[1].vars.size() == 2);
    CHECK_FALSE(m.lines[2].expect_equal);
    const auto results = run_manifest(m, CatalogConfig{2, 5, 1, 4});
    for (const auto& r : results) CHECK_MESSAGE(r.passed, r.id);
    REQUIRE(results[2].witness.has_value());
}

TEST_CASE("manifest errors name the line")
{
    auto message = [](const std::string& text) {
        try {
            parse_manifest(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("U == I\n").rfind("line 1:", 0) == 0);
    CHECK(message("\nU . == I  # [x]\n").rfind("line 2:", 0) == 0);
    CHECK(message("U I  # [x]\n").find("exactly one") != std::string::npos);
    CHECK(message("U == I == I  # [x]\n").find("line 1") == 0);
    CHECK(message("forall n=0: U == I  # [x]\n").find("lo..hi") != std::string::npos);
    CHECK(message("forall s=0..1: U == I  # [x]\n").find("reserved") != std::string::npos);
    CHECK(message("let $a = U\nlet $a = V\n").rfind("line 2:", 0) == 0);
    CHECK(message("U == I  # [x\n").find("unterminated") != std::string::npos);
    CHECK_THROWS_AS(load_manifest("/nonexistent/relations.txt"), ConfigError);
}

TEST_CASE("failing manifest lines report a witness or an error")
{
    const Manifest m = parse_manifest("U . U* == I  # [bad.eq]\nU* . U != I  # [bad.ne]\nU^9 == I  # [bad.window]\n");
    const auto r = run_manifest(m, CatalogConfig{2, 4, 1, 2});
    CHECK_FALSE(r[0].passed);
    REQUIRE(r[0].witness.has_value());
    CHECK(r[0].witness->col == "(0,0)");
    CHECK_FALSE(r[1].passed);
    CHECK_FALSE(r[1].witness.has_value());
    CHECK_FALSE(r[2].passed);
    CHECK_FALSE(r[2].error.empty());
}

TEST_CASE("shipped manifest reproduces the catalog verdicts")
{
    const Manifest m = load_manifest(ADICLAB_SUITE_DIR "/relations.txt");
    const CatalogConfig cfg{2, 6, 1, 20};
    const auto manifest = family_verdicts(run_manifest(m, cfg));
    std::map<std::string, bool> catalog;
    for (const auto& r : run_catalog(cfg)) catalog[r.id] = r.passed;
    for (const auto& f : catalog_families()) {
        if (!f.declarative) {
            CHECK_MESSAGE(manifest.count(f.id) == 0, f.id);
            continue;
        }
        REQUIRE_MESSAGE(manifest.count(f.id) == 1, "family missing from the manifest: " << f.id);
        CHECK_MESSAGE(manifest.at(f.id) == catalog.at(f.id), f.id);
        CHECK(manifest.at(f.id));
    }
    for (const auto& [id, ok] : manifest) CHECK_MESSAGE(catalog.count(id) == 1, "unknown family " << id);
}
