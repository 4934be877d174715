#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "adiclab/errors.hpp"
#include "adiclab/expr.hpp"
#include "adiclab/grading.hpp"
#include "adiclab/io.hpp"
#include "adiclab/ktheory.hpp"
#include "adiclab/manifest.hpp"
#include "adiclab/relations.hpp"
#include "adiclab/shifts.hpp"

using namespace adiclab;
namespace fs = std::filesystem;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Session {
    unsigned s = 2;
    unsigned depth = 6;
    std::uint64_t seed = 1;
    std::size_t samples = 20;
    std::string out;
    std::string emit;
    bool as_float = false;
};

void validate(const Session& ss)
{
    if (ss.s < 2) throw ConfigError("--s must be >= 2");
    if (ss.depth < 2) throw ConfigError("--depth must be >= 2 (shift relations need a nonempty window)");
}

std::optional<fs::path> out_dir(const Session& ss)
{
    std::string dir = ss.out;
    if (dir.empty())
        if (const char* env = std::getenv("ADICLAB_OUT")) dir = env;
    if (dir.empty()) return std::nullopt;
    fs::create_directories(dir);
    return fs::path(dir);
}

// Writes `text` to <out>/<name> when an output directory is configured,
// otherwise to stdout.
void emit_text(const Session& ss, const std::string& name, const std::string& text)
{
    if (auto dir = out_dir(ss)) {
        const fs::path p = *dir / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + p.string());
        f << text;
        std::cout << "wrote " << p.string() << "\n";
    } else {
        std::cout << text;
    }
}

std::string summary(const std::string& suite, const std::vector<RelationResult>& rs)
{
    std::size_t ok = 0;
    for (const auto& r : rs) ok += r.passed ? 1 : 0;
    std::ostringstream os;
    os << suite << ": " << ok << "/" << rs.size() << " passed\n";
    for (const auto& r : rs) {
        if (r.passed) continue;
        os << "  FAIL " << (r.line ? "line " + std::to_string(r.line) + " " : "") << r.id;
        if (r.witness)
            os << " at " << r.witness->binding << " row " << r.witness->row << " col " << r.witness->col << ": "
               << r.witness->lhs << " vs " << r.witness->rhs;
        if (!r.error.empty()) os << " (" << r.error << ")";
        os << "\n";
    }
    return os.str();
}

bool all_passed(const std::vector<RelationResult>& rs)
{
    return std::all_of(rs.begin(), rs.end(), [](const RelationResult& r) { return r.passed; });
}

int run_verify(const Session& ss, const std::vector<std::string>& suites, bool all)
{
    validate(ss);
    CatalogConfig cfg{ss.s, ss.depth, ss.seed, ss.samples};
    std::vector<std::pair<std::string, std::vector<RelationResult>>> reports;
    if (all || suites.empty()) reports.emplace_back("catalog", run_catalog(cfg));
    for (const auto& path : suites) reports.emplace_back(fs::path(path).filename().string(), run_manifest(load_manifest(path), cfg));

    bool ok = true;
    const bool to_files = out_dir(ss).has_value();
    for (const auto& [name, rs] : reports) {
        ok = ok && all_passed(rs);
        const std::string json = dump(report_json(ReportHeader{name, ss.s, ss.depth, ss.seed, ss.samples}, rs));
        if (to_files) {
            emit_text(ss, name + ".report.json", json);
            std::cout << summary(name, rs);
        } else {
            std::cout << json;
        }
    }
    return ok ? kPass : kFail;
}

std::string operator_listing(const SparseOperator& a)
{
    std::ostringstream os;
    os << "s=" << a.space().s() << " depth=" << a.depth() << " reliable=" << a.reliable() << " raise=" << a.raise_min()
       << ".." << a.raise_max() << " nnz(window)=";
    std::size_t nnz = 0;
    std::ostringstream body;
    for (std::size_t c = 0; c < a.space().size(); ++c) {
        if (static_cast<int>(a.space().level(c)) > a.reliable()) continue;
        for (const auto& e : a.column(c)) {
            ++nnz;
            body << a.space().key(c).str() << " -> " << a.space().key(e.row).str() << " : " << e.value.str() << "\n";
        }
    }
    os << nnz << "\n" << body.str();
    return os.str();
}

int run_eval(const Session& ss, const std::string& text)
{
    validate(ss);
    const SparseOperator a = eval(text, ss.s, ss.depth);
    if (ss.emit == "mm") {
        std::ostringstream os;
        write_matrix_market(os, a, ss.as_float);
        emit_text(ss, "eval.mtx", os.str());
    } else if (ss.emit == "json") {
        emit_text(ss, "eval.json", dump(operator_json(a, ss.as_float)));
    } else {
        emit_text(ss, "eval.txt", operator_listing(a));
    }
    return kPass;
}

int run_check(const Session& ss, const std::string& lhs, const std::string& rhs)
{
    validate(ss);
    const CheckReport rep = check(lhs, rhs, ss.s, ss.depth);
    if (rep.equal) {
        std::cout << "equal on window " << rep.window << "\n";
        return kPass;
    }
    const auto& d = *rep.first_discrepancy;
    std::cout << "differ on window " << rep.window << ": row " << d.row.str() << " col " << d.col.str() << ": "
              << d.lhs.str() << " vs " << d.rhs.str() << "\n";
    return kFail;
}

// {n: operator-export} for the coefficients a_n of `text`, |n| <= degree,
// skipping those whose window is empty.
int emit_coefficients(const Session& ss, const std::string& text, char kind, unsigned degree)
{
    const SparseOperator J = make_shift(shift_from_symbol(kind), ss.s, ss.depth);
    const SparseOperator x = eval(text, ss.s, ss.depth);
    nlohmann::json out = nlohmann::json::object();
    for (int n = -static_cast<int>(degree); n <= static_cast<int>(degree); ++n) {
        try {
            out[std::to_string(n)] = operator_json(fourier_coeff(x, J, n), ss.as_float);
        } catch (const EmptyWindow&) {
        }
    }
    emit_text(ss, "fourier.json", dump(out));
    return kPass;
}

int run_fourier(const Session& ss, const std::string& kinds, std::size_t count, unsigned degree, const std::string& text)
{
    validate(ss);
    if (!text.empty()) {
        if (kinds.size() != 1) throw ConfigError("--expr needs a single --kinds letter");
        return emit_coefficients(ss, text, kinds[0], degree);
    }
    std::vector<RelationResult> rs;
    for (char c : kinds) rs.push_back(check_fourier(shift_from_symbol(c), ss.s, ss.depth, ss.seed, count, degree));
    std::cout << summary("fourier", rs);
    return all_passed(rs) ? kPass : kFail;
}

void require_s(unsigned s)
{
    if (s < 2) throw ConfigError("--s must be >= 2");
}

int run_phi(const Session& ss, unsigned n)
{
    require_s(ss.s);
    const IntMatrix m = phi_matrix(ss.s, n);
    const std::string stem = "phi_s" + std::to_string(ss.s) + "_n" + std::to_string(n);
    if (ss.emit == "csv")
        emit_text(ss, stem + ".csv", matrix_csv(m));
    else if (ss.emit.empty() || ss.emit == "json")
        emit_text(ss, stem + ".json", dump(matrix_json(m)));
    else
        throw ConfigError("phi emits json or csv");
    return kPass;
}

int run_oracle_check(const Session& ss, unsigned n)
{
    require_s(ss.s);
    const std::size_t dim = ipow(ss.s, n);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        const KClass v = KClass::basis(ss.s, n, i);
        if (rewrite_oracle(v) == apply_phi(v)) ++agree;
        else std::cout << "basis class " << i << ": oracle and closed form differ\n";
    }
    // Weight sanity: shifted P_0 copies made from [M_(n,0)] against the weights
    // in the k column and the closed count sum_l l s^n.
    OracleStats stats;
    rewrite_oracle(KClass::basis(ss.s, n, dim - 1), &stats);
    const IntMatrix m = phi_matrix(ss.s, n);
    mpz_class weights = 0;
    for (std::size_t i = 0; i + 1 < m.rows(); ++i) weights += m(i, dim - 1);
    mpz_class closed = 0;
    for (unsigned l = 1; l < ss.s; ++l) closed += mpz_class(l) * mpz_class(static_cast<unsigned long>(dim));
    const bool weights_ok = weights == mpz_class(static_cast<unsigned long>(stats.shifted_terms)) && weights == closed;
    std::cout << "oracle-check s=" << ss.s << " n=" << n << ": " << agree << "/" << dim
              << " basis classes agree; shifted terms " << stats.shifted_terms << ", weight sum " << weights.get_str()
              << ", closed count " << closed.get_str() << "\n";
    return agree == dim && weights_ok ? kPass : kFail;
}

nlohmann::json factors_json(const std::vector<mpz_class>& f)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& d : f) out.push_back(d.get_str());
    return out;
}

int run_snf(const Session& ss, unsigned n, bool upto)
{
    require_s(ss.s);
    nlohmann::json results = nlohmann::json::array();
    for (unsigned k = upto ? 0 : n; k <= n; ++k) {
        const IntMatrix m = phi_matrix(ss.s, k);
        const auto f = snf(m);
        const bool unit = f.size() == m.cols() && std::all_of(f.begin(), f.end(), [](const mpz_class& d) { return d == 1; });
        results.push_back({{"n", k}, {"rows", m.rows()}, {"cols", m.cols()}, {"invariant_factors", factors_json(f)},
                           {"all_one", unit}});
    }
    emit_text(ss, "snf_s" + std::to_string(ss.s) + "_n" + std::to_string(n) + ".json",
              dump({{"s", ss.s}, {"results", std::move(results)}}));
    return kPass;
}

int run_limit_sample(const Session& ss, unsigned from, unsigned to)
{
    require_s(ss.s);
    if (to <= from) throw ConfigError("--to must exceed --from");
    const IntMatrix m = compose_phi(ss.s, from, to);
    // The k row scales by s^(to - from) and touches nothing else.
    const mpz_class scale = mpz_class(static_cast<unsigned long>(ipow(ss.s, to - from)));
    bool quotient_ok = true;
    for (std::size_t j = 0; j < m.cols(); ++j)
        quotient_ok = quotient_ok && m(m.rows() - 1, j) == (j + 1 == m.cols() ? scale : mpz_class(0));
    const nlohmann::json j = {{"s", ss.s},
                              {"from", from},
                              {"to", to},
                              {"matrix", matrix_json(m)},
                              {"invariant_factors", factors_json(snf(m))},
                              {"quotient_scale", scale.get_str()},
                              {"quotient_ok", quotient_ok}};
    emit_text(ss, "limit_s" + std::to_string(ss.s) + "_" + std::to_string(from) + "_" + std::to_string(to) + ".json", dump(j));
    return quotient_ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"adiclab: exact shift operators on the s-adic tree"};
    app.require_subcommand(1);
    Session ss;

    auto add_common = [&](CLI::App* sub, bool with_depth) {
        sub->add_option("--s", ss.s, "base s >= 2")->capture_default_str();
        if (with_depth) sub->add_option("--depth", ss.depth, "truncation depth N >= 2")->capture_default_str();
        sub->add_option("--out", ss.out, "output directory (default $ADICLAB_OUT, else stdout)");
    };

    std::vector<std::string> suites;
    bool all = false;
    auto* verify = app.add_subcommand("verify", "run the relation catalog and/or manifest suites");
    add_common(verify, true);
    verify->add_option("--suite", suites, "manifest file (repeatable)");
    verify->add_flag("--all", all, "run the programmatic catalog");
    verify->add_option("--seed", ss.seed, "seed for random functions")->capture_default_str();
    verify->add_option("--samples", ss.samples, "random samples per relation")->capture_default_str();

    std::string expr;
    auto* evalc = app.add_subcommand("eval", "evaluate an operator expression");
    add_common(evalc, true);
    evalc->add_option("--expr", expr, "expression")->required();
    evalc->add_option("--emit,--export", ss.emit, "mm or json (default: text listing)")
        ->check(CLI::IsMember({"mm", "json", "text"}));
    evalc->add_flag("--float", ss.as_float, "write floating-point values");

    std::string lhs, rhs;
    auto* checkc = app.add_subcommand("check", "compare two expressions on their common window");
    add_common(checkc, true);
    checkc->add_option("--lhs", lhs)->required();
    checkc->add_option("--rhs", rhs)->required();

    std::string kinds = "UVSW";
    std::size_t count = 50;
    unsigned degree = 3;
    unsigned fourier_depth = 10;
    auto* fourier = app.add_subcommand("fourier", "Fourier round trip of random normalized polynomials");
    add_common(fourier, false);
    fourier->add_option("--depth", fourier_depth, "truncation depth; degree d leaves a window of depth - 2d")
        ->capture_default_str();
    fourier->add_option("--kinds", kinds, "shift kinds among U V S W")->capture_default_str();
    fourier->add_option("--count", count)->capture_default_str();
    fourier->add_option("--degree", degree)->capture_default_str();
    fourier->add_option("--seed", ss.seed)->capture_default_str();
    fourier->add_option("--expr", expr, "emit the coefficients a_n of this expression instead");
    fourier->add_flag("--float", ss.as_float, "write floating-point values");

    unsigned n = 1;
    auto* phi = app.add_subcommand("phi", "matrix of the connecting map phi_n");
    add_common(phi, false);
    phi->add_option("--n", n)->capture_default_str();
    phi->add_option("--emit", ss.emit, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* oracle = app.add_subcommand("oracle-check", "rewrite oracle against the closed form on basis classes");
    add_common(oracle, false);
    oracle->add_option("--n", n)->capture_default_str();

    bool upto = false;
    auto* snfc = app.add_subcommand("snf", "Smith invariant factors of phi_n");
    add_common(snfc, false);
    snfc->add_option("--n", n)->capture_default_str();
    snfc->add_flag("--upto", upto, "every n' from 0 to n");

    unsigned from = 1, to = 2;
    auto* limit = app.add_subcommand("limit-sample", "composite phi_(to-1) ... phi_from");
    add_common(limit, false);
    limit->add_option("--from", from)->capture_default_str();
    limit->add_option("--to", to)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*verify) return run_verify(ss, suites, all);
        if (*evalc) return run_eval(ss, expr);
        if (*checkc) return run_check(ss, lhs, rhs);
        if (*fourier) {
            ss.depth = fourier_depth;
            return run_fourier(ss, kinds, count, degree, expr);
        }
        if (*phi) return run_phi(ss, n);
        if (*oracle) return run_oracle_check(ss, n);
        if (*snfc) return run_snf(ss, n, upto);
        if (*limit) return run_limit_sample(ss, from, to);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const ExprError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
