#include "adiclab/io.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace adiclab {

namespace {

std::string float_text(const QuadScalar& v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.to_double());
    return buf;
}

template <class Fn>
void for_each_reliable_entry(const SparseOperator& a, Fn fn)
{
    const auto& sp = a.space();
    for (std::size_t c = 0; c < sp.size(); ++c) {
        if (static_cast<int>(sp.level(c)) > a.reliable()) continue;
        for (const auto& e : a.column(c)) fn(e.row, c, e.value);
    }
}

}  // namespace

void write_matrix_market(std::ostream& os, const SparseOperator& a, bool as_float)
{
    std::size_t nnz = 0;
    for_each_reliable_entry(a, [&](std::size_t, std::size_t, const QuadScalar&) { ++nnz; });
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << "% s=" << a.space().s() << " depth=" << a.depth() << " reliable=" << a.reliable()
       << " raise=" << a.raise_min() << ".." << a.raise_max() << "\n";
    os << "% index(n,x) = (s^n - 1)/(s - 1) + x + 1\n";
    if (!as_float) os << "% exact values in Q(sqrt(" << a.space().s() << "))\n";
    os << a.space().size() << " " << a.space().size() << " " << nnz << "\n";
    for_each_reliable_entry(a, [&](std::size_t r, std::size_t c, const QuadScalar& v) {
        os << r + 1 << " " << c + 1 << " " << (as_float ? float_text(v) : v.str()) << "\n";
    });
}

nlohmann::json operator_json(const SparseOperator& a, bool as_float)
{
    nlohmann::json entries = nlohmann::json::array();
    for_each_reliable_entry(a, [&](std::size_t r, std::size_t c, const QuadScalar& v) {
        entries.push_back({r, c, as_float ? float_text(v) : v.str()});
    });
    return {{"s", a.space().s()},
            {"depth", a.depth()},
            {"reliable", a.reliable()},
            {"raise_min", a.raise_min()},
            {"raise_max", a.raise_max()},
            {"entries", std::move(entries)}};
}

nlohmann::json function_json(const LCFunction& f)
{
    nlohmann::json values = nlohmann::json::array();
    for (std::uint64_t x = 0; x < ipow(f.s(), f.level()); ++x) values.push_back(f(x).str());
    return {{"s", f.s()}, {"level", f.level()}, {"values", std::move(values)}};
}

nlohmann::json function_json(const TreeFunction& F)
{
    nlohmann::json values = nlohmann::json::array();
    for (unsigned n = 0; n <= F.depth(); ++n)
        for (std::uint64_t x = 0; x < ipow(F.s(), n); ++x) values.push_back(F(Ball{n, x}).str());
    return {{"s", F.s()}, {"depth", F.depth()}, {"values", std::move(values)}};
}

nlohmann::json matrix_json(const IntMatrix& m)
{
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (sgn(m(i, j)) != 0) entries.push_back({i, j, m(i, j).get_str()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

std::string matrix_csv(const IntMatrix& m)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j).get_str();
        os << "\n";
    }
    return os.str();
}

nlohmann::json witness_json(const Witness& w)
{
    return {{"row", w.row}, {"col", w.col}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"binding", w.binding}};
}

nlohmann::json report_json(const ReportHeader& h, const std::vector<RelationResult>& results)
{
    nlohmann::json failed = nlohmann::json::array();
    nlohmann::json all = nlohmann::json::array();
    std::size_t passed = 0;
    for (const auto& r : results) {
        nlohmann::json item = {{"id", r.id},
                               {"relation", r.expect_equal ? "==" : "!="},
                               {"passed", r.passed},
                               {"window", r.window},
                               {"bindings", r.bindings}};
        if (r.line != 0) item["line"] = r.line;
        if (r.witness) item["witness"] = witness_json(*r.witness);
        if (!r.error.empty()) item["error"] = r.error;
        all.push_back(item);
        if (r.passed) {
            ++passed;
        } else {
            nlohmann::json f = {{"id", r.id}, {"window", r.window}};
            if (r.line != 0) f["line"] = r.line;
            f["witness"] = r.witness ? witness_json(*r.witness) : nlohmann::json(nullptr);
            if (!r.error.empty()) f["error"] = r.error;
            failed.push_back(std::move(f));
        }
    }
    return {{"suite", h.suite},     {"s", h.s},
            {"depth", h.depth},     {"seed", h.seed},
            {"samples", h.samples}, {"passed", passed == results.size()},
            {"total", results.size()}, {"passed_count", passed},
            {"failed", std::move(failed)}, {"results", std::move(all)}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace adiclab
