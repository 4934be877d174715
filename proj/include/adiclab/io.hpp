#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "adiclab/ktheory.hpp"
#include "adiclab/operator.hpp"
#include "adiclab/relations.hpp"
#include "adiclab/sadic.hpp"

namespace adiclab {

// Matrix Market coordinate export of the reliable columns. Indices are the
// 1-based ball enumeration (level-major, center-ascending). Values are exact
// strings such as "1/2√2" unless `as_float` is set.
void write_matrix_market(std::ostream& os, const SparseOperator& a, bool as_float = false);

// {"s", "depth", "reliable", "raise_min", "raise_max", "entries": [[row, col, "v"], ...]}
// with 0-based ball indices; only reliable columns are listed.
nlohmann::json operator_json(const SparseOperator& a, bool as_float = false);

// {"s", "level", "values": ["v", ...]}
nlohmann::json function_json(const LCFunction& f);
// {"s", "depth", "values": ["v", ...]} in ball order.
nlohmann::json function_json(const TreeFunction& F);

// {"rows", "cols", "entries": [[i, j, "int"], ...]} listing nonzero entries.
nlohmann::json matrix_json(const IntMatrix& m);
// Dense, one row per line.
std::string matrix_csv(const IntMatrix& m);

nlohmann::json witness_json(const Witness& w);

struct ReportHeader {
    std::string suite;
    unsigned s = 2;
    unsigned depth = 6;
    std::uint64_t seed = 1;
    std::size_t samples = 20;
};

// {"suite", "s", "depth", "seed", "samples", "passed": bool, "total", "passed_count",
//  "failed": [{"line" | "id", "window", "witness", "error"}], "results": [...]}
nlohmann::json report_json(const ReportHeader& h, const std::vector<RelationResult>& results);

// Pretty JSON with a trailing newline; keys are sorted so output is byte-stable.
std::string dump(const nlohmann::json& j);

}  // namespace adiclab
