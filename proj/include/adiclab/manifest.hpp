#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "adiclab/expr.hpp"
#include "adiclab/relations.hpp"

namespace adiclab {

struct ManifestVar {
    std::string name;
    PExpr lo;
    PExpr hi;
};

// One relation line:
//   [forall v=lo..hi, w=lo..hi:] lhs == rhs   # [family.id] description
//   [forall ...:] lhs != rhs                  # [family.id] description
// `==` passes when every binding agrees on the window, `!=` when some
// binding produces a witness. Lines reading f g h F G run once per sample.
struct ManifestLine {
    std::size_t line = 0;
    std::vector<ManifestVar> vars;
    OpExpr lhs;
    OpExpr rhs;
    bool expect_equal = true;
    std::string family;
    std::string description;
    std::string text;
};

// Definitions `let $name = expr` are visible to every relation line.
struct Manifest {
    std::map<std::string, OpExpr> lets;
    std::vector<ManifestLine> lines;
};

Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::string& path);

// Runs every line with the catalog's seeded random data; results come back in
// file order.
std::vector<RelationResult> run_manifest(const Manifest& m, const CatalogConfig& cfg);

// Family id -> verdict, a family passing when all of its lines pass.
std::map<std::string, bool> family_verdicts(const std::vector<RelationResult>& results);

}  // namespace adiclab
