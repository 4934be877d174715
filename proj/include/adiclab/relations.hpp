#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adiclab/operator.hpp"
#include "adiclab/sadic.hpp"
#include "adiclab/shifts.hpp"

namespace adiclab {

struct Witness {
    std::string row;
    std::string col;
    std::string lhs;
    std::string rhs;
    std::string binding;
};

// Verdict of one relation family (catalog) or one manifest line.
struct RelationResult {
    std::string id;
    std::string description;
    std::size_t line = 0;  // manifest line number, 0 for the catalog
    bool expect_equal = true;
    bool passed = false;
    int window = -1;  // smallest comparison window used
    std::size_t bindings = 0;
    std::optional<Witness> witness;
    std::string error;
};

// Seeded functions shared by the catalog and the manifest: f, g, h read
// lc[r], lc[r+1], lc[r+2] and F, G read trees[r], trees[r+1] (cyclically).
struct RandomData {
    std::vector<LCFunction> lc;
    std::vector<TreeFunction> trees;  // depth N + 1
};
RandomData make_random_data(unsigned s, unsigned depth, std::uint64_t seed, std::size_t samples);

struct CatalogConfig {
    unsigned s = 2;
    unsigned depth = 6;
    std::uint64_t seed = 1;
    std::size_t samples = 20;
    std::int64_t grid_K = 5;
    unsigned grid_L = 5;
};

struct FamilyInfo {
    std::string id;
    std::string description;
    bool declarative = true;  // also expressed in the manifest
};

const std::vector<FamilyInfo>& catalog_families();

// Runs the listed families (all when `only` is empty) in parallel; results
// come back in catalog order.
std::vector<RelationResult> run_catalog(const CatalogConfig& cfg, const std::vector<std::string>& only = {});

// Standalone checks, also reachable through the catalog.
RelationResult check_isometry(ShiftKind kind, unsigned s, unsigned N);
// `count` random normalized polynomials of degree <= max_degree in J, J*;
// every coefficient must come back from fourier_coeff exactly. Degree d
// leaves a window of N - 2d.
RelationResult check_fourier(ShiftKind kind, unsigned s, unsigned N, std::uint64_t seed, std::size_t count,
                             unsigned max_degree = 3);
// calU* calU = I and calU calM_F calU* = calM_{alpha~ F} on the grid.
RelationResult check_altrep(std::int64_t K, unsigned L, unsigned s, std::uint64_t seed, std::size_t count);

// Level-n polynomial coefficient generators of the coefficient algebra of J,
// built from the sample functions (index 0 is the multiplication operator).
std::vector<SparseOperator> coefficient_generators(ShiftKind kind, unsigned N, const LCFunction& f,
                                                   const TreeFunction& F);

}  // namespace adiclab
