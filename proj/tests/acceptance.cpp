#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "adiclab/io.hpp"
#include "adiclab/ktheory.hpp"
#include "adiclab/manifest.hpp"
#include "adiclab/relations.hpp"
#include "adiclab/shifts.hpp"

using namespace adiclab;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

bool run(int id, const char* name, double budget, const std::function<Outcome()>& fn)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < budget;
    const bool ok = o.passed && in_time;
    std::printf("criterion %d %s: %s (%.1f s of %.0f s) %s%s\n", id, name, ok ? "PASS" : "FAIL", secs, budget,
                o.detail.c_str(), in_time ? "" : " [over time budget]");
    std::fflush(stdout);
    return ok;
}

Outcome isometries()
{
    Outcome o;
    int n = 0;
    for (unsigned s : {2u, 3u, 4u})
        for (ShiftKind k : kAllShiftKinds) {
            const RelationResult r = check_isometry(k, s, 6);
            ++n;
            if (!r.passed) {
                o.passed = false;
                o.detail += " " + r.id + "@s=" + std::to_string(s);
            }
        }
    o.detail = std::to_string(n) + " checks at depth 6" + o.detail;
    return o;
}

Outcome catalog()
{
    Outcome o;
    std::size_t total = 0, witnesses = 0;
    for (unsigned s : {2u, 3u, 4u}) {
        for (const auto& r : run_catalog(CatalogConfig{s, 6, 1, 20})) {
            ++total;
            if (!r.expect_equal && r.witness) ++witnesses;
            if (!r.passed || (!r.expect_equal && !r.witness)) {
                o.passed = false;
                o.detail += " " + r.id + "@s=" + std::to_string(s);
            }
        }
    }
    o.detail = std::to_string(total) + " family verdicts over s=2,3,4, depth 6, 20 samples; " +
               std::to_string(witnesses) + " non-identity witnesses" + o.detail;
    return o;
}

Outcome fourier()
{
    Outcome o;
    for (ShiftKind k : kAllShiftKinds) {
        const RelationResult r = check_fourier(k, 2, 10, 1, 50, 3);
        if (!r.passed) {
            o.passed = false;
            o.detail += " " + r.id + (r.error.empty() ? "" : " (" + r.error + ")");
        }
    }
    o.detail = "4 kinds x 50 polynomials of degree <= 3, s=2, depth 10" + o.detail;
    return o;
}

Outcome ktheory()
{
    Outcome o;
    IntMatrix hand(4, 2);
    hand(0, 0) = 1, hand(0, 1) = 1, hand(1, 1) = 1, hand(2, 0) = 1, hand(3, 1) = 2;
    if (!(phi_matrix(2, 1) == hand)) {
        o.passed = false;
        o.detail += " phi(2,1)";
    }
    for (unsigned s : {2u, 3u})
        for (unsigned n : {1u, 2u})
            for (std::size_t i = 0; i < ipow(s, n); ++i) {
                const KClass v = KClass::basis(s, n, i);
                if (!(rewrite_oracle(v) == apply_phi(v))) {
                    o.passed = false;
                    o.detail += " oracle s=" + std::to_string(s) + " n=" + std::to_string(n);
                }
            }
    for (unsigned s : {2u, 3u, 4u})
        for (unsigned n : {1u, 2u}) {
            const auto f = snf(phi_matrix(s, n));
            bool unit = f.size() == ipow(s, n);
            for (const auto& d : f) unit = unit && d == 1;
            if (!unit) {
                o.passed = false;
                o.detail += " snf s=" + std::to_string(s) + " n=" + std::to_string(n);
            }
            if (!check_quotient_square(s, n)) {
                o.passed = false;
                o.detail += " quotient s=" + std::to_string(s) + " n=" + std::to_string(n);
            }
        }
    o.detail = "phi(2,1), oracle on basis classes, SNF and quotient scaling" + o.detail;
    return o;
}

Outcome altrep()
{
    const RelationResult r = check_altrep(5, 5, 2, 1, 10);
    return {r.passed, "K=L=5, s=2, 10 sequences, window " + std::to_string(r.window) + (r.error.empty() ? "" : " " + r.error)};
}

std::string reports(const Manifest& m)
{
    const CatalogConfig cfg{2, 6, 7, 20};
    const ReportHeader h{"catalog", 2, 6, 7, 20};
    ReportHeader hm = h;
    hm.suite = "relations.txt";
    return dump(report_json(h, run_catalog(cfg))) + dump(report_json(hm, run_manifest(m, cfg)));
}

Outcome determinism()
{
    const Manifest m = load_manifest(ADICLAB_SUITE_DIR "/relations.txt");
    const std::string a = reports(m), b = reports(m);
    return {a == b, "catalog and manifest reports, " + std::to_string(a.size()) + " bytes each"};
}

}  // namespace

int main()
{
    bool ok = true;
    ok &= run(1, "isometry suite", 10, isometries);
    ok &= run(2, "relation catalog", 60, catalog);
    ok &= run(3, "Fourier round trip", 30, fourier);
    ok &= run(4, "connecting maps", 30, ktheory);
    ok &= run(5, "auxiliary representation", 5, altrep);
    ok &= run(6, "deterministic reports", 60, determinism);
    return ok ? 0 : 1;
}
