#include "adiclab/relations.hpp"

#include <functional>
#include <map>

#include "adiclab/altrep.hpp"
#include "adiclab/errors.hpp"
#include "adiclab/grading.hpp"
#include "adiclab/random.hpp"

namespace adiclab {

RandomData make_random_data(unsigned s, unsigned depth, std::uint64_t seed, std::size_t samples)
{
    RandomFunctions rf(s, seed);
    RandomData d;
    const std::size_t n = std::max<std::size_t>(samples, 3);
    for (std::size_t i = 0; i < n; ++i) d.lc.push_back(rf.lc());
    for (std::size_t i = 0; i < n; ++i) d.trees.push_back(rf.tree(depth + 1));
    return d;
}

namespace {

template <class Space>
Witness make_witness(const Space& sp, const Discrepancy<Space>& d, const std::string& binding)
{
    return Witness{sp.describe(d.row), sp.describe(d.col), d.lhs.str(), d.rhs.str(), binding};
}

class FamilyRun {
public:
    FamilyRun(std::string id, std::string description, bool expect_equal)
    {
        res_.id = std::move(id);
        res_.description = std::move(description);
        res_.expect_equal = expect_equal;
        res_.passed = expect_equal;
    }

    // False once the verdict is settled, so loops can stop early.
    bool open() const { return res_.expect_equal ? res_.passed : !res_.passed; }

    template <class Space>
    void compare(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b, const std::string& binding)
    {
        if (!open()) return;
        ++res_.bindings;
        const int w = std::min(a.reliable(), b.reliable());
        if (w < 0) throw EmptyWindow("empty window at " + binding);
        res_.window = res_.window < 0 ? w : std::min(res_.window, w);
        auto d = first_discrepancy(a, b, w);
        if (d) {
            res_.witness = make_witness(a.space(), *d, binding);
            res_.passed = !res_.expect_equal;
        }
    }

    // Takes over the verdict of a standalone check.
    void absorb(const RelationResult& r)
    {
        res_.bindings += r.bindings;
        res_.window = r.window;
        res_.passed = r.passed;
        res_.witness = r.witness;
        res_.error = r.error;
    }

    void fail(const std::string& why)
    {
        res_.passed = false;
        res_.error = why;
    }

    RelationResult finish() { return res_; }

private:
    RelationResult res_;
};

// J^0..J^max, stopping early when the window runs out at small depths.
class Powers {
public:
    Powers(const SparseOperator& j, std::string name, unsigned max) : name_(std::move(name))
    {
        p_.push_back(SparseOperator::identity(j.space()));
        try {
            for (unsigned n = 1; n <= max; ++n) p_.push_back(compose(j, p_.back()));
        } catch (const EmptyWindow&) {
        }
    }

    const SparseOperator& operator[](std::size_t n) const
    {
        if (n >= p_.size())
            throw EmptyWindow(name_ + "^" + std::to_string(n) + " has an empty window at depth " +
                              std::to_string(p_.front().depth()));
        return p_[n];
    }

private:
    std::string name_;
    std::vector<SparseOperator> p_;
};

struct Ops {
    unsigned s;
    unsigned N;
    SparseOperator I;
    std::map<ShiftKind, SparseOperator> J;
    std::map<ShiftKind, SparseOperator> Jt;
    std::map<ShiftKind, Powers> Jpow;   // J^0..J^max(2, span)
    std::map<ShiftKind, Powers> Jtpow;
    RandomData data;
    std::size_t samples;
    std::uint64_t seed = 1;

    const LCFunction& f(std::size_t r, std::size_t k = 0) const { return data.lc[(r + k) % data.lc.size()]; }
    const TreeFunction& F(std::size_t r, std::size_t k = 0) const { return data.trees[(r + k) % data.trees.size()]; }
    SparseOperator M(const LCFunction& g) const { return make_mult(g, N); }
    // Largest shift power, matrix-unit index and gauge level exercised; N/2
    // keeps every product's window nonempty.
    unsigned span() const { return N / 2; }
};

Ops make_ops(const CatalogConfig& cfg)
{
    Ops o{cfg.s, cfg.depth, make_identity(cfg.s, cfg.depth), {}, {}, {}, {},
          make_random_data(cfg.s, cfg.depth, cfg.seed, cfg.samples), cfg.samples};
    o.seed = cfg.seed;
    for (ShiftKind k : kAllShiftKinds) {
        o.J.emplace(k, make_shift(k, cfg.s, cfg.depth));
        o.Jt.emplace(k, adjoint(o.J.at(k)));
        o.Jpow.emplace(k, Powers(o.J.at(k), shift_symbol(k), std::max(2u, o.span())));
        o.Jtpow.emplace(k, Powers(o.Jt.at(k), shift_symbol(k) + "*", std::max(2u, o.span())));
    }
    return o;
}

std::string rb(std::size_t r) { return "r=" + std::to_string(r); }

using Body = std::function<void(FamilyRun&, const Ops&)>;

struct Family {
    FamilyInfo info;
    bool expect_equal;
    Body body;
};

std::vector<std::pair<std::size_t, std::size_t>> generator_pairs(std::size_t G)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < G; ++i) out.emplace_back(i, (i + 1) % G);
    out.emplace_back(0, 0);
    return out;
}

// Visits max(samples, combos) steps; step t pairs sample t mod samples with
// combination t mod combos, so every sample and every combination is used.
template <class Fn>
void cycle(FamilyRun& run, const Ops& o, std::size_t combos, Fn fn)
{
    const std::size_t steps = std::max(o.samples, combos);
    for (std::size_t t = 0; t < steps && run.open(); ++t) fn(t % o.samples, t % combos);
}

void add_shift_families(std::vector<Family>& fams, ShiftKind kind)
{
    const std::string J = shift_symbol(kind);
    const bool commutative = kind == ShiftKind::BunceDeddens || kind == ShiftKind::Hensel;

    fams.push_back({{"iso." + J, J + "*J = I", true}, true, [kind](FamilyRun& run, const Ops& o) {
                        run.compare(compose(o.Jt.at(kind), o.J.at(kind)), o.I, "-");
                    }});
    fams.push_back({{"adjoint." + J, "transpose of " + J + " equals the explicit adjoint formula", false}, true,
                    [kind](FamilyRun& run, const Ops& o) {
                        run.compare(o.Jt.at(kind), make_shift_adjoint(kind, o.s, o.N), "transpose");
                        run.compare(adjoint(o.Jt.at(kind)), o.J.at(kind), "double adjoint");
                    }});

    const std::size_t kGenerators = kind == ShiftKind::BunceDeddens ? 3 : 2;
    auto gens = [kind](const Ops& o, std::size_t r, std::size_t k) {
        return coefficient_generators(kind, o.N, o.f(r, k), o.F(r, k));
    };

    fams.push_back({{"coef." + J + ".betaalpha", "beta(alpha(a)) = a", true}, true, [=](FamilyRun& run, const Ops& o) {
                        const auto& Jo = o.J.at(kind);
                        cycle(run, o, kGenerators, [&](std::size_t r, std::size_t i) {
                            const SparseOperator a = gens(o, r, 0)[i];
                            run.compare(beta(Jo, alpha(Jo, a)), a, rb(r) + ",a=" + std::to_string(i));
                        });
                    }});
    fams.push_back({{"coef." + J + ".alphabeta", "alpha(beta(a)) = alpha(I) a alpha(I)", true}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        const auto& Jo = o.J.at(kind);
                        const SparseOperator aI = alpha(Jo, o.I);
                        cycle(run, o, kGenerators, [&](std::size_t r, std::size_t i) {
                            const SparseOperator a = gens(o, r, 0)[i];
                            run.compare(alpha(Jo, beta(Jo, a)), compose(aI, compose(a, aI)), rb(r) + ",a=" + std::to_string(i));
                        });
                    }});
    fams.push_back({{"coef." + J + ".unital", "beta(I) = I", true}, true, [kind](FamilyRun& run, const Ops& o) {
                        run.compare(beta(o.J.at(kind), o.I), o.I, "-");
                    }});
    fams.push_back({{"coef." + J + ".transfer", "beta(alpha(a) b) = a beta(b)", true}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        const auto& Jo = o.J.at(kind);
                        const auto pairs = generator_pairs(kGenerators);
                        cycle(run, o, pairs.size(), [&](std::size_t r, std::size_t p) {
                            const auto [i, j] = pairs[p];
                            const SparseOperator a = gens(o, r, 0)[i];
                            const SparseOperator b = gens(o, r, 1)[j];
                            run.compare(beta(Jo, compose(alpha(Jo, a), b)), compose(a, beta(Jo, b)),
                                        rb(r) + ",a=" + std::to_string(i) + ",b=" + std::to_string(j));
                        });
                    }});
    if (commutative)
        fams.push_back({{"coef." + J + ".mult", "beta(ab) = beta(a) beta(b)", true}, true,
                        [=](FamilyRun& run, const Ops& o) {
                            const auto& Jo = o.J.at(kind);
                            const auto pairs = generator_pairs(kGenerators);
                            cycle(run, o, pairs.size(), [&](std::size_t r, std::size_t p) {
                                const auto [i, j] = pairs[p];
                                const SparseOperator a = gens(o, r, 0)[i];
                                const SparseOperator b = gens(o, r, 1)[j];
                                run.compare(beta(Jo, compose(a, b)), compose(beta(Jo, a), beta(Jo, b)),
                                            rb(r) + ",a=" + std::to_string(i) + ",b=" + std::to_string(j));
                            });
                        }});

    fams.push_back({{"ideal." + J + ".left", "J* a J^n = beta(a) J^(n-1)", true}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        const auto& Jp = o.Jpow.at(kind);
                        cycle(run, o, kGenerators * o.span(), [&](std::size_t r, std::size_t c) {
                            const std::size_t i = c % kGenerators;
                            const unsigned n = static_cast<unsigned>(c / kGenerators) + 1;
                            const SparseOperator a = gens(o, r, 0)[i];
                            run.compare(compose(o.Jt.at(kind), compose(a, Jp[n])), compose(beta(o.J.at(kind), a), Jp[n - 1]),
                                        rb(r) + ",a=" + std::to_string(i) + ",n=" + std::to_string(n));
                        });
                    }});
    fams.push_back({{"ideal." + J + ".right", "a J^n J* = a alpha^n(I) J^(n-1)", true}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        const auto& Jp = o.Jpow.at(kind);
                        const auto& Jq = o.Jtpow.at(kind);
                        cycle(run, o, kGenerators * o.span(), [&](std::size_t r, std::size_t c) {
                            const std::size_t i = c % kGenerators;
                            const unsigned n = static_cast<unsigned>(c / kGenerators) + 1;
                            const SparseOperator a = gens(o, r, 0)[i];
                            run.compare(compose(a, compose(Jp[n], o.Jt.at(kind))),
                                        compose(a, compose(Jp[n], compose(Jq[n], Jp[n - 1]))),
                                        rb(r) + ",a=" + std::to_string(i) + ",n=" + std::to_string(n));
                        });
                    }});
    fams.push_back({{"ideal." + J + ".adj", "b J*^n a = J*^n alpha^n(b) a", true}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        const auto& Jp = o.Jpow.at(kind);
                        const auto& Jq = o.Jtpow.at(kind);
                        const auto pairs = generator_pairs(kGenerators);
                        cycle(run, o, pairs.size() * o.span(), [&](std::size_t r, std::size_t c) {
                            const auto [i, j] = pairs[c % pairs.size()];
                            const unsigned n = static_cast<unsigned>(c / pairs.size()) + 1;
                            const SparseOperator a = gens(o, r, 0)[i];
                            const SparseOperator b = gens(o, r, 1)[j];
                            const SparseOperator x = compose(b, compose(Jq[n], a));
                            run.compare(x, compose(Jq[n], compose(Jp[n], x)),
                                        rb(r) + ",a=" + std::to_string(i) + ",b=" + std::to_string(j) +
                                            ",n=" + std::to_string(n));
                        });
                    }});
    fams.push_back({{"fourier." + J, "Fourier coefficients of normalized polynomials come back exactly", false}, true,
                    [kind](FamilyRun& run, const Ops& o) {
                        const unsigned degree = std::min(3u, (o.N - 1) / 2);
                        run.absorb(check_fourier(kind, o.s, o.N, o.seed, o.samples, degree));
                    }});
}

// Runs `fn(r)` over samples until the verdict settles.
template <class Fn>
void each_sample(FamilyRun& run, const Ops& o, Fn fn)
{
    for (std::size_t r = 0; r < o.samples && run.open(); ++r) fn(r);
}

std::vector<Family> build_families()
{
    std::vector<Family> fams;
    for (ShiftKind k : kAllShiftKinds) add_shift_families(fams, k);

    const auto U = ShiftKind::BunceDeddens;
    const auto V = ShiftKind::Hensel;
    const auto S = ShiftKind::Bernoulli;
    const auto W = ShiftKind::Serre;

    // --- covariance of multiplication operators ---
    fams.push_back({{"comm.U.MfU", "M_f U = U M_{bU f}"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(compose(o.M(o.f(r)), o.J.at(U)), compose(o.J.at(U), o.M(endo_bU(o.f(r)))), rb(r));
                        });
                    }});
    fams.push_back({{"comm.U.UMf", "U M_f = M_{aU f} U"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(compose(o.J.at(U), o.M(o.f(r))), compose(o.M(endo_aU(o.f(r))), o.J.at(U)), rb(r));
                        });
                    }});
    fams.push_back({{"comm.U.beta", "beta_U(M_f) = M_{bU f}"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(beta(o.J.at(U), o.M(o.f(r))), o.M(endo_bU(o.f(r))), rb(r));
                        });
                    }});
    fams.push_back({{"comm.U.alpha", "alpha_U(M_f) = M_{aU f} U U*"}, true, [=](FamilyRun& run, const Ops& o) {
                        const SparseOperator UU = compose(o.J.at(U), o.Jt.at(U));
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(alpha(o.J.at(U), o.M(o.f(r))), compose(o.M(endo_aU(o.f(r))), UU), rb(r));
                        });
                    }});
    fams.push_back({{"comm.V.MfV", "M_f V = V M_{bV f}"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(compose(o.M(o.f(r)), o.J.at(V)), compose(o.J.at(V), o.M(endo_bV(o.f(r)))), rb(r));
                        });
                    }});
    fams.push_back({{"comm.V.VMf", "V M_f = M_{aV f} V"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(compose(o.J.at(V), o.M(o.f(r))), compose(o.M(endo_aV(o.f(r))), o.J.at(V)), rb(r));
                        });
                    }});
    fams.push_back({{"comm.V.beta", "beta_V(M_f) = M_{bV f}"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(beta(o.J.at(V), o.M(o.f(r))), o.M(endo_bV(o.f(r))), rb(r));
                        });
                    }});
    fams.push_back({{"comm.V.alpha", "alpha_V(M_f) = M_{aV f}(I - P_(0,0))"}, true, [=](FamilyRun& run, const Ops& o) {
                        const SparseOperator Q = o.I - make_PV(0, o.s, o.N);
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(alpha(o.J.at(V), o.M(o.f(r))), compose(o.M(endo_aV(o.f(r))), Q), rb(r));
                        });
                    }});
    fams.push_back({{"comm.S.beta", "beta_S(M_f) = M_{bS f}"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(beta(o.J.at(S), o.M(o.f(r))), o.M(transfer_bS(o.f(r))), rb(r));
                        });
                    }});
    fams.push_back({{"comm.S.SMf", "S M_f = M_{aS f} S"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(compose(o.J.at(S), o.M(o.f(r))), compose(o.M(endo_aS(o.f(r))), o.J.at(S)), rb(r));
                        });
                    }});
    fams.push_back({{"neg.S.MfS", "M_f S differs from S M_{bS f} for some level-1 indicator"}, false,
                    [=](FamilyRun& run, const Ops& o) {
                        for (unsigned j = 0; j < o.s && run.open(); ++j) {
                            const LCFunction chi = LCFunction::chi(o.s, j);
                            run.compare(compose(o.M(chi), o.J.at(S)), compose(o.J.at(S), o.M(transfer_bS(chi))),
                                        "j=" + std::to_string(j));
                        }
                    }});
    fams.push_back({{"neg.S.transfer", "beta_S(M_a M_b) differs from beta_S(M_a) beta_S(M_b) for some indicators"},
                    false, [=](FamilyRun& run, const Ops& o) {
                        for (unsigned i = 0; i < o.s && run.open(); ++i)
                            for (unsigned j = 0; j < o.s && run.open(); ++j) {
                                const SparseOperator a = o.M(LCFunction::chi(o.s, i));
                                const SparseOperator b = o.M(LCFunction::chi(o.s, j));
                                run.compare(beta(o.J.at(S), compose(a, b)),
                                            compose(beta(o.J.at(S), a), beta(o.J.at(S), b)),
                                            "i=" + std::to_string(i) + ",j=" + std::to_string(j));
                            }
                    }});
    fams.push_back({{"comm.W.beta", "beta_W(M_F) = M_{bW F}"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(beta(o.J.at(W), make_mult_tree(o.F(r), o.N)),
                                        make_mult_tree(transfer_bW(o.F(r)), o.N), rb(r));
                        });
                    }});
    fams.push_back({{"comm.W.WMF", "W M_F = M_{aW F} W"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            run.compare(compose(o.J.at(W), make_mult_tree(o.F(r), o.N)),
                                        compose(make_mult_tree(endo_aW(o.F(r)), o.N), o.J.at(W)), rb(r));
                        });
                    }});

    // --- Hensel ---
    fams.push_back({{"hensel.product", "M_f P_(n,0) = f(0) P_(n,0)"}, true, [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            for (unsigned n = 0; n < o.N; ++n) {
                                const SparseOperator P = make_PV(n, o.s, o.N);
                                run.compare(compose(o.M(o.f(r)), P), scalar_mul(o.f(r)(0), P),
                                            rb(r) + ",n=" + std::to_string(n));
                            }
                        });
                    }});
    fams.push_back({{"hensel.PV.chain", "P_(n,0) = V^n P_(0,0) V*^n"}, true, [=](FamilyRun& run, const Ops& o) {
                        const SparseOperator P0 = make_PV(0, o.s, o.N);
                        SparseOperator Vn = o.I, Vtn = o.I;
                        for (unsigned n = 0; n < o.N; ++n) {
                            run.compare(make_PV(n, o.s, o.N), compose(Vn, compose(P0, Vtn)), "n=" + std::to_string(n));
                            Vn = compose(o.J.at(V), Vn);
                            Vtn = compose(Vtn, o.Jt.at(V));
                        }
                    }});
    fams.push_back({{"hensel.PV.alphabeta", "alpha_V and beta_V move P_(n,0) along the chain"}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        run.compare(beta(o.J.at(V), make_PV(0, o.s, o.N)), make_zero(o.s, o.N), "beta,n=0");
                        for (unsigned n = 0; n + 1 < o.N; ++n) {
                            run.compare(alpha(o.J.at(V), make_PV(n, o.s, o.N)), make_PV(n + 1, o.s, o.N),
                                        "alpha,n=" + std::to_string(n));
                            run.compare(beta(o.J.at(V), make_PV(n + 1, o.s, o.N)), make_PV(n, o.s, o.N),
                                        "beta,n=" + std::to_string(n + 1));
                        }
                    }});
    fams.push_back({{"hensel.PT.product", "PT(k,l) PT(m,n) = delta_lm PT(k,n)"}, true, [=](FamilyRun& run, const Ops& o) {
                        for (unsigned k = 0; k <= o.span(); ++k)
                            for (unsigned l = 0; l <= o.span(); ++l)
                                for (unsigned m = 0; m <= o.span(); ++m)
                                    for (unsigned n = 0; n <= o.span(); ++n) {
                                        const SparseOperator lhs =
                                            compose(make_matrix_unit_V(k, l, o.s, o.N), make_matrix_unit_V(m, n, o.s, o.N));
                                        const SparseOperator rhs =
                                            l == m ? make_matrix_unit_V(k, n, o.s, o.N) : make_zero(o.s, o.N);
                                        run.compare(lhs, rhs,
                                                    "k=" + std::to_string(k) + ",l=" + std::to_string(l) +
                                                        ",m=" + std::to_string(m) + ",n=" + std::to_string(n));
                                    }
                    }});
    fams.push_back({{"hensel.PT.adjoint", "PT(k,l)* = PT(l,k)"}, true, [=](FamilyRun& run, const Ops& o) {
                        for (unsigned k = 0; k <= o.span(); ++k)
                            for (unsigned l = 0; l <= o.span(); ++l)
                                run.compare(adjoint(make_matrix_unit_V(k, l, o.s, o.N)), make_matrix_unit_V(l, k, o.s, o.N),
                                            "k=" + std::to_string(k) + ",l=" + std::to_string(l));
                    }});
    fams.push_back({{"hensel.PT.chain", "PT(k,l) = V^k P_(0,0) V*^l"}, true, [=](FamilyRun& run, const Ops& o) {
                        const SparseOperator P0 = make_PV(0, o.s, o.N);
                        for (unsigned k = 0; k <= o.span(); ++k)
                            for (unsigned l = 0; l <= o.span(); ++l)
                                run.compare(make_matrix_unit_V(k, l, o.s, o.N),
                                            compose(o.Jpow.at(V)[k], compose(P0, o.Jtpow.at(V)[l])),
                                            "k=" + std::to_string(k) + ",l=" + std::to_string(l));
                    }});
    fams.push_back({{"hensel.TV", "T_V special cases and alpha/beta covariance"}, true, [=](FamilyRun& run, const Ops& o) {
                        const std::vector<QuadScalar> xs{1, 2, -1};
                        each_sample(run, o, [&](std::size_t r) {
                            const LCFunction& f = o.f(r);
                            run.compare(toeplitz_V(f, {}, o.N), o.M(f), rb(r) + ",const");
                            const SparseOperator T = toeplitz_V(f, xs, o.N);
                            run.compare(alpha(o.J.at(V), T), toeplitz_V(endo_aV(f), {0, 1, 2, -1}, o.N), rb(r) + ",alpha");
                            run.compare(beta(o.J.at(V), T), toeplitz_V(endo_bV(f), {2, -1}, o.N), rb(r) + ",beta");
                        });
                        run.compare(toeplitz_V(LCFunction::constant(o.s, 1), {1, 1, 1}, o.N), o.I, "one");
                    }});

    // --- Cuntz ---
    fams.push_back({{"cuntz.orth", "S_j* S_k = delta_jk I"}, true, [=](FamilyRun& run, const Ops& o) {
                        for (unsigned j = 0; j < o.s; ++j)
                            for (unsigned k = 0; k < o.s; ++k)
                                run.compare(compose(adjoint(make_Sj(j, o.s, o.N)), make_Sj(k, o.s, o.N)),
                                            j == k ? o.I : make_zero(o.s, o.N),
                                            "j=" + std::to_string(j) + ",k=" + std::to_string(k));
                    }});
    fams.push_back({{"cuntz.sum", "sum_j S_j S_j* = I - P_(0,0)"}, true, [=](FamilyRun& run, const Ops& o) {
                        SparseOperator acc = make_zero(o.s, o.N);
                        for (unsigned j = 0; j < o.s; ++j) {
                            const SparseOperator Sj = make_Sj(j, o.s, o.N);
                            acc = acc + compose(Sj, adjoint(Sj));
                        }
                        run.compare(acc, o.I - make_PV(0, o.s, o.N), "-");
                    }});
    fams.push_back({{"cuntz.range", "range projections S_j S_j* are mutually orthogonal"}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        std::vector<SparseOperator> Q;
                        for (unsigned j = 0; j < o.s; ++j) {
                            const SparseOperator Sj = make_Sj(j, o.s, o.N);
                            Q.push_back(compose(Sj, adjoint(Sj)));
                        }
                        for (unsigned j = 0; j < o.s; ++j)
                            for (unsigned k = 0; k < o.s; ++k)
                                run.compare(compose(Q[j], Q[k]), j == k ? Q[j] : make_zero(o.s, o.N),
                                            "j=" + std::to_string(j) + ",k=" + std::to_string(k));
                    }});
    fams.push_back({{"cuntz.words", "S_(n,x)* S_(n,y) = delta_xy I for words of length <= 2"}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        for (unsigned n = 0; n <= 2; ++n) {
                            std::vector<SparseOperator> w;
                            for (std::uint64_t x = 0; x < ipow(o.s, n); ++x) w.push_back(make_S_word(n, x, o.s, o.N));
                            for (std::size_t x = 0; x < w.size(); ++x)
                                for (std::size_t y = 0; y < w.size(); ++y)
                                    run.compare(compose(adjoint(w[x]), w[y]), x == y ? o.I : make_zero(o.s, o.N),
                                                "n=" + std::to_string(n) + ",x=" + std::to_string(x) +
                                                    ",y=" + std::to_string(y));
                        }
                    }});
    fams.push_back({{"cuntz.Sj", "S_j = sqrt(s) M_{chi_j} S"}, true, [=](FamilyRun& run, const Ops& o) {
                        for (unsigned j = 0; j < o.s; ++j)
                            run.compare(make_Sj(j, o.s, o.N),
                                        scalar_mul(QuadScalar::sqrt(o.s), compose(o.M(LCFunction::chi(o.s, j)), o.J.at(S))),
                                        "j=" + std::to_string(j));
                    }});

    // --- Bunce-Deddens ---
    fams.push_back({{"bunce.UU", "U U* = I - P_0"}, true, [=](FamilyRun& run, const Ops& o) {
                        run.compare(compose(o.J.at(U), o.Jt.at(U)), o.I - make_P(0, o.s, o.N), "-");
                    }});
    fams.push_back({{"bunce.P.chain", "P_n = U^n P_0 U*^n"}, true, [=](FamilyRun& run, const Ops& o) {
                        const SparseOperator P0 = make_P(0, o.s, o.N);
                        SparseOperator Un = o.I, Utn = o.I;
                        for (unsigned n = 0; n < o.N; ++n) {
                            run.compare(make_P(n, o.s, o.N), compose(Un, compose(P0, Utn)), "n=" + std::to_string(n));
                            Un = compose(o.J.at(U), Un);
                            Utn = compose(Utn, o.Jt.at(U));
                        }
                    }});
    fams.push_back({{"bunce.P.orth", "P_n P_m = delta_nm P_n for n, m <= N-2"}, true, [=](FamilyRun& run, const Ops& o) {
                        for (unsigned n = 0; n + 2 <= o.N; ++n)
                            for (unsigned m = 0; m + 2 <= o.N; ++m)
                                run.compare(compose(make_P(n, o.s, o.N), make_P(m, o.s, o.N)),
                                            n == m ? make_P(n, o.s, o.N) : make_zero(o.s, o.N),
                                            "n=" + std::to_string(n) + ",m=" + std::to_string(m));
                    }});
    fams.push_back({{"bunce.telescope", "I - U^m U*^m = sum_{i<m} U^i P_0 U*^i"}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        const SparseOperator P0 = make_P(0, o.s, o.N);
                        for (unsigned m = 1; m <= o.span() + 1; ++m) {
                            SparseOperator acc = make_zero(o.s, o.N);
                            SparseOperator Ui = o.I, Uti = o.I;
                            for (unsigned i = 0; i < m; ++i) {
                                acc = acc + compose(Ui, compose(P0, Uti));
                                Ui = compose(o.J.at(U), Ui);
                                Uti = compose(Uti, o.Jt.at(U));
                            }
                            run.compare(o.I - compose(Ui, Uti), acc, "m=" + std::to_string(m));
                        }
                    }});
    fams.push_back({{"bunce.split", "M_(n,x) = sum_l M_(n+1, x + l s^n)"}, true, [=](FamilyRun& run, const Ops& o) {
                        for (unsigned n = 0; n <= 2; ++n)
                            for (std::uint64_t x = 0; x < ipow(o.s, n); ++x) {
                                SparseOperator acc = make_zero(o.s, o.N);
                                for (const Ball& c : ball_children(Ball{n, x}, o.s))
                                    acc = acc + o.M(LCFunction::indicator(o.s, c));
                                run.compare(o.M(LCFunction::indicator(o.s, Ball{n, x})), acc,
                                            "n=" + std::to_string(n) + ",x=" + std::to_string(x));
                            }
                    }});
    fams.push_back({{"bunce.TU", "T_U special cases and alpha/beta covariance"}, true, [=](FamilyRun& run, const Ops& o) {
                        const LCFunction zero = LCFunction::constant(o.s, 0);
                        each_sample(run, o, [&](std::size_t r) {
                            const LCFunction &f = o.f(r), &g = o.f(r, 1), &h = o.f(r, 2);
                            run.compare(toeplitz_U(LCSequence{{f, f, f}, f}, o.N), o.M(f), rb(r) + ",const");
                            run.compare(toeplitz_U(LCSequence{{f}, zero}, o.N), compose(o.M(f), make_P(0, o.s, o.N)),
                                        rb(r) + ",single");
                            const LCSequence F{{f, g}, h};
                            const SparseOperator T = toeplitz_U(F, o.N);
                            run.compare(alpha(o.J.at(U), T), toeplitz_U(tilde_alpha_U(F), o.N), rb(r) + ",alpha");
                            run.compare(beta(o.J.at(U), T), toeplitz_U(tilde_beta_U(F), o.N), rb(r) + ",beta");
                        });
                    }});

    // --- Serre ---
    fams.push_back({{"serre.CP.chain", "calP_n = W^n (I - W W*) W*^n"}, true, [=](FamilyRun& run, const Ops& o) {
                        const SparseOperator P0 = o.I - compose(o.J.at(W), o.Jt.at(W));
                        for (unsigned n = 0; n <= 2; ++n)
                            run.compare(make_calP(n, o.s, o.N),
                                        compose(o.Jpow.at(W)[n], compose(P0, o.Jtpow.at(W)[n])), "n=" + std::to_string(n));
                    }});
    fams.push_back({{"serre.CP.orth", "calP_n calP_m = delta_nm calP_n for n, m <= 1, calP_n* = calP_n for n <= 2"}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        for (unsigned n = 0; n <= 2; ++n) {
                            const SparseOperator Pn = make_calP(n, o.s, o.N);
                            run.compare(adjoint(Pn), Pn, "adjoint,n=" + std::to_string(n));
                            for (unsigned m = 0; m <= 1 && n <= 1; ++m)
                                run.compare(compose(Pn, make_calP(m, o.s, o.N)), n == m ? Pn : make_zero(o.s, o.N),
                                            "n=" + std::to_string(n) + ",m=" + std::to_string(m));
                        }
                    }});
    fams.push_back({{"serre.gauge", "P_(n,x),(m,y) W*^(n-m) is level-preserving and refactors through W^(n-m)"}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        for (unsigned n = 1; n <= o.span(); ++n)
                            for (unsigned m = 0; m < n; ++m)
                                for (std::uint64_t x : {std::uint64_t{0}, ipow(o.s, n) - 1})
                                    for (std::uint64_t y : {std::uint64_t{0}, ipow(o.s, m) - 1}) {
                                        const SparseOperator P = make_matrix_unit(Ball{n, x}, Ball{m, y}, o.s, o.N);
                                        const SparseOperator L = compose(P, o.Jtpow.at(W)[n - m]);
                                        const std::string b = "n=" + std::to_string(n) + ",x=" + std::to_string(x) +
                                                              ",m=" + std::to_string(m) + ",y=" + std::to_string(y);
                                        run.compare(expectation(L), L, b + ",level");
                                        run.compare(P, compose(L, o.Jpow.at(W)[n - m]), b + ",factor");
                                    }
                    }});
    fams.push_back({{"serre.TW", "T_W special cases"}, true, [=](FamilyRun& run, const Ops& o) {
                        const LCFunction zero = LCFunction::constant(o.s, 0);
                        const SparseOperator P0 = make_calP(0, o.s, o.N);
                        cycle(run, o, 3, [&](std::size_t r, std::size_t c) {
                            const LCFunction &f = o.f(r), &g = o.f(r, 1), &h = o.f(r, 2);
                            if (c == 0) {
                                run.compare(toeplitz_W(LCSequence{{f, f}, f}, o.N), o.M(f), rb(r) + ",const");
                            } else if (c == 1) {
                                run.compare(toeplitz_W(LCSequence{{f}, zero}, o.N), compose(P0, compose(o.M(f), P0)),
                                            rb(r) + ",single");
                            } else {
                                const SparseOperator T = toeplitz_W(LCSequence{{f, g}, h}, o.N);
                                run.compare(expectation(T), T, rb(r) + ",level");
                            }
                        });
                    }});

    // --- grading ---
    fams.push_back({{"grading.expect", "E is idempotent and fixes exactly the level-preserving part"}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        each_sample(run, o, [&](std::size_t r) {
                            const SparseOperator x = compose(o.J.at(U), compose(o.M(o.f(r)), o.Jt.at(U))) +
                                                     compose(o.J.at(U), o.J.at(U)) +
                                                     compose(o.Jt.at(W), o.M(o.f(r, 1)));
                            const SparseOperator e = expectation(x);
                            run.compare(expectation(e), e, rb(r) + ",idempotent");
                            run.compare(e, compose(o.J.at(U), compose(o.M(o.f(r)), o.Jt.at(U))), rb(r) + ",part");
                        });
                    }});
    fams.push_back({{"grading.generators", "coefficient-algebra generators are gauge invariant"}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        for (ShiftKind k : kAllShiftKinds) {
                            const auto gens = coefficient_generators(k, o.N, o.f(0), o.F(0));
                            for (std::size_t i = 0; i < gens.size(); ++i)
                                run.compare(expectation(gens[i]), gens[i], shift_symbol(k) + ",a=" + std::to_string(i));
                        }
                    }});

    // --- auxiliary representation ---
    fams.push_back({{"altrep", "calU* calU = I and calU calM_F calU* = calM_{alpha~ F} on the grid", false}, true,
                    [=](FamilyRun& run, const Ops& o) {
                        (void)run;
                        (void)o;
                    }});
    return fams;
}

const std::vector<Family>& families()
{
    static const std::vector<Family> fams = build_families();
    return fams;
}

}  // namespace

std::vector<SparseOperator> coefficient_generators(ShiftKind kind, unsigned N, const LCFunction& f, const TreeFunction& F)
{
    const unsigned s = f.s();
    switch (kind) {
    case ShiftKind::BunceDeddens:
        return {make_mult(f, N), make_P(1, s, N), compose(make_mult(f, N), make_P(0, s, N))};
    case ShiftKind::Hensel: return {make_mult(f, N), make_PV(1, s, N)};
    case ShiftKind::Bernoulli:
        return {make_mult(f, N), compose(make_S_word(1, 0, s, N), adjoint(make_S_word(1, 1, s, N)))};
    case ShiftKind::Serre: return {make_mult_tree(F, N), make_calP(1, s, N)};
    }
    return {};
}

const std::vector<FamilyInfo>& catalog_families()
{
    static const std::vector<FamilyInfo> infos = [] {
        std::vector<FamilyInfo> out;
        for (const auto& f : families()) out.push_back(f.info);
        return out;
    }();
    return infos;
}

std::vector<RelationResult> run_catalog(const CatalogConfig& cfg, const std::vector<std::string>& only)
{
    if (cfg.s < 2) throw ConfigError("s must be >= 2");
    if (cfg.depth < 2) throw ConfigError("depth must be >= 2");
    const auto& fams = families();
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < fams.size(); ++i)
        if (only.empty() || std::find(only.begin(), only.end(), fams[i].info.id) != only.end()) pick.push_back(i);

    const Ops ops = make_ops(cfg);
    std::vector<RelationResult> out(pick.size());
    const auto n = static_cast<std::int64_t>(pick.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < n; ++k) {
        const Family& fam = fams[pick[k]];
        if (fam.info.id == "altrep") {
            out[k] = check_altrep(cfg.grid_K, cfg.grid_L, cfg.s, cfg.seed, std::min<std::size_t>(cfg.samples, 10));
            out[k].id = fam.info.id;
            out[k].description = fam.info.description;
            continue;
        }
        FamilyRun run(fam.info.id, fam.info.description, fam.expect_equal);
        try {
            fam.body(run, ops);
        } catch (const std::exception& ex) {
            run.fail(ex.what());
        }
        out[k] = run.finish();
    }
    return out;
}

RelationResult check_isometry(ShiftKind kind, unsigned s, unsigned N)
{
    FamilyRun run("iso." + shift_symbol(kind), shift_symbol(kind) + "*J = I", true);
    try {
        const SparseOperator J = make_shift(kind, s, N);
        run.compare(compose(adjoint(J), J), make_identity(s, N), "-");
    } catch (const std::exception& ex) {
        run.fail(ex.what());
    }
    return run.finish();
}

RelationResult check_fourier(ShiftKind kind, unsigned s, unsigned N, std::uint64_t seed, std::size_t count,
                             unsigned max_degree)
{
    FamilyRun run("fourier." + shift_symbol(kind), "Fourier round trip", true);
    try {
        RandomFunctions rf(s, seed);
        const SparseOperator J = make_shift(kind, s, N);
        const SparseOperator Jt = adjoint(J);
        const Powers Jp(J, shift_symbol(kind), max_degree);
        const Powers Jq(Jt, shift_symbol(kind) + "*", max_degree);
        for (std::size_t r = 0; r < count && run.open(); ++r) {
            const auto degree = static_cast<int>(rf.integer(0, max_degree));
            std::map<int, SparseOperator> coeff;
            SparseOperator x = make_zero(s, N);
            for (int k = -degree; k <= degree; ++k) {
                // Random level-preserving coefficient: a product of multiplication
                // operators, optionally times a coefficient-algebra generator.
                const LCFunction f = rf.lc();
                const TreeFunction F = rf.tree(N);
                auto gens = coefficient_generators(kind, N, f, F);
                SparseOperator a = gens[0];
                if (rf.integer(0, 1) == 1) a = compose(a, gens[static_cast<std::size_t>(rf.integer(0, gens.size() - 1))]);
                if (rf.integer(0, 1) == 1) a = compose(make_mult(rf.lc(), N), a);
                const auto m = static_cast<unsigned>(std::abs(k));
                if (k >= 0) {
                    a = compose(a, compose(Jp[m], Jq[m]));
                    x = x + compose(a, Jp[m]);
                } else {
                    a = compose(compose(Jp[m], Jq[m]), a);
                    x = x + compose(Jq[m], a);
                }
                coeff.emplace(k, a);
            }
            for (int k = -static_cast<int>(max_degree); k <= static_cast<int>(max_degree); ++k) {
                const SparseOperator got = fourier_coeff(x, J, k);
                auto it = coeff.find(k);
                run.compare(got, it == coeff.end() ? make_zero(s, N) : it->second,
                            "poly=" + std::to_string(r) + ",n=" + std::to_string(k));
            }
        }
    } catch (const std::exception& ex) {
        run.fail(ex.what());
    }
    return run.finish();
}

RelationResult check_altrep(std::int64_t K, unsigned L, unsigned s, std::uint64_t seed, std::size_t count)
{
    FamilyRun run("altrep", "auxiliary representation", true);
    try {
        RandomFunctions rf(s, seed);
        const GridOperator Ug = make_altrep_shift(K, L);
        const GridOperator Ugt = adjoint(Ug);
        run.compare(compose(Ugt, Ug), GridOperator::identity(Ug.space()), "isometry");
        for (std::size_t r = 0; r < count && run.open(); ++r) {
            const LCSequence F = rf.sequence(L + 1);
            const GridOperator M = make_altrep_mult(F, K, L);
            run.compare(compose(Ug, compose(M, Ugt)), make_altrep_mult(tilde_alpha_U(F), K, L), "F=" + std::to_string(r));
        }
    } catch (const std::exception& ex) {
        run.fail(ex.what());
    }
    return run.finish();
}

}  // namespace adiclab
