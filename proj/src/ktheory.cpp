#include "adiclab/ktheory.hpp"

#include <algorithm>
#include <stdexcept>

#include "adiclab/errors.hpp"

namespace adiclab {

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<long>& d)
{
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

std::vector<mpz_class> IntMatrix::apply(const std::vector<mpz_class>& v) const
{
    if (v.size() != cols_) throw std::invalid_argument("vector length does not match matrix columns");
    std::vector<mpz_class> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (sgn((*this)(i, j)) != 0) out[i] += (*this)(i, j) * v[j];
    return out;
}

namespace {

void require_conformable(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix shapes do not conform");
}

}  // namespace

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b)
{
    require_conformable(a, b);
    IntMatrix out(a.rows(), b.cols());
    const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static) if (rows > 64)
    for (std::int64_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const mpz_class& x = a(i, k);
            if (sgn(x) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (sgn(b(k, j)) != 0) out(i, j) += x * b(k, j);
        }
    return out;
}

IntMatrix multiply_serial(const IntMatrix& a, const IntMatrix& b)
{
    require_conformable(a, b);
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            mpz_class acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

KClass KClass::zero(unsigned s, unsigned n) { return KClass{s, n, std::vector<mpz_class>(ipow(s, n))}; }

KClass KClass::basis(unsigned s, unsigned n, std::size_t i)
{
    KClass v = zero(s, n);
    v.coords.at(i) = 1;
    return v;
}

IntMatrix phi_matrix(unsigned s, unsigned n)
{
    if (s < 2) throw std::invalid_argument("s must be >= 2");
    const std::uint64_t a = ipow(s, n);
    const std::uint64_t b = a * s;
    IntMatrix m(b, a);
    const std::size_t kcol = a - 1;
    for (std::uint64_t i = 1; i < b; ++i) {
        if (const std::uint64_t r = i % a; r != 0) m(i - 1, r - 1) = 1;
        if (i <= (s - 1) * a) m(i - 1, kcol) = static_cast<long>(s - (i + a - 1) / a);
    }
    m(b - 1, kcol) = static_cast<long>(s);
    return m;
}

KClass apply_phi(const KClass& v) { return KClass{v.s, v.n + 1, phi_matrix(v.s, v.n).apply(v.coords)}; }

// --- rewrite oracle -----------------------------------------------------------

namespace {

void accumulate(FormalK0Sum& sum, const K0Term& t, const mpz_class& c)
{
    if (sgn(c) == 0) return;
    auto [it, inserted] = sum.emplace(t, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) sum.erase(it);
    }
}

}  // namespace

FormalK0Sum to_formal(const KClass& v)
{
    const std::uint64_t a = ipow(v.s, v.n);
    if (v.coords.size() != a) throw std::invalid_argument("class has the wrong number of coordinates");
    FormalK0Sum out;
    for (std::uint64_t j = 1; j < a; ++j) accumulate(out, K0Term{K0Tag::BallP0, Ball{v.n, j}}, v.coords[j - 1]);
    accumulate(out, K0Term{K0Tag::BallProj, Ball{v.n, 0}}, v.coords.back());
    return out;
}

FormalK0Sum split_children(const FormalK0Sum& in, unsigned s)
{
    FormalK0Sum out;
    for (const auto& [t, c] : in) {
        if (t.tag != K0Tag::BallProj && t.tag != K0Tag::BallP0) throw std::logic_error("split expects ball generators");
        for (const Ball& child : ball_children(t.ball, s)) accumulate(out, K0Term{t.tag, child}, c);
    }
    return out;
}

FormalK0Sum trade_projections(const FormalK0Sum& in, unsigned)
{
    FormalK0Sum out;
    for (const auto& [t, c] : in) {
        if (t.tag == K0Tag::BallProj && t.ball.center != 0) {
            // M_(m,c) = M_(m,c) U^c U*^c + M_(m,c)(I - U^c U*^c), and the
            // first summand is equivalent to U^c M_(m,0) U*^c ~ M_(m,0).
            accumulate(out, K0Term{K0Tag::BallProj, Ball{t.ball.level, 0}}, c);
            accumulate(out, K0Term{K0Tag::BallRange, t.ball, t.ball.center}, c);
        } else {
            accumulate(out, t, c);
        }
    }
    return out;
}

FormalK0Sum telescope(const FormalK0Sum& in)
{
    FormalK0Sum out;
    for (const auto& [t, c] : in) {
        if (t.tag != K0Tag::BallRange) {
            accumulate(out, t, c);
            continue;
        }
        // I - U^m U*^m = P_0 + P_1 + ... + P_{m-1}
        for (std::uint64_t i = 0; i < t.param; ++i) accumulate(out, K0Term{K0Tag::BallShiftedP0, t.ball, i}, c);
    }
    return out;
}

FormalK0Sum reindex_shifted(const FormalK0Sum& in, unsigned s)
{
    FormalK0Sum out;
    for (const auto& [t, c] : in) {
        if (t.tag != K0Tag::BallShiftedP0) {
            accumulate(out, t, c);
            continue;
        }
        // [M_(m,x) U^i P_0 U*^i] = [U*^i M_(m,x) U^i P_0] = [M_(m,x-i) P_0]
        const std::uint64_t mod = ipow(s, t.ball.level);
        const std::uint64_t center = (t.ball.center + mod - t.param % mod) % mod;
        accumulate(out, K0Term{K0Tag::BallP0, Ball{t.ball.level, center}}, c);
    }
    return out;
}

KClass collect(const FormalK0Sum& in, unsigned s, unsigned level)
{
    KClass out = KClass::zero(s, level);
    for (const auto& [t, c] : in) {
        if (t.ball.level != level) throw NonCanonicalResidue("term at level " + std::to_string(t.ball.level));
        if (t.tag == K0Tag::BallP0 && t.ball.center != 0)
            out.coords[t.ball.center - 1] += c;
        else if (t.tag == K0Tag::BallProj && t.ball.center == 0)
            out.coords.back() += c;
        else
            throw NonCanonicalResidue("non-canonical term survives at ball " + t.ball.str());
    }
    return out;
}

KClass rewrite_oracle(const KClass& v, OracleStats* stats)
{
    FormalK0Sum sum = split_children(to_formal(v), v.s);
    sum = trade_projections(sum, v.s);
    sum = telescope(sum);
    if (stats != nullptr) {
        stats->shifted_terms = 0;
        for (const auto& [t, c] : sum)
            if (t.tag == K0Tag::BallShiftedP0) ++stats->shifted_terms;
    }
    sum = reindex_shifted(sum, v.s);
    return collect(sum, v.s, v.n + 1);
}

// --- Smith normal form --------------------------------------------------------

std::vector<mpz_class> snf(IntMatrix m)
{
    const std::size_t R = m.rows();
    const std::size_t C = m.cols();
    std::vector<mpz_class> out;
    for (std::size_t t = 0; t < std::min(R, C); ++t) {
        for (;;) {
            // Pivot: entry of least absolute value in the trailing block.
            std::size_t pi = R, pj = C;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j)
                    if (sgn(m(i, j)) != 0 && (pi == R || abs(m(i, j)) < abs(m(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == R) return out;
            for (std::size_t j = 0; j < C; ++j) std::swap(m(t, j), m(pi, j));
            for (std::size_t i = 0; i < R; ++i) std::swap(m(i, t), m(i, pj));

            bool clean = true;
            const mpz_class p = m(t, t);
            for (std::size_t i = t + 1; i < R; ++i) {
                if (sgn(m(i, t)) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), m(i, t).get_mpz_t(), p.get_mpz_t());
                for (std::size_t j = t; j < C; ++j) m(i, j) -= q * m(t, j);
                if (sgn(m(i, t)) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (sgn(m(t, j)) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), m(t, j).get_mpz_t(), p.get_mpz_t());
                for (std::size_t i = t; i < R; ++i) m(i, j) -= q * m(i, t);
                if (sgn(m(t, j)) != 0) clean = false;
            }
            if (!clean) continue;
            // Divisibility: fold an offending row into the pivot row and retry.
            std::size_t bad = R;
            for (std::size_t i = t + 1; i < R && bad == R; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (sgn(m(i, j)) != 0 && !mpz_divisible_p(m(i, j).get_mpz_t(), p.get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == R) break;
            for (std::size_t j = t; j < C; ++j) m(t, j) += m(bad, j);
        }
        out.push_back(abs(m(t, t)));
    }
    return out;
}

bool check_quotient_square(unsigned s, unsigned n)
{
    const IntMatrix phi = phi_matrix(s, n);
    for (std::size_t i = 0; i < phi.cols(); ++i) {
        const KClass v = KClass::basis(s, n, i);
        const KClass w{s, n + 1, phi.apply(v.coords)};
        if (quotient_k(w) != s * quotient_k(v)) return false;
    }
    return true;
}

IntMatrix compose_phi(unsigned s, unsigned from, unsigned to)
{
    if (to <= from) throw std::invalid_argument("compose_phi needs to > from");
    IntMatrix out = phi_matrix(s, from);
    for (unsigned n = from + 1; n < to; ++n) out = multiply(phi_matrix(s, n), out);
    return out;
}

}  // namespace adiclab
