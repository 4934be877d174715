#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "adiclab/sadic.hpp"

namespace adiclab {

// Dense matrix over Z.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix diagonal(const std::vector<long>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<mpz_class> data_;
};

// Row-parallel product (OpenMP) and its serial reference.
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix multiply_serial(const IntMatrix& a, const IntMatrix& b);

// Class in K_0(A_{U,n}) written in the basis
//   sum_j c_j [M_(n,j) P_0] + k [M_(n,0)],  coords = (c_1, ..., c_{s^n - 1}, k).
struct KClass {
    unsigned s = 2;
    unsigned n = 0;
    std::vector<mpz_class> coords;

    static KClass zero(unsigned s, unsigned n);
    static KClass basis(unsigned s, unsigned n, std::size_t i);
    friend bool operator==(const KClass&, const KClass&) = default;
};

// Matrix of phi_n : Z^{s^n} -> Z^{s^{n+1}} in the basis above, with
//   c'_i = c_(i mod s^n) + k w_i   (c_0 = 0),   k' = s k,
//   w_i = s - ceil(i / s^n) for 1 <= i <= (s-1) s^n, and 0 beyond.
IntMatrix phi_matrix(unsigned s, unsigned n);
KClass apply_phi(const KClass& v);

enum class K0Tag { BallProj, BallP0, BallRange, BallShiftedP0 };

// Formal term: [M_b], [M_b P_0], [M_b (I - U^m U*^m)] or [M_b U^i P_0 U*^i].
struct K0Term {
    K0Tag tag;
    Ball ball;
    std::uint64_t param = 0;  // m for BallRange, i for BallShiftedP0
    friend auto operator<=>(const K0Term&, const K0Term&) = default;
};

using FormalK0Sum = std::map<K0Term, mpz_class>;

struct OracleStats {
    std::uint64_t shifted_terms = 0;  // BallShiftedP0 terms created from [M_(n,0)]
};

// Reproduces the derivation of phi_n by rewriting formal sums:
// split balls into children, trade [M_(n+1,c)] for [M_(n+1,0)] plus a range
// defect, telescope the defect into shifted copies of P_0, move each shifted
// copy back to [M_(n+1,c-i) P_0] and collect in the level-(n+1) basis.
KClass rewrite_oracle(const KClass& v, OracleStats* stats = nullptr);

FormalK0Sum to_formal(const KClass& v);
FormalK0Sum split_children(const FormalK0Sum& in, unsigned s);
FormalK0Sum trade_projections(const FormalK0Sum& in, unsigned s);
FormalK0Sum telescope(const FormalK0Sum& in);
FormalK0Sum reindex_shifted(const FormalK0Sum& in, unsigned s);
KClass collect(const FormalK0Sum& in, unsigned s, unsigned level);

// Nonzero Smith invariant factors d_1 | d_2 | ..., all positive.
std::vector<mpz_class> snf(IntMatrix m);

inline const mpz_class& quotient_k(const KClass& v) { return v.coords.back(); }
bool check_quotient_square(unsigned s, unsigned n);

// phi_{to-1} ... phi_{from}.
IntMatrix compose_phi(unsigned s, unsigned from, unsigned to);

}  // namespace adiclab
