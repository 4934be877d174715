#pragma once

#include "adiclab/operator.hpp"
#include "adiclab/sadic.hpp"

namespace adiclab {

struct AltrepOperators {
    GridOperator shift;  // calU E_{k,l} = E_{k,l+1}
    GridOperator mult;   // calM_F E_{k,l} = f_l(k+l) E_{k,l}
};

// Auxiliary representation of A_U on l^2(Z x Z>=0), cut to |k| <= K, l <= L.
AltrepOperators make_altrep_ops(const LCSequence& F, std::int64_t K, unsigned L);
GridOperator make_altrep_shift(std::int64_t K, unsigned L);
GridOperator make_altrep_mult(const LCSequence& F, std::int64_t K, unsigned L);

}  // namespace adiclab
