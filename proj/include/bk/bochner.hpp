#pragma once
// Normal coordinates for a Kahler potential jet: a holomorphic coordinate
// change plus a pluriharmonic gauge correction kill every (l,0), (0,l),
// (l,1) and (1,l) coefficient, leaving |z|^2 as the full 1-jet of the
// metric.  The construction sweeps degree by degree; each step solves a
// triangular system with unit diagonal, so the output is unique once the
// linear framing is fixed.

#include <array>
#include <map>
#include <vector>

#include "bk/series.hpp"

namespace bk {

struct NormalForm {
    // z = coordinate_change[i](w): holomorphic, invertible linear part
    std::vector<BiSeries> coordinate_change;
    // holomorphic series f with normalized = K(change(w)) + f + conj(f)
    BiSeries gauge;
    BiSeries normalized_potential;
};

struct GaugeViolation {
    MI S, T;
    MGraded value;
};
// Every nonzero coefficient at a forbidden key up to total degree up_to:
// (S,0) and (0,T) with |S|,|T| >= 1, (S,e_j) and (e_j,T) with |S|,|T| >= 2,
// and mixed linear keys (e_i,e_j) differing from the identity block.
std::vector<GaugeViolation> verify_gauge(const BiSeries& K, int up_to);

// Normalize a real potential jet with K(0) = 0 and zero linear part, valid
// to total degree up_to.  The (1,1) block must be a constant-rational
// positive-definite matrix (else: not a metric jet); the linear framing is
// the inverse transposed-Cholesky factor, which exists over the rationals
// only when the pivots are perfect squares.  sym_perm is the symbol
// involution used for conjugation (identity by default).
NormalForm normalize(const BiSeries& K, int up_to);
NormalForm normalize(const BiSeries& K, int up_to, const std::vector<int>& sym_perm);

// The symmetrized quartic block R[(i,j,k,l)] with
//   sum R z^i zbar^j z^k zbar^l  =  degree-(2,2) part of K,
// i.e. R = coeff(e_i+e_k, e_j+e_l) * (e_i+e_k)! (e_j+e_l)! / 4.  Raw
// coefficients: no curvature sign or scale convention is imposed.  Zero
// entries are omitted.  Requires K to pass verify_gauge to degree 4.
std::map<std::array<int, 4>, MGraded> curvature_block(const BiSeries& K);

}  // namespace bk
