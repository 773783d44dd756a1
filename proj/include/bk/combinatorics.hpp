#pragma once
// The composition-identity family and the B / B-hat / D / E / F coefficient
// tower: an independent combinatorial derivation of the Bergman potential,
// with every closed form backed by a brute-force companion.

#include <map>
#include <string>

#include "bk/bergman.hpp"

namespace bk {

// Scalar falling factorial x(x-1)...(x-k+1) and its entrywise product.
Q qfalling(long x, int k);
Q mi_falling(const MI& L, const MI& A);

// --- composition identities ----------------------------------------------
// Brute companions enumerate compositions of L into u = 1..|L| nonzero
// parts; weights 1/prod (L^j)! throughout.

// sum_u (-1)^u sum_comps 1/prod(L^j)!  ==  (-1)^l / L!
Q alternating_comp_identity_closed(const MI& L);
Q alternating_comp_identity_brute(const MI& L);

// sum_u (-1)^{u-1}/u sum_comps 1/prod(L^j)!  ==  [l == 1]
Q log_comp_identity_closed(const MI& L);
Q log_comp_identity_brute(const MI& L);

// --- selector identities --------------------------------------------------
// The companions additionally sum over selectors j_1..j_r in 1..u of
// prod_k (L^{j_k})!/(L^{j_k}-A_k)!.  Selectors are injective: repeated
// slots fail the identities on small cases, so the independent-sum reading
// is rejected.  Each A_k must have order >= 1.

// alternating weight; closed form (-1)^{r+l-a} r!/(L-A)!, 0 unless L >= A
Q selector_falling_identity_closed(const MI& L, const std::vector<MI>& As);
Q selector_falling_identity_brute(const MI& L, const std::vector<MI>& As);

// 1/u weight; closed form (-1)^{r-1} (r-1)! iff L == sum A_k, else 0
Q selector_harmonic_identity_closed(const MI& L, const std::vector<MI>& As);
Q selector_harmonic_identity_brute(const MI& L, const std::vector<MI>& As);

// Accelerated companions: compositions are grouped into part multisets
// (weight u!/prod mult!) and the injective selector sum is expanded by
// inclusion-exclusion over set partitions of {1..r}.  Identical values,
// usable for exhaustive sweeps.
Q selector_falling_identity_fast(const MI& L, const std::vector<MI>& As);
Q selector_harmonic_identity_fast(const MI& L, const std::vector<MI>& As);

// Exhaustive closed-vs-companion sweeps (fast paths); L ranges over all
// lengths 1..maxlen with 1 <= |L| <= maxorder, A-lists over 1..rmax parts
// of order >= 1 with total order <= amax.
struct IdentitySweepResult {
    long checked = 0;
    long mismatches = 0;
    std::string first_mismatch;  // empty when every check passed
};
IdentitySweepResult sweep_comp_identities(int maxlen, int maxorder);
IdentitySweepResult sweep_selector_identities(int maxlen, int maxorder, int rmax,
                                              int amax);

// --- factorial expansion ---------------------------------------------------
// Coefficients C(p,i) C(q,i) i! expressing (s+p)!/(s+p-q)! in the falling
// basis s!/(s-q+i)!, i = 0..min(p,q); multivariable version is the
// entrywise product table over I <= min(P,Q).
std::vector<Q> factorial_expand(int p, int q);
std::map<MI, Q, GlexLess> factorial_expand_multi(const MI& P, const MI& Q);

// --- coefficient tower ------------------------------------------------------
// Slot exponents P_j = sum_i l^j_i P^i are folded in by the caller for B;
// the higher levels take the composition and the raw perturbation
// exponents.  Generalized binomials keep negative shifted entries exact.

// B_I = sum over splittings sum I_j = I (zero parts allowed) of
//       prod_j C(P_j, I_j) C(I_j + sum_{m>=j}(Q_m - I_m), I_j) I_j!
Q coeff_B(const MI& I, const std::vector<MI>& Pj, const std::vector<MI>& Qj);

// B-hat: per-slot subsets I_j of perturbations and K_j of coordinates with
// |I_j| = |K_j| contribute det(P_{I_j,K_j}) det(Q_{I_j,K_j}) (L^j)^{e_{I_j}}
// (-1)^{|K_j|} and shift the slot exponents by -e_{K_j}; the remaining
// B_{A - sum e_{K_j}} vanishes when that index goes negative.
Q coeff_B_hat(const MI& A, const Composition& parts, const std::vector<MI>& Ps,
              const std::vector<MI>& Qs);

// D_I(L) = (-1)^l L! sum_u (-1)^u sum_comps B-hat_I / prod (L^j)!;
// extended by D_I(0) = [I == 0].
Q coeff_D(const MI& I, const MI& L, const std::vector<MI>& Ps,
          const std::vector<MI>& Qs);

// E_I(comp) = sum over splittings of I of prod_j D_{I^j}(L^j)
Q coeff_E(const MI& I, const Composition& comp, const std::vector<MI>& Ps,
          const std::vector<MI>& Qs);

// F_I as a polynomial in x^1..x^r: L -> coefficient, 1 <= |L| <= degree.
std::map<MI, Q, GlexLess> coeff_F(const MI& I, const std::vector<MI>& Ps,
                                  const std::vector<MI>& Qs, int degree);

// --- the combinatorial potential -------------------------------------------
// K_m = |z|^2 + (1/m) sum_I (sqrt m z)^{-I} (sqrt m zbar)^{-I} F_I(X) with
// x^i = c_i mu^2 z^{P_i} zbar^{Q_i}.  Monomials with a negative exponent
// must cancel identically (asserted); the (0,0) term is split off so the
// potential is normalized like bergman_potential.
struct CombinatorialExpansion {
    BiSeries potential;  // K_m with K_m(0) = 0
    MGraded constant;    // the removed (0,0) term, mu^{-2} log of G^{0 0}
};
CombinatorialExpansion bergman_potential_combinatorial_full(const PotentialSpec& spec);
BiSeries bergman_potential_combinatorial(const PotentialSpec& spec);

}  // namespace bk
