#pragma once
// The coefficient tower and truncated bi-degree series:
//   CPoly    exact-rational polynomials in symbols c_1..c_r, total degree <= dc
//   MGraded  Laurent polynomials in mu (mu^2 = m) with CPoly coefficients
//   BiSeries truncated series in (z, zbar): (S,T) keys with |S|+|T| <= dz
// All values are immutable in use; operations are pure and truncate after
// every product.  Mismatched dimensions or truncations throw.

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bk/multiindex.hpp"
#include "bk/rational.hpp"

namespace bk {

// ---------- CPoly ----------

struct CPoly {
    int r = 0;   // number of symbols
    int dc = 0;  // total-degree truncation
    std::map<MI, Q, GlexLess> t;  // exponent (length r) -> coefficient, no zeros
};

// Equality ignores the truncation bounds: equal symbol count and equal terms.
inline bool operator==(const CPoly& a, const CPoly& b) { return a.r == b.r && a.t == b.t; }

CPoly cp_zero(int r, int dc);
CPoly cp_const(int r, int dc, const Q& v);
CPoly cp_symbol(int r, int dc, int i);
CPoly cp_monomial(int r, int dc, const MI& e, const Q& v);
bool cp_is_zero(const CPoly& a);
CPoly cp_add(const CPoly& a, const CPoly& b);
CPoly cp_sub(const CPoly& a, const CPoly& b);
CPoly cp_mul(const CPoly& a, const CPoly& b);
CPoly cp_scale(const CPoly& a, const Q& s);
Q cp_coeff(const CPoly& a, const MI& e);
Q cp_constant(const CPoly& a);
// Symbol involution: exponent entries permuted by perm (perm[i] = image of i).
CPoly cp_permute_symbols(const CPoly& a, const std::vector<int>& perm);
// Substitute rational values for the symbols that have one; others stay formal.
CPoly cp_eval_partial(const CPoly& a, const std::vector<std::optional<Q>>& vals);
std::string cp_str(const CPoly& a, const std::vector<std::string>& names);

// ---------- MGraded ----------

struct MGraded {
    int r = 0, dc = 0;
    std::map<int, CPoly> t;  // mu exponent -> CPoly, no zero values
};

inline bool operator==(const MGraded& a, const MGraded& b) { return a.r == b.r && a.t == b.t; }

MGraded mg_zero(int r, int dc);
MGraded mg_one(int r, int dc);
MGraded mg_const(int r, int dc, const Q& v);
MGraded mg_term(int mu, const CPoly& c);
bool mg_is_zero(const MGraded& a);
MGraded mg_add(const MGraded& a, const MGraded& b);
MGraded mg_sub(const MGraded& a, const MGraded& b);
MGraded mg_mul(const MGraded& a, const MGraded& b);
MGraded mg_scale(const MGraded& a, const Q& s);
MGraded mg_shift(const MGraded& a, int k);  // multiply by mu^k
CPoly mg_coeff(const MGraded& a, int mu);
int mg_max_exp(const MGraded& a);  // requires nonzero
int mg_min_exp(const MGraded& a);  // requires nonzero
// Inverse of a series with rational unit constant term whose remaining terms
// all have c-degree >= 1 (the termination mechanism); throws otherwise.
MGraded mg_inverse_unit(const MGraded& a);
MGraded mg_permute_symbols(const MGraded& a, const std::vector<int>& perm);
MGraded mg_eval_partial(const MGraded& a, const std::vector<std::optional<Q>>& vals);

// ---------- BiSeries ----------

using BiKey = std::pair<MI, MI>;  // (S, T): coefficient of z^S zbar^T
struct BiKeyLess {
    bool operator()(const BiKey& a, const BiKey& b) const {
        if (glex_less(a.first, b.first)) return true;
        if (glex_less(b.first, a.first)) return false;
        return glex_less(a.second, b.second);
    }
};

struct BiSeries {
    int n = 0, r = 0, dz = 0, dc = 0;
    int mu_cap = INT_MAX;  // |mu exponent| beyond this is a pipeline bug
    std::map<BiKey, MGraded, BiKeyLess> t;
};

inline bool operator==(const BiSeries& a, const BiSeries& b) { return a.n == b.n && a.t == b.t; }

BiSeries bs_zero(int n, int r, int dz, int dc, int mu_cap = INT_MAX);
BiSeries bs_const(int n, int r, int dz, int dc, const Q& v, int mu_cap = INT_MAX);
bool bs_is_zero(const BiSeries& a);
bool bs_compatible(const BiSeries& a, const BiSeries& b);
void bs_add_term(BiSeries& a, const MI& S, const MI& T, const MGraded& v);
MGraded bs_coeff(const BiSeries& a, const MI& S, const MI& T);
BiSeries bs_add(const BiSeries& a, const BiSeries& b);
BiSeries bs_sub(const BiSeries& a, const BiSeries& b);
BiSeries bs_mul(const BiSeries& a, const BiSeries& b);
BiSeries bs_scale(const BiSeries& a, const Q& s);
BiSeries bs_scale_mg(const BiSeries& a, const MGraded& m);
BiSeries bs_truncate(const BiSeries& a, int dz2);

// exp and log(1 + .) of a series with zero (0,0) coefficient; throw otherwise.
BiSeries bs_exp(const BiSeries& a);
BiSeries bs_log1p(const BiSeries& a);

// Formal derivative in z^i (antiholomorphic = false) or zbar^i (true).
BiSeries bs_partial(const BiSeries& a, bool antiholomorphic, int i);

// Matrix of mixed second derivatives, entry (i,j) = d2/dz^i dzbar^j.
std::vector<std::vector<BiSeries>> hermitian_hessian(const BiSeries& K);

// Determinant of a small (n <= 4) matrix of series, truncating per product.
BiSeries det_series(const std::vector<std::vector<BiSeries>>& M);

// Conjugate: keys swapped, symbols permuted by the involution.
BiSeries bs_conj(const BiSeries& a, const std::vector<int>& sym_perm);

// Substitute z^i -> phi[i](w) (holomorphic, zero constant term, invertible
// linear part) and zbar^i -> the conjugate series.  Throws on a singular
// Jacobian or on a phi that is not holomorphic.
BiSeries substitute_holomorphic(const BiSeries& a, const std::vector<BiSeries>& phi,
                                const std::vector<int>& sym_perm);

// Real in the declared involution: coeff(S,T) == conj-swap of coeff(T,S).
bool bs_is_real(const BiSeries& a, const std::vector<int>& sym_perm);

std::vector<int> identity_perm(int r);

std::string mi_str(const MI& a);

}  // namespace bk
