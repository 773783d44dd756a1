#pragma once
// Bergman-kernel expansion pipeline: density, Gram matrix of Gaussian
// moments, Neumann and closed-form inversion, the potential K_m, and the
// convergence report that checks K_m against K order by order in mu.

#include "bk/series.hpp"

namespace bk {

// One perturbation monomial c_i z^P zbar^Q.  The formal symbol index is the
// perturbation's position; the whole pipeline runs symbolically (the
// c-degree truncation is the termination mechanism), and `value`, when
// present, binds the symbol to a rational for post-hoc evaluation.  `name`
// overrides the display name c<i+1>.
struct Perturbation {
    MI P;
    MI Q;
    std::string name;
    std::optional<mpq_class> value;
};

// K = |z|^2 + sum_i c_i z^{P_i} zbar^{Q_i} with truncation orders attached.
// dp is the section-index order; dp < 0 selects the default, which keeps
// every z-degree <= dz coefficient of K_m exact (checked by the doubling
// test in convergence_report).
struct PotentialSpec {
    int n = 1;
    std::vector<Perturbation> perts;
    int dz = 4;
    int dc = 2;
    int dp = -1;
    std::vector<int> sym_perm;  // conjugation involution on symbols; empty = identity

    int symbols() const;      // formal symbol count r = perturbation count
    int max_p() const;        // max over perturbations of max(p, q)
    int max_pq() const;       // max over perturbations of p + q
    int default_dp() const;   // dz + dc * max_pq()
    int effective_dp() const;
    int mu_bound() const;     // assertion cap 2*dz + 2*dc*max_pq()
    std::vector<int> conj_perm() const;             // sym_perm or identity
    std::vector<std::string> symbol_names() const;  // declared or c<i+1>
    std::vector<std::optional<Q>> values() const;   // declared numeric bindings
};

// Throws std::invalid_argument on malformed specs: wrong index lengths,
// negative entries or truncations, p or q < 2, dp < dz, bad involution.
void validate(const PotentialSpec& spec);

// Gaussian moment of z^P over C^n with weight e^{-m|z|^2}: P! mu^{-2(n+p)}.
// The conventional pi^n factor is a global unit dropped everywhere (it
// cancels in every Gram ratio K_m consumes).
MGraded gaussian_moment(const MI& P, int n);

// K itself as a BiSeries at the spec truncations (or a custom z-degree).
BiSeries build_potential(const PotentialSpec& spec);
BiSeries build_potential(const PotentialSpec& spec, int dz);

// exp(-mu^2 (K - |z|^2)) * det hessian(K).  Computed at z-degree
// max(dz, dc*max_pq), beyond which the expansion is identically zero, so
// the result is an exact polynomial and serves every section order.
BiSeries density_expansion(const PotentialSpec& spec);

// Closed-form minor expansion of det hessian(K): sum over subsets I of
// perturbations and J of coordinates, |I| = |J|, of
// det(P_{I,J}) det(Q_{I,J}) prod_{i in I} c_i z^{P_I - e_J} zbar^{Q_I - e_J};
// terms with a negative exponent entry are dropped.  Equals
// det_series(hermitian_hessian(K)) on every spec.
BiSeries det_minor_expansion(const PotentialSpec& spec);

enum class GramFlavor { direct, diagonal, inverse };

// Matrix over the section indices S with s <= dp in graded-lex order;
// absent keys are zero entries.
struct GramMatrix {
    int n = 0;
    int r = 0;
    int dc = 0;
    int dp = 0;
    GramFlavor flavor = GramFlavor::direct;
    std::vector<MI> idx;
    std::map<BiKey, MGraded, BiKeyLess> t;

    const MGraded* entry(const MI& S, const MI& T) const;
};

// The flat diagonal Lambda with entry S! mu^{-2s}.
GramMatrix lambda_matrix(const PotentialSpec& spec);

// Entry (S,T) = sum over density coefficients (P,Q) with S+P = T+Q of
// a~_{P Qbar} (S+P)! mu^{-2(s+p)}.
GramMatrix gram_matrix(const PotentialSpec& spec);

// Neumann inverse W = sum_u (-Lambda^{-1} G')^u Lambda^{-1}; terminates at
// u = dc because every G' factor has c-degree >= 1.  Rows are propagated
// independently; row_bound < 0 inverts all rows, otherwise only rows with
// s <= row_bound (rows with s + dc*max_step <= dp are exact, where
// max_step is the largest |p - q| reachable; W*G = I holds on them).
GramMatrix gram_inverse(const GramMatrix& G, int row_bound = -1);

// The explicit combinatorial formula for the inverse entry (S,T):
// Lambda^{-1} delta_{ST} + mu^{s+t}/S! sum_u (-1)^u sum over compositions
// of balancing L of chain products of subset-expanded slot factors.
MGraded gram_inverse_closed_form(const PotentialSpec& spec, const MI& S, const MI& T);

// K_m: assemble N = sum W[(S,T)] z^T zbar^S, divide by N(0), log1p, shift
// mu^{-2}; normalized so K_m(0) = 0 (the discarded additive constant is
// (1/m) log of the (0,0) inverse entry, irrelevant to the metric).
BiSeries bergman_potential(const PotentialSpec& spec);
BiSeries bergman_potential(const PotentialSpec& spec, int dp_override);
BiSeries bergman_potential_from(const GramMatrix& W, const PotentialSpec& spec);

// Per-key verdict: no positive mu-exponents, mu^0 equals the K coefficient,
// and the leading negative-mu residue (the 1/m-rate datum).  residue is
// zero with residue_exp = 0 when the key has no negative part.
struct KeyVerdict {
    MI S, T;
    bool positive_ok = false;
    bool mu0_ok = false;
    bool stable = true;
    int residue_exp = 0;
    CPoly residue;
};

struct ConvergenceReport {
    std::vector<KeyVerdict> keys;  // every s+t <= dz key, graded-lex
    bool pass = false;             // all positive_ok and mu0_ok
    bool stable = false;           // verdicts and residues unchanged at dp+2
};

std::vector<KeyVerdict> verify_convergence(const BiSeries& Km, const PotentialSpec& spec);

// Runs the pipeline at dp and dp+2; instability marks the report (a
// configuration error: dp too small for the requested dz).
ConvergenceReport convergence_report(const PotentialSpec& spec);

}  // namespace bk
