#pragma once
// Concrete geometries for end-to-end validation: the exact CP^1 Fubini-Study
// Bergman metric via the Beta integral (closed form, rational arithmetic) and
// a rotation-invariant perturbed CP^1 metric evaluated by adaptive
// double-exponential quadrature.  Rotation invariance keeps the Gram matrix
// diagonal, so quadrature error is the sole numeric error source.

#include <string>
#include <vector>

#include "bk/rational.hpp"

namespace bk {

// Radial Kahler potential psi(t), t = |z|^2, normalized so psi(0) = 0 and
// psi'(0) = 1.  "fubini_study" is log(1+t); "perturbed" adds epsilon times
// the fixed smooth bump t^2/(1+t)^3, which vanishes to second order at the
// origin and decays at infinity, preserving the normalization.
struct RadialMetricSpec {
    std::string profile = "fubini_study";  // "fubini_study" | "perturbed"
    double epsilon = 0.0;                  // bump amplitude; must be 0 for fubini_study
    int min_nodes = 64;                    // quadrature node floor per integral
};

// Exact comparison record at level m for the Fubini-Study metric.  Section
// norms of z^k come from the Beta integral, nu_k = k!(m-k)!/(m+1)! (the
// angular constant is a global unit, dropped).  N(t) = sum_k t^k/nu_k equals
// (m+1)(1+t)^m, so K_m - K is the constant log(m+1)/m and g_m = g exactly.
struct FsBergmanRecord {
    int m = 0;
    std::vector<Q> nu;                // nu_0 .. nu_m
    bool binomial_identity = false;   // 1/nu_k == (m+1) C(m,k) for every k
    long log_argument = 0;            // K_m - K == log(log_argument)/m  (= m+1)
    std::vector<Q> samples;           // rational t = |z|^2 sample points
    std::vector<Q> metric_deviation;  // g_m(t) - g(t), exact, one per sample
    bool balanced = false;            // every deviation vanishes
};

// Throws std::invalid_argument unless m >= 1.
FsBergmanRecord cp1_fs_bergman(int m);

// Numeric convergence record at level m for a radial profile.  Monomials z^k
// stay orthogonal, so the Gram matrix is diagonal with entries
//   nu_k = int_0^inf t^k e^{-m psi(t)} (psi'(t) + t psi''(t)) dt,
// each evaluated by the exp-sinh double-exponential rule in log space with
// step halving until successive levels agree to 1e-12 relative (never before
// min_nodes nodes have been placed).  errors are signed g_m - g readings.
struct PerturbedBergmanRecord {
    int m = 0;
    double epsilon = 0.0;
    std::vector<double> samples;           // t = |z|^2 sample points
    std::vector<double> metric_error;      // g_m(t) - g(t) per sample
    std::vector<double> derivative_error;  // d/dt (g_m - g)(t) per sample
    double max_metric_error = 0.0;
    double max_derivative_error = 0.0;
    double origin_error = 0.0;             // g_m(0) - g(0) = nu_0/(m nu_1) - 1
    double quadrature_rel_error = 0.0;     // worst per-integral relative estimate
};

// Empty sample_points selects {1/4, 1/2, 3/4, 1, 3/2, 2}.  Throws
// std::invalid_argument on a malformed spec, std::domain_error when the
// metric coefficient psi' + t psi'' is not positive on the check grid, and
// std::runtime_error when the quadrature fails to converge.
PerturbedBergmanRecord cp1_perturbed_bergman(const RadialMetricSpec& spec, int m,
                                             const std::vector<double>& sample_points = {});

// Cross-modal consistency: the symbolic expansion predicts the numeric origin
// error.  The radial jet psi = t + c2 t^2 + c3 t^3 + c4 t^4 gives a three-
// perturbation potential spec; `predicted` is the negative-mu part of the
// symbolic K_m coefficient at key ((1),(1)) evaluated at mu^2 = m and at the
// perturbed jet values, minus the same tail at the fubini_study jet (the
// truncated jet is not balanced, so its own tail is the baseline).
// `measured` is nu_0/(m nu_1) - 1 from quadrature.  The prediction is only
// claimed to within a factor of two, and only once m is deep enough in the
// asymptotic regime; pre-asymptotic levels can even flip the sign.
struct CrossModalRecord {
    int m = 0;
    Q epsilon;                       // bump amplitude, exact
    double predicted = 0.0;          // baseline-subtracted symbolic tail
    double measured = 0.0;           // numeric origin error
    double ratio = 0.0;              // measured / predicted (0 when predicted = 0)
    bool within_factor_two = false;  // ratio in [1/2, 2]
};

// Throws std::invalid_argument unless m >= 1.
CrossModalRecord cross_modal_check(int m, const Q& epsilon);

}  // namespace bk
