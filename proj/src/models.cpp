// CP^1 model geometries: exact Fubini-Study records via the Beta integral,
// exp-sinh quadrature in log space for the perturbed radial profile, and the
// symbolic/numeric cross-check at the origin.

#include "bk/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bk/bergman.hpp"
#include "bk/multiindex.hpp"
#include "bk/series.hpp"

namespace bk {

namespace {

// Radial profile psi = log(1+t) + eps * B, B = t^2/(1+t)^3, evaluated in the
// bounded variables s = 1/(1+t) and w = t s:
//   psi = log1p(t) + eps w^2 s
//   g   = psi' + t psi''     = s^2 (1 + eps w (w^2 - 7 w s + 4 s^2))
//   g'  = 2 psi'' + t psi''' = s^3 (-2 + eps (4 q2 - 6 w q3)),
//         q2 = w^2 - 4 w s + s^2,  q3 = w^2 - 6 w s + 3 s^2.
// Naive powers of t overflow near t ~ 1e154 while the matching s-powers
// underflow, poisoning far-tail quadrature nodes with inf * 0; the grouped
// forms stay finite everywhere and underflow only where the true value is
// genuinely below double range.
struct Psi {
    double eps = 0.0;

    double value(double t) const {
        double s = 1.0 / (1.0 + t), w = t * s;
        return std::log1p(t) + eps * (w * w * s);
    }
    double metric(double t) const {
        double s = 1.0 / (1.0 + t), w = t * s;
        return s * s * (1.0 + eps * (w * (w * w - 7.0 * w * s + 4.0 * s * s)));
    }
    double metric_d1(double t) const {
        double s = 1.0 / (1.0 + t), w = t * s;
        double q2 = w * w - 4.0 * w * s + s * s;
        double q3 = w * w - 6.0 * w * s + 3.0 * s * s;
        return s * s * s * (-2.0 + eps * (4.0 * q2 - 6.0 * w * q3));
    }
};

struct QuadResult {
    double value = 0.0;
    double err = 0.0;
};

// integral_0^inf f(t) dt with f supplied in log space, f(t) = exp(expo) * factor,
// under the exp-sinh substitution t = exp((pi/2) sinh u).  Trapezoid in u with
// step halving from h = 1 until two successive levels agree to rel relative;
// convergence is not accepted before min_nodes nodes have been placed.  Nodes
// whose exponent underflows contribute nothing and are skipped.
template <typename F>
QuadResult exp_sinh_quad(const F& logf, double rel, int min_nodes) {
    constexpr double kHalfPi = 1.5707963267948966;
    constexpr double kUmax = 7.0;
    constexpr int kMaxLevel = 12;

    auto node = [&](double u) -> double {
        double su = kHalfPi * std::sinh(u);
        if (su >= 700.0) return 0.0;  // t would overflow; the weight has died long before
        double t = std::exp(su);
        if (t <= 0.0) return 0.0;
        double expo = 0.0, factor = 0.0;
        logf(t, expo, factor);
        expo += su + std::log(kHalfPi * std::cosh(u));
        if (expo < -745.0) return 0.0;
        return std::exp(expo) * factor;
    };

    long nodes = 0;
    auto row = [&](double h, bool only_odd) -> double {
        double s = 0.0;
        for (int sign : {1, -1}) {
            long k = only_odd ? 1 : (sign == 1 ? 0 : 1);
            long step = only_odd ? 2 : 1;
            for (; k * h <= kUmax; k += step) {
                s += node(sign * k * h);
                ++nodes;
            }
        }
        return s;
    };

    double h = 1.0;
    double total = row(h, false) * h;
    for (int level = 0; level < kMaxLevel; ++level) {
        h /= 2;
        double refined = total / 2 + row(h, true) * h;
        double err = std::abs(refined - total);
        total = refined;
        if (nodes >= min_nodes && err <= rel * std::abs(total)) return {total, err};
    }
    throw std::runtime_error("quadrature failed to converge");
}

// Diagonal Gram entries nu_k, k = 0..m.  Independent integrals, evaluated in
// ascending k so the reduction order of the error estimate is fixed.
std::vector<double> radial_norms(int m, const Psi& psi, double rel, int min_nodes,
                                 double& rel_err) {
    std::vector<double> nu(m + 1);
    rel_err = 0.0;
    for (int k = 0; k <= m; ++k) {
        auto logf = [&](double t, double& expo, double& factor) {
            expo = k * std::log(t) - m * psi.value(t);
            factor = psi.metric(t);
        };
        QuadResult q = exp_sinh_quad(logf, rel, min_nodes);
        nu[k] = q.value;
        if (q.value != 0.0) rel_err = std::max(rel_err, q.err / std::abs(q.value));
    }
    return nu;
}

// g = psi' + t psi'' must be positive: a fine grid on [0, 10] plus geometric
// tail points (g -> (1 + eps)/t^2, so a far-tail sign change shows up at some
// doubling point).
void check_positive(const Psi& psi) {
    for (int j = 0; j <= 1280; ++j)
        if (psi.metric(j / 128.0) <= 0.0)
            throw std::domain_error("metric is not positive on the quadrature grid");
    for (int j = 1; j <= 24; ++j)
        if (psi.metric(10.0 * std::pow(2.0, j)) <= 0.0)
            throw std::domain_error("metric is not positive on the quadrature grid");
}

Psi validated_profile(const RadialMetricSpec& spec) {
    double eps = 0.0;
    if (spec.profile == "fubini_study") {
        if (spec.epsilon != 0.0)
            throw std::invalid_argument("fubini_study profile has no perturbation parameter");
    } else if (spec.profile == "perturbed") {
        eps = spec.epsilon;
    } else {
        throw std::invalid_argument("unknown radial profile: " + spec.profile);
    }
    if (spec.min_nodes < 64)
        throw std::invalid_argument("quadrature node count must be at least 64");
    Psi psi{eps};
    check_positive(psi);
    return psi;
}

Q cpoly_eval(const CPoly& p, const std::vector<Q>& vals) {
    Q tot(0);
    for (const auto& [e, v] : p.t) {
        Q term = v;
        for (size_t i = 0; i < e.size(); ++i)
            for (int j = 0; j < e[i]; ++j) term *= vals[i];
        tot += term;
    }
    return tot;
}

// Negative-mu part of the K_m coefficient at key ((1),(1)) for the radial jet
// psi = t + c2 t^2 + c3 t^3 + c4 t^4, evaluated at mu^2 = m.  A radial jet
// only produces even mu exponents here, so the value is exact rational.
Q residue_tail(const std::vector<Q>& jet, int m) {
    PotentialSpec spec;
    spec.n = 1;
    spec.dz = 2;
    spec.dc = 3;
    spec.perts = {{MI{2}, MI{2}, "", {}}, {MI{3}, MI{3}, "", {}}, {MI{4}, MI{4}, "", {}}};
    BiSeries Km = bergman_potential(spec);
    MGraded mg = bs_coeff(Km, MI{1}, MI{1});
    Q tot(0);
    for (const auto& [e, cp] : mg.t) {
        if (e >= 0) continue;
        if (e % 2 != 0) throw std::logic_error("odd mu exponent in a radial tail");
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(m),
                      static_cast<unsigned long>(-e / 2));
        Q scale(1);
        scale /= Q(p);
        tot += cpoly_eval(cp, jet) * scale;
    }
    return tot;
}

}  // namespace

FsBergmanRecord cp1_fs_bergman(int m) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    FsBergmanRecord rec;
    rec.m = m;
    Q fm1 = qfact(m + 1);
    rec.nu.reserve(m + 1);
    for (int k = 0; k <= m; ++k) rec.nu.push_back(qfact(k) * qfact(m - k) / fm1);

    rec.binomial_identity = true;
    for (int k = 0; k <= m; ++k)
        if (Q(1) / rec.nu[k] != Q(m + 1) * qbinom(m, k)) rec.binomial_identity = false;
    // N(t) = (m+1)(1+t)^m, so K_m - K = (1/m) log N - log(1+t) = log(m+1)/m.
    rec.log_argument = m + 1;

    rec.samples = {Q(1, 4), Q(1, 2), Q(3, 4), Q(1), Q(3, 2), Q(2)};
    rec.balanced = true;
    for (const Q& t : rec.samples) {
        // Horner for N, N', N'' with c_k = 1/nu_k; then
        // g_m = (u1 + t u2)/m with u1 = N'/N, u2 = N''/N - u1^2.
        Q n0(0), n1(0), n2(0);
        for (int k = m; k >= 0; --k) {
            n2 = n2 * t + Q(2) * n1;
            n1 = n1 * t + n0;
            n0 = n0 * t + Q(1) / rec.nu[k];
        }
        Q u1 = n1 / n0;
        Q u2 = n2 / n0 - u1 * u1;
        Q gm = (u1 + t * u2) / m;
        Q w = Q(1) + t;
        Q dev = gm - Q(1) / (w * w);
        if (dev != 0) rec.balanced = false;
        rec.metric_deviation.push_back(dev);
    }
    return rec;
}

PerturbedBergmanRecord cp1_perturbed_bergman(const RadialMetricSpec& spec, int m,
                                             const std::vector<double>& sample_points) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    Psi psi = validated_profile(spec);
    for (double t : sample_points)
        if (!(t >= 0.0)) throw std::invalid_argument("sample points must be nonnegative");

    PerturbedBergmanRecord rec;
    rec.m = m;
    rec.epsilon = psi.eps;
    rec.samples = sample_points.empty() ? std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.5, 2.0}
                                        : sample_points;

    std::vector<double> nu = radial_norms(m, psi, 1e-12, spec.min_nodes, rec.quadrature_rel_error);
    std::vector<double> c(m + 1);
    for (int k = 0; k <= m; ++k) c[k] = 1.0 / nu[k];

    for (double t : rec.samples) {
        // Horner for N, N', N'', N''' at once (c-coefficients high to low).
        double n0 = 0, n1 = 0, n2 = 0, n3 = 0;
        for (int k = m; k >= 0; --k) {
            n3 = n3 * t + 3 * n2;
            n2 = n2 * t + 2 * n1;
            n1 = n1 * t + n0;
            n0 = n0 * t + c[k];
        }
        double u1 = n1 / n0;
        double u2 = n2 / n0 - u1 * u1;
        double u3 = n3 / n0 - 3 * u1 * (n2 / n0) + 2 * u1 * u1 * u1;
        double gm = (u1 + t * u2) / m;
        double gm1 = (2 * u2 + t * u3) / m;
        rec.metric_error.push_back(gm - psi.metric(t));
        rec.derivative_error.push_back(gm1 - psi.metric_d1(t));
    }
    for (double e : rec.metric_error) rec.max_metric_error = std::max(rec.max_metric_error, std::abs(e));
    for (double e : rec.derivative_error)
        rec.max_derivative_error = std::max(rec.max_derivative_error, std::abs(e));
    rec.origin_error = nu[0] / (m * nu[1]) - 1.0;
    return rec;
}

CrossModalRecord cross_modal_check(int m, const Q& epsilon) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    CrossModalRecord rec;
    rec.m = m;
    rec.epsilon = epsilon;

    // log(1+t) = t - t^2/2 + t^3/3 - t^4/4 + ...; the bump contributes
    // eps (t^2 - 3 t^3 + 6 t^4 + ...).
    std::vector<Q> fs = {Q(-1, 2), Q(1, 3), Q(-1, 4)};
    std::vector<Q> pert = {fs[0] + epsilon, fs[1] - 3 * epsilon, fs[2] + 6 * epsilon};
    Q sym = residue_tail(pert, m) - residue_tail(fs, m);
    rec.predicted = sym.get_d();

    RadialMetricSpec rspec;
    rspec.profile = "perturbed";
    rspec.epsilon = epsilon.get_d();
    rec.measured = cp1_perturbed_bergman(rspec, m).origin_error;

    if (rec.predicted != 0.0) {
        rec.ratio = rec.measured / rec.predicted;
        rec.within_factor_two = rec.ratio >= 0.5 && rec.ratio <= 2.0;
    }
    return rec;
}

}  // namespace bk
