// CP^1 models: exact Fubini-Study balance, quadrature consistency, perturbed
// convergence trends, and the symbolic/numeric cross-check.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bk/models.hpp"

#include <stdexcept>

using namespace bk;
using doctest::Approx;

TEST_CASE("fubini-study record is exact and balanced") {
    FsBergmanRecord r1 = cp1_fs_bergman(1);
    CHECK(r1.nu == std::vector<Q>{Q(1, 2), Q(1, 2)});
    CHECK(r1.log_argument == 2);  // K_m - K = log 2
    CHECK(r1.binomial_identity);
    CHECK(r1.balanced);
    CHECK(r1.metric_deviation.size() == r1.samples.size());
    for (const Q& d : r1.metric_deviation) CHECK(d == 0);

    FsBergmanRecord r10 = cp1_fs_bergman(10);
    CHECK(r10.log_argument == 11);
    CHECK(r10.nu[0] == Q(1, 11));  // Beta integral at k = 0
    CHECK(r10.balanced);

    for (int m = 1; m <= 50; ++m) {
        FsBergmanRecord r = cp1_fs_bergman(m);
        CHECK(r.binomial_identity);
        CHECK(r.balanced);
        CHECK(r.log_argument == m + 1);
    }

    CHECK_THROWS_AS(cp1_fs_bergman(0), std::invalid_argument);
}

TEST_CASE("quadrature reproduces the exact record at epsilon zero") {
    RadialMetricSpec fs;  // defaults: fubini_study, epsilon 0, 64 nodes
    PerturbedBergmanRecord rec = cp1_perturbed_bergman(fs, 12);
    CHECK(rec.samples.size() == 6);
    CHECK(rec.quadrature_rel_error < 1e-12);
    CHECK(rec.max_metric_error < 1e-12);
    CHECK(rec.max_derivative_error < 1e-12);
    CHECK(std::abs(rec.origin_error) < 1e-12);

    PerturbedBergmanRecord custom = cp1_perturbed_bergman(fs, 4, {0.5});
    CHECK(custom.samples == std::vector<double>{0.5});
    CHECK(custom.metric_error.size() == 1);
    CHECK(custom.max_metric_error < 1e-12);
}

TEST_CASE("perturbed errors match the frozen calibration") {
    RadialMetricSpec spec;
    spec.profile = "perturbed";
    spec.epsilon = 0.1;

    PerturbedBergmanRecord r16 = cp1_perturbed_bergman(spec, 16);
    PerturbedBergmanRecord r32 = cp1_perturbed_bergman(spec, 32);
    PerturbedBergmanRecord r64 = cp1_perturbed_bergman(spec, 64);

    CHECK(r16.max_metric_error == Approx(1.881021785e-03).epsilon(1e-5));
    CHECK(r16.max_derivative_error == Approx(4.202058416e-03).epsilon(1e-5));
    CHECK(r64.max_metric_error == Approx(1.564739914e-04).epsilon(1e-5));
    CHECK(r64.origin_error == Approx(6.538315305e-04).epsilon(1e-5));
    CHECK(r16.quadrature_rel_error < 2e-12);
    CHECK(r64.quadrature_rel_error < 2e-12);

    // monotone decay along the doubling sequence; m = 64 beats m = 16
    CHECK(r32.max_metric_error < r16.max_metric_error);
    CHECK(r64.max_metric_error < r32.max_metric_error);
    CHECK(r64.max_metric_error < r16.max_metric_error);

    // the decay is a bit faster than O(1/m) on this window: halving ratios
    // ~0.304 and ~0.274, trending toward ~0.25 (the 1/m^2 regime)
    double q1 = r32.max_metric_error / r16.max_metric_error;
    double q2 = r64.max_metric_error / r32.max_metric_error;
    CHECK(q1 > 0.29);
    CHECK(q1 < 0.32);
    CHECK(q2 > 0.26);
    CHECK(q2 < 0.29);
}

TEST_CASE("input validation and positivity") {
    RadialMetricSpec ok;
    CHECK_THROWS_AS(cp1_perturbed_bergman(ok, 0), std::invalid_argument);

    RadialMetricSpec bad = ok;
    bad.profile = "round";
    CHECK_THROWS_AS(cp1_perturbed_bergman(bad, 4), std::invalid_argument);

    bad = ok;
    bad.epsilon = 0.1;  // fubini_study with a bump amplitude
    CHECK_THROWS_AS(cp1_perturbed_bergman(bad, 4), std::invalid_argument);

    bad = ok;
    bad.min_nodes = 32;
    CHECK_THROWS_AS(cp1_perturbed_bergman(bad, 4), std::invalid_argument);

    CHECK_THROWS_AS(cp1_perturbed_bergman(ok, 4, {-1.0}), std::invalid_argument);

    RadialMetricSpec strong;
    strong.profile = "perturbed";
    strong.epsilon = 3.0;  // dips negative near t = 3
    CHECK_THROWS_WITH_AS(cp1_perturbed_bergman(strong, 4),
                         "metric is not positive on the quadrature grid", std::domain_error);

    strong.epsilon = -2.0;  // positive on [0, 10], negative in the far tail
    CHECK_THROWS_WITH_AS(cp1_perturbed_bergman(strong, 4),
                         "metric is not positive on the quadrature grid", std::domain_error);
}

TEST_CASE("cross-modal prediction at the pinned level") {
    CrossModalRecord r = cross_modal_check(64, Q(1, 10));
    CHECK(r.predicted == Approx(5.450358e-04).epsilon(1e-5));
    CHECK(r.measured == Approx(6.538315e-04).epsilon(1e-5));
    CHECK(r.ratio == Approx(1.200).epsilon(1e-2));
    CHECK(r.within_factor_two);

    // pre-asymptotic level: the truncated-jet tail even flips sign
    CrossModalRecord early = cross_modal_check(16, Q(1, 10));
    CHECK_FALSE(early.within_factor_two);
    CHECK(early.ratio < 0);

    // zero perturbation: nothing to predict
    CrossModalRecord flat = cross_modal_check(8, Q(0));
    CHECK(flat.predicted == 0.0);
    CHECK(flat.ratio == 0.0);
    CHECK_FALSE(flat.within_factor_two);

    CHECK_THROWS_AS(cross_modal_check(0, Q(1, 10)), std::invalid_argument);
}
