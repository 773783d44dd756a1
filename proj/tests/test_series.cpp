#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bk/series.hpp"

using namespace bk;

namespace {

// |z|^2 as a BiSeries.
BiSeries norm_sq(int n, int r, int dz, int dc) {
    BiSeries K = bs_zero(n, r, dz, dc);
    for (int i = 0; i < n; ++i) bs_add_term(K, mi_unit(n, i), mi_unit(n, i), mg_one(r, dc));
    return K;
}

// Deterministic small random series with zero constant term.
BiSeries random_series(std::mt19937& rng, int n, int r, int dz, int dc, int nterms) {
    BiSeries a = bs_zero(n, r, dz, dc);
    auto idx = enumerate_indices(n, dz);
    std::uniform_int_distribution<size_t> pick(0, idx.size() - 1);
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3), mu(-2, 2), cdeg(0, dc);
    auto cidx = enumerate_indices(std::max(r, 1), dc);
    std::uniform_int_distribution<size_t> cpick(0, cidx.size() - 1);
    for (int k = 0; k < nterms; ++k) {
        MI S = idx[pick(rng)], T = idx[pick(rng)];
        if ((order(S) == 0 && order(T) == 0) || order(S) + order(T) > dz) continue;
        Q v(num(rng), den(rng));
        if (v == 0) continue;
        MI ce = r > 0 ? cidx[cpick(rng)] : mi_zero(0);
        bs_add_term(a, S, T, mg_term(mu(rng), cp_monomial(r, dc, ce, v)));
    }
    return a;
}

}  // namespace

TEST_CASE("CPoly ring basics and truncation") {
    CPoly c1 = cp_symbol(2, 2, 0), c2 = cp_symbol(2, 2, 1);
    CPoly p = cp_mul(cp_add(c1, c2), cp_add(c1, c2));
    CHECK(cp_coeff(p, MI{2, 0}) == Q(1));
    CHECK(cp_coeff(p, MI{1, 1}) == Q(2));
    // One more factor exceeds the degree bound and truncates to zero.
    CHECK(cp_is_zero(cp_mul(p, c1)));
    CHECK(cp_str(p, {"a", "b"}) == "1*a^2 + 2*a*b + 1*b^2");
}

TEST_CASE("CPoly partial evaluation and involution") {
    CPoly p = cp_add(cp_mul(cp_symbol(2, 3, 0), cp_symbol(2, 3, 1)), cp_symbol(2, 3, 0));
    CPoly ev = cp_eval_partial(p, {Q(1, 2), std::nullopt});
    CHECK(cp_coeff(ev, MI{0, 1}) == Q(1, 2));
    CHECK(cp_coeff(ev, MI{0, 0}) == Q(1, 2));
    CPoly sw = cp_permute_symbols(cp_symbol(2, 3, 0), {1, 0});
    CHECK(sw == cp_symbol(2, 3, 1));
}

TEST_CASE("MGraded grading is multiplicative and inverse works") {
    MGraded a = mg_term(2, cp_symbol(2, 3, 0));
    MGraded b = mg_term(-3, cp_symbol(2, 3, 1));
    MGraded ab = mg_mul(a, b);
    CHECK(mg_max_exp(ab) == -1);
    CHECK(mg_coeff(ab, -1) == cp_mul(cp_symbol(2, 3, 0), cp_symbol(2, 3, 1)));

    // (1 + 2c mu^-2)^-1 expands as an alternating series; product is 1.
    MGraded u = mg_add(mg_one(1, 3), mg_term(-2, cp_scale(cp_symbol(1, 3, 0), Q(2))));
    MGraded inv = mg_inverse_unit(u);
    CHECK(mg_mul(u, inv) == mg_one(1, 3));
    CHECK(mg_coeff(inv, -4) == cp_monomial(1, 3, MI{2}, Q(4)));
}

TEST_CASE("mul: annihilator and |z|^2 squared") {
    BiSeries K = norm_sq(2, 0, 4, 0);
    CHECK(bs_is_zero(bs_mul(K, bs_zero(2, 0, 4, 0))));
    BiSeries K2 = bs_mul(K, K);
    CHECK(mg_coeff(bs_coeff(K2, MI{1, 1}, MI{1, 1}), 0) == cp_const(0, 0, Q(2)));
    CHECK(mg_coeff(bs_coeff(K2, MI{2, 0}, MI{2, 0}), 0) == cp_const(0, 0, Q(1)));
}

TEST_CASE("ring axioms on random small series") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 5; ++trial) {
        BiSeries a = random_series(rng, 2, 1, 4, 2, 6);
        BiSeries b = random_series(rng, 2, 1, 4, 2, 6);
        BiSeries c = random_series(rng, 2, 1, 4, 2, 6);
        CHECK(bs_mul(a, b) == bs_mul(b, a));
        CHECK(bs_mul(bs_mul(a, b), c) == bs_mul(a, bs_mul(b, c)));
        CHECK(bs_mul(a, bs_add(b, c)) == bs_add(bs_mul(a, b), bs_mul(a, c)));
    }
}

TEST_CASE("truncation commutes with multiplication") {
    std::mt19937 rng(777);
    BiSeries a = random_series(rng, 1, 1, 6, 2, 8);
    BiSeries b = random_series(rng, 1, 1, 6, 2, 8);
    BiSeries full = bs_truncate(bs_mul(a, b), 4);
    BiSeries cut = bs_mul(bs_truncate(a, 4), bs_truncate(b, 4));
    CHECK(full == cut);
}

TEST_CASE("exp: truncating single term and exp(a)exp(-a) = 1") {
    BiSeries zero = bs_zero(1, 1, 4, 1);
    CHECK(bs_exp(zero) == bs_const(1, 1, 4, 1, 1));

    BiSeries a = bs_zero(1, 1, 4, 1);
    bs_add_term(a, MI{2}, MI{2}, mg_term(0, cp_symbol(1, 1, 0)));
    BiSeries e = bs_exp(a);
    BiSeries expect = bs_add(bs_const(1, 1, 4, 1, 1), a);
    CHECK(e == expect);

    std::mt19937 rng(99);
    BiSeries b = random_series(rng, 2, 1, 4, 2, 6);
    CHECK(bs_mul(bs_exp(b), bs_exp(bs_scale(b, Q(-1)))) == bs_const(2, 1, 4, 2, 1));

    BiSeries bad = bs_const(1, 1, 4, 1, 1);
    CHECK_THROWS_AS(bs_exp(bad), std::invalid_argument);
}

TEST_CASE("log1p inverts exp and expands the scalar series") {
    CHECK(bs_is_zero(bs_log1p(bs_zero(1, 0, 4, 0))));

    std::mt19937 rng(4242);
    for (int trial = 0; trial < 4; ++trial) {
        BiSeries a = random_series(rng, 2, 1, 4, 2, 6);
        BiSeries em1 = bs_sub(bs_exp(a), bs_const(2, 1, 4, 2, 1));
        CHECK(bs_log1p(em1) == a);
    }

    BiSeries x = bs_zero(1, 0, 6, 0);
    bs_add_term(x, MI{1}, MI{1}, mg_one(0, 0));
    BiSeries lg = bs_log1p(x);
    CHECK(mg_coeff(bs_coeff(lg, MI{1}, MI{1}), 0) == cp_const(0, 0, Q(1)));
    CHECK(mg_coeff(bs_coeff(lg, MI{2}, MI{2}), 0) == cp_const(0, 0, Q(-1, 2)));
    CHECK(mg_coeff(bs_coeff(lg, MI{3}, MI{3}), 0) == cp_const(0, 0, Q(1, 3)));
}

TEST_CASE("partial derivatives") {
    BiSeries K = norm_sq(1, 0, 4, 0);
    BiSeries dK = bs_partial(K, false, 0);
    CHECK(dK == [] {
        BiSeries e = bs_zero(1, 0, 4, 0);
        bs_add_term(e, MI{0}, MI{1}, mg_one(0, 0));
        return e;
    }());

    BiSeries a = bs_zero(1, 1, 4, 1);
    bs_add_term(a, MI{2}, MI{2}, mg_term(0, cp_symbol(1, 1, 0)));
    BiSeries mixed = bs_partial(bs_partial(a, false, 0), true, 0);
    CHECK(mg_coeff(bs_coeff(mixed, MI{1}, MI{1}), 0) == cp_scale(cp_symbol(1, 1, 0), Q(4)));

    std::mt19937 rng(31);
    BiSeries b = random_series(rng, 2, 1, 5, 2, 8);
    CHECK(bs_partial(bs_partial(b, false, 0), true, 1) ==
          bs_partial(bs_partial(b, true, 1), false, 0));
}

TEST_CASE("hermitian hessian and determinant") {
    BiSeries K = norm_sq(2, 0, 4, 0);
    auto H = hermitian_hessian(K);
    CHECK(H[0][0] == bs_const(2, 0, 4, 0, 1));
    CHECK(bs_is_zero(H[0][1]));
    CHECK(det_series(H) == bs_const(2, 0, 4, 0, 1));

    // n=1 curvature-type potential: hessian 1 + 4c|z|^2.
    BiSeries K1 = norm_sq(1, 1, 4, 1);
    bs_add_term(K1, MI{2}, MI{2}, mg_term(0, cp_symbol(1, 1, 0)));
    auto H1 = hermitian_hessian(K1);
    BiSeries expect = bs_const(1, 1, 4, 1, 1);
    bs_add_term(expect, MI{1}, MI{1}, mg_term(0, cp_scale(cp_symbol(1, 1, 0), Q(4))));
    CHECK(H1[0][0] == expect);
    CHECK(det_series(H1) == H1[0][0]);

    // Diagonal 2x2: det(1+a, 1+b) = 1 + a + b + ab.
    BiSeries one2 = bs_const(2, 2, 4, 2, 1);
    BiSeries a = bs_zero(2, 2, 4, 2), b = bs_zero(2, 2, 4, 2);
    bs_add_term(a, MI{1, 0}, MI{1, 0}, mg_term(0, cp_symbol(2, 2, 0)));
    bs_add_term(b, MI{0, 1}, MI{0, 1}, mg_term(0, cp_symbol(2, 2, 1)));
    std::vector<std::vector<BiSeries>> D{{bs_add(one2, a), bs_zero(2, 2, 4, 2)},
                                         {bs_zero(2, 2, 4, 2), bs_add(one2, b)}};
    BiSeries det = det_series(D);
    BiSeries want = bs_add(bs_add(one2, a), bs_add(b, bs_mul(a, b)));
    CHECK(det == want);
}

TEST_CASE("holomorphic substitution") {
    auto id1 = [] {
        BiSeries p = bs_zero(1, 0, 4, 0);
        bs_add_term(p, MI{1}, MI{0}, mg_one(0, 0));
        return p;
    };
    BiSeries K = norm_sq(1, 0, 4, 0);
    CHECK(substitute_holomorphic(K, {id1()}, identity_perm(0)) == K);

    // z = w + w^2: |z|^2 = |w|^2 + w^2 wbar + w wbar^2 + w^2 wbar^2.
    BiSeries phi = id1();
    bs_add_term(phi, MI{2}, MI{0}, mg_one(0, 0));
    BiSeries got = substitute_holomorphic(K, {phi}, identity_perm(0));
    BiSeries want = norm_sq(1, 0, 4, 0);
    bs_add_term(want, MI{2}, MI{1}, mg_one(0, 0));
    bs_add_term(want, MI{1}, MI{2}, mg_one(0, 0));
    bs_add_term(want, MI{2}, MI{2}, mg_one(0, 0));
    CHECK(got == want);

    // Composition in sequence equals substitution by the composite.
    std::mt19937 rng(555);
    BiSeries a = random_series(rng, 1, 0, 4, 0, 6);
    BiSeries psi = id1();
    bs_add_term(psi, MI{3}, MI{0}, mg_const(0, 0, Q(-1, 2)));
    BiSeries lhs = substitute_holomorphic(substitute_holomorphic(a, {phi}, {}), {psi}, {});
    BiSeries comp = substitute_holomorphic(phi, {psi}, {});
    BiSeries rhs = substitute_holomorphic(a, {comp}, {});
    CHECK(lhs == rhs);

    // Singular Jacobian rejected.
    BiSeries sing = bs_zero(1, 0, 4, 0);
    bs_add_term(sing, MI{2}, MI{0}, mg_one(0, 0));
    CHECK_THROWS_AS(substitute_holomorphic(K, {sing}, identity_perm(0)), std::invalid_argument);
}

TEST_CASE("conjugation and reality") {
    BiSeries a = bs_zero(1, 2, 4, 1);
    bs_add_term(a, MI{2}, MI{1}, mg_term(0, cp_symbol(2, 1, 0)));
    bs_add_term(a, MI{1}, MI{2}, mg_term(0, cp_symbol(2, 1, 1)));
    CHECK(bs_is_real(a, {1, 0}));
    CHECK(!bs_is_real(a, {0, 1}));
    CHECK(bs_conj(bs_conj(a, {1, 0}), {1, 0}) == a);
}

TEST_CASE("mu cap flags runaway exponents") {
    BiSeries a = bs_zero(1, 0, 4, 0, 3);
    CHECK_THROWS_AS(bs_add_term(a, MI{1}, MI{1}, mg_term(5, cp_const(0, 0, Q(1)))),
                    std::logic_error);
}
