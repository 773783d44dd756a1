#include "bk/bochner.hpp"

#include <stdexcept>

namespace bk {

namespace {

// plain rational coefficient (mu^0, symbol-free), zero included
bool mg_rational(const MGraded& a, Q& out) {
    out = 0;
    if (mg_is_zero(a)) return true;
    if (a.t.size() != 1) return false;
    const auto& [mu, c] = *a.t.begin();
    if (mu != 0 || c.t.size() != 1) return false;
    const auto& [e, v] = *c.t.begin();
    if (order(e) != 0) return false;
    out = v;
    return true;
}

std::vector<BiSeries> identity_change(const BiSeries& K) {
    std::vector<BiSeries> phi;
    for (int i = 0; i < K.n; ++i) {
        BiSeries w = bs_zero(K.n, K.r, K.dz, K.dc, K.mu_cap);
        bs_add_term(w, mi_unit(K.n, i), mi_zero(K.n), mg_one(K.r, K.dc));
        phi.push_back(w);
    }
    return phi;
}

}  // namespace

std::vector<GaugeViolation> verify_gauge(const BiSeries& K, int up_to) {
    const int n = K.n;
    std::map<BiKey, MGraded, BiKeyLess> viols;
    if (up_to >= 2) {
        for (int i = 0; i < n; ++i) {
            const MI e = mi_unit(n, i);
            const MGraded dev = mg_sub(bs_coeff(K, e, e), mg_one(K.r, K.dc));
            if (!mg_is_zero(dev)) viols[{e, e}] = dev;
        }
    }
    for (const auto& [key, v] : K.t) {
        const int s = order(key.first), t = order(key.second);
        if (s + t > up_to || mg_is_zero(v)) continue;
        if (s == 1 && t == 1) {
            if (key.first != key.second) viols[key] = v;  // diagonal handled above
            continue;
        }
        if (s == 0 || t == 0 || s == 1 || t == 1) viols[key] = v;
    }
    std::vector<GaugeViolation> out;
    for (const auto& [key, v] : viols) out.push_back({key.first, key.second, v});
    return out;
}

NormalForm normalize(const BiSeries& K, int up_to) {
    return normalize(K, up_to, identity_perm(K.r));
}

NormalForm normalize(const BiSeries& K, int up_to, const std::vector<int>& sym_perm) {
    const int n = K.n;
    if (up_to < 2 || up_to > K.dz)
        throw std::invalid_argument("normalization degree must lie in [2, dz]");
    if (!bs_is_real(K, sym_perm)) throw std::invalid_argument("potential must be real");
    if (!mg_is_zero(bs_coeff(K, mi_zero(n), mi_zero(n))))
        throw std::invalid_argument("potential must vanish at the origin");
    for (int i = 0; i < n; ++i)
        if (!mg_is_zero(bs_coeff(K, mi_unit(n, i), mi_zero(n))) ||
            !mg_is_zero(bs_coeff(K, mi_zero(n), mi_unit(n, i))))
            throw std::invalid_argument("potential must have zero linear part");

    std::vector<std::vector<Q>> H(n, std::vector<Q>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!mg_rational(bs_coeff(K, mi_unit(n, i), mi_unit(n, j)), H[i][j]))
                throw std::invalid_argument("metric block must be constant rational");

    // H = L D L^T with unit lower L; positive pivots certify the metric
    std::vector<std::vector<Q>> L(n, std::vector<Q>(n, Q(0)));
    std::vector<Q> d(n), s(n);
    for (int j = 0; j < n; ++j) {
        Q dj = H[j][j];
        for (int k = 0; k < j; ++k) dj -= L[j][k] * L[j][k] * d[k];
        if (dj <= 0) throw std::invalid_argument("not a metric jet");
        if (!sqrt_exact(dj, s[j]))
            throw std::invalid_argument("framing pivot is not a perfect square");
        d[j] = dj;
        L[j][j] = 1;
        for (int i = j + 1; i < n; ++i) {
            Q v = H[i][j];
            for (int k = 0; k < j; ++k) v -= L[i][k] * L[j][k] * d[k];
            L[i][j] = v / dj;
        }
    }
    // framing A = (L^T)^{-1} D^{-1/2}: the new block A^T H A is the identity
    std::vector<std::vector<Q>> A(n, std::vector<Q>(n, Q(0)));
    for (int j = 0; j < n; ++j)
        for (int i = n - 1; i >= 0; --i) {
            Q v = (i == j) ? 1 : 0;
            for (int k = i + 1; k < n; ++k) v -= L[k][i] * A[k][j];
            A[i][j] = v;
        }
    bool framed = false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A[i][j] /= s[j];
            framed = framed || A[i][j] != Q(i == j ? 1 : 0);
        }

    NormalForm out;
    out.coordinate_change = identity_change(K);
    BiSeries cur = K;
    if (framed) {
        std::vector<BiSeries> phi(n, bs_zero(n, K.r, K.dz, K.dc, K.mu_cap));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (A[i][j] != 0)
                    bs_add_term(phi[i], mi_unit(n, j), mi_zero(n),
                                mg_const(K.r, K.dc, A[i][j]));
        cur = substitute_holomorphic(cur, phi, sym_perm);
        out.coordinate_change = phi;
    }

    // upward sweep: degree-d corrections never touch lower degrees
    for (int dg = 2; dg + 1 <= up_to; ++dg) {
        std::vector<BiSeries> chi = identity_change(K);
        bool any = false;
        for (const auto& [key, v] : cur.t) {
            if (order(key.second) != 1 || order(key.first) != dg || mg_is_zero(v)) continue;
            int j = 0;
            while (key.second[j] == 0) ++j;
            bs_add_term(chi[j], key.first, mi_zero(n), mg_scale(v, Q(-1)));
            any = true;
        }
        if (!any) continue;
        cur = substitute_holomorphic(cur, chi, sym_perm);
        for (int i = 0; i < n; ++i)
            out.coordinate_change[i] =
                substitute_holomorphic(out.coordinate_change[i], chi, sym_perm);
    }

    // gauge: cancel the holomorphic part (and its conjugate) in one step
    BiSeries f = bs_zero(n, K.r, K.dz, K.dc, K.mu_cap);
    for (const auto& [key, v] : cur.t) {
        const int dg = order(key.first);
        if (order(key.second) != 0 || dg < 2 || dg > up_to || mg_is_zero(v)) continue;
        bs_add_term(f, key.first, key.second, mg_scale(v, Q(-1)));
    }
    if (!bs_is_zero(f)) cur = bs_add(cur, bs_add(f, bs_conj(f, sym_perm)));
    out.gauge = f;
    out.normalized_potential = cur;
    return out;
}

std::map<std::array<int, 4>, MGraded> curvature_block(const BiSeries& K) {
    if (!verify_gauge(K, 4).empty())
        throw std::invalid_argument("potential is not normalized to degree 4");
    const int n = K.n;
    std::map<std::array<int, 4>, MGraded> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const MI S = mi_add(mi_unit(n, i), mi_unit(n, k));
                    const MI T = mi_add(mi_unit(n, j), mi_unit(n, l));
                    const MGraded v = bs_coeff(K, S, T);
                    if (mg_is_zero(v)) continue;
                    out[{i, j, k, l}] = mg_scale(v, factorial(S) * factorial(T) / 4);
                }
    return out;
}

}  // namespace bk
