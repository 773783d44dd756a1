#include "bk/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bk {

// ---------- CPoly ----------

CPoly cp_zero(int r, int dc) { return CPoly{r, dc, {}}; }

CPoly cp_const(int r, int dc, const Q& v) {
    CPoly p{r, dc, {}};
    if (v != 0) p.t[mi_zero(r)] = v;
    return p;
}

CPoly cp_symbol(int r, int dc, int i) {
    if (i < 0 || i >= r) throw std::invalid_argument("symbol index out of range");
    CPoly p{r, dc, {}};
    if (dc >= 1) p.t[mi_unit(r, i)] = 1;
    return p;
}

CPoly cp_monomial(int r, int dc, const MI& e, const Q& v) {
    if (static_cast<int>(e.size()) != r) throw std::invalid_argument("exponent length mismatch");
    CPoly p{r, dc, {}};
    if (v != 0 && order(e) <= dc) p.t[e] = v;
    return p;
}

bool cp_is_zero(const CPoly& a) { return a.t.empty(); }

static void cp_check(const CPoly& a, const CPoly& b) {
    if (a.r != b.r || a.dc != b.dc) throw std::invalid_argument("CPoly truncation mismatch");
}

CPoly cp_add(const CPoly& a, const CPoly& b) {
    cp_check(a, b);
    CPoly res = a;
    for (const auto& [e, v] : b.t) {
        Q& slot = res.t[e];
        slot += v;
        if (slot == 0) res.t.erase(e);
    }
    return res;
}

CPoly cp_sub(const CPoly& a, const CPoly& b) { return cp_add(a, cp_scale(b, Q(-1))); }

CPoly cp_mul(const CPoly& a, const CPoly& b) {
    cp_check(a, b);
    CPoly res{a.r, a.dc, {}};
    for (const auto& [e1, v1] : a.t)
        for (const auto& [e2, v2] : b.t) {
            MI e = mi_add(e1, e2);
            if (order(e) > a.dc) continue;
            Q& slot = res.t[e];
            slot += v1 * v2;
            if (slot == 0) res.t.erase(e);
        }
    return res;
}

CPoly cp_scale(const CPoly& a, const Q& s) {
    CPoly res{a.r, a.dc, {}};
    if (s == 0) return res;
    for (const auto& [e, v] : a.t) res.t[e] = v * s;
    return res;
}

Q cp_coeff(const CPoly& a, const MI& e) {
    auto it = a.t.find(e);
    return it == a.t.end() ? Q(0) : it->second;
}

Q cp_constant(const CPoly& a) { return cp_coeff(a, mi_zero(a.r)); }

CPoly cp_permute_symbols(const CPoly& a, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != a.r) throw std::invalid_argument("involution size mismatch");
    CPoly res{a.r, a.dc, {}};
    for (const auto& [e, v] : a.t) {
        MI e2(a.r, 0);
        for (int i = 0; i < a.r; ++i) e2[perm[i]] = e[i];
        res.t[e2] = v;
    }
    return res;
}

CPoly cp_eval_partial(const CPoly& a, const std::vector<std::optional<Q>>& vals) {
    if (static_cast<int>(vals.size()) != a.r) throw std::invalid_argument("value list size mismatch");
    CPoly res{a.r, a.dc, {}};
    for (const auto& [e, v] : a.t) {
        Q c = v;
        MI e2 = e;
        for (int i = 0; i < a.r; ++i) {
            if (!vals[i] || e[i] == 0) continue;
            for (int k = 0; k < e[i]; ++k) c *= *vals[i];
            e2[i] = 0;
        }
        if (c == 0) continue;
        Q& slot = res.t[e2];
        slot += c;
        if (slot == 0) res.t.erase(e2);
    }
    return res;
}

std::string cp_str(const CPoly& a, const std::vector<std::string>& names) {
    if (a.t.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, v] : a.t) {
        if (!first) os << " + ";
        first = false;
        os << qstr(v);
        for (int i = 0; i < a.r; ++i) {
            if (e[i] == 0) continue;
            os << "*" << (i < static_cast<int>(names.size()) ? names[i] : "c" + std::to_string(i + 1));
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

// ---------- MGraded ----------

MGraded mg_zero(int r, int dc) { return MGraded{r, dc, {}}; }

MGraded mg_one(int r, int dc) { return mg_const(r, dc, Q(1)); }

MGraded mg_const(int r, int dc, const Q& v) {
    MGraded m{r, dc, {}};
    if (v != 0) m.t[0] = cp_const(r, dc, v);
    return m;
}

MGraded mg_term(int mu, const CPoly& c) {
    MGraded m{c.r, c.dc, {}};
    if (!cp_is_zero(c)) m.t[mu] = c;
    return m;
}

bool mg_is_zero(const MGraded& a) { return a.t.empty(); }

static void mg_check(const MGraded& a, const MGraded& b) {
    if (a.r != b.r || a.dc != b.dc) throw std::invalid_argument("MGraded truncation mismatch");
}

MGraded mg_add(const MGraded& a, const MGraded& b) {
    mg_check(a, b);
    MGraded res = a;
    for (const auto& [m, c] : b.t) {
        auto it = res.t.find(m);
        if (it == res.t.end()) {
            res.t[m] = c;
        } else {
            it->second = cp_add(it->second, c);
            if (cp_is_zero(it->second)) res.t.erase(it);
        }
    }
    return res;
}

MGraded mg_sub(const MGraded& a, const MGraded& b) { return mg_add(a, mg_scale(b, Q(-1))); }

MGraded mg_mul(const MGraded& a, const MGraded& b) {
    mg_check(a, b);
    MGraded res{a.r, a.dc, {}};
    for (const auto& [m1, c1] : a.t)
        for (const auto& [m2, c2] : b.t) {
            CPoly c = cp_mul(c1, c2);
            if (cp_is_zero(c)) continue;
            auto it = res.t.find(m1 + m2);
            if (it == res.t.end()) {
                res.t[m1 + m2] = c;
            } else {
                it->second = cp_add(it->second, c);
                if (cp_is_zero(it->second)) res.t.erase(it);
            }
        }
    return res;
}

MGraded mg_scale(const MGraded& a, const Q& s) {
    MGraded res{a.r, a.dc, {}};
    if (s == 0) return res;
    for (const auto& [m, c] : a.t) res.t[m] = cp_scale(c, s);
    return res;
}

MGraded mg_shift(const MGraded& a, int k) {
    MGraded res{a.r, a.dc, {}};
    for (const auto& [m, c] : a.t) res.t[m + k] = c;
    return res;
}

CPoly mg_coeff(const MGraded& a, int mu) {
    auto it = a.t.find(mu);
    return it == a.t.end() ? cp_zero(a.r, a.dc) : it->second;
}

int mg_max_exp(const MGraded& a) {
    if (a.t.empty()) throw std::invalid_argument("max exponent of zero");
    return a.t.rbegin()->first;
}

int mg_min_exp(const MGraded& a) {
    if (a.t.empty()) throw std::invalid_argument("min exponent of zero");
    return a.t.begin()->first;
}

MGraded mg_inverse_unit(const MGraded& a) {
    Q k0 = cp_constant(mg_coeff(a, 0));
    if (k0 == 0) throw std::invalid_argument("inverse of a non-unit");
    MGraded x = mg_sub(a, mg_const(a.r, a.dc, k0));
    for (const auto& [m, c] : x.t) {
        (void)m;
        for (const auto& [e, v] : c.t) {
            (void)v;
            if (order(e) == 0) throw std::invalid_argument("inverse tail must carry c-degree >= 1");
        }
    }
    // 1/(k0 + x) = (1/k0) sum_j (-x/k0)^j; powers beyond dc vanish.
    MGraded res = mg_const(a.r, a.dc, 1 / k0);
    MGraded pw = mg_one(a.r, a.dc);
    for (int j = 1; j <= a.dc; ++j) {
        pw = mg_scale(mg_mul(pw, x), -1 / k0);
        if (mg_is_zero(pw)) break;
        res = mg_add(res, mg_scale(pw, 1 / k0));
    }
    return res;
}

MGraded mg_permute_symbols(const MGraded& a, const std::vector<int>& perm) {
    MGraded res{a.r, a.dc, {}};
    for (const auto& [m, c] : a.t) res.t[m] = cp_permute_symbols(c, perm);
    return res;
}

MGraded mg_eval_partial(const MGraded& a, const std::vector<std::optional<Q>>& vals) {
    MGraded res{a.r, a.dc, {}};
    for (const auto& [m, c] : a.t) {
        CPoly c2 = cp_eval_partial(c, vals);
        if (!cp_is_zero(c2)) res.t[m] = c2;
    }
    return res;
}

// ---------- BiSeries ----------

BiSeries bs_zero(int n, int r, int dz, int dc, int mu_cap) {
    return BiSeries{n, r, dz, dc, mu_cap, {}};
}

BiSeries bs_const(int n, int r, int dz, int dc, const Q& v, int mu_cap) {
    BiSeries s = bs_zero(n, r, dz, dc, mu_cap);
    if (v != 0) s.t[{mi_zero(n), mi_zero(n)}] = mg_const(r, dc, v);
    return s;
}

bool bs_is_zero(const BiSeries& a) { return a.t.empty(); }

bool bs_compatible(const BiSeries& a, const BiSeries& b) {
    return a.n == b.n && a.r == b.r && a.dz == b.dz && a.dc == b.dc;
}

static void bs_check(const BiSeries& a, const BiSeries& b) {
    if (!bs_compatible(a, b)) throw std::invalid_argument("series truncation mismatch");
}

void bs_add_term(BiSeries& a, const MI& S, const MI& T, const MGraded& v) {
    if (static_cast<int>(S.size()) != a.n || static_cast<int>(T.size()) != a.n)
        throw std::invalid_argument("key length mismatch");
    if (order(S) + order(T) > a.dz || mg_is_zero(v)) return;
    if (a.mu_cap != INT_MAX && (mg_max_exp(v) > a.mu_cap || mg_min_exp(v) < -a.mu_cap))
        throw std::logic_error("mu-exponent cap exceeded: pipeline weight bug");
    BiKey key{S, T};
    auto it = a.t.find(key);
    if (it == a.t.end()) {
        a.t[key] = v;
    } else {
        it->second = mg_add(it->second, v);
        if (mg_is_zero(it->second)) a.t.erase(it);
    }
}

MGraded bs_coeff(const BiSeries& a, const MI& S, const MI& T) {
    auto it = a.t.find({S, T});
    return it == a.t.end() ? mg_zero(a.r, a.dc) : it->second;
}

BiSeries bs_add(const BiSeries& a, const BiSeries& b) {
    bs_check(a, b);
    BiSeries res = a;
    for (const auto& [k, v] : b.t) bs_add_term(res, k.first, k.second, v);
    return res;
}

BiSeries bs_sub(const BiSeries& a, const BiSeries& b) { return bs_add(a, bs_scale(b, Q(-1))); }

BiSeries bs_mul(const BiSeries& a, const BiSeries& b) {
    bs_check(a, b);
    BiSeries res = bs_zero(a.n, a.r, a.dz, a.dc, std::min(a.mu_cap, b.mu_cap));
    for (const auto& [k1, v1] : a.t) {
        int d1 = order(k1.first) + order(k1.second);
        for (const auto& [k2, v2] : b.t) {
            if (d1 + order(k2.first) + order(k2.second) > a.dz) continue;
            MGraded v = mg_mul(v1, v2);
            if (!mg_is_zero(v))
                bs_add_term(res, mi_add(k1.first, k2.first), mi_add(k1.second, k2.second), v);
        }
    }
    return res;
}

BiSeries bs_scale(const BiSeries& a, const Q& s) {
    BiSeries res = bs_zero(a.n, a.r, a.dz, a.dc, a.mu_cap);
    if (s == 0) return res;
    for (const auto& [k, v] : a.t) res.t[k] = mg_scale(v, s);
    return res;
}

BiSeries bs_scale_mg(const BiSeries& a, const MGraded& m) {
    BiSeries res = bs_zero(a.n, a.r, a.dz, a.dc, a.mu_cap);
    for (const auto& [k, v] : a.t) {
        MGraded v2 = mg_mul(v, m);
        if (!mg_is_zero(v2)) bs_add_term(res, k.first, k.second, v2);
    }
    return res;
}

BiSeries bs_truncate(const BiSeries& a, int dz2) {
    BiSeries res = bs_zero(a.n, a.r, dz2, a.dc, a.mu_cap);
    for (const auto& [k, v] : a.t)
        if (order(k.first) + order(k.second) <= dz2) res.t[k] = v;
    return res;
}

static void require_no_constant(const BiSeries& a, const char* what) {
    if (!mg_is_zero(bs_coeff(a, mi_zero(a.n), mi_zero(a.n))))
        throw std::invalid_argument(std::string(what) + " requires a zero constant term");
}

BiSeries bs_exp(const BiSeries& a) {
    require_no_constant(a, "exp");
    BiSeries res = bs_const(a.n, a.r, a.dz, a.dc, 1, a.mu_cap);
    BiSeries term = res;
    Q fact = 1;
    for (int k = 1; k <= a.dz + a.dc; ++k) {
        term = bs_mul(term, a);
        if (bs_is_zero(term)) break;
        fact *= k;
        res = bs_add(res, bs_scale(term, 1 / fact));
    }
    return res;
}

BiSeries bs_log1p(const BiSeries& a) {
    require_no_constant(a, "log1p");
    BiSeries res = bs_zero(a.n, a.r, a.dz, a.dc, a.mu_cap);
    BiSeries term = bs_const(a.n, a.r, a.dz, a.dc, 1, a.mu_cap);
    for (int k = 1; k <= a.dz + a.dc; ++k) {
        term = bs_mul(term, a);
        if (bs_is_zero(term)) break;
        res = bs_add(res, bs_scale(term, Q(k % 2 == 1 ? 1 : -1, k)));
    }
    return res;
}

BiSeries bs_partial(const BiSeries& a, bool antiholomorphic, int i) {
    if (i < 0 || i >= a.n) throw std::invalid_argument("derivative index out of range");
    BiSeries res = bs_zero(a.n, a.r, a.dz, a.dc, a.mu_cap);
    for (const auto& [k, v] : a.t) {
        const MI& e = antiholomorphic ? k.second : k.first;
        if (e[i] == 0) continue;
        MI S = k.first, T = k.second;
        (antiholomorphic ? T : S)[i] -= 1;
        bs_add_term(res, S, T, mg_scale(v, Q(e[i])));
    }
    return res;
}

std::vector<std::vector<BiSeries>> hermitian_hessian(const BiSeries& K) {
    std::vector<std::vector<BiSeries>> H(K.n, std::vector<BiSeries>(K.n));
    for (int i = 0; i < K.n; ++i) {
        BiSeries row = bs_partial(K, false, i);
        for (int j = 0; j < K.n; ++j) H[i][j] = bs_partial(row, true, j);
    }
    return H;
}

BiSeries det_series(const std::vector<std::vector<BiSeries>>& M) {
    const int n = static_cast<int>(M.size());
    if (n < 1 || n > 4) throw std::invalid_argument("determinant limited to 1 <= n <= 4");
    const BiSeries& probe = M[0][0];
    BiSeries res = bs_zero(probe.n, probe.r, probe.dz, probe.dc, probe.mu_cap);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        BiSeries term = M[0][perm[0]];
        for (int i = 1; i < n; ++i) term = bs_mul(term, M[i][perm[i]]);
        res = bs_add(res, inv % 2 == 0 ? term : bs_scale(term, Q(-1)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return res;
}

BiSeries bs_conj(const BiSeries& a, const std::vector<int>& sym_perm) {
    BiSeries res = bs_zero(a.n, a.r, a.dz, a.dc, a.mu_cap);
    for (const auto& [k, v] : a.t) res.t[{k.second, k.first}] = mg_permute_symbols(v, sym_perm);
    return res;
}

BiSeries substitute_holomorphic(const BiSeries& a, const std::vector<BiSeries>& phi,
                                const std::vector<int>& sym_perm) {
    if (static_cast<int>(phi.size()) != a.n) throw std::invalid_argument("substitution arity mismatch");
    for (const auto& p : phi) {
        bs_check(a, p);
        for (const auto& [k, v] : p.t) {
            (void)v;
            if (!mi_is_zero(k.second)) throw std::invalid_argument("substitution must be holomorphic");
            if (mi_is_zero(k.first)) throw std::invalid_argument("substitution must fix the origin");
        }
    }
    // Invertible linear part: determinant of the Jacobian at 0 is a unit.
    std::vector<std::vector<MGraded>> J(a.n, std::vector<MGraded>(a.n));
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) J[i][j] = bs_coeff(phi[i], mi_unit(a.n, j), mi_zero(a.n));
    MGraded detJ = mg_zero(a.r, a.dc);
    {
        std::vector<int> perm(a.n);
        for (int i = 0; i < a.n; ++i) perm[i] = i;
        do {
            int inv = 0;
            for (int i = 0; i < a.n; ++i)
                for (int j = i + 1; j < a.n; ++j)
                    if (perm[i] > perm[j]) ++inv;
            MGraded term = mg_one(a.r, a.dc);
            for (int i = 0; i < a.n; ++i) term = mg_mul(term, J[i][perm[i]]);
            detJ = mg_add(detJ, inv % 2 == 0 ? term : mg_scale(term, Q(-1)));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    if (cp_constant(mg_coeff(detJ, 0)) == 0) throw std::invalid_argument("singular Jacobian");

    // Power caches for phi and its conjugate.
    std::vector<std::vector<BiSeries>> pw(a.n), pwb(a.n);
    BiSeries one = bs_const(a.n, a.r, a.dz, a.dc, 1, a.mu_cap);
    for (int i = 0; i < a.n; ++i) {
        pw[i].push_back(one);
        pwb[i].push_back(one);
        BiSeries conj = bs_conj(phi[i], sym_perm);
        for (int k = 1; k <= a.dz; ++k) {
            pw[i].push_back(bs_mul(pw[i][k - 1], phi[i]));
            pwb[i].push_back(bs_mul(pwb[i][k - 1], conj));
        }
    }
    BiSeries res = bs_zero(a.n, a.r, a.dz, a.dc, a.mu_cap);
    for (const auto& [k, v] : a.t) {
        BiSeries term = one;
        for (int i = 0; i < a.n; ++i)
            if (k.first[i] > 0) term = bs_mul(term, pw[i][k.first[i]]);
        for (int i = 0; i < a.n; ++i)
            if (k.second[i] > 0) term = bs_mul(term, pwb[i][k.second[i]]);
        res = bs_add(res, bs_scale_mg(term, v));
    }
    return res;
}

bool bs_is_real(const BiSeries& a, const std::vector<int>& sym_perm) {
    for (const auto& [k, v] : a.t) {
        MGraded other = bs_coeff(a, k.second, k.first);
        if (!(mg_permute_symbols(other, sym_perm) == v)) return false;
    }
    return true;
}

std::vector<int> identity_perm(int r) {
    std::vector<int> p(r);
    for (int i = 0; i < r; ++i) p[i] = i;
    return p;
}

std::string mi_str(const MI& a) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) os << " ";
        os << a[i];
    }
    os << "]";
    return os.str();
}

}  // namespace bk
