#include "bk/bergman.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bk {

int PotentialSpec::symbols() const { return static_cast<int>(perts.size()); }

int PotentialSpec::max_p() const {
    int m = 0;
    for (const auto& pt : perts) m = std::max({m, order(pt.P), order(pt.Q)});
    return m;
}

int PotentialSpec::max_pq() const {
    int m = 0;
    for (const auto& pt : perts) m = std::max(m, order(pt.P) + order(pt.Q));
    return m;
}

int PotentialSpec::default_dp() const { return dz + dc * max_pq(); }

int PotentialSpec::effective_dp() const { return dp < 0 ? default_dp() : dp; }

int PotentialSpec::mu_bound() const { return 2 * dz + 2 * dc * max_pq(); }

std::vector<int> PotentialSpec::conj_perm() const {
    return sym_perm.empty() ? identity_perm(symbols()) : sym_perm;
}

std::vector<std::string> PotentialSpec::symbol_names() const {
    std::vector<std::string> names;
    for (size_t i = 0; i < perts.size(); ++i)
        names.push_back(perts[i].name.empty() ? "c" + std::to_string(i + 1)
                                              : perts[i].name);
    return names;
}

std::vector<std::optional<Q>> PotentialSpec::values() const {
    std::vector<std::optional<Q>> vals;
    for (const auto& pt : perts) vals.push_back(pt.value);
    return vals;
}

void validate(const PotentialSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("dimension must be positive");
    if (spec.dz < 0 || spec.dc < 0)
        throw std::invalid_argument("truncation orders must be nonnegative");
    if (spec.dp >= 0 && spec.dp < spec.dz)
        throw std::invalid_argument("section order dp must be at least dz");
    for (const auto& pt : spec.perts) {
        if (static_cast<int>(pt.P.size()) != spec.n ||
            static_cast<int>(pt.Q.size()) != spec.n)
            throw std::invalid_argument("perturbation index length differs from dimension");
        for (int e : pt.P)
            if (e < 0) throw std::invalid_argument("negative multi-index entry");
        for (int e : pt.Q)
            if (e < 0) throw std::invalid_argument("negative multi-index entry");
        if (order(pt.P) < 2 || order(pt.Q) < 2)
            throw std::invalid_argument("perturbation orders must satisfy p, q >= 2");
    }
    if (!spec.sym_perm.empty()) {
        const int r = spec.symbols();
        if (static_cast<int>(spec.sym_perm.size()) != r)
            throw std::invalid_argument("conjugation map size differs from symbol count");
        for (int i = 0; i < r; ++i) {
            const int j = spec.sym_perm[i];
            if (j < 0 || j >= r || spec.sym_perm[j] != i)
                throw std::invalid_argument("conjugation map is not an involution");
        }
    }
}

MGraded gaussian_moment(const MI& P, int n) {
    if (static_cast<int>(P.size()) != n)
        throw std::invalid_argument("moment index length differs from dimension");
    return mg_term(-2 * (n + order(P)), cp_const(0, 0, factorial(P)));
}

BiSeries build_potential(const PotentialSpec& spec) { return build_potential(spec, spec.dz); }

BiSeries build_potential(const PotentialSpec& spec, int dz) {
    const int r = spec.symbols();
    BiSeries K = bs_zero(spec.n, r, dz, spec.dc, spec.mu_bound());
    for (int i = 0; i < spec.n; ++i)
        bs_add_term(K, mi_unit(spec.n, i), mi_unit(spec.n, i), mg_one(r, spec.dc));
    for (int i = 0; i < r; ++i)
        bs_add_term(K, spec.perts[i].P, spec.perts[i].Q,
                    mg_term(0, cp_symbol(r, spec.dc, i)));
    return K;
}

BiSeries density_expansion(const PotentialSpec& spec) {
    const int dzf = std::max(spec.dz, spec.dc * spec.max_pq());
    BiSeries K = build_potential(spec, dzf);
    // -mu^2 (K - |z|^2): every key of order > 2 is a perturbation term.
    BiSeries arg = bs_zero(spec.n, spec.symbols(), dzf, spec.dc, spec.mu_bound());
    for (const auto& [key, v] : K.t) {
        if (order(key.first) + order(key.second) <= 2) continue;
        bs_add_term(arg, key.first, key.second, mg_shift(mg_scale(v, Q(-1)), 2));
    }
    return bs_mul(bs_exp(arg), det_series(hermitian_hessian(K)));
}

BiSeries det_minor_expansion(const PotentialSpec& spec) {
    const int n = spec.n, r = spec.symbols();
    const int dzf = std::max(spec.dz, spec.dc * spec.max_pq());
    BiSeries res = bs_const(n, r, dzf, spec.dc, Q(1), spec.mu_bound());
    std::vector<MI> Ps, Qs;
    for (const auto& pt : spec.perts) {
        Ps.push_back(pt.P);
        Qs.push_back(pt.Q);
    }
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
        std::vector<int> I;
        for (int i = 0; i < r; ++i)
            if (mask >> i & 1) I.push_back(i);
        if (static_cast<int>(I.size()) > spec.dc) continue;
        MI PI = mi_zero(n), QI = mi_zero(n), ce = mi_zero(r);
        for (int i : I) {
            PI = mi_add(PI, Ps[i]);
            QI = mi_add(QI, Qs[i]);
            ce[i] += 1;
        }
        for (unsigned jm = 0; jm < (1u << n); ++jm) {
            std::vector<int> J;
            for (int j = 0; j < n; ++j)
                if (jm >> j & 1) J.push_back(j);
            if (J.size() != I.size()) continue;
            const long dP = det_minor(Ps, I, J);
            if (dP == 0) continue;
            const long dQ = det_minor(Qs, I, J);
            if (dQ == 0) continue;
            MI eJ = mi_zero(n);
            for (int j : J) eJ[j] = 1;
            auto S = sub_checked(PI, eJ), T = sub_checked(QI, eJ);
            if (!S || !T) continue;
            bs_add_term(res, *S, *T, mg_term(0, cp_monomial(r, spec.dc, ce, Q(dP) * Q(dQ))));
        }
    }
    return res;
}

const MGraded* GramMatrix::entry(const MI& S, const MI& T) const {
    auto it = t.find({S, T});
    return it == t.end() ? nullptr : &it->second;
}

namespace {

void add_entry(GramMatrix& M, const MI& S, const MI& T, const MGraded& v) {
    const BiKey key{S, T};
    auto it = M.t.find(key);
    if (it == M.t.end()) {
        if (!mg_is_zero(v)) M.t.emplace(key, v);
        return;
    }
    it->second = mg_add(it->second, v);
    if (mg_is_zero(it->second)) M.t.erase(it);
}

MGraded lambda_inverse_entry(const MI& S, int r, int dc) {
    return mg_term(2 * order(S), cp_const(r, dc, Q(1) / factorial(S)));
}

}  // namespace

GramMatrix lambda_matrix(const PotentialSpec& spec) {
    validate(spec);
    GramMatrix M;
    M.n = spec.n;
    M.r = spec.symbols();
    M.dc = spec.dc;
    M.dp = spec.effective_dp();
    M.flavor = GramFlavor::diagonal;
    M.idx = enumerate_indices(spec.n, M.dp);
    for (const auto& S : M.idx)
        M.t[{S, S}] = mg_term(-2 * order(S), cp_const(M.r, M.dc, factorial(S)));
    return M;
}

GramMatrix gram_matrix(const PotentialSpec& spec) {
    validate(spec);
    GramMatrix M;
    M.n = spec.n;
    M.r = spec.symbols();
    M.dc = spec.dc;
    M.dp = spec.effective_dp();
    M.flavor = GramFlavor::direct;
    M.idx = enumerate_indices(spec.n, M.dp);
    const BiSeries dens = density_expansion(spec);
    for (const auto& S : M.idx) {
        const int s = order(S);
        for (const auto& [key, v] : dens.t) {
            const MI &P = key.first, &Qd = key.second;
            MI T(spec.n);
            bool ok = true;
            for (int k = 0; k < spec.n; ++k) {
                T[k] = S[k] + P[k] - Qd[k];
                if (T[k] < 0) ok = false;
            }
            if (!ok || order(T) > M.dp) continue;
            add_entry(M, S, T,
                      mg_shift(mg_scale(v, factorial(mi_add(S, P))), -2 * (s + order(P))));
        }
    }
    return M;
}

GramMatrix gram_inverse(const GramMatrix& G, int row_bound) {
    if (G.flavor == GramFlavor::inverse)
        throw std::invalid_argument("matrix is already an inverse");
    GramMatrix W;
    W.n = G.n;
    W.r = G.r;
    W.dc = G.dc;
    W.dp = G.dp;
    W.flavor = GramFlavor::inverse;
    W.idx = G.idx;
    // A = -Lambda^{-1} G' as a row adjacency over the index set.
    std::map<MI, std::vector<std::pair<MI, MGraded>>, GlexLess> A;
    for (const auto& [key, v] : G.t) {
        const MI &S = key.first, &T = key.second;
        MGraded ent = v;
        if (S == T) {
            ent = mg_sub(ent, mg_term(-2 * order(S), cp_const(G.r, G.dc, factorial(S))));
            if (mg_is_zero(ent)) continue;
        }
        A[S].emplace_back(T, mg_scale(mg_mul(lambda_inverse_entry(S, G.r, G.dc), ent), Q(-1)));
    }
    using Row = std::map<MI, MGraded, GlexLess>;
    auto row_add = [](Row& row, const MI& T, const MGraded& v) {
        auto it = row.find(T);
        if (it == row.end()) {
            if (!mg_is_zero(v)) row.emplace(T, v);
            return;
        }
        it->second = mg_add(it->second, v);
        if (mg_is_zero(it->second)) row.erase(it);
    };
    for (const auto& S : W.idx) {
        if (row_bound >= 0 && order(S) > row_bound) continue;
        Row acc, cur;
        cur.emplace(S, mg_one(G.r, G.dc));
        acc = cur;
        for (int u = 1; u <= G.dc && !cur.empty(); ++u) {
            Row nxt;
            for (const auto& [R, val] : cur) {
                auto it = A.find(R);
                if (it == A.end()) continue;
                for (const auto& [T, a] : it->second) row_add(nxt, T, mg_mul(val, a));
            }
            cur = std::move(nxt);
            for (const auto& [T, val] : cur) row_add(acc, T, val);
        }
        for (const auto& [T, val] : acc) {
            MGraded ent = mg_mul(val, lambda_inverse_entry(T, G.r, G.dc));
            if (!mg_is_zero(ent)) W.t[{S, T}] = ent;
        }
    }
    return W;
}

MGraded gram_inverse_closed_form(const PotentialSpec& spec, const MI& S, const MI& T) {
    validate(spec);
    const int n = spec.n, r = spec.symbols();
    MGraded res = mg_zero(r, spec.dc);
    if (S == T) res = lambda_inverse_entry(S, r, spec.dc);
    std::vector<MI> Ps, Qs, wts;
    for (const auto& pt : spec.perts) {
        Ps.push_back(pt.P);
        Qs.push_back(pt.Q);
        wts.push_back(mi_sub(pt.P, pt.Q));
    }
    const MI diff = mi_sub(T, S);
    for (const MI& L : enumerate_balanced(diff, wts, spec.dc)) {
        if (order(L) == 0) continue;
        Q acc = 0;
        for (int u = 1; u <= order(L); ++u) {
            for_each_composition(L, u, [&](const Composition& comp) {
                Q prod = (u % 2 == 0) ? Q(1) : Q(-1);
                for (const MI& part : comp) prod /= factorial(part);
                MI R = S;
                for (int j = 0; j < u; ++j) {
                    MI Pj = mi_zero(n), Qj = mi_zero(n);
                    for (int i = 0; i < r; ++i) {
                        for (int k = 0; k < n; ++k) {
                            Pj[k] += comp[j][i] * Ps[i][k];
                            Qj[k] += comp[j][i] * Qs[i][k];
                        }
                    }
                    MI Rn(n);
                    bool ok = true;
                    for (int k = 0; k < n; ++k) {
                        Rn[k] = R[k] - Qj[k] + Pj[k];
                        if (Rn[k] < 0) ok = false;
                    }
                    if (!ok) {
                        prod = 0;
                        break;
                    }
                    // slot: subset expansion over perturbations x coordinates
                    Q slot = 0;
                    const Q rn_fact = factorial(Rn);
                    for (unsigned im = 0; im < (1u << r); ++im) {
                        std::vector<int> I;
                        for (int i = 0; i < r; ++i)
                            if (im >> i & 1) I.push_back(i);
                        long lpow = 1;
                        for (int i : I) lpow *= comp[j][i];
                        if (lpow == 0) continue;
                        for (unsigned km = 0; km < (1u << n); ++km) {
                            std::vector<int> Kc;
                            for (int k = 0; k < n; ++k)
                                if (km >> k & 1) Kc.push_back(k);
                            if (Kc.size() != I.size()) continue;
                            const long dP = det_minor(Ps, I, Kc);
                            if (dP == 0) continue;
                            const long dQ = det_minor(Qs, I, Kc);
                            if (dQ == 0) continue;
                            MI num(n);
                            bool npos = true;
                            for (int k = 0; k < n; ++k) {
                                num[k] = R[k] + Pj[k] - ((km >> k & 1) ? 1 : 0);
                                if (num[k] < 0) npos = false;
                            }
                            if (!npos) continue;
                            const long sgn = (Kc.size() % 2 == 0) ? 1 : -1;
                            slot += Q(dP * dQ * lpow * sgn) * factorial(num) / rn_fact;
                        }
                    }
                    prod *= slot;
                    if (prod == 0) break;
                    R = Rn;
                }
                acc += prod;
            });
        }
        if (acc == 0) continue;
        int mu_b = 0;
        for (int i = 0; i < r; ++i) mu_b += L[i] * (2 - order(Ps[i]) - order(Qs[i]));
        const Q coeff = acc * ((order(L) % 2 == 0) ? 1 : -1) / factorial(S);
        res = mg_add(res, mg_term(order(S) + order(T) + mu_b,
                                  cp_monomial(r, spec.dc, L, coeff)));
    }
    return res;
}

BiSeries bergman_potential_from(const GramMatrix& W, const PotentialSpec& spec) {
    if (W.flavor != GramFlavor::inverse)
        throw std::invalid_argument("inverse-flavor matrix required");
    const int r = spec.symbols();
    BiSeries N = bs_zero(spec.n, r, spec.dz, spec.dc, spec.mu_bound());
    for (const auto& [key, v] : W.t) {
        if (order(key.first) + order(key.second) > spec.dz) continue;
        bs_add_term(N, key.second, key.first, v);  // entry (S,T) weights z^T zbar^S
    }
    const MGraded inv = mg_inverse_unit(bs_coeff(N, mi_zero(spec.n), mi_zero(spec.n)));
    const BiSeries one = bs_const(spec.n, r, spec.dz, spec.dc, Q(1), spec.mu_bound());
    const BiSeries Km = bs_log1p(bs_sub(bs_scale_mg(N, inv), one));
    return bs_scale_mg(Km, mg_term(-2, cp_const(r, spec.dc, Q(1))));
}

BiSeries bergman_potential(const PotentialSpec& spec) {
    return bergman_potential(spec, spec.effective_dp());
}

BiSeries bergman_potential(const PotentialSpec& spec, int dp_override) {
    PotentialSpec s2 = spec;
    s2.dp = dp_override;
    validate(s2);
    // K_m reads rows with s + t <= dz only.
    return bergman_potential_from(gram_inverse(gram_matrix(s2), s2.dz), s2);
}

std::vector<KeyVerdict> verify_convergence(const BiSeries& Km, const PotentialSpec& spec) {
    const BiSeries K = build_potential(spec);
    std::set<BiKey, BiKeyLess> keys;
    for (const auto& [key, v] : Km.t) keys.insert(key);
    for (const auto& [key, v] : K.t) keys.insert(key);
    std::vector<KeyVerdict> out;
    for (const auto& key : keys) {
        KeyVerdict kv;
        kv.S = key.first;
        kv.T = key.second;
        const MGraded v = bs_coeff(Km, key.first, key.second);
        kv.positive_ok = mg_is_zero(v) || mg_max_exp(v) <= 0;
        kv.mu0_ok = mg_coeff(v, 0) ==
                    mg_coeff(bs_coeff(K, key.first, key.second), 0);
        kv.residue = cp_zero(Km.r, Km.dc);
        for (auto it = v.t.rbegin(); it != v.t.rend(); ++it) {
            if (it->first >= 0 || cp_is_zero(it->second)) continue;
            kv.residue_exp = it->first;
            kv.residue = it->second;
            break;
        }
        out.push_back(std::move(kv));
    }
    return out;
}

ConvergenceReport convergence_report(const PotentialSpec& spec) {
    validate(spec);
    const int dp0 = spec.effective_dp();
    auto v1 = verify_convergence(bergman_potential(spec, dp0), spec);
    auto v2 = verify_convergence(bergman_potential(spec, dp0 + 2), spec);
    // Align by key: both lists are graded-lex sorted over key supersets.
    auto same = [](const KeyVerdict& a, const KeyVerdict& b) {
        return a.positive_ok == b.positive_ok && a.mu0_ok == b.mu0_ok &&
               a.residue_exp == b.residue_exp && a.residue == b.residue;
    };
    ConvergenceReport rep;
    rep.pass = true;
    rep.stable = true;
    size_t i = 0, j = 0;
    BiKeyLess less;
    while (i < v1.size() || j < v2.size()) {
        if (i < v1.size() && j < v2.size() &&
            v1[i].S == v2[j].S && v1[i].T == v2[j].T) {
            KeyVerdict kv = v1[i];
            kv.stable = same(v1[i], v2[j]);
            rep.keys.push_back(std::move(kv));
            ++i, ++j;
        } else if (j >= v2.size() ||
                   (i < v1.size() && less({v1[i].S, v1[i].T}, {v2[j].S, v2[j].T}))) {
            // key vanished entirely at dp+2: its dp entry was spurious
            KeyVerdict kv = v1[i];
            kv.stable = false;
            rep.keys.push_back(std::move(kv));
            ++i;
        } else {
            // key only appears at dp+2: the dp run silently missed it
            KeyVerdict kv = v2[j];
            kv.stable = false;
            rep.keys.push_back(std::move(kv));
            ++j;
        }
    }
    for (const auto& kv : rep.keys) {
        rep.pass = rep.pass && kv.positive_ok && kv.mu0_ok;
        rep.stable = rep.stable && kv.stable;
    }
    return rep;
}

}  // namespace bk
