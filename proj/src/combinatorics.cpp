#include "bk/combinatorics.hpp"

#include <functional>
#include <stdexcept>
#include <utility>

namespace bk {

Q qfalling(long x, int k) {
    if (k < 0) throw std::invalid_argument("falling factorial needs k >= 0");
    Q r = 1;
    for (int j = 0; j < k; ++j) r *= Q(x - j);
    return r;
}

Q mi_falling(const MI& L, const MI& A) {
    if (L.size() != A.size()) throw std::invalid_argument("index length mismatch");
    Q r = 1;
    for (size_t i = 0; i < L.size(); ++i) r *= qfalling(L[i], A[i]);
    return r;
}

namespace {

void require_nonzero(const MI& L) {
    if (order(L) < 1) throw std::invalid_argument("identity needs |L| >= 1");
}

void require_selectors(const MI& L, const std::vector<MI>& As) {
    require_nonzero(L);
    if (As.empty()) throw std::invalid_argument("selector identity needs r >= 1");
    for (const MI& A : As) {
        if (A.size() != L.size()) throw std::invalid_argument("index length mismatch");
        if (order(A) < 1) throw std::invalid_argument("selector parts need order >= 1");
    }
}

// sum over injective selectors j_1..j_r of prod_k falling(comp[j_k], A_k)
Q injective_selector_sum(const Composition& comp, const std::vector<MI>& As) {
    const int u = static_cast<int>(comp.size());
    const int r = static_cast<int>(As.size());
    Q tot = 0;
    std::vector<int> js(r, 0);
    std::function<void(int, const Q&)> rec = [&](int k, const Q& prod) {
        if (prod == 0) return;
        if (k == r) {
            tot += prod;
            return;
        }
        for (int j = 0; j < u; ++j) {
            bool used = false;
            for (int p = 0; p < k; ++p) used = used || js[p] == j;
            if (used) continue;
            js[k] = j;
            rec(k + 1, prod * mi_falling(comp[j], As[k]));
        }
    };
    rec(0, Q(1));
    return tot;
}

// set partitions of {0..r-1}
void for_each_set_partition(int r,
                            const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> rec = [&](int e) {
        if (e == r) {
            fn(blocks);
            return;
        }
        // index loop: the recursion grows and shrinks the vector underneath
        for (size_t i = 0, m = blocks.size(); i < m; ++i) {
            blocks[i].push_back(e);
            rec(e + 1);
            blocks[i].pop_back();
        }
        blocks.push_back({e});
        rec(e + 1);
        blocks.pop_back();
    };
    rec(0);
}

// accelerated selector companion over cached part multisets
Q selector_fast_impl(const std::vector<PartitionMultiset>& pms, const std::vector<MI>& As,
                     bool harmonic) {
    const int r = static_cast<int>(As.size());
    Q tot = 0;
    for (const auto& pm : pms) {
        const int u = pm.slots;
        const size_t k = pm.parts.size();
        // per-part falling factors
        std::vector<std::vector<Q>> f(k, std::vector<Q>(r));
        for (size_t t = 0; t < k; ++t)
            for (int a = 0; a < r; ++a) f[t][a] = mi_falling(pm.parts[t], As[a]);
        // injective sum by inclusion-exclusion over set partitions of {1..r}
        Q sel = 0;
        for_each_set_partition(r, [&](const std::vector<std::vector<int>>& blocks) {
            Q term = 1;
            for (const auto& B : blocks) {
                Q SB = 0;
                for (size_t t = 0; t < k; ++t) {
                    Q p = pm.mult[t];
                    for (int a : B) p *= f[t][a];
                    SB += p;
                }
                term *= ((B.size() % 2 == 1) ? 1 : -1) * qfact(B.size() - 1) * SB;
            }
            sel += term;
        });
        if (sel == 0) continue;
        // weight: arrangements u!/prod(mult!) over 1/prod(part!)^mult
        Q w = qfact(u);
        for (size_t t = 0; t < k; ++t) {
            w /= qfact(pm.mult[t]);
            const Q pf = factorial(pm.parts[t]);
            for (int m = 0; m < pm.mult[t]; ++m) w /= pf;
        }
        if (harmonic)
            w *= Q((u % 2 == 1) ? 1 : -1, u);
        else
            w *= (u % 2 == 0) ? 1 : -1;
        tot += w * sel;
    }
    return tot;
}

std::vector<PartitionMultiset> collect_partitions(const MI& L) {
    std::vector<PartitionMultiset> pms;
    for_each_partition(L, [&](const PartitionMultiset& pm) { pms.push_back(pm); });
    return pms;
}

}  // namespace

Q alternating_comp_identity_closed(const MI& L) {
    require_nonzero(L);
    return Q((order(L) % 2 == 0) ? 1 : -1) / factorial(L);
}

Q alternating_comp_identity_brute(const MI& L) {
    require_nonzero(L);
    Q tot = 0;
    for (int u = 1; u <= order(L); ++u) {
        for_each_composition(L, u, [&](const Composition& comp) {
            Q w = (u % 2 == 0) ? 1 : -1;
            for (const MI& p : comp) w /= factorial(p);
            tot += w;
        });
    }
    return tot;
}

Q log_comp_identity_closed(const MI& L) {
    require_nonzero(L);
    return order(L) == 1 ? Q(1) : Q(0);
}

Q log_comp_identity_brute(const MI& L) {
    require_nonzero(L);
    Q tot = 0;
    for (int u = 1; u <= order(L); ++u) {
        for_each_composition(L, u, [&](const Composition& comp) {
            Q w = Q((u % 2 == 1) ? 1 : -1, u);
            for (const MI& p : comp) w /= factorial(p);
            tot += w;
        });
    }
    return tot;
}

Q selector_falling_identity_closed(const MI& L, const std::vector<MI>& As) {
    require_selectors(L, As);
    MI A = mi_zero(static_cast<int>(L.size()));
    for (const MI& Ak : As) A = mi_add(A, Ak);
    auto LA = sub_checked(L, A);
    if (!LA) return 0;
    const int r = static_cast<int>(As.size());
    const int sgn = ((r + order(L) - order(A)) % 2 == 0) ? 1 : -1;
    return Q(sgn) * qfact(r) / factorial(*LA);
}

Q selector_falling_identity_brute(const MI& L, const std::vector<MI>& As) {
    require_selectors(L, As);
    Q tot = 0;
    for (int u = 1; u <= order(L); ++u) {
        for_each_composition(L, u, [&](const Composition& comp) {
            Q w = (u % 2 == 0) ? 1 : -1;
            for (const MI& p : comp) w /= factorial(p);
            tot += w * injective_selector_sum(comp, As);
        });
    }
    return tot;
}

Q selector_harmonic_identity_closed(const MI& L, const std::vector<MI>& As) {
    require_selectors(L, As);
    MI A = mi_zero(static_cast<int>(L.size()));
    for (const MI& Ak : As) A = mi_add(A, Ak);
    if (L != A) return 0;
    const int r = static_cast<int>(As.size());
    return Q((r % 2 == 1) ? 1 : -1) * qfact(r - 1);
}

Q selector_harmonic_identity_brute(const MI& L, const std::vector<MI>& As) {
    require_selectors(L, As);
    Q tot = 0;
    for (int u = 1; u <= order(L); ++u) {
        for_each_composition(L, u, [&](const Composition& comp) {
            Q w = Q((u % 2 == 1) ? 1 : -1, u);
            for (const MI& p : comp) w /= factorial(p);
            tot += w * injective_selector_sum(comp, As);
        });
    }
    return tot;
}

Q selector_falling_identity_fast(const MI& L, const std::vector<MI>& As) {
    require_selectors(L, As);
    return selector_fast_impl(collect_partitions(L), As, false);
}

Q selector_harmonic_identity_fast(const MI& L, const std::vector<MI>& As) {
    require_selectors(L, As);
    return selector_fast_impl(collect_partitions(L), As, true);
}

IdentitySweepResult sweep_comp_identities(int maxlen, int maxorder) {
    IdentitySweepResult res;
    for (int len = 1; len <= maxlen; ++len) {
        for (const MI& L : enumerate_indices(len, maxorder)) {
            if (order(L) < 1) continue;
            if (alternating_comp_identity_brute(L) != alternating_comp_identity_closed(L)) {
                ++res.mismatches;
                if (res.first_mismatch.empty())
                    res.first_mismatch = "alternating composition identity at L = " + mi_str(L);
            }
            if (log_comp_identity_brute(L) != log_comp_identity_closed(L)) {
                ++res.mismatches;
                if (res.first_mismatch.empty())
                    res.first_mismatch = "log composition identity at L = " + mi_str(L);
            }
            res.checked += 2;
        }
    }
    return res;
}

IdentitySweepResult sweep_selector_identities(int maxlen, int maxorder, int rmax, int amax) {
    IdentitySweepResult res;
    for (int len = 1; len <= maxlen; ++len) {
        for (const MI& L : enumerate_indices(len, maxorder)) {
            if (order(L) < 1) continue;
            const auto pms = collect_partitions(L);
            std::vector<MI> As;
            std::function<void(int, int)> rec = [&](int r, int budget) {
                if (!As.empty()) {
                    auto describe = [&](const char* which) {
                        std::string s = std::string(which) + " at L = " + mi_str(L) + ", A =";
                        for (const MI& A : As) s += " " + mi_str(A);
                        return s;
                    };
                    if (selector_fast_impl(pms, As, false) !=
                        selector_falling_identity_closed(L, As)) {
                        ++res.mismatches;
                        if (res.first_mismatch.empty())
                            res.first_mismatch = describe("selector falling identity");
                    }
                    if (selector_fast_impl(pms, As, true) !=
                        selector_harmonic_identity_closed(L, As)) {
                        ++res.mismatches;
                        if (res.first_mismatch.empty())
                            res.first_mismatch = describe("selector harmonic identity");
                    }
                    res.checked += 2;
                }
                if (r == rmax) return;
                for (const MI& A : enumerate_indices(len, budget)) {
                    if (order(A) < 1) continue;
                    As.push_back(A);
                    rec(r + 1, budget - order(A));
                    As.pop_back();
                }
            };
            rec(0, amax);
        }
    }
    return res;
}

std::vector<Q> factorial_expand(int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("orders must be nonnegative");
    std::vector<Q> out;
    for (int i = 0; i <= std::min(p, q); ++i)
        out.push_back(qbinom(p, i) * qbinom(q, i) * qfact(i));
    return out;
}

std::map<MI, Q, GlexLess> factorial_expand_multi(const MI& P, const MI& Qm) {
    if (P.size() != Qm.size()) throw std::invalid_argument("index length mismatch");
    MI cap(P.size());
    for (size_t i = 0; i < P.size(); ++i) {
        if (P[i] < 0 || Qm[i] < 0) throw std::invalid_argument("orders must be nonnegative");
        cap[i] = std::min(P[i], Qm[i]);
    }
    std::map<MI, Q, GlexLess> out;
    std::function<void(size_t, MI&)> rec = [&](size_t i, MI& I) {
        if (i == P.size()) {
            out[I] = binomial(P, I) * binomial(Qm, I) * factorial(I);
            return;
        }
        for (int v = 0; v <= cap[i]; ++v) {
            I[i] = v;
            rec(i + 1, I);
        }
        I[i] = 0;
    };
    MI I(P.size(), 0);
    rec(0, I);
    return out;
}

Q coeff_B(const MI& I, const std::vector<MI>& Pj, const std::vector<MI>& Qj) {
    const int u = static_cast<int>(Pj.size());
    if (Qj.size() != Pj.size()) throw std::invalid_argument("slot count mismatch");
    if (u == 0) return order(I) == 0 ? Q(1) : Q(0);
    Q tot = 0;
    for_each_splitting(I, u, [&](const std::vector<MI>& split) {
        Q term = 1;
        for (int j = 0; j < u && term != 0; ++j) {
            MI X = split[j];
            for (int m = j; m < u; ++m) X = mi_add(X, mi_sub(Qj[m], split[m]));
            term *= binomial(Pj[j], split[j]) * binomial(X, split[j]) * factorial(split[j]);
        }
        tot += term;
    });
    return tot;
}

Q coeff_B_hat(const MI& A, const Composition& parts, const std::vector<MI>& Ps,
              const std::vector<MI>& Qs) {
    const int u = static_cast<int>(parts.size());
    const int r = static_cast<int>(Ps.size());
    const int n = static_cast<int>(A.size());
    std::vector<MI> Pj(u, mi_zero(n)), Qj(u, mi_zero(n));
    for (int j = 0; j < u; ++j)
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < n; ++k) {
                Pj[j][k] += parts[j][i] * Ps[i][k];
                Qj[j][k] += parts[j][i] * Qs[i][k];
            }
    // subset pairs shared by every slot
    struct Opt {
        std::vector<int> I;
        MI eK;
        long det2;
        int sign;
    };
    std::vector<Opt> opts;
    for (unsigned im = 0; im < (1u << r); ++im) {
        std::vector<int> I;
        for (int i = 0; i < r; ++i)
            if (im >> i & 1) I.push_back(i);
        for (unsigned km = 0; km < (1u << n); ++km) {
            std::vector<int> K;
            for (int k = 0; k < n; ++k)
                if (km >> k & 1) K.push_back(k);
            if (K.size() != I.size()) continue;
            const long dP = det_minor(Ps, I, K);
            if (dP == 0) continue;
            const long dQ = det_minor(Qs, I, K);
            if (dQ == 0) continue;
            MI eK = mi_zero(n);
            for (int k : K) eK[k] = 1;
            opts.push_back({I, eK, dP * dQ, (K.size() % 2 == 0) ? 1 : -1});
        }
    }
    Q acc = 0;
    std::vector<MI> Pmod, Qmod;
    std::function<void(int, const MI&, const Q&)> rec = [&](int j, const MI& Ktot,
                                                            const Q& coeff) {
        if (j == u) {
            auto Arem = sub_checked(A, Ktot);
            if (Arem) acc += coeff * coeff_B(*Arem, Pmod, Qmod);
            return;
        }
        for (const Opt& o : opts) {
            long lpow = 1;
            for (int i : o.I) lpow *= parts[j][i];
            if (lpow == 0) continue;
            Pmod.push_back(mi_sub(Pj[j], o.eK));
            Qmod.push_back(mi_sub(Qj[j], o.eK));
            rec(j + 1, mi_add(Ktot, o.eK), coeff * Q(o.det2 * lpow * o.sign));
            Pmod.pop_back();
            Qmod.pop_back();
        }
    };
    rec(0, mi_zero(n), Q(1));
    return acc;
}

namespace {

Q coeff_D_raw(const MI& I, const MI& L, const std::vector<MI>& Ps,
              const std::vector<MI>& Qs) {
    if (order(L) == 0) return order(I) == 0 ? Q(1) : Q(0);
    Q tot = 0;
    for (int u = 1; u <= order(L); ++u) {
        for_each_composition(L, u, [&](const Composition& comp) {
            Q w = (u % 2 == 0) ? 1 : -1;
            for (const MI& p : comp) w /= factorial(p);
            tot += w * coeff_B_hat(I, comp, Ps, Qs);
        });
    }
    return ((order(L) % 2 == 0) ? 1 : -1) * factorial(L) * tot;
}

// D values repeat heavily across the E/F convolutions; memoize per tower.
struct TowerCtx {
    const std::vector<MI>& Ps;
    const std::vector<MI>& Qs;
    std::map<std::pair<MI, MI>, Q> dmemo;

    const Q& D(const MI& I, const MI& L) {
        auto key = std::make_pair(I, L);
        auto it = dmemo.find(key);
        if (it == dmemo.end()) it = dmemo.emplace(key, coeff_D_raw(I, L, Ps, Qs)).first;
        return it->second;
    }

    Q E(const MI& I, const Composition& comp) {
        const int u = static_cast<int>(comp.size());
        Q tot = 0;
        for_each_splitting(I, u, [&](const std::vector<MI>& split) {
            Q term = 1;
            for (int j = 0; j < u && term != 0; ++j) term *= D(split[j], comp[j]);
            tot += term;
        });
        return tot;
    }

    std::map<MI, Q, GlexLess> F(const MI& I, int degree) {
        std::map<MI, Q, GlexLess> res;
        const int r = static_cast<int>(Ps.size());
        for (const MI& L : enumerate_indices(r, degree)) {
            if (order(L) < 1) continue;
            Q tot = 0;
            for (int u = 1; u <= order(L); ++u) {
                for_each_composition(L, u, [&](const Composition& comp) {
                    Q w = Q((u % 2 == 1) ? 1 : -1, u);
                    for (const MI& p : comp) w /= factorial(p);
                    tot += w * E(I, comp);
                });
            }
            if (tot != 0) res[L] = tot;
        }
        return res;
    }
};

}  // namespace

Q coeff_D(const MI& I, const MI& L, const std::vector<MI>& Ps, const std::vector<MI>& Qs) {
    return coeff_D_raw(I, L, Ps, Qs);
}

Q coeff_E(const MI& I, const Composition& comp, const std::vector<MI>& Ps,
          const std::vector<MI>& Qs) {
    TowerCtx ctx{Ps, Qs, {}};
    return ctx.E(I, comp);
}

std::map<MI, Q, GlexLess> coeff_F(const MI& I, const std::vector<MI>& Ps,
                                  const std::vector<MI>& Qs, int degree) {
    if (degree < 1) throw std::invalid_argument("degree bound must be >= 1");
    TowerCtx ctx{Ps, Qs, {}};
    return ctx.F(I, degree);
}

CombinatorialExpansion bergman_potential_combinatorial_full(const PotentialSpec& spec) {
    validate(spec);
    const int n = spec.n, r = spec.symbols();
    std::vector<MI> Ps, Qs;
    for (const auto& pt : spec.perts) {
        Ps.push_back(pt.P);
        Qs.push_back(pt.Q);
    }
    TowerCtx ctx{Ps, Qs, {}};
    CombinatorialExpansion out{bs_zero(n, r, spec.dz, spec.dc, spec.mu_bound()),
                               mg_zero(r, spec.dc)};
    for (int i = 0; i < n; ++i)
        bs_add_term(out.potential, mi_unit(n, i), mi_unit(n, i), mg_one(r, spec.dc));
    if (spec.dc < 1) return out;
    std::map<BiKey, MGraded, BiKeyLess> bad;
    const int imax = spec.dc * spec.max_pq();
    for (const MI& I : enumerate_indices(n, imax)) {
        for (const auto& [L, val] : ctx.F(I, spec.dc)) {
            MI S(n), T(n);
            bool neg = false;
            for (int k = 0; k < n; ++k) {
                S[k] = -I[k];
                T[k] = -I[k];
                for (int i = 0; i < r; ++i) {
                    S[k] += L[i] * Ps[i][k];
                    T[k] += L[i] * Qs[i][k];
                }
                neg = neg || S[k] < 0 || T[k] < 0;
            }
            const int mu = 2 * order(L) - 2 - 2 * order(I);
            const MGraded mg = mg_term(mu, cp_monomial(r, spec.dc, L, val));
            if (neg) {
                auto it = bad.find({S, T});
                if (it == bad.end())
                    bad.emplace(BiKey{S, T}, mg);
                else
                    it->second = mg_add(it->second, mg);
                continue;
            }
            if (order(S) == 0 && order(T) == 0) {
                out.constant = mg_add(out.constant, mg);
                continue;
            }
            if (order(S) + order(T) > spec.dz) continue;
            bs_add_term(out.potential, S, T, mg);
        }
    }
    for (const auto& [key, v] : bad)
        if (!mg_is_zero(v))
            throw std::logic_error(
                "negative-exponent monomials fail to cancel in the combinatorial expansion");
    return out;
}

BiSeries bergman_potential_combinatorial(const PotentialSpec& spec) {
    return bergman_potential_combinatorial_full(spec).potential;
}

}  // namespace bk
