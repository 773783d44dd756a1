#include "bk/multiindex.hpp"

#include <algorithm>
#include <stdexcept>

namespace bk {

int order(const MI& p) {
    int s = 0;
    for (int e : p) s += e;
    return s;
}

MI mi_zero(int len) { return MI(len, 0); }

MI mi_unit(int len, int i) {
    MI e(len, 0);
    e.at(i) = 1;
    return e;
}

MI mi_add(const MI& a, const MI& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multi-index length mismatch");
    MI r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

MI mi_sub(const MI& a, const MI& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multi-index length mismatch");
    MI r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

bool mi_is_zero(const MI& a) {
    for (int e : a)
        if (e != 0) return false;
    return true;
}

bool mi_leq(const MI& a, const MI& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multi-index length mismatch");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

std::optional<MI> sub_checked(const MI& p, const MI& q) {
    if (p.size() != q.size()) throw std::invalid_argument("multi-index length mismatch");
    MI r = p;
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] -= q[i];
        if (r[i] < 0) return std::nullopt;
    }
    return r;
}

Q factorial(const MI& p) {
    Q r = 1;
    for (int e : p) r *= qfact(e);
    return r;
}

Q binomial(const MI& p, const MI& i) {
    if (p.size() != i.size()) throw std::invalid_argument("multi-index length mismatch");
    Q r = 1;
    for (size_t k = 0; k < p.size(); ++k) {
        r *= qbinom(p[k], i[k]);
        if (r == 0) return r;
    }
    return r;
}

bool glex_less(const MI& a, const MI& b) {
    int oa = order(a), ob = order(b);
    if (oa != ob) return oa < ob;
    return a > b;  // lexicographically larger vector comes first
}

std::vector<MI> enumerate_indices(int length, int max_order) {
    if (length < 1 || max_order < 0) throw std::invalid_argument("bad enumeration bounds");
    std::vector<MI> out;
    MI cur(length, 0);
    // Each grade is enumerated with the full budget consumed; larger leading
    // entries first gives the lex-descending order within a grade.
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == length) {
            if (left == 0) out.push_back(cur);
            return;
        }
        for (int e = left; e >= 0; --e) {
            cur[pos] = e;
            rec(pos + 1, left - e);
        }
        cur[pos] = 0;
    };
    for (int d = 0; d <= max_order; ++d) rec(0, d);
    return out;
}

namespace {

// Enumerate nonzero sub-indices v with 0 < v <= rem entrywise.
void for_each_nonzero_leq(const MI& rem, const std::function<void(const MI&)>& fn) {
    MI v(rem.size(), 0);
    std::function<void(size_t)> rec = [&](size_t pos) {
        if (pos == rem.size()) {
            if (!mi_is_zero(v)) fn(v);
            return;
        }
        for (int e = 0; e <= rem[pos]; ++e) {
            v[pos] = e;
            rec(pos + 1);
        }
        v[pos] = 0;
    };
    rec(0);
}

}  // namespace

void for_each_composition(const MI& L, int u,
                          const std::function<void(const Composition&)>& fn) {
    if (u < 1 || u > order(L)) return;
    Composition parts;
    parts.reserve(u);
    std::function<void(const MI&, int)> rec = [&](const MI& rem, int slots) {
        if (slots == 1) {
            if (!mi_is_zero(rem)) {
                parts.push_back(rem);
                fn(parts);
                parts.pop_back();
            }
            return;
        }
        for_each_nonzero_leq(rem, [&](const MI& v) {
            parts.push_back(v);
            rec(mi_sub(rem, v), slots - 1);
            parts.pop_back();
        });
    };
    rec(L, u);
}

std::vector<Composition> enumerate_compositions(const MI& L, int u) {
    std::vector<Composition> out;
    for_each_composition(L, u, [&](const Composition& c) { out.push_back(c); });
    return out;
}

void for_each_splitting(const MI& I, int u,
                        const std::function<void(const std::vector<MI>&)>& fn) {
    if (u < 1) return;
    std::vector<MI> parts;
    parts.reserve(u);
    std::function<void(const MI&, int)> rec = [&](const MI& rem, int slots) {
        if (slots == 1) {
            parts.push_back(rem);
            fn(parts);
            parts.pop_back();
            return;
        }
        // Zero parts are allowed here, unlike compositions.
        MI v(rem.size(), 0);
        std::function<void(size_t)> pick = [&](size_t pos) {
            if (pos == rem.size()) {
                parts.push_back(v);
                rec(mi_sub(rem, v), slots - 1);
                parts.pop_back();
                return;
            }
            for (int e = 0; e <= rem[pos]; ++e) {
                v[pos] = e;
                pick(pos + 1);
            }
            v[pos] = 0;
        };
        pick(0);
    };
    rec(I, u);
}

void for_each_partition(const MI& L,
                        const std::function<void(const PartitionMultiset&)>& fn) {
    if (order(L) < 1) return;
    // Collect candidate parts in glex-descending order; choose multiplicities
    // for a nonincreasing sequence so each multiset appears exactly once.
    std::vector<MI> cands;
    for_each_nonzero_leq(L, [&](const MI& v) { cands.push_back(v); });
    std::sort(cands.begin(), cands.end(), [](const MI& a, const MI& b) { return glex_less(b, a); });

    PartitionMultiset pm;
    std::function<void(size_t, const MI&)> rec = [&](size_t from, const MI& rem) {
        if (mi_is_zero(rem)) {
            fn(pm);
            return;
        }
        for (size_t i = from; i < cands.size(); ++i) {
            if (!mi_leq(cands[i], rem)) continue;
            pm.parts.push_back(cands[i]);
            pm.mult.push_back(0);
            MI r = rem;
            int used = 0;
            while (mi_leq(cands[i], r)) {
                r = mi_sub(r, cands[i]);
                ++used;
                pm.mult.back() = used;
                pm.slots += 1;
                rec(i + 1, r);
            }
            pm.slots -= used;
            pm.parts.pop_back();
            pm.mult.pop_back();
        }
    };
    rec(0, L);
}

std::vector<MI> enumerate_balanced(const MI& diff, const std::vector<MI>& weights,
                                   int bound) {
    if (bound < 0) throw std::invalid_argument("bad enumeration bounds");
    std::vector<MI> out;
    const int r = static_cast<int>(weights.size());
    MI L(r, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == r) {
            MI acc(diff.size(), 0);
            for (int i = 0; i < r; ++i)
                for (size_t k = 0; k < acc.size(); ++k) acc[k] += L[i] * weights[i][k];
            if (acc == diff) out.push_back(L);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            L[pos] = e;
            rec(pos + 1, left - e);
        }
        L[pos] = 0;
    };
    rec(0, bound);
    return out;
}

long det_minor(const std::vector<MI>& rows, const std::vector<int>& rsel,
               const std::vector<int>& csel) {
    const size_t k = rsel.size();
    if (csel.size() != k) throw std::invalid_argument("minor selections differ in size");
    if (k == 0) return 1;
    std::vector<int> perm(k);
    for (size_t i = 0; i < k; ++i) perm[i] = static_cast<int>(i);
    long tot = 0;
    do {
        int inv = 0;
        for (size_t a = 0; a < k; ++a)
            for (size_t b = a + 1; b < k; ++b)
                if (perm[a] > perm[b]) ++inv;
        long prod = (inv % 2 == 0) ? 1 : -1;
        for (size_t a = 0; a < k; ++a) prod *= rows[rsel[a]][csel[perm[a]]];
        tot += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return tot;
}

}  // namespace bk
