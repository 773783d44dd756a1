#pragma once
// Multi-index arithmetic and the enumeration engines the other modules
// iterate over: graded-lex streams, compositions into nonzero parts,
// splittings with zero parts allowed, and constrained (balanced) index sets.

#include <functional>
#include <optional>
#include <vector>

#include "bk/rational.hpp"

namespace bk {

// A multi-index is a fixed-length vector of small integers.  Entries are
// nonnegative except in the documented "difference" uses (enumerate_balanced).
using MI = std::vector<int>;

// An ordered sequence of nonzero multi-indices summing to a declared total.
using Composition = std::vector<MI>;

int order(const MI& p);
MI mi_zero(int len);
MI mi_unit(int len, int i);
MI mi_add(const MI& a, const MI& b);
MI mi_sub(const MI& a, const MI& b);  // may go negative; see sub_checked
bool mi_is_zero(const MI& a);
bool mi_leq(const MI& a, const MI& b);  // entrywise

// Entrywise difference, or absent when any entry would go negative.
// Absent encodes the convention that factorial ratios with negative
// arguments kill the whole term.
std::optional<MI> sub_checked(const MI& p, const MI& q);

// Product of entrywise factorials; entries must be nonnegative.
Q factorial(const MI& p);

// Product of entrywise generalized binomials (upper entries may be negative).
Q binomial(const MI& p, const MI& i);

// Graded-lex total order: lower order first; within an order, the
// lexicographically larger vector first (so (1,0) precedes (0,1)).
bool glex_less(const MI& a, const MI& b);
struct GlexLess {
    bool operator()(const MI& a, const MI& b) const { return glex_less(a, b); }
};

// All multi-indices of the given length with order <= max_order, in
// graded-lex order, each exactly once.
std::vector<MI> enumerate_indices(int length, int max_order);

// All ordered u-tuples of nonzero multi-indices summing to L.
// Empty when u > |L| or u < 1.
void for_each_composition(const MI& L, int u,
                          const std::function<void(const Composition&)>& fn);
std::vector<Composition> enumerate_compositions(const MI& L, int u);

// All ordered u-tuples of multi-indices (zero parts allowed) summing to I.
void for_each_splitting(const MI& I, int u,
                        const std::function<void(const std::vector<MI>&)>& fn);

// Multisets of nonzero parts summing to L, as (distinct parts, multiplicities).
// Ordered compositions are recovered with multiplicity u!/prod(mult!).
struct PartitionMultiset {
    std::vector<MI> parts;       // distinct, glex-descending
    std::vector<int> mult;       // same length, all >= 1
    int slots = 0;               // u = sum of mult
};
void for_each_partition(const MI& L,
                        const std::function<void(const PartitionMultiset&)>& fn);

// All L in Z_+^r with |L| <= bound and  sum_i L_i * weights_i == diff.
// diff and weights entries may be negative.
std::vector<MI> enumerate_balanced(const MI& diff, const std::vector<MI>& weights,
                                   int bound);

// Determinant of the minor rows[rsel] x columns csel; rsel and csel have
// equal size, an empty selection gives 1.
long det_minor(const std::vector<MI>& rows, const std::vector<int>& rsel,
               const std::vector<int>& csel);

}  // namespace bk
