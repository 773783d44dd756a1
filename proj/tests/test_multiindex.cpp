#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "bk/multiindex.hpp"

using namespace bk;

TEST_CASE("order sums entries") {
    CHECK(order(MI{0, 0, 0}) == 0);
    CHECK(order(MI{2, 1}) == 3);
    CHECK(order(MI{1, 0, 4}) == 5);
}

TEST_CASE("factorial is the entrywise product") {
    CHECK(factorial(MI{0, 0}) == Q(1));
    CHECK(factorial(MI{3, 2}) == Q(12));
    CHECK(factorial(MI{1, 1, 1}) == Q(1));
}

TEST_CASE("sub_checked kills negative entries") {
    CHECK(sub_checked(MI{3, 2}, MI{1, 2}) == MI{2, 0});
    CHECK(!sub_checked(MI{1, 0}, MI{0, 1}).has_value());
    MI p{4, 1, 2};
    CHECK(sub_checked(p, mi_zero(3)) == p);
    CHECK_THROWS_AS(sub_checked(MI{1}, MI{1, 2}), std::invalid_argument);
}

TEST_CASE("sub_checked present iff entrywise <=, and add round-trips") {
    auto idx = enumerate_indices(2, 3);
    for (const auto& p : idx)
        for (const auto& q : idx) {
            auto d = sub_checked(p, q);
            CHECK(d.has_value() == mi_leq(q, p));
            if (d) CHECK(mi_add(q, *d) == p);
        }
}

TEST_CASE("binomial is the entrywise product of binomials") {
    CHECK(binomial(MI{2, 2}, MI{1, 1}) == Q(4));
    CHECK(binomial(MI{3, 1, 2}, mi_zero(3)) == Q(1));
    CHECK(binomial(MI{1, 3}, MI{2, 0}) == Q(0));
    // Negative upper entries follow the falling-factorial convention.
    CHECK(qbinom(-1, 2) == Q(1));
    CHECK(qbinom(-2, 1) == Q(-2));
}

TEST_CASE("enumerate_indices: graded-lex, no duplicates, stars-and-bars count") {
    CHECK(enumerate_indices(1, 2) == std::vector<MI>{{0}, {1}, {2}});
    CHECK(enumerate_indices(2, 1) == std::vector<MI>{{0, 0}, {1, 0}, {0, 1}});
    CHECK(enumerate_indices(2, 2).size() == 6);
    for (int n = 1; n <= 3; ++n)
        for (int d = 0; d <= 4; ++d) {
            auto v = enumerate_indices(n, d);
            std::set<MI> s(v.begin(), v.end());
            CHECK(s.size() == v.size());
            // C(n + d, n)
            CHECK(Q(static_cast<long>(v.size())) == qbinom(n + d, n));
            for (size_t i = 1; i < v.size(); ++i) CHECK(glex_less(v[i - 1], v[i]));
        }
}

TEST_CASE("compositions: forced, two-part, and empty cases") {
    auto c1 = enumerate_compositions(MI{2}, 2);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0] == Composition{{1}, {1}});

    auto c2 = enumerate_compositions(MI{1, 1}, 2);
    REQUIRE(c2.size() == 2);
    std::set<Composition> got(c2.begin(), c2.end());
    CHECK(got.count(Composition{{1, 0}, {0, 1}}) == 1);
    CHECK(got.count(Composition{{0, 1}, {1, 0}}) == 1);

    CHECK(enumerate_compositions(MI{1}, 2).empty());
}

namespace {
// Number of ordered sequences of nonzero parts summing to L:
// a(L) = sum over nonzero V <= L of a(L - V), a(0) = 1.
long ordered_count(const MI& L, std::map<MI, long>& memo) {
    if (mi_is_zero(L)) return 1;
    auto it = memo.find(L);
    if (it != memo.end()) return it->second;
    long total = 0;
    auto subs = enumerate_indices(static_cast<int>(L.size()), order(L));
    for (const auto& v : subs) {
        if (mi_is_zero(v) || !mi_leq(v, L)) continue;
        total += ordered_count(mi_sub(L, v), memo);
    }
    memo[L] = total;
    return total;
}
}  // namespace

TEST_CASE("composition counts match the ordered-sequence recurrence") {
    std::map<MI, long> memo;
    for (int len = 1; len <= 3; ++len)
        for (const auto& L : enumerate_indices(len, len == 3 ? 6 : 8)) {
            if (mi_is_zero(L)) continue;
            long by_u = 0;
            for (int u = 1; u <= order(L); ++u)
                by_u += static_cast<long>(enumerate_compositions(L, u).size());
            CHECK(by_u == ordered_count(L, memo));
        }
}

TEST_CASE("partition multisets reproduce ordered composition counts") {
    for (int len = 1; len <= 2; ++len)
        for (const auto& L : enumerate_indices(len, 6)) {
            if (mi_is_zero(L)) continue;
            std::map<int, Q> by_u_parts;  // u -> number of ordered arrangements
            for_each_partition(L, [&](const PartitionMultiset& pm) {
                Q arr = qfact(pm.slots);
                for (int m : pm.mult) arr /= qfact(m);
                by_u_parts[pm.slots] += arr;
            });
            for (int u = 1; u <= order(L); ++u) {
                Q direct(static_cast<long>(enumerate_compositions(L, u).size()));
                CHECK(by_u_parts[u] == direct);
            }
        }
}

TEST_CASE("splittings allow zero parts") {
    int count = 0;
    for_each_splitting(MI{1}, 2, [&](const std::vector<MI>& s) {
        CHECK(s.size() == 2);
        ++count;
    });
    CHECK(count == 2);

    count = 0;
    for_each_splitting(MI{1, 1}, 2, [&](const std::vector<MI>&) { ++count; });
    CHECK(count == 4);
}

TEST_CASE("balanced enumeration") {
    // Single weight, forced multiplicity.
    auto a = enumerate_balanced(MI{2}, {MI{1}}, 3);
    CHECK(a == std::vector<MI>{{2}});

    // Opposite weights cancel in pairs.
    auto b = enumerate_balanced(MI{0}, {MI{1}, MI{-1}}, 2);
    std::set<MI> sb(b.begin(), b.end());
    CHECK(sb == std::set<MI>{{0, 0}, {1, 1}});

    // Zero weight is unconstrained: every |L| <= bound appears.
    auto c = enumerate_balanced(MI{0, 0}, {MI{0, 0}}, 4);
    CHECK(c.size() == 5);
}
