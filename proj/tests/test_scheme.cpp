#include "support/battery.hpp"
#include "support/oracles.hpp"

#include "coco/io.hpp"
#include "coco/scheme.hpp"

#include <doctest.h>

#include <numeric>
#include <set>

using namespace coco;
using coco::testing::battery;

namespace {

VerifyErrorKind failure_kind(const RawMatrix &m)
{
    try {
        (void)verify_scheme(m);
    } catch (const VerificationError &e) {
        return e.kind();
    }
    FAIL("matrix verified unexpectedly");
    return VerifyErrorKind::EmptyMatrix;
}

RelationHandle handle(const Scheme &s, RelationIndex r)
{
    return s.handle(r);
}

}  // namespace

TEST_CASE("single point scheme")
{
    const auto s = verify_scheme({{0}});
    CHECK(s.point_count() == 1);
    CHECK(s.fiber_count() == 1);
    CHECK(s.relation_count() == 1);
    CHECK(s.tensor().get(0, 0, 0) == 1);
    CHECK(intersection_number(s, handle(s, 0), handle(s, 0), handle(s, 0)) == 1);
}

TEST_CASE("each axiom failure is reported")
{
    CHECK(failure_kind({}) == VerifyErrorKind::EmptyMatrix);
    CHECK(failure_kind({{0, 1}, {1}}) == VerifyErrorKind::NonSquare);
    CHECK(failure_kind({{0, 2}, {2, 0}}) == VerifyErrorKind::NonContiguousColors);
    CHECK(failure_kind({{0, -1}, {-1, 0}}) == VerifyErrorKind::NonContiguousColors);
    // color 0 is both on and off the diagonal
    CHECK(failure_kind({{0, 0}, {1, 0}}) == VerifyErrorKind::DiagonalNotFiberUnion);
    // directed 3-cycle with its reverse colored the same
    CHECK(failure_kind({{0, 1, 1}, {1, 0, 1}, {2, 1, 0}}) == VerifyErrorKind::TransposeNotClosed);
    // path on 4 vertices: edge/non-edge split is not coherent
    const RawMatrix path{{0, 1, 2, 2}, {1, 0, 1, 2}, {2, 1, 0, 1}, {2, 2, 1, 0}};
    CHECK(failure_kind(path) == VerifyErrorKind::IntersectionNumberNotConstant);
}

TEST_CASE("constancy failure carries a witness")
{
    const RawMatrix path{{0, 1, 2, 2}, {1, 0, 1, 2}, {2, 1, 0, 1}, {2, 2, 1, 0}};
    try {
        (void)verify_scheme(path);
        FAIL("verified");
    } catch (const VerificationError &e) {
        REQUIRE(e.witness());
        const auto &w = *e.witness();
        CHECK(w.first_count != w.second_count);
        CHECK(path[w.first.first][w.first.second] == w.t);
        CHECK(path[w.second.first][w.second.second] == w.t);
        auto count = [&](std::pair<Point, Point> p) {
            std::size_t c = 0;
            for (Point m = 0; m < 4; ++m)
                c += path[p.first][m] == w.r && path[m][p.second] == w.s;
            return c;
        };
        CHECK(count(w.first) == w.first_count);
        CHECK(count(w.second) == w.second_count);
    }
}

TEST_CASE("fano design scheme counts")
{
    const auto s = testing::fano();
    CHECK(s.point_count() == 14);
    CHECK(s.fiber_count() == 2);
    CHECK(degree_multiset(s, 0, 0) == std::vector<std::size_t>{1, 6});
    CHECK(degree_multiset(s, 0, 1) == std::vector<std::size_t>{3, 4});

    // incidence I is relation 4, its transpose 5
    const auto inc = handle(s, 4), inc_t = handle(s, 5);
    CHECK(s.degree(4) == 3);
    CHECK(s.transpose(4) == 5);
    CHECK(intersection_number(s, inc, inc_t, handle(s, s.diagonal_relation(0))) == 3);

    const auto prod = complex_product(s, inc, inc_t);
    std::set<RelationIndex> got;
    for (const auto &h : prod)
        got.insert(h.index);
    CHECK(got == std::set<RelationIndex>{s.diagonal_relation(0), 2});
}

TEST_CASE("complex product with a diagonal is the identity")
{
    for (const auto &[name, s] : battery()) {
        CAPTURE(name);
        for (RelationIndex q = 0; q < s.relation_count(); ++q) {
            const auto d = handle(s, s.diagonal_relation(s.meta(q).source_fiber));
            const auto prod = complex_product(s, d, handle(s, q));
            REQUIRE(prod.size() == 1);
            CHECK(prod[0].index == q);
        }
    }
}

TEST_CASE("incompatible product throws")
{
    const auto s = testing::fano();
    CHECK_THROWS_AS((void)complex_product(s, handle(s, 0), handle(s, 1)), IncompatibleRelations);
}

TEST_CASE("thin relations have singleton products in the fixture")
{
    const auto s = load_fixture("as16-122-fission");
    for (RelationIndex t = 0; t < s.relation_count(); ++t) {
        if (s.degree(t) != 1)
            continue;
        for (RelationIndex q = 0; q < s.relation_count(); ++q)
            if (s.meta(q).source_fiber == s.meta(t).target_fiber)
                CHECK(complex_product(s, handle(s, t), handle(s, q)).size() == 1);
    }
}

TEST_CASE("fixture degree multisets")
{
    const auto s = load_fixture("as16-122-fission");
    CHECK(degree_multiset(s, 0, 1) == std::vector<std::size_t>{2, 2, 2, 2});
    CHECK(degree_multiset(s, 1, 0) == std::vector<std::size_t>{2, 2, 2, 2});
    CHECK(degree_multiset(s, 0, 0) == std::vector<std::size_t>{1, 1, 2, 4});
}

TEST_CASE("row regularity, transpose and size identities on the battery")
{
    for (const auto &[name, s] : battery()) {
        CAPTURE(name);
        const auto n = s.point_count();
        std::set<RelationIndex> seen;
        for (Point u = 0; u < n; ++u)
            for (Point v = 0; v < n; ++v) {
                seen.insert(s.color(u, v));
                CHECK(s.color(v, u) == s.transpose(s.color(u, v)));
            }
        CHECK(seen.size() == s.relation_count());
        for (RelationIndex r = 0; r < s.relation_count(); ++r) {
            const auto &m = s.meta(r);
            const auto &x = s.fiber(m.source_fiber), &y = s.fiber(m.target_fiber);
            for (auto u : x) {
                std::size_t c = 0;
                for (auto v : y)
                    c += s.color(u, v) == r;
                CHECK(c == m.degree);
            }
            for (auto v : y) {
                std::size_t c = 0;
                for (auto u : x)
                    c += s.color(u, v) == r;
                CHECK(c == m.codegree);
            }
            CHECK(x.size() * m.degree == m.size);
            CHECK(y.size() * m.codegree == m.size);
        }
        for (FiberIndex x = 0; x < s.fiber_count(); ++x) {
            const auto d = degree_multiset(s, x, x);
            CHECK(std::find(d.begin(), d.end(), 1) != d.end());
            for (FiberIndex y = 0; y < s.fiber_count(); ++y) {
                const auto dxy = degree_multiset(s, x, y);
                CHECK(std::accumulate(dxy.begin(), dxy.end(), std::size_t{0}) == s.fiber(y).size());
            }
        }
    }
}

TEST_CASE("tensor agrees with brute force and with exact matrix products")
{
    for (const auto &[name, s] : battery()) {
        CAPTURE(name);
        if (s.point_count() <= 20)
            CHECK(brute_force_tensor(s) == s.tensor());
        CHECK(testing::structure_constant_mismatches(s) == 0);
    }
}

TEST_CASE("trivial scheme constants")
{
    const auto s = verify_scheme({{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
    for (RelationIndex r = 0; r < 9; ++r)
        for (RelationIndex q = 0; q < 9; ++q)
            for (RelationIndex t = 0; t < 9; ++t) {
                const bool chain = r % 3 == q / 3 && t / 3 == r / 3 && t % 3 == q % 3;
                CHECK(s.tensor().get(r, q, t) == (chain ? 1u : 0u));
            }
}

TEST_CASE("color matrix text round trip")
{
    for (const auto &[name, s] : battery()) {
        CAPTURE(name);
        const auto text = format_color_matrix(s);
        const auto back = scheme_from_text(text);
        CHECK(back == s);
        CHECK(format_color_matrix(back) == text);
        CHECK(text.back() == '\n');
    }
}

TEST_CASE("strict parsing reports line and column")
{
    CHECK_THROWS_AS((void)parse_color_matrix("points=2\ncolors=2\n0 1\n1 x\n"), ParseError);
    try {
        (void)parse_color_matrix("points=2\ncolors=2\n0 1\n1 x\n");
    } catch (const ParseError &e) {
        CHECK(e.line() == 4);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS((void)parse_color_matrix("colors=2\npoints=2\n0 1\n1 0\n"), ParseError);
    CHECK_THROWS_AS((void)scheme_from_text("points=2\ncolors=3\n0 1\n1 0\n"), std::exception);
    CHECK_THROWS_AS((void)scheme_from_text("points=3\ncolors=2\n0 1\n1 0\n"), std::exception);
}

TEST_CASE("canonical relabel orders by fiber block then first occurrence")
{
    const RawMatrix m{{5, 3}, {4, 2}};
    const auto c = canonical_relabel(m);
    CHECK(c == RawMatrix{{0, 1}, {2, 3}});
}
