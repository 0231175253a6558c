#include "coco/constructors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace coco {

namespace detail {
// Generated from data/*.cc at configure time.
std::string_view fixture_text(std::string_view name);
}

Scheme trivial_scheme(std::size_t n)
{
    if (n == 0)
        throw ConstructionError("trivial scheme needs at least one point");
    RawMatrix m(n, std::vector<std::int64_t>(n));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            m[u][v] = static_cast<std::int64_t>(u * n + v);
    return verify_scheme(m);
}

Scheme tensor_product(const Scheme &a, const Scheme &b)
{
    const auto na = a.point_count(), nb = b.point_count();
    const auto kb = static_cast<std::int64_t>(b.relation_count());
    RawMatrix m(na * nb, std::vector<std::int64_t>(na * nb));
    for (Point u1 = 0; u1 < na; ++u1)
        for (Point u2 = 0; u2 < nb; ++u2)
            for (Point v1 = 0; v1 < na; ++v1)
                for (Point v2 = 0; v2 < nb; ++v2)
                    m[u1 * nb + u2][v1 * nb + v2] =
                        static_cast<std::int64_t>(a.color(u1, v1)) * kb + static_cast<std::int64_t>(b.color(u2, v2));
    return verify_scheme(m);
}

std::vector<Point> union_points(const Scheme &s, const std::vector<FiberIndex> &fibers)
{
    if (fibers.empty())
        throw ConstructionError("EmptyFiberSet: restriction needs at least one fiber");
    std::vector<Point> points;
    std::vector<bool> seen(s.fiber_count(), false);
    for (auto x : fibers) {
        if (x >= s.fiber_count())
            throw ConstructionError("BadFiberIndex: fiber " + std::to_string(x) + " does not exist (scheme has " +
                                    std::to_string(s.fiber_count()) + ")");
        if (seen[x])
            continue;
        seen[x] = true;
        points.insert(points.end(), s.fiber(x).begin(), s.fiber(x).end());
    }
    std::sort(points.begin(), points.end());
    return points;
}

Scheme restriction(const Scheme &s, const std::vector<FiberIndex> &fibers)
{
    const auto points = union_points(s, fibers);
    std::vector<bool> kept(s.relation_count(), false);
    for (auto u : points)
        for (auto v : points)
            kept[s.color(u, v)] = true;
    std::vector<std::int64_t> renumber(s.relation_count(), -1);
    std::int64_t next = 0;
    for (std::size_t r = 0; r < kept.size(); ++r)
        if (kept[r])
            renumber[r] = next++;

    RawMatrix m(points.size(), std::vector<std::int64_t>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            m[i][j] = renumber[s.color(points[i], points[j])];
    return verify_scheme(m);
}

Scheme internal_direct_sum(const Scheme &a, const Scheme &b)
{
    const auto na = a.point_count(), nb = b.point_count();
    const auto ka = static_cast<std::int64_t>(a.relation_count());
    const auto kb = static_cast<std::int64_t>(b.relation_count());
    const auto fa = static_cast<std::int64_t>(a.fiber_count());
    const auto fb = static_cast<std::int64_t>(b.fiber_count());

    RawMatrix m(na + nb, std::vector<std::int64_t>(na + nb));
    for (Point u = 0; u < na; ++u)
        for (Point v = 0; v < na; ++v)
            m[u][v] = a.color(u, v);
    for (Point u = 0; u < nb; ++u)
        for (Point v = 0; v < nb; ++v)
            m[na + u][na + v] = ka + b.color(u, v);
    for (Point u = 0; u < na; ++u)
        for (Point v = 0; v < nb; ++v) {
            const auto x = static_cast<std::int64_t>(a.fiber_of(u));
            const auto y = static_cast<std::int64_t>(b.fiber_of(v));
            m[u][na + v] = ka + kb + x * fb + y;
            m[na + v][u] = ka + kb + fa * fb + y * fa + x;
        }
    return verify_scheme(canonical_relabel(m));
}

Scheme design_scheme(const DesignInput &design)
{
    const auto &inc = design.incidence;
    const auto v = inc.size();
    if (v == 0)
        throw NotASymmetricDesign("no points");
    const auto b = inc.front().size();
    for (const auto &row : inc)
        if (row.size() != b)
            throw NotASymmetricDesign("incidence rows have different lengths");
    if (v != b)
        throw NotASymmetricDesign("v=" + std::to_string(v) + " but b=" + std::to_string(b));

    auto row_sum = [&](std::size_t i) { return static_cast<std::size_t>(std::count(inc[i].begin(), inc[i].end(), 1)); };
    const auto k = row_sum(0);
    for (std::size_t i = 0; i < v; ++i)
        if (row_sum(i) != k)
            throw NotASymmetricDesign("point " + std::to_string(i) + " lies on " + std::to_string(row_sum(i)) +
                                      " blocks, point 0 on " + std::to_string(k));
    for (std::size_t j = 0; j < b; ++j) {
        std::size_t col = 0;
        for (std::size_t i = 0; i < v; ++i)
            col += inc[i][j];
        if (col != k)
            throw NotASymmetricDesign("block " + std::to_string(j) + " has " + std::to_string(col) +
                                      " points, expected " + std::to_string(k));
    }
    std::optional<std::size_t> lambda;
    for (std::size_t i = 0; i < v; ++i)
        for (std::size_t i2 = i + 1; i2 < v; ++i2) {
            std::size_t common = 0;
            for (std::size_t j = 0; j < b; ++j)
                common += inc[i][j] && inc[i2][j];
            if (! lambda)
                lambda = common;
            else if (*lambda != common)
                throw NotASymmetricDesign("points " + std::to_string(i) + "," + std::to_string(i2) + " share " +
                                          std::to_string(common) + " blocks, expected " + std::to_string(*lambda));
        }
    if (v < 2)
        throw NotASymmetricDesign("a single point leaves X^2 - Delta_X empty");
    if (k == 0)
        throw NotASymmetricDesign("empty blocks leave the incidence relation empty");
    if (k == v)
        throw NotASymmetricDesign("every point on every block leaves the non-incidence relation empty");

    RawMatrix m(2 * v, std::vector<std::int64_t>(2 * v));
    for (std::size_t i = 0; i < v; ++i)
        for (std::size_t j = 0; j < v; ++j) {
            m[i][j] = i == j ? 0 : 2;
            m[v + i][v + j] = i == j ? 1 : 3;
            m[i][v + j] = inc[i][j] ? 4 : 6;
            m[v + j][i] = inc[i][j] ? 5 : 7;
        }
    return verify_scheme(m);
}

Scheme two_orbit_scheme(const PermutationGroupInput &group)
{
    const auto n = group.degree;
    if (n == 0)
        throw ConstructionError("degree must be positive");
    for (const auto &g : group.generators) {
        std::vector<bool> hit(n, false);
        if (g.size() != n)
            throw ConstructionError("generator has wrong length");
        for (auto x : g) {
            if (x >= n || hit[x])
                throw ConstructionError("generator is not a permutation");
            hit[x] = true;
        }
    }

    std::vector<std::size_t> parent(n * n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto &g : group.generators)
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                auto a = find(u * n + v), b = find(g[u] * n + g[v]);
                // keep the least pair as root so numbering follows it
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }

    std::map<std::size_t, std::int64_t> color_of_root;
    RawMatrix m(n, std::vector<std::int64_t>(n));
    for (std::size_t p = 0; p < n * n; ++p) {
        auto [it, inserted] = color_of_root.try_emplace(find(p), static_cast<std::int64_t>(color_of_root.size()));
        m[p / n][p % n] = it->second;
    }
    return verify_scheme(m);
}

std::vector<std::string> fixture_names()
{
    return {"as16-122-fission", "fano-design"};
}

Scheme load_fixture(std::string_view name)
{
    auto text = detail::fixture_text(name);
    if (text.empty())
        throw UnknownFixture("unknown fixture '" + std::string(name) + "'");
    return scheme_from_text(text);
}

DesignInput fano_plane()
{
    DesignInput d;
    d.incidence.assign(7, std::vector<std::uint8_t>(7, 0));
    for (std::size_t line = 0; line < 7; ++line)
        for (std::size_t offset : {0, 1, 3})
            d.incidence[(line + offset) % 7][line] = 1;
    return d;
}

}  // namespace coco
