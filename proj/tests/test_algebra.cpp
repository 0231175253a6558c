#include "support/battery.hpp"

#include "coco/algebra.hpp"
#include "coco/constructors.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

using namespace coco;
namespace t = coco::testing;

namespace {

using Shape = std::pair<std::size_t, std::size_t>;  // (m_P, n_P)

std::vector<Shape> shapes(const IdempotentDecomposition &dec)
{
    std::vector<Shape> out;
    for (const auto &p : dec.idempotents)
        out.emplace_back(p.multiplicity, p.degree);
    std::sort(out.begin(), out.end());
    return out;
}

// dim Z(A) by floating-point nullity of Z -> ([Z, A_R])_R over span{A_T}
std::size_t numeric_center_dimension(const Scheme &s)
{
    const auto k = s.relation_count();
    const auto n = static_cast<Eigen::Index>(s.point_count());
    std::vector<Eigen::MatrixXd> a;
    for (RelationIndex r = 0; r < k; ++r)
        a.push_back(adjacency_matrix(s, r));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(k) * n * n, static_cast<Eigen::Index>(k));
    for (RelationIndex q = 0; q < k; ++q)
        for (RelationIndex r = 0; r < k; ++r) {
            Eigen::MatrixXd c = a[q] * a[r] - a[r] * a[q];
            m.block(static_cast<Eigen::Index>(r) * n * n, static_cast<Eigen::Index>(q), n * n, 1) =
                Eigen::Map<Eigen::VectorXd>(c.data(), n * n);
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto &sv = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        rank += sv(i) > 1e-9 * std::max(1.0, sv(0));
    return k - rank;
}

double max_abs(const Eigen::MatrixXcd &m)
{
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

TEST_CASE("known decompositions")
{
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto dec = central_primitive_idempotents(trivial_scheme(n));
        CHECK(shapes(dec) == std::vector<Shape>{{1, n}});
    }
    CHECK(shapes(central_primitive_idempotents(t::fano())) == std::vector<Shape>{{1, 2}, {6, 2}});
    CHECK(shapes(central_primitive_idempotents(load_fixture("as16-122-fission"))) ==
          std::vector<Shape>{{1, 2}, {1, 2}, {2, 2}, {4, 2}});
    CHECK(shapes(central_primitive_idempotents(two_orbit_scheme(t::cyclic_regular(7)))) ==
          std::vector<Shape>(7, {1, 1}));
}

TEST_CASE("decomposition invariants on the battery")
{
    for (const auto &[name, s] : t::battery()) {
        CAPTURE(name);
        const auto dec = central_primitive_idempotents(s);
        CHECK(dec.center_dimension == numeric_center_dimension(s));
        CHECK(dec.center_dimension == center_dimension(s));
        CHECK(dec.size() == dec.center_dimension);

        std::size_t sum_n2 = 0, sum_mn = 0;
        const auto n = static_cast<Eigen::Index>(s.point_count());
        Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t i = 0; i < dec.size(); ++i) {
            const auto &p = dec.idempotents[i];
            sum_n2 += p.degree * p.degree;
            sum_mn += p.multiplicity * p.degree;
            total += p.matrix;
            CHECK(max_abs(p.matrix * p.matrix - p.matrix) < 1e-8);
            CHECK(std::abs(p.matrix.trace().real() - double(p.multiplicity * p.degree)) < 1e-6);
            CHECK(! p.support.empty());
            for (std::size_t j = 0; j < dec.size(); ++j)
                if (j != i)
                    CHECK(max_abs(p.matrix * dec.idempotents[j].matrix) < 1e-8);
            for (RelationIndex r = 0; r < s.relation_count(); ++r) {
                const Eigen::MatrixXcd a = adjacency_matrix(s, r).cast<std::complex<double>>();
                CHECK(max_abs(p.matrix * a - a * p.matrix) < 1e-8);
            }
        }
        CHECK(max_abs(total - Eigen::MatrixXcd::Identity(n, n)) < 1e-8);
        CHECK(sum_n2 == s.relation_count());
        CHECK(sum_mn == s.point_count());

        const auto &p0 = dec.idempotents[dec.principal_index];
        CHECK(dec.principal_index == 0);
        CHECK(max_abs(p0.matrix - principal_idempotent_matrix(s).cast<std::complex<double>>()) < 1e-8);
        CHECK(p0.multiplicity == 1);
        CHECK(p0.degree == s.fiber_count());
        CHECK(p0.support.size() == s.fiber_count());

        CHECK(dec.residuals.idempotency < 1e-8);
        CHECK(dec.residuals.orthogonality < 1e-8);
        CHECK(dec.residuals.centrality < 1e-8);
        CHECK(dec.residuals.trace_integrality < 1e-6);
    }
}

TEST_CASE("restrictions match the idempotents of each fiber")
{
    for (const auto &[name, s] : t::battery()) {
        CAPTURE(name);
        const auto dec = central_primitive_idempotents(s);
        std::vector<std::size_t> n_sum(dec.size(), 0);
        for (FiberIndex x = 0; x < s.fiber_count(); ++x) {
            const auto cx = restriction(s, {x});
            const auto dx = central_primitive_idempotents(cx);
            const auto pts = union_points(s, {x});
            const auto m = static_cast<Eigen::Index>(pts.size());
            std::vector<bool> matched(dx.size(), false);
            std::size_t nonzero = 0;
            for (std::size_t i = 0; i < dec.size(); ++i) {
                Eigen::MatrixXcd block(m, m);
                for (Eigen::Index a = 0; a < m; ++a)
                    for (Eigen::Index b = 0; b < m; ++b)
                        block(a, b) = dec.idempotents[i].matrix(pts[a], pts[b]);
                const bool in_support = std::count(dec.idempotents[i].support.begin(),
                                                   dec.idempotents[i].support.end(), x) > 0;
                CHECK(in_support == (max_abs(block) > 1e-6));
                if (! in_support) {
                    CHECK(restricted_degree(s, dec, i, {x}) == 0);
                    continue;
                }
                ++nonzero;
                const auto nx = restricted_degree(s, dec, i, {x});
                n_sum[i] += nx;
                for (std::size_t j = 0; j < dx.size(); ++j)
                    if (max_abs(block - dx.idempotents[j].matrix) < 1e-7) {
                        CHECK_FALSE(matched[j]);
                        matched[j] = true;
                        CHECK(dx.idempotents[j].degree == nx);
                    }
            }
            CHECK(nonzero == dx.size());
            CHECK(std::all_of(matched.begin(), matched.end(), [](bool b) { return b; }));
        }
        for (std::size_t i = 0; i < dec.size(); ++i)
            CHECK(n_sum[i] == dec.idempotents[i].degree);
    }
}

TEST_CASE("supports")
{
    const auto fano = t::fano();
    const auto df = central_primitive_idempotents(fano);
    for (std::size_t i = 0; i < df.size(); ++i)
        CHECK(support(fano, df, i) == std::vector<FiberIndex>{0, 1});

    const auto s = internal_direct_sum(fano, trivial_scheme(1));
    const auto dec = central_primitive_idempotents(s);
    REQUIRE(dec.size() == 2);
    CHECK(dec.idempotents[1].support == std::vector<FiberIndex>{0, 1});
    for (std::size_t i = 0; i < dec.size(); ++i) {
        // singleton fiber 2 lies only in the principal support
        const bool has2 = std::count(dec.idempotents[i].support.begin(), dec.idempotents[i].support.end(), 2) > 0;
        CHECK(has2 == (i == dec.principal_index));
    }
}

TEST_CASE("P_0 restricted to a fiber is J_X/|X|")
{
    const auto s = load_fixture("as16-122-fission");
    const auto dec = central_primitive_idempotents(s);
    for (FiberIndex x = 0; x < 2; ++x) {
        const auto px = restrict_idempotent(s, dec, dec.principal_index, {x});
        for (Point u = 0; u < 16; ++u)
            for (Point v = 0; v < 16; ++v) {
                const double expect = s.fiber_of(v) == x && s.fiber_of(u) == x ? 1.0 / 8 : 0.0;
                CHECK(std::abs(px(u, v) - expect) < 1e-9);
            }
    }
}

TEST_CASE("dim A_XY")
{
    const auto fano = t::fano();
    const auto df = central_primitive_idempotents(fano);
    CHECK(dim_A_XY(fano, df, 0, 1) == 2);
    const auto f = load_fixture("as16-122-fission");
    const auto dec = central_primitive_idempotents(f);
    CHECK(dim_A_XY(f, dec, 0, 1) == 4);
    for (const auto &[name, s] : t::battery()) {
        CAPTURE(name);
        const auto d = central_primitive_idempotents(s);
        for (FiberIndex x = 0; x < s.fiber_count(); ++x)
            for (FiberIndex y = 0; y < s.fiber_count(); ++y)
                CHECK(dim_A_XY(s, d, x, y) == s.relations_between(x, y).size());
    }
}

TEST_CASE("small homogeneous schemes are commutative")
{
    for (const auto &[name, s] : t::battery()) {
        if (s.fiber_count() != 1 || s.relation_count() > 5)
            continue;
        CAPTURE(name);
        for (const auto &p : central_primitive_idempotents(s).idempotents)
            CHECK(p.degree == 1);
    }
}

TEST_CASE("seeds change nothing observable")
{
    const auto s = load_fixture("as16-122-fission");
    AlgebraOptions a, b;
    b.seed = 7;
    const auto da = central_primitive_idempotents(s, a), da2 = central_primitive_idempotents(s, a);
    const auto db = central_primitive_idempotents(s, b);
    CHECK(shapes(da) == shapes(db));
    for (std::size_t i = 0; i < da.size(); ++i)
        CHECK(max_abs(da.idempotents[i].matrix - da2.idempotents[i].matrix) == 0.0);
}

TEST_CASE("exhausted retries are reported")
{
    AlgebraOptions opts;
    opts.eigencluster_tol = 10.0;  // every spectrum collapses to one cluster
    CHECK_THROWS_AS((void)central_primitive_idempotents(t::fano(), opts), NumericalDegeneracy);
}
