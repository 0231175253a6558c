#include "coco/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace coco {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using SparseRow = std::map<RelationIndex, std::int64_t>;

// Rows of [Z, A_S] = sum_T (...) A_T, one per (S, T), in the unknowns z_R.
std::vector<SparseRow> commutator_equations(const Scheme &s)
{
    std::map<std::pair<RelationIndex, RelationIndex>, SparseRow> rows;
    const auto &tensor = s.tensor();
    for (RelationIndex t = 0; t < s.relation_count(); ++t)
        for (const auto &e : tensor.entries_for(t)) {
            rows[{e.right, t}][e.left] += e.value;
            rows[{e.left, t}][e.right] -= e.value;
        }
    std::set<SparseRow> unique;
    for (auto &[key, row] : rows) {
        for (auto it = row.begin(); it != row.end();)
            it = it->second == 0 ? row.erase(it) : std::next(it);
        if (! row.empty())
            unique.insert(std::move(row));
    }
    return {unique.begin(), unique.end()};
}

// Null space of the equations over Q, as double vectors scaled to unit max norm.
std::vector<Eigen::VectorXd> exact_center_basis(const Scheme &s)
{
    const auto k = s.relation_count();
    std::vector<std::vector<Rational>> rref;
    std::vector<std::size_t> pivots;

    for (const auto &eq : commutator_equations(s)) {
        std::vector<Rational> row(k);
        for (auto [c, v] : eq)
            row[c] = v;
        for (std::size_t i = 0; i < rref.size(); ++i) {
            const auto p = pivots[i];
            if (row[p] == 0)
                continue;
            const Rational f = row[p];
            for (std::size_t c = 0; c < k; ++c)
                if (rref[i][c] != 0)
                    row[c] -= f * rref[i][c];
        }
        auto lead = std::find_if(row.begin(), row.end(), [](const Rational &x) { return x != 0; });
        if (lead == row.end())
            continue;
        const auto p = static_cast<std::size_t>(lead - row.begin());
        const Rational inv = 1 / row[p];
        for (auto &x : row)
            x *= inv;
        for (auto &other : rref) {
            if (other[p] == 0)
                continue;
            const Rational f = other[p];
            for (std::size_t c = 0; c < k; ++c)
                if (row[c] != 0)
                    other[c] -= f * row[c];
        }
        rref.push_back(std::move(row));
        pivots.push_back(p);
    }

    std::vector<bool> is_pivot(k, false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<Eigen::VectorXd> basis;
    for (std::size_t f = 0; f < k; ++f) {
        if (is_pivot[f])
            continue;
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
        v(static_cast<Eigen::Index>(f)) = 1.0;
        for (std::size_t i = 0; i < rref.size(); ++i)
            v(static_cast<Eigen::Index>(pivots[i])) = -rref[i][f].convert_to<double>();
        v /= v.cwiseAbs().maxCoeff();
        basis.push_back(std::move(v));
    }
    return basis;
}

double max_abs(const Eigen::MatrixXcd &m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// tr(A_T P) for every relation T.
std::vector<std::complex<double>> relation_traces(const Scheme &s, const Eigen::MatrixXcd &p)
{
    std::vector<std::complex<double>> tr(s.relation_count());
    const auto n = s.point_count();
    for (Point u = 0; u < n; ++u)
        for (Point v = 0; v < n; ++v)
            tr[s.color(u, v)] += p(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u));
    return tr;
}

struct RankResult
{
    std::size_t rank = 0;
    double gap = 0;  // worst distance of an eigenvalue from {0, 1}
};

// dim span{A_R P : R within the fiber set}. The normalized Gram matrix of
// the A_R P is the matrix of an orthogonal projection, so its eigenvalues
// are 0 or 1; it is block diagonal by source fiber.
RankResult projection_rank(const Scheme &s, const Eigen::MatrixXcd &p, const std::vector<bool> &in_set,
                           const AlgebraOptions &opts)
{
    const auto tr = relation_traces(s, p);
    const auto &tensor = s.tensor();
    const auto fibers = s.fiber_count();
    RankResult out;
    for (FiberIndex x = 0; x < fibers; ++x) {
        if (! in_set[x])
            continue;
        std::vector<RelationIndex> rels;
        for (FiberIndex y = 0; y < fibers; ++y)
            if (in_set[y])
                for (auto r : s.relations_between(x, y))
                    rels.push_back(r);
        const auto k = static_cast<Eigen::Index>(rels.size());
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto r = rels[static_cast<std::size_t>(i)];
            const auto rt = s.transpose(r);
            const auto yr = s.meta(r).target_fiber;
            for (Eigen::Index j = 0; j < k; ++j) {
                const auto q = rels[static_cast<std::size_t>(j)];
                const auto yq = s.meta(q).target_fiber;
                std::complex<double> sum = 0;
                for (auto t : s.relations_between(yr, yq))
                    if (auto c = tensor.get(rt, q, t))
                        sum += static_cast<double>(c) * tr[t];
                g(i, j) = sum / std::sqrt(static_cast<double>(s.meta(r).size * s.meta(q).size));
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
        const auto &ev = es.eigenvalues();
        const double largest = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            const double lambda = ev(i);
            out.gap = std::max(out.gap, std::min(std::abs(lambda), std::abs(lambda - 1.0)));
            if (largest > 0 && lambda > opts.rank_tol * largest)
                ++out.rank;
        }
    }
    return out;
}

std::vector<bool> fiber_mask(const Scheme &s, const std::vector<FiberIndex> &fibers)
{
    std::vector<bool> mask(s.fiber_count(), false);
    for (auto x : fibers)
        mask.at(x) = true;
    return mask;
}

std::size_t exact_sqrt(std::size_t v)
{
    auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v))));
    return r * r == v ? r : 0;
}

// Canonical fingerprint of P: the values tr(A_R P), rounded.
std::vector<long long> fingerprint(const Scheme &s, const Eigen::MatrixXcd &p)
{
    std::vector<long long> key;
    for (auto v : relation_traces(s, p)) {
        key.push_back(std::llround(v.real() * 1e6));
        key.push_back(std::llround(v.imag() * 1e6));
    }
    return key;
}

struct AttemptFailure
{
    bool integrality = false;
    std::string message;
};

}  // namespace

std::size_t center_dimension(const Scheme &s)
{
    return exact_center_basis(s).size();
}

Eigen::MatrixXd adjacency_matrix(const Scheme &s, RelationIndex r)
{
    const auto n = static_cast<Eigen::Index>(s.point_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index u = 0; u < n; ++u)
        for (Eigen::Index v = 0; v < n; ++v)
            if (s.color(static_cast<Point>(u), static_cast<Point>(v)) == r)
                a(u, v) = 1.0;
    return a;
}

Eigen::MatrixXd principal_idempotent_matrix(const Scheme &s)
{
    const auto n = static_cast<Eigen::Index>(s.point_count());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (const auto &fib : s.fibers())
        for (auto u : fib)
            for (auto v : fib)
                p(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = 1.0 / static_cast<double>(fib.size());
    return p;
}

IdempotentDecomposition central_primitive_idempotents(const Scheme &s, const AlgebraOptions &opts)
{
    const auto basis = exact_center_basis(s);
    const auto dim = basis.size();
    const auto n = static_cast<Eigen::Index>(s.point_count());
    const auto k = s.relation_count();

    std::vector<Eigen::MatrixXd> adj;
    adj.reserve(k);
    for (RelationIndex r = 0; r < k; ++r)
        adj.push_back(adjacency_matrix(s, r));
    const Eigen::MatrixXd p0 = principal_idempotent_matrix(s);
    const std::vector<bool> all_fibers(s.fiber_count(), true);

    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<long> coef(1, 1 << 20);
    std::uniform_real_distribution<double> skew(0.5, 1.5);

    AttemptFailure last;
    const int attempts = 1 + std::max(0, opts.retries);
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
        for (const auto &b : basis)
            z += static_cast<double>(coef(rng)) * b;
        const double alpha = skew(rng);

        // Z is normal, so its Hermitian and skew parts share eigenspaces;
        // H separates eigenvalues that differ only in their imaginary part.
        Eigen::MatrixXcd h(n, n);
        for (Eigen::Index u = 0; u < n; ++u)
            for (Eigen::Index v = 0; v < n; ++v) {
                const auto c = s.color(static_cast<Point>(u), static_cast<Point>(v));
                const double a = z(static_cast<Eigen::Index>(c));
                const double b = z(static_cast<Eigen::Index>(s.transpose(c)));
                h(u, v) = std::complex<double>((a + b) / 2, -alpha * (a - b) / 2);
            }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        Eigen::VectorXd lambda = es.eigenvalues();
        const double radius = lambda.cwiseAbs().maxCoeff();
        if (radius > 0)
            lambda /= radius;

        std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
        Eigen::Index start = 0;
        for (Eigen::Index i = 1; i <= n; ++i)
            if (i == n || lambda(i) - lambda(i - 1) > opts.eigencluster_tol) {
                clusters.emplace_back(start, i - start);
                start = i;
            }
        if (clusters.size() != dim) {
            last = {false, "attempt " + std::to_string(attempt) + ": " + std::to_string(clusters.size()) +
                               " eigenvalue clusters for a center of dimension " + std::to_string(dim)};
            continue;
        }

        IdempotentDecomposition dec;
        dec.center_dimension = dim;
        dec.attempts = attempt;
        auto &res = dec.residuals;
        Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
        std::vector<Eigen::MatrixXcd> mats;
        for (auto [first, size] : clusters) {
            const Eigen::MatrixXcd v = es.eigenvectors().middleCols(first, size);
            mats.push_back(v * v.adjoint());
        }
        for (std::size_t i = 0; i < mats.size(); ++i) {
            const auto &p = mats[i];
            total += p;
            res.idempotency = std::max(res.idempotency, max_abs(p * p - p));
            for (std::size_t j = i + 1; j < mats.size(); ++j)
                res.orthogonality = std::max(res.orthogonality, max_abs(p * mats[j]));
            for (const auto &a : adj)
                res.centrality = std::max(res.centrality, max_abs(a * p - p * a));
        }
        res.completeness = max_abs(total - Eigen::MatrixXcd::Identity(n, n));

        std::string failure;
        bool integrality = false;
        for (const auto &p : mats) {
            Idempotent idem;
            idem.matrix = p;
            const double trace = p.trace().real();
            const double rounded = std::round(trace);
            res.trace_integrality = std::max(res.trace_integrality, std::abs(trace - rounded));
            const auto rank = projection_rank(s, p, all_fibers, opts);
            res.rank_gap = std::max(res.rank_gap, rank.gap);
            idem.degree = exact_sqrt(rank.rank);
            if (std::abs(trace - rounded) >= opts.integrality_tol || rank.gap >= opts.integrality_tol ||
                idem.degree == 0 || static_cast<std::size_t>(rounded) % idem.degree != 0) {
                integrality = true;
                std::ostringstream msg;
                msg << "trace " << trace << ", rank " << rank.rank << ", rank gap " << rank.gap;
                failure = msg.str();
                continue;
            }
            idem.multiplicity = static_cast<std::size_t>(rounded) / idem.degree;
            for (FiberIndex x = 0; x < s.fiber_count(); ++x) {
                double norm = 0;
                for (auto col : s.fiber(x))
                    norm = std::max(norm, p.col(static_cast<Eigen::Index>(col)).cwiseAbs().maxCoeff());
                if (norm > opts.support_tol)
                    idem.support.push_back(x);
            }
            dec.idempotents.push_back(std::move(idem));
        }
        const double worst = std::max({res.idempotency, res.orthogonality, res.centrality, res.completeness});
        if (! integrality && worst >= opts.idempotency_tol)
            failure = "matrix residual " + std::to_string(worst);
        if (! failure.empty()) {
            last = {integrality, "attempt " + std::to_string(attempt) + ": " + failure};
            continue;
        }

        auto principal = std::find_if(dec.idempotents.begin(), dec.idempotents.end(), [&](const Idempotent &p) {
            return max_abs(p.matrix - p0.cast<std::complex<double>>()) < opts.support_tol;
        });
        if (principal == dec.idempotents.end())
            throw ConsistencyFailure("no computed idempotent equals sum_X J_X/|X|");
        std::iter_swap(dec.idempotents.begin(), principal);

        std::vector<std::pair<std::vector<long long>, std::size_t>> keys;
        for (std::size_t i = 1; i < dec.idempotents.size(); ++i)
            keys.emplace_back(fingerprint(s, dec.idempotents[i].matrix), i);
        std::sort(keys.begin(), keys.end(), [&](const auto &a, const auto &b) {
            const auto &pa = dec.idempotents[a.second], &pb = dec.idempotents[b.second];
            return std::tie(pa.support, pa.degree, pa.multiplicity, a.first) <
                   std::tie(pb.support, pb.degree, pb.multiplicity, b.first);
        });
        std::vector<Idempotent> ordered{std::move(dec.idempotents.front())};
        for (auto &[key, i] : keys)
            ordered.push_back(std::move(dec.idempotents[i]));
        dec.idempotents = std::move(ordered);
        dec.principal_index = 0;
        return dec;
    }
    if (last.integrality)
        throw NonIntegralInvariant(last.message);
    throw NumericalDegeneracy(last.message);
}

Eigen::MatrixXcd restrict_idempotent(const Scheme &s, const IdempotentDecomposition &dec, std::size_t p_index,
                                     const std::vector<FiberIndex> &fibers)
{
    const auto &p = dec.idempotents.at(p_index).matrix;
    const auto mask = fiber_mask(s, fibers);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(p.rows(), p.cols());
    for (Point v = 0; v < s.point_count(); ++v)
        if (mask[s.fiber_of(v)])
            out.col(static_cast<Eigen::Index>(v)) = p.col(static_cast<Eigen::Index>(v));
    return out;
}

std::vector<FiberIndex> support(const Scheme &, const IdempotentDecomposition &dec, std::size_t p_index)
{
    return dec.idempotents.at(p_index).support;
}

std::size_t restricted_degree(const Scheme &s, const IdempotentDecomposition &dec, std::size_t p_index,
                              const std::vector<FiberIndex> &fibers, const AlgebraOptions &opts)
{
    const auto rank = projection_rank(s, dec.idempotents.at(p_index).matrix, fiber_mask(s, fibers), opts);
    if (rank.gap >= opts.integrality_tol)
        throw NonIntegralInvariant("restricted projector eigenvalue off {0,1} by " + std::to_string(rank.gap));
    if (rank.rank == 0)
        return 0;
    const auto d = exact_sqrt(rank.rank);
    if (d == 0)
        throw NonIntegralInvariant("restricted rank " + std::to_string(rank.rank) + " is not a square");
    return d;
}

std::size_t dim_A_XY(const Scheme &s, const IdempotentDecomposition &dec, FiberIndex x, FiberIndex y,
                     const AlgebraOptions &opts)
{
    std::size_t total = 0;
    for (std::size_t i = 0; i < dec.size(); ++i) {
        const auto &supp = dec.idempotents[i].support;
        if (std::find(supp.begin(), supp.end(), x) == supp.end() || std::find(supp.begin(), supp.end(), y) == supp.end())
            continue;
        total += restricted_degree(s, dec, i, {x}, opts) * restricted_degree(s, dec, i, {y}, opts);
    }
    const auto expected = s.relations_between(x, y).size();
    if (total != expected)
        throw ConsistencyFailure("sum of n_{P_X} n_{P_Y} is " + std::to_string(total) + " but |R_{X,Y}| = " +
                                 std::to_string(expected));
    return total;
}

}  // namespace coco
