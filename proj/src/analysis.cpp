#include "coco/analysis.hpp"

#include "coco/constructors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace coco {

namespace {

class UnionFind
{
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x)
            x = parent_[x] = parent_[parent_[x]];
        return x;
    }

    void join(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

    std::vector<std::vector<std::size_t>> classes()
    {
        std::map<std::size_t, std::vector<std::size_t>> by_root;
        for (std::size_t x = 0; x < parent_.size(); ++x)
            by_root[find(x)].push_back(x);
        std::vector<std::vector<std::size_t>> out;
        for (auto &[root, members] : by_root)
            out.push_back(std::move(members));
        return out;
    }

private:
    std::vector<std::size_t> parent_;
};

std::vector<std::size_t> prime_factors(std::size_t v)
{
    std::vector<std::size_t> out;
    for (std::size_t p = 2; p * p <= v; ++p)
        if (v % p == 0) {
            out.push_back(p);
            while (v % p == 0)
                v /= p;
        }
    if (v > 1)
        out.push_back(v);
    return out;
}

bool is_power_of(std::size_t v, std::size_t p)
{
    while (v % p == 0)
        v /= p;
    return v == 1;
}

// Primes p dividing some value such that every value is a power of p.
std::vector<std::size_t> common_prime_powers(const std::vector<std::size_t> &values)
{
    std::set<std::size_t> candidates;
    for (auto v : values)
        for (auto p : prime_factors(v))
            candidates.insert(p);
    std::vector<std::size_t> out;
    for (auto p : candidates)
        if (std::all_of(values.begin(), values.end(), [p](std::size_t v) { return is_power_of(v, p); }))
            out.push_back(p);
    return out;
}

std::optional<std::size_t> balance_constant(const Scheme &s)
{
    const auto n = s.fiber_count();
    const auto r = s.relations_between(0, 0).size();
    for (FiberIndex x = 0; x < n; ++x)
        for (FiberIndex y = 0; y < n; ++y)
            if (s.relations_between(x, y).size() != r)
                return std::nullopt;
    return r;
}

bool contains(const std::vector<FiberIndex> &v, FiberIndex x)
{
    return std::find(v.begin(), v.end(), x) != v.end();
}

std::string fiber_list(const std::vector<FiberIndex> &v)
{
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    return out + "}";
}

// Does `map` send the coloring of `s` onto a sub-coloring of `target`,
// with distinct relations landing on distinct relations? When `onto` is
// set, the point map must also be a bijection hitting every relation.
bool is_color_embedding(const Scheme &s, const std::vector<Point> &points, const std::vector<std::size_t> &map,
                        const Scheme &target, bool onto, std::string &why)
{
    const auto tn = target.point_count();
    std::vector<bool> hit(tn, false);
    for (auto p : map) {
        if (p >= tn || hit[p]) {
            why = "point map is not injective";
            return false;
        }
        hit[p] = true;
    }
    if (onto && map.size() != tn) {
        why = "point map misses " + std::to_string(tn - map.size()) + " points";
        return false;
    }
    std::map<RelationIndex, RelationIndex> forward, backward;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) {
            const auto c = s.color(points[i], points[j]);
            const auto d = target.color(map[i], map[j]);
            auto [f, fnew] = forward.emplace(c, d);
            auto [b, bnew] = backward.emplace(d, c);
            if (f->second != d || b->second != c) {
                why = "relation " + std::to_string(c) + " is not carried onto a single relation";
                return false;
            }
        }
    if (onto && forward.size() != target.relation_count()) {
        why = "image misses some relations";
        return false;
    }
    return true;
}

}  // namespace

const char *to_string(Verdict v)
{
    switch (v) {
    case Verdict::Holds:
        return "holds";
    case Verdict::Fails:
        return "fails";
    case Verdict::NotApplicable:
        return "not-applicable";
    case Verdict::HypothesesNotMet:
        return "hypotheses-not-met";
    }
    return "?";
}

std::vector<std::vector<FiberIndex>> e_c_classes(const Scheme &s)
{
    UnionFind uf(s.fiber_count());
    for (RelationIndex r = 0; r < s.relation_count(); ++r)
        if (s.is_thin(r))
            uf.join(s.meta(r).source_fiber, s.meta(r).target_fiber);
    return uf.classes();
}

std::vector<std::size_t> valenced_primes(const Scheme &s, FiberIndex x)
{
    std::vector<std::size_t> degrees;
    for (auto r : s.relations_between(x, x))
        degrees.push_back(s.degree(r));
    return common_prime_powers(degrees);
}

SchemeProfile profile(const Scheme &s)
{
    SchemeProfile p;
    p.n = s.fiber_count();
    p.r = balance_constant(s);
    p.is_balanced = p.r.has_value();

    const auto m = s.fiber(0).size();
    p.is_half_homogeneous =
        std::all_of(s.fibers().begin(), s.fibers().end(), [m](const auto &f) { return f.size() == m; });
    if (p.is_half_homogeneous) {
        p.m = m;
        std::vector<std::size_t> degrees;
        for (RelationIndex r = 0; r < s.relation_count(); ++r)
            degrees.push_back(s.degree(r));
        p.all_degrees_one = std::all_of(degrees.begin(), degrees.end(), [](std::size_t d) { return d == 1; });
        p.p_valenced_primes = common_prime_powers(degrees);
    }

    p.e_c_classes = e_c_classes(s);
    p.is_reduced = std::all_of(p.e_c_classes.begin(), p.e_c_classes.end(), [](const auto &c) { return c.size() == 1; });
    for (RelationIndex r = 0; r < s.relation_count(); ++r)
        if (s.is_thin(r))
            p.thin_relations.push_back(s.handle(r));
    return p;
}

TheoremCheck check_balance_characterization(const Scheme &s, const IdempotentDecomposition &dec,
                                            const AlgebraOptions &opts)
{
    TheoremCheck out;
    const auto nfib = s.fiber_count();
    bool holds = true;
    for (FiberIndex x = 0; x < nfib; ++x) {
        const auto local = central_primitive_idempotents(restriction(s, {x}), opts);
        std::size_t vanishing = 0;
        bool degrees_ok = true;
        for (std::size_t i = 0; i < dec.size(); ++i) {
            const auto &p = dec.idempotents[i];
            if (! contains(p.support, x)) {
                ++vanishing;
                degrees_ok = false;
                continue;
            }
            if (p.degree != nfib * restricted_degree(s, dec, i, {x}, opts))
                degrees_ok = false;
        }
        const auto nonzero = dec.size() - vanishing;
        const bool bijective = vanishing == 0 && nonzero == local.size();
        // The nonzero restrictions always biject onto P(C_X).
        if (nonzero != local.size()) {
            out.consistent = false;
            out.details.push_back("fiber " + std::to_string(x) + ": " + std::to_string(nonzero) +
                                  " nonzero restrictions but C_X has " + std::to_string(local.size()) + " idempotents");
        }
        out.details.push_back("fiber " + std::to_string(x) + ": " +
                              (bijective ? "P -> P_X bijective" : std::to_string(vanishing) + " P vanish on X") +
                              ", n_P = " + std::to_string(nfib) + " n_{P_X} " + (degrees_ok ? "for all P" : "fails"));
        holds = holds && bijective && degrees_ok;
    }
    out.verdict = holds ? Verdict::Holds : Verdict::Fails;
    const bool balanced = balance_constant(s).has_value();
    if (holds != balanced) {
        out.consistent = false;
        out.details.push_back(std::string("scheme is ") + (balanced ? "" : "not ") + "balanced but the criterion " +
                              (holds ? "holds" : "fails"));
    }
    return out;
}

TheoremCheck check_small_idempotent_count(const Scheme &s, const IdempotentDecomposition &dec)
{
    TheoremCheck out;
    const auto nfib = s.fiber_count();
    std::vector<FiberIndex> big, singletons;
    for (FiberIndex x = 0; x < nfib; ++x)
        (s.fiber(x).size() == 1 ? singletons : big).push_back(x);

    const bool trivial = big.empty();
    bool shape = ! big.empty();
    for (auto x : big) {
        for (auto y : big)
            shape = shape && s.relations_between(x, y).size() == 2;
        for (auto y : singletons)
            shape = shape && s.relations_between(x, y).size() == 1;
    }

    const auto count = dec.size();
    out.details.push_back("|P| = " + std::to_string(count));
    if (count == 1 || trivial) {
        out.verdict = trivial && count == 1 ? Verdict::Holds : Verdict::Fails;
        out.details.push_back(std::string("scheme is ") + (trivial ? "" : "not ") + "1-balanced");
    } else if (count == 2 || shape) {
        out.verdict = shape && count == 2 ? Verdict::Holds : Verdict::Fails;
        if (shape) {
            out.bipartition = std::make_pair(singletons, big);
            out.details.push_back("1-balanced part " + fiber_list(singletons) + ", 2-balanced part " + fiber_list(big));
        } else {
            out.details.push_back("no split into a 1-balanced and a 2-balanced summand");
        }
    } else {
        out.verdict = Verdict::NotApplicable;
    }
    out.consistent = out.verdict != Verdict::Fails;
    return out;
}

TheoremCheck check_reduced_fiber_bound(const Scheme &s)
{
    TheoremCheck out;
    const auto prof = profile(s);
    if (! prof.is_balanced || ! prof.is_reduced) {
        out.details.push_back(prof.is_balanced ? "balanced but E_C is not discrete" : "not balanced");
        return out;
    }
    const auto m = *prof.m, r = *prof.r, n = prof.n;
    bool hypothesis = false;

    if (m < 2 * r) {
        hypothesis = true;
        out.details.push_back("fiber size: m=" + std::to_string(m) + " < 2r=" + std::to_string(2 * r) + ", n=" +
                              std::to_string(n));
    } else {
        out.details.push_back("fiber size: m=" + std::to_string(m) + " >= 2r=" + std::to_string(2 * r));
    }

    std::optional<std::pair<FiberIndex, std::size_t>> valenced;
    for (FiberIndex x = 0; x < n && ! valenced; ++x) {
        auto primes = valenced_primes(s, x);
        const auto &rx = s.relations_between(x, x);
        if (std::all_of(rx.begin(), rx.end(), [&](RelationIndex q) { return s.degree(q) == 1; })) {
            std::size_t p = 2;
            while (m % p == 0 || prime_factors(p).size() != 1 || prime_factors(p)[0] != p)
                ++p;
            primes.push_back(p);
        }
        for (auto p : primes)
            if (m % p != 0) {
                valenced = std::make_pair(x, p);
                break;
            }
    }
    if (valenced) {
        hypothesis = true;
        out.details.push_back("valency: C_" + std::to_string(valenced->first) + " is " + std::to_string(valenced->second) +
                              "-valenced and " + std::to_string(valenced->second) + " does not divide m, n=" +
                              std::to_string(n));
    } else {
        out.details.push_back("valency: no fiber is p-valenced for a prime p not dividing m");
    }

    if (! hypothesis) {
        out.verdict = Verdict::HypothesesNotMet;
    } else {
        out.verdict = n == 1 ? Verdict::Holds : Verdict::Fails;
        out.consistent = n == 1;
    }
    return out;
}

TransversalEmbedding decompose_by_transversal(const Scheme &s)
{
    const auto prof = profile(s);
    if (! prof.is_balanced)
        throw NotBalanced("decompose_by_transversal needs a balanced scheme");

    TransversalEmbedding out;
    out.classes = prof.e_c_classes;
    out.e_c_trivial = out.classes.size() == 1;
    for (const auto &c : out.classes) {
        out.transversal.push_back(c.front());
        out.tensor_factor = std::max(out.tensor_factor, c.size());
    }

    const auto base_points = union_points(s, out.transversal);
    std::vector<std::size_t> base_index(s.point_count(), 0);
    for (std::size_t i = 0; i < base_points.size(); ++i)
        base_index[base_points[i]] = i;

    // psi(x) for x in X_ij: (x_i, j) with (x_i, x) in R_ij.
    out.point_map.assign(s.point_count(), {0, 0});
    std::vector<std::size_t> class_position(s.point_count(), 0);
    for (const auto &cls : out.classes) {
        const auto xi = cls.front();
        for (std::size_t j = 0; j < cls.size(); ++j) {
            const auto target = cls[j];
            RelationIndex chosen = s.diagonal_relation(xi);
            if (j > 0) {
                const auto &between = s.relations_between(xi, target);
                chosen = *std::find_if(between.begin(), between.end(), [&](RelationIndex q) { return s.is_thin(q); });
            }
            out.thin_choices.push_back({xi, target, chosen});
            std::size_t pos = 0;
            for (auto u : s.fiber(xi)) {
                for (auto v : s.fiber(target))
                    if (s.color(u, v) == chosen) {
                        out.point_map[v] = {base_index[u], j};
                        class_position[v] = pos * cls.size() + j;
                    }
                ++pos;
            }
        }
    }

    std::vector<Point> all(s.point_count());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> flat;
    for (auto [i, j] : out.point_map)
        flat.push_back(i * out.tensor_factor + j);
    const auto target = tensor_product(restriction(s, out.transversal), trivial_scheme(out.tensor_factor));
    out.embedding_verified = is_color_embedding(s, all, flat, target, false, out.failure);

    std::string ignored;
    out.is_isomorphism = out.embedding_verified && is_color_embedding(s, all, flat, target, true, ignored);

    for (const auto &cls : out.classes) {
        const auto points = union_points(s, cls);
        std::vector<std::size_t> local;
        for (auto v : points)
            local.push_back(class_position[v]);
        const auto model = tensor_product(restriction(s, {cls.front()}), trivial_scheme(cls.size()));
        out.class_isomorphic.push_back(is_color_embedding(s, points, local, model, true, ignored));
    }
    return out;
}

DirectSumSplit find_direct_sum_split(const Scheme &s, const IdempotentDecomposition *dec)
{
    const auto nfib = s.fiber_count();
    UnionFind uf(nfib);
    for (FiberIndex x = 0; x < nfib; ++x)
        for (FiberIndex y = x + 1; y < nfib; ++y)
            if (s.relations_between(x, y).size() >= 2)
                uf.join(x, y);
    DirectSumSplit out;
    out.components = uf.classes();

    if (dec) {
        UnionFind by_support(nfib);
        for (std::size_t i = 0; i < dec->size(); ++i) {
            if (i == dec->principal_index)
                continue;
            const auto &supp = dec->idempotents[i].support;
            for (std::size_t j = 1; j < supp.size(); ++j)
                by_support.join(supp[0], supp[j]);
        }
        out.idempotent_criterion_agrees = by_support.classes() == out.components;
    }
    return out;
}

}  // namespace coco
