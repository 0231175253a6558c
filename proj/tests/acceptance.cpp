#include "support/battery.hpp"
#include "support/oracles.hpp"

#include "coco/algebra.hpp"
#include "coco/analysis.hpp"
#include "coco/constructors.hpp"
#include "coco/feasibility.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace coco;
namespace t = coco::testing;

namespace {

struct Outcome
{
    bool pass = true;
    std::string note;
    std::vector<std::string> info;
};

struct Failures
{
    Outcome &o;
    void require(bool ok, const std::string &what)
    {
        if (ok)
            return;
        if (o.pass)
            o.note = what;
        o.pass = false;
    }
};

Outcome fixture_validity()
{
    Outcome o;
    Failures f{o};
    const auto s = load_fixture("as16-122-fission");
    const auto p = profile(s);
    f.require(s.point_count() == 16, "16 points");
    f.require(s.fiber_count() == 2 && s.fiber(0).size() == 8 && s.fiber(1).size() == 8, "two fibers of size 8");
    f.require(s.relation_count() == 16, "16 relations");
    f.require(p.r == 4u, "r = 4");
    f.require(p.is_balanced && p.is_reduced && p.is_half_homogeneous, "balanced, reduced, half-homogeneous");
    o.note = o.pass ? "reduced (8,2,4)-scheme" : o.note;
    return o;
}

Outcome fixture_algebra()
{
    Outcome o;
    Failures f{o};
    const auto s = load_fixture("as16-122-fission");
    const auto dec = central_primitive_idempotents(s);
    f.require(dec.size() == 4, "4 idempotents, got " + std::to_string(dec.size()));
    std::size_t n2 = 0, mn = 0;
    std::vector<std::size_t> n_p;
    for (const auto &p : dec.idempotents) {
        n2 += p.degree * p.degree;
        mn += p.multiplicity * p.degree;
        n_p.push_back(p.degree);
    }
    std::sort(n_p.begin(), n_p.end());
    f.require(n2 == 16, "sum n_P^2 = 16");
    f.require(mn == 16, "sum m_P n_P = 16");
    for (FiberIndex x = 0; x < s.fiber_count(); ++x) {
        const auto dx = central_primitive_idempotents(restriction(s, {x}));
        std::vector<std::size_t> doubled;
        for (const auto &p : dx.idempotents)
            doubled.push_back(2 * p.degree);
        std::sort(doubled.begin(), doubled.end());
        f.require(doubled == n_p, "n_P = 2 n_{P_X} on fiber " + std::to_string(x));
        for (std::size_t i = 0; i < dec.size(); ++i)
            f.require(dec.idempotents[i].degree == 2 * restricted_degree(s, dec, i, {x}),
                      "restricted degree of P" + std::to_string(i));
    }
    const auto &r = dec.residuals;
    f.require(r.idempotency < 1e-8 && r.orthogonality < 1e-8 && r.centrality < 1e-8, "matrix residuals < 1e-8");
    f.require(r.trace_integrality < 1e-6, "trace integrality < 1e-6");
    std::ostringstream note;
    note << "residuals " << std::max({r.idempotency, r.orthogonality, r.centrality}) << ", trace "
         << r.trace_integrality;
    if (o.pass)
        o.note = note.str();
    return o;
}

Outcome balance_sweep()
{
    Outcome o;
    Failures f{o};
    std::size_t mismatches = 0;
    for (const auto &[name, s] : t::battery()) {
        const auto c = check_balance_characterization(s, central_primitive_idempotents(s));
        const bool ok = (c.verdict == Verdict::Holds) == profile(s).is_balanced;
        mismatches += ! ok;
        f.require(ok, "mismatch on " + name);
    }
    f.require(t::battery().size() >= 10, "battery of at least 10 schemes");
    if (o.pass)
        o.note = std::to_string(t::battery().size()) + " schemes, 0 mismatches";
    return o;
}

Outcome small_idempotent_count()
{
    Outcome o;
    Failures f{o};
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto s = trivial_scheme(n);
        const auto dec = central_primitive_idempotents(s);
        f.require(dec.size() == 1 && dec.idempotents[0].multiplicity == 1 && dec.idempotents[0].degree == n,
                  "T" + std::to_string(n) + " has one idempotent of shape (1," + std::to_string(n) + ")");
        f.require(check_small_idempotent_count(s, dec).verdict == Verdict::Holds, "T" + std::to_string(n) + " verdict");
    }
    const auto s = internal_direct_sum(t::fano(), trivial_scheme(3));
    const auto dec = central_primitive_idempotents(s);
    f.require(dec.size() == 2, "Fano + T3 has two idempotents");
    const auto c = check_small_idempotent_count(s, dec);
    f.require(c.verdict == Verdict::Holds && c.consistent, "Fano + T3 verdict");
    const bool bip = c.bipartition && c.bipartition->first == std::vector<FiberIndex>{2, 3, 4} &&
                     c.bipartition->second == std::vector<FiberIndex>{0, 1};
    f.require(bip, "bipartition 1-balanced {2,3,4}, 2-balanced {0,1}");
    if (o.pass)
        o.note = "T1..T5 one idempotent; Fano + T3 splits as {0,1} | {2,3,4}";
    return o;
}

Outcome tensor_oracle()
{
    Outcome o;
    Failures f{o};
    std::size_t schemes = 0, triples = 0;
    for (const auto &[name, s] : t::battery()) {
        if (s.point_count() > 20)
            continue;
        ++schemes;
        const auto brute = brute_force_tensor(s);
        const auto k = s.relation_count();
        std::size_t bad = 0;
        for (RelationIndex r = 0; r < k; ++r)
            for (RelationIndex q = 0; q < k; ++q)
                for (RelationIndex w = 0; w < k; ++w, ++triples)
                    bad += brute.get(r, q, w) != s.tensor().get(r, q, w);
        f.require(bad == 0, name + ": tensor disagreement on " + std::to_string(bad) + " triples");
        f.require(t::structure_constant_mismatches(s) == 0, name + ": A_R A_S != sum c A_T");
    }
    if (o.pass)
        o.note = std::to_string(schemes) + " schemes, " + std::to_string(triples) + " triples, all products exact";
    return o;
}

Outcome structure_identities()
{
    Outcome o;
    std::size_t literal = 0, weighted = 0, half_literal = 0, triples = 0;
    std::string first;
    for (const auto &[name, s] : t::battery()) {
        const auto lit = t::structure_identities(s, true);
        const auto gen = t::structure_identities(s, false);
        triples += lit.triples;
        literal += lit.total();
        weighted += gen.total();
        if (profile(s).is_half_homogeneous)
            half_literal += lit.total();
        if (lit.total() && first.empty()) {
            first = name + ": " + lit.first_counterexample;
            for (const auto &[item, count] : lit.violations)
                o.info.push_back(name + ": literal " + item + " fails on " + std::to_string(count) + " triples");
        }
    }
    o.pass = literal == 0;
    o.note = std::to_string(literal) + " literal violations over " + std::to_string(triples) + " triples" +
             (first.empty() ? "" : " (first: " + first + ")");
    o.info.push_back("with the transpose identities and the divisibility weighted by |X|,|Y|: " + std::to_string(weighted) +
                     " violations");
    o.info.push_back("literal forms restricted to half-homogeneous schemes: " + std::to_string(half_literal) +
                     " violations");
    return o;
}

Outcome filter_regression()
{
    Outcome o;
    Failures f{o};
    auto expect = [&](const DegreeProfile &p, std::optional<Rule> rule) {
        const auto v = apply_rules(p);
        const bool ok = rule ? v.status == VerdictStatus::Eliminated && v.rule == rule
                             : v.status == VerdictStatus::Survives;
        f.require(ok, to_string(p) + " expected " + (rule ? rule_name(*rule) : "survives") + ", got " +
                          (v.rule ? rule_name(*v.rule) : "survives"));
    };
    expect({9, 3, {1, 2, 6}, {2, 2, 5}}, Rule::CoprimeTransfer);
    expect({9, 3, {1, 2, 6}, {3, 3, 3}}, Rule::Csp);
    expect({8, 3, {1, 1, 6}, {2, 2, 4}}, Rule::Csp);
    std::size_t count = 3;
    for (std::size_t m : {7, 11})
        for (const auto &p : enumerate_profiles(m, 3))
            if (p.d_x == std::vector<std::size_t>{1, (m - 1) / 2, (m - 1) / 2}) {
                expect(p, Rule::SymmetricOdd);
                ++count;
            }
    for (std::size_t r = 2; r <= 5; ++r)
        for (std::size_t m = 1; m < 2 * r; ++m)
            for (const auto &p : enumerate_profiles(m, r)) {
                expect(p, Rule::MLessThan2R);
                ++count;
            }
    for (std::size_t r : {4, 5})
        for (const auto &p : enumerate_profiles(11, r)) {
            expect(p, Rule::PrimeM);
            ++count;
        }
    for (std::size_t m = 4; m <= 16; ++m) {
        bool prime_power = false;
        for (std::size_t q = 2; q < m; ++q)
            if (t::slow_is_prime(q)) {
                auto v = m - 1;
                while (v % q == 0)
                    v /= q;
                prime_power = prime_power || v == 1;
            }
        if (! prime_power)
            continue;
        for (const auto &p : enumerate_profiles(m, 2)) {
            expect(p, Rule::PValenced);
            ++count;
        }
    }
    expect({8, 4, {1, 1, 2, 4}, {2, 2, 2, 2}}, std::nullopt);
    expect({7, 2, {1, 6}, {3, 4}}, std::nullopt);
    if (o.pass)
        o.note = std::to_string(count) + " eliminations with the expected rule, 2 survivors";
    return o;
}

Outcome design_degree_remark()
{
    Outcome o;
    Failures f{o};
    std::size_t cases = 0;
    for (std::size_t m = 2; m <= 200; ++m) {
        auto q = m - 1;
        std::size_t tpow = 0;
        while (q % 2 == 0) {
            q /= 2;
            ++tpow;
        }
        if (tpow == 0 || ! t::slow_is_prime(q))
            continue;
        ++cases;
        std::size_t count = 0;
        for (std::size_t d = 1; d <= m - 1; ++d)
            count += (d * (d - 1)) % (m - 1) == 0;
        f.require(count == 4, "m=" + std::to_string(m) + " has " + std::to_string(count) + " solutions");
    }
    if (o.pass)
        o.note = std::to_string(cases) + " values of m, exactly 4 solutions each";
    return o;
}

Outcome transversal_embedding()
{
    Outcome o;
    Failures f{o};
    const auto ft = decompose_by_transversal(tensor_product(t::fano(), trivial_scheme(2)));
    f.require(ft.embedding_verified && ft.is_isomorphism, "Fano x T2 embedding: " + ft.failure);
    f.require(ft.tensor_factor == 2 && ft.transversal.size() == 2, "Fano x T2 transversal of 2 fibers, factor 2");
    std::size_t reduced = 0;
    for (const auto &[name, s] : t::battery()) {
        const auto p = profile(s);
        if (! p.is_balanced || ! p.is_reduced)
            continue;
        ++reduced;
        const auto e = decompose_by_transversal(s);
        f.require(e.embedding_verified && e.transversal.size() == s.fiber_count() && e.tensor_factor == 1,
                  name + ": transversal is not all fibers");
    }
    if (o.pass)
        o.note = "Fano x T2 embeds onto C_X (x) T2; " + std::to_string(reduced) + " reduced schemes map identically";
    return o;
}

Outcome half_homogeneous()
{
    Outcome o;
    Failures f{o};
    std::size_t balanced = 0;
    for (const auto &[name, s] : t::battery()) {
        if (! profile(s).is_balanced)
            continue;
        ++balanced;
        for (const auto &fib : s.fibers())
            f.require(fib.size() * s.fiber_count() == s.point_count(), name + ": fiber size != |V|/n");
    }
    if (o.pass)
        o.note = std::to_string(balanced) + " balanced schemes, all fibers of size |V|/n";
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::function<Outcome()>> criteria{
        fixture_validity, fixture_algebra,      balance_sweep,        small_idempotent_count, tensor_oracle,
        structure_identities, filter_regression, design_degree_remark, transversal_embedding, half_homogeneous,
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception &e) {
            o.pass = false;
            o.note = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += ! o.pass;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.note << " ["
                  << secs << "s]\n";
        for (const auto &line : o.info)
            std::cout << "  info: " << line << '\n';
    }
    return failures ? 1 : 0;
}
