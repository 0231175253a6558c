#include "coco/feasibility.hpp"

#include "coco/io.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace coco {

namespace {

std::string multiset(const std::vector<std::size_t> &v, char sep = ',')
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

bool is_prime_power(std::size_t v, std::size_t *base = nullptr)
{
    if (v < 2)
        return false;
    for (std::size_t p = 2; p <= v; ++p)
        if (v % p == 0) {
            while (v % p == 0)
                v /= p;
            if (base)
                *base = p;
            return v == 1;
        }
    return false;
}

bool power_of(std::size_t v, std::size_t p)
{
    while (v % p == 0)
        v /= p;
    return v == 1;
}

using csp::Mask;

bool can_be_positive(Mask m) { return csp::max_value(m) > 0; }
bool must_be_positive(Mask m) { return csp::min_value(m) > 0; }
bool can_be_at_least_two(Mask m) { return csp::max_value(m) >= 2; }
bool must_be_at_least_two(Mask m) { return csp::min_value(m) >= 2; }

// "T in R^tR cap S^tS, T non-diagonal" iff
// "c_{RS^t}^{T'} >= 2 for some T'", on three-valued masks. Each pair in
// `shared` holds the two variables whose joint positivity witnesses the
// left side; `big` holds the candidates for the right side.
csp::Predicate overlap_predicate(std::vector<std::pair<std::size_t, std::size_t>> shared,
                                 std::vector<std::size_t> big)
{
    return [shared = std::move(shared), big = std::move(big)](const std::vector<Mask> &dom) {
        bool left_certain = false, left_possible = false, right_certain = false, right_possible = false;
        for (auto [u, v] : shared) {
            left_possible |= can_be_positive(dom[u]) && can_be_positive(dom[v]);
            left_certain |= must_be_positive(dom[u]) && must_be_positive(dom[v]);
        }
        for (auto w : big) {
            right_possible |= can_be_at_least_two(dom[w]);
            right_certain |= must_be_at_least_two(dom[w]);
        }
        return ! ((left_certain && ! right_possible) || (right_certain && ! left_possible));
    };
}

std::vector<std::size_t> vars_of(const std::vector<std::pair<std::size_t, std::size_t>> &shared,
                                 const std::vector<std::size_t> &big)
{
    std::vector<std::size_t> out = big;
    for (auto [u, v] : shared) {
        out.push_back(u);
        out.push_back(v);
    }
    return out;
}

bool in_catalog(const Catalog *catalog, std::size_t m, const std::vector<std::size_t> &d)
{
    if (! catalog)
        return true;
    auto it = catalog->find(m);
    return it != catalog->end() && std::find(it->second.begin(), it->second.end(), d) != it->second.end();
}

}  // namespace

std::string to_string(const DegreeProfile &p)
{
    return "(" + std::to_string(p.m) + "," + std::to_string(p.r) + ",{" + multiset(p.d_x) + "},{" + multiset(p.d_xy) +
           "})";
}

bool is_valid(const DegreeProfile &p)
{
    auto sum = [](const std::vector<std::size_t> &v) { return std::accumulate(v.begin(), v.end(), std::size_t{0}); };
    return p.m >= 1 && p.r >= 1 && p.d_x.size() == p.r && p.d_xy.size() == p.r && sum(p.d_x) == p.m &&
           sum(p.d_xy) == p.m && std::is_sorted(p.d_x.begin(), p.d_x.end()) &&
           std::is_sorted(p.d_xy.begin(), p.d_xy.end()) && p.d_x.front() == 1 && p.d_xy.front() >= 2;
}

Catalog parse_catalog(std::string_view text)
{
    Catalog out;
    std::size_t line_no = 0, start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;
        if (line.substr(0, 2) != "m=")
            throw ParseError(line_no, 1, "expected 'm=<m>: 1+a2+...'");
        auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw ParseError(line_no, 1, "missing ':'");
        auto parse_num = [&](std::string_view tok, std::size_t col) {
            while (! tok.empty() && tok.front() == ' ')
                tok.remove_prefix(1), ++col;
            while (! tok.empty() && tok.back() == ' ')
                tok.remove_suffix(1);
            std::size_t v = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || v == 0)
                throw ParseError(line_no, col, "expected a positive integer, got '" + std::string(tok) + "'");
            return v;
        };
        const auto m = parse_num(line.substr(2, colon - 2), 3);
        std::vector<std::size_t> degrees;
        std::size_t pos = colon + 1;
        while (true) {
            auto plus = line.find('+', pos);
            degrees.push_back(parse_num(line.substr(pos, plus == std::string_view::npos ? std::string_view::npos : plus - pos),
                                        pos + 1));
            if (plus == std::string_view::npos)
                break;
            pos = plus + 1;
        }
        std::sort(degrees.begin(), degrees.end());
        if (std::accumulate(degrees.begin(), degrees.end(), std::size_t{0}) != m)
            throw ParseError(line_no, colon + 2, "degrees do not sum to m");
        if (degrees.front() != 1)
            throw ParseError(line_no, colon + 2, "the diagonal degree 1 is missing");
        out[m].push_back(std::move(degrees));
    }
    return out;
}

std::vector<std::vector<std::size_t>> partitions(std::size_t total, std::size_t parts, std::size_t least)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t, std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t slots,
                                                                         std::size_t lo) {
        if (slots == 0) {
            if (left == 0)
                out.push_back(cur);
            return;
        }
        for (std::size_t v = lo; v * slots <= left; ++v) {
            cur.push_back(v);
            rec(left - v, slots - 1, v);
            cur.pop_back();
        }
    };
    if (parts > 0)
        rec(total, parts, std::max<std::size_t>(least, 1));
    return out;
}

std::vector<DegreeProfile> enumerate_profiles(std::size_t m, std::size_t r, const Catalog *catalog)
{
    std::vector<DegreeProfile> out;
    for (const auto &dx : partitions(m, r, 1)) {
        if (dx.front() != 1 || ! in_catalog(catalog, m, dx))
            continue;
        for (const auto &dxy : partitions(m, r, 2))
            out.push_back({m, r, dx, dxy});
    }
    return out;
}

const char *rule_name(Rule rule)
{
    switch (rule) {
    case Rule::MLessThan2R:
        return "m<2r";
    case Rule::PrimeM:
        return "prime-m";
    case Rule::SymmetricOdd:
        return "symmetric-odd";
    case Rule::PValenced:
        return "p-valenced";
    case Rule::CoprimeTransfer:
        return "coprime-transfer";
    case Rule::DesignDivisibility:
        return "design-divisibility";
    case Rule::MEquals2RStructure:
        return "m=2r-structure";
    case Rule::Csp:
        return "csp";
    case Rule::Catalog:
        return "catalog";
    }
    return "?";
}

std::optional<Rule> parse_rule(std::string_view name)
{
    for (auto rule : {Rule::MLessThan2R, Rule::PrimeM, Rule::SymmetricOdd, Rule::PValenced, Rule::CoprimeTransfer,
                      Rule::DesignDivisibility, Rule::MEquals2RStructure, Rule::Csp, Rule::Catalog})
        if (name == rule_name(rule))
            return rule;
    return std::nullopt;
}

const std::vector<Rule> &default_rule_order()
{
    static const std::vector<Rule> order{Rule::MLessThan2R,     Rule::PrimeM,
                                         Rule::SymmetricOdd,    Rule::PValenced,
                                         Rule::CoprimeTransfer, Rule::DesignDivisibility,
                                         Rule::MEquals2RStructure, Rule::Csp};
    return order;
}

std::vector<std::vector<std::size_t>> canonical_pairings(std::size_t m, const std::vector<std::size_t> &degrees)
{
    // classes of equal degree, the diagonal (index 0) excluded
    std::vector<std::pair<std::size_t, std::size_t>> classes;  // (first index, size)
    for (std::size_t i = 1; i < degrees.size(); ++i) {
        if (classes.empty() || degrees[classes.back().first] != degrees[i])
            classes.emplace_back(i, 0);
        ++classes.back().second;
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(degrees.size());
    std::iota(cur.begin(), cur.end(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == classes.size()) {
            out.push_back(cur);
            return;
        }
        auto [first, size] = classes[c];
        const bool symmetric_ok = (m * degrees[first]) % 2 == 0;
        for (std::size_t pairs = 0; 2 * pairs <= size; ++pairs) {
            const auto fixed = size - 2 * pairs;
            if (fixed > 0 && ! symmetric_ok)
                continue;
            for (std::size_t k = 0; k < fixed; ++k)
                cur[first + k] = first + k;
            for (std::size_t k = 0; k < pairs; ++k) {
                const auto a = first + fixed + 2 * k;
                cur[a] = a + 1;
                cur[a + 1] = a;
            }
            rec(c + 1);
        }
    };
    rec(0);
    return out;
}

TwoFiberModel::TwoFiberModel(const DegreeProfile &p, std::vector<std::size_t> d_y, std::vector<std::size_t> tx,
                             std::vector<std::size_t> ty, const CspOptions &opts) :
    r_(p.r)
{
    const auto r = p.r;
    const auto m = static_cast<std::int64_t>(p.m);
    const auto &dx = p.d_x, &dxy = p.d_xy;
    const char *family_names[] = {"A", "B", "A'", "B'"};

    // degrees of R, S, T per family
    const std::vector<std::size_t> *deg[4][3] = {
        {&dx, &dxy, &dxy},   // A
        {&dxy, &dxy, &dx},   // B
        {&d_y, &dxy, &dxy},  // A'
        {&dxy, &dxy, &d_y},  // B'
    };

    for (std::size_t f = 0; f < 4; ++f)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t k = 0; k < r; ++k) {
                    const auto dr = (*deg[f][0])[i], ds = (*deg[f][1])[j], dt = (*deg[f][2])[k];
                    const auto id = problem_.add_variable(std::string(family_names[f]) + "[" + std::to_string(i) + "," +
                                                              std::to_string(j) + "," + std::to_string(k) + "]",
                                                          0, static_cast<int>(std::min(dr, ds)));
                    const auto l = std::lcm(dr, ds);
                    problem_.filter(
                        id, [l, dt](int c) { return (static_cast<std::size_t>(c) * dt) % l == 0; },
                        "lcm(d_R,d_S) | c d_T");
                }

    auto label = [&](std::size_t f, const std::string &what, std::size_t i, std::size_t j) {
        return std::string(family_names[f]) + ": " + what + " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    };
    using csp::LinearTerm;
    for (std::size_t f = 0; f < 4; ++f) {
        const auto &dr = *deg[f][0], &ds = *deg[f][1], &dt = *deg[f][2];
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                std::vector<LinearTerm> terms;
                for (std::size_t k = 0; k < r; ++k)
                    terms.push_back({index(f, i, j, k), static_cast<std::int64_t>(dt[k])});
                problem_.add_linear(std::move(terms), static_cast<std::int64_t>(dr[i] * ds[j]),
                                    label(f, "sum_T c d_T = d_R d_S", i, j));
            }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < r; ++k) {
                std::vector<LinearTerm> terms;
                for (std::size_t j = 0; j < r; ++j)
                    terms.push_back({index(f, i, j, k), 1});
                problem_.add_linear(std::move(terms), static_cast<std::int64_t>(dr[i]), label(f, "sum_S c = d_R", i, k));
            }
    }

    // sum_R c_{RS}^T = e_S, and e_S = d_S since |X| = |Y|
    for (std::size_t f = 0; f < 4; ++f) {
        const auto &ds = *deg[f][1];
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                std::vector<LinearTerm> terms;
                for (std::size_t i = 0; i < r; ++i)
                    terms.push_back({index(f, i, j, k), 1});
                problem_.add_linear(std::move(terms), static_cast<std::int64_t>(ds[j]), label(f, "sum_R c = e_S", j, k));
            }
    }

    // Kronecker constraints
    for (std::size_t f : {std::size_t{0}, std::size_t{2}})
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k)
                problem_.add_linear({{index(f, 0, j, k), 1}}, j == k ? 1 : 0, label(f, "c_{Delta S}^T = delta_ST", j, k));
    for (std::size_t f : {std::size_t{1}, std::size_t{3}})
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                problem_.add_linear({{index(f, i, j, 0), 1}}, i == j ? static_cast<std::int64_t>(dxy[i]) : 0,
                                    label(f, "c_{RS}^Delta = d_R delta_{S,R^t}", i, j));

    // c_{RS}^T d_T = c_{TS^t}^R d_R = c_{R^tT}^S d_S, and transpose symmetry
    struct Side
    {
        std::size_t a, b;
        const std::vector<std::size_t> *d_home;
        const std::vector<std::size_t> *t_home;
    };
    for (auto side : {Side{0, 1, &dx, &tx}, Side{2, 3, &d_y, &ty}}) {
        const auto &dh = *side.d_home;
        const auto &th = *side.t_home;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t k = 0; k < r; ++k) {
                    const auto x = index(side.a, i, j, k);
                    problem_.add_linear({{x, static_cast<std::int64_t>(dxy[k])},
                                         {index(side.b, k, j, i), -static_cast<std::int64_t>(dh[i])}},
                                        0, label(side.a, "c_{RS}^T d_T = c_{TS^t}^R d_R", i, j));
                    problem_.add_linear({{x, static_cast<std::int64_t>(dxy[k])},
                                         {index(side.a, th[i], k, j), -static_cast<std::int64_t>(dxy[j])}},
                                        0, label(side.a, "c_{RS}^T d_T = c_{R^tT}^S d_S", i, j));
                    problem_.add_linear({{index(side.b, i, j, k), 1}, {index(side.b, j, i, th[k]), -1}}, 0,
                                        label(side.b, "c_{RS}^T = c_{S^tR^t}^{T^t}", i, j));
                }
    }

    if (opts.overlap) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                if (i == j)
                    continue;
                std::vector<std::pair<std::size_t, std::size_t>> shared_y, shared_x;
                std::vector<std::size_t> big_x, big_y;
                for (std::size_t t = 1; t < r; ++t) {
                    shared_y.emplace_back(index(3, i, i, t), index(3, j, j, t));
                    shared_x.emplace_back(index(1, i, i, t), index(1, j, j, t));
                }
                for (std::size_t t = 0; t < r; ++t) {
                    big_x.push_back(index(1, i, j, t));
                    big_y.push_back(index(3, i, j, t));
                }
                problem_.add_predicate(vars_of(shared_y, big_x), overlap_predicate(shared_y, big_x),
                                       "overlap lemma (R_Y side) at (" + std::to_string(i) + "," + std::to_string(j) + ")");
                problem_.add_predicate(vars_of(shared_x, big_y), overlap_predicate(shared_x, big_y),
                                       "overlap lemma (R_X side) at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
    }

    if (opts.stabilizer) {
        for (auto [f, dh] : {std::pair<std::size_t, const std::vector<std::size_t> *>{0, &dx}, {2, &d_y}})
            for (std::size_t s = 0; s < r; ++s) {
                std::vector<std::size_t> vars;
                for (std::size_t i = 0; i < r; ++i)
                    vars.push_back(index(f, i, s, s));
                const auto bound = std::gcd(static_cast<std::size_t>(m), dxy[s]);
                auto degrees = *dh;
                problem_.add_predicate(
                    vars,
                    [vars, degrees, bound](const std::vector<Mask> &dom) {
                        std::size_t sum = 0;
                        for (std::size_t i = 0; i < vars.size(); ++i) {
                            if (csp::count_values(dom[vars[i]]) != 1)
                                return true;
                            if (static_cast<std::size_t>(csp::min_value(dom[vars[i]])) == degrees[i])
                                sum += degrees[i];
                        }
                        return bound % sum == 0;
                    },
                    std::string(family_names[f]) + ": stabilizer degree divides gcd(m, d_S) at S=" + std::to_string(s));
            }
    }
}

CspOutcome solve_csp(const DegreeProfile &p, const CspOptions &opts)
{
    CspOutcome out;
    if (! is_valid(p)) {
        out.trace.push_back("invalid profile " + to_string(p));
        return out;
    }

    std::vector<std::vector<std::size_t>> candidates;
    if (opts.catalog) {
        if (auto it = opts.catalog->find(p.m); it != opts.catalog->end())
            for (const auto &d : it->second)
                if (d.size() == p.r)
                    candidates.push_back(d);
    } else {
        candidates = partitions(p.m, p.r, 1);
        candidates.erase(std::remove_if(candidates.begin(), candidates.end(), [](const auto &d) { return d.front() != 1; }),
                         candidates.end());
    }
    // try d_Y = d_X first
    std::stable_partition(candidates.begin(), candidates.end(), [&](const auto &d) { return d == p.d_x; });

    const auto pairings_x = canonical_pairings(p.m, p.d_x);
    if (pairings_x.empty())
        out.trace.push_back("no admissible transpose pairing of d_X");
    bool undecided = false;
    for (const auto &dy : candidates) {
        const auto pairings_y = canonical_pairings(p.m, dy);
        for (const auto &tx : pairings_x)
            for (const auto &ty : pairings_y) {
                ++out.cases;
                TwoFiberModel model(p, dy, tx, ty, opts);
                auto res = model.problem().solve(opts.node_budget);
                out.nodes += res.nodes;
                const std::string where = "d_Y={" + multiset(dy) + "} t_X=[" + multiset(tx) + "] t_Y=[" + multiset(ty) + "]";
                if (res.status == csp::Status::Feasible) {
                    CspWitness w{dy, tx, ty, {}};
                    for (std::size_t v = 0; v < res.values.size(); ++v)
                        w.constants.emplace_back(model.problem().name(v), res.values[v]);
                    out.witness = std::move(w);
                    out.status = CspStatus::Feasible;
                    out.trace.push_back(where + ": feasible after " + std::to_string(res.nodes) + " nodes");
                    return out;
                }
                if (res.status == csp::Status::BudgetExhausted) {
                    undecided = true;
                    out.trace.push_back(where + ": undecided, node budget exhausted");
                } else if (! res.refutation.empty()) {
                    out.trace.push_back(where + ": refuted by " + res.refutation);
                } else {
                    out.trace.push_back(where + ": infeasible after " + std::to_string(res.nodes) + " nodes");
                }
            }
    }
    if (candidates.empty())
        out.trace.push_back("no candidate d_Y");
    std::string side;
    if (opts.overlap)
        side += " overlap";
    if (opts.stabilizer)
        side += " stabilizer";
    out.trace.push_back("side constraints:" + (side.empty() ? std::string(" none") : side));
    out.status = undecided ? CspStatus::Undecided : CspStatus::Infeasible;
    return out;
}

bool is_prime(std::size_t v)
{
    if (v < 2)
        return false;
    for (std::size_t p = 2; p * p <= v; ++p)
        if (v % p == 0)
            return false;
    return true;
}

std::size_t design_degree_count(std::size_t m)
{
    if (m < 2)
        return 0;
    std::size_t count = 0;
    for (std::size_t d = 1; d <= m - 1; ++d)
        if ((d * (d - 1)) % (m - 1) == 0)
            ++count;
    return count;
}

std::optional<std::pair<std::size_t, std::size_t>> two_power_times_odd_prime_power(std::size_t v)
{
    if (v == 0)
        return std::nullopt;
    std::size_t t = 0;
    while (v % 2 == 0) {
        v /= 2;
        ++t;
    }
    if (t == 0 || ! is_prime_power(v))
        return std::nullopt;
    return std::make_pair(t, v);
}

FilterVerdict apply_rules(const DegreeProfile &p, const FilterOptions &opts)
{
    FilterVerdict out;
    const auto m = p.m, r = p.r;
    auto eliminate = [&](Rule rule, std::string why) {
        out.status = VerdictStatus::Eliminated;
        out.rule = rule;
        out.trace.push_back(std::move(why));
        return out;
    };
    if (! is_valid(p)) {
        out.trace.push_back("not a valid profile");
        return out;
    }
    if (opts.csp.catalog && ! in_catalog(opts.csp.catalog, m, p.d_x))
        return eliminate(Rule::Catalog, "eliminated externally: no homogeneous scheme with d_X={" + multiset(p.d_x) +
                                            "} in the catalog");

    for (auto rule : opts.rules) {
        switch (rule) {
        case Rule::MLessThan2R:
            if (m < 2 * r)
                return eliminate(rule, "m=" + std::to_string(m) + " < 2r=" + std::to_string(2 * r));
            out.trace.push_back("m<2r: m >= 2r");
            break;
        case Rule::PrimeM:
            if (is_prime(m)) {
                const bool divides = r >= 2 && (m - 1) % (r - 1) == 0;
                const auto d = divides ? (m - 1) / (r - 1) : 0;
                const bool shape =
                    divides && std::all_of(p.d_x.begin() + 1, p.d_x.end(), [d](std::size_t x) { return x == d; });
                if (! shape)
                    return eliminate(rule, "m=" + std::to_string(m) + " is prime, so d_X must be {1," +
                                               (divides ? std::to_string(d) + ",...}" : "d,...} with (r-1) | (m-1)"));
                out.trace.push_back("prime-m: d_X={1," + std::to_string(d) + ",...}");
            } else {
                out.trace.push_back("prime-m: m not prime");
            }
            break;
        case Rule::SymmetricOdd:
            if (r == 3 && m % 2 == 1) {
                auto odd = std::find_if(p.d_x.begin() + 1, p.d_x.end(), [](std::size_t d) { return d % 2 == 1; });
                if (odd != p.d_x.end())
                    return eliminate(rule, "r=3 and m odd: C_X is symmetric, so every non-diagonal degree is even, but " +
                                               std::to_string(*odd) + " is odd");
            }
            out.trace.push_back("symmetric-odd: not applicable or all degrees even");
            break;
        case Rule::PValenced: {
            std::vector<std::size_t> primes;
            for (std::size_t q = 2; q <= m + 1; ++q)
                if (is_prime(q) && m % q != 0 &&
                    std::all_of(p.d_x.begin(), p.d_x.end(), [q](std::size_t d) { return power_of(d, q); }))
                    primes.push_back(q);
            if (! primes.empty())
                return eliminate(rule, "d_X is " + std::to_string(primes.front()) + "-valenced and " +
                                           std::to_string(primes.front()) + " does not divide m=" + std::to_string(m));
            out.trace.push_back("p-valenced: no prime p with p ∤ m and d_X p-valenced");
            break;
        }
        case Rule::CoprimeTransfer: {
            std::size_t product = 1;
            for (auto d : p.d_x)
                product *= d;
            for (auto t : p.d_xy)
                if (t > 1 && std::gcd(t, product) == 1)
                    return eliminate(rule, std::to_string(t) + " in d_XY is coprime to the product " +
                                               std::to_string(product) + " of d_X, forcing " + std::to_string(t) +
                                               " <= min d_X = 1");
            out.trace.push_back("coprime-transfer: every cross degree shares a factor with prod d_X");
            break;
        }
        case Rule::DesignDivisibility:
            if (r == 2) {
                std::string remark;
                if (auto split = two_power_times_odd_prime_power(m - 1))
                    remark = "; m-1=2^" + std::to_string(split->first) + "*" + std::to_string(split->second) + " has " +
                             std::to_string(design_degree_count(m)) + " solutions d of d(d-1) = 0 mod m-1";
                for (auto d : p.d_xy)
                    if ((d * (d - 1)) % (m - 1) != 0)
                        return eliminate(rule, "d=" + std::to_string(d) + ": d(d-1)=" + std::to_string(d * (d - 1)) +
                                                   " is not a multiple of m-1=" + std::to_string(m - 1) + remark);
                out.trace.push_back("design-divisibility: every cross degree solves d(d-1) = lambda(m-1)" + remark);
            } else {
                out.trace.push_back("design-divisibility: r != 2");
            }
            break;
        case Rule::MEquals2RStructure:
            if (m == 2 * r) {
                const bool twos = std::all_of(p.d_xy.begin(), p.d_xy.end(), [](std::size_t d) { return d == 2; });
                const bool small = std::all_of(p.d_x.begin(), p.d_x.end(), [](std::size_t d) { return d == 1 || d == 2 || d == 4; });
                const auto ones = std::count(p.d_x.begin(), p.d_x.end(), 1);
                const auto fours = std::count(p.d_x.begin(), p.d_x.end(), 4);
                if (! twos || ! small || ones != 2 * fours)
                    return eliminate(rule, std::string("m=2r requires d_XY all 2, d_X in {1,2,4} and #1 = 2 #4; ") +
                                               (! twos ? "d_XY has a degree other than 2"
                                                       : ! small ? "d_X has a degree outside {1,2,4}"
                                                                 : "#1=" + std::to_string(ones) + ", #4=" + std::to_string(fours)));
                out.trace.push_back("m=2r-structure: shape matches");
            } else {
                out.trace.push_back("m=2r-structure: m != 2r");
            }
            break;
        case Rule::Csp: {
            auto res = solve_csp(p, opts.csp);
            if (res.status == CspStatus::Infeasible) {
                out.trace.insert(out.trace.end(), res.trace.begin(), res.trace.end());
                return eliminate(rule, "no intersection numbers satisfy the constraints in any of " +
                                           std::to_string(res.cases) + " cases");
            }
            out.trace.push_back(res.status == CspStatus::Feasible
                                    ? "csp: feasible (" + res.trace.front() + ")"
                                    : "csp: undecided within the node budget");
            break;
        }
        case Rule::Catalog:
            break;
        }
    }
    out.status = VerdictStatus::Survives;
    return out;
}

const std::vector<KnownProfile> &known_profiles()
{
    using K = KnownOutcome;
    static const std::vector<KnownProfile> table = [] {
        struct Row
        {
            std::size_t r, m;
            std::vector<std::size_t> dx, dxy;
            K outcome;
            const char *argument;
        };
        const std::vector<Row> rows{
            {3, 6, {1, 1, 4}, {2, 2, 2}, K::DoesNotOccur, "intersection numbers with the overlap lemma"},
            {3, 8, {1, 1, 6}, {2, 2, 4}, K::DoesNotOccur, "intersection numbers"},
            {3, 8, {1, 1, 6}, {2, 3, 3}, K::AtMostTwoFibers, "point-level configuration argument"},
            {3, 8, {1, 3, 4}, {2, 2, 4}, K::DoesNotOccur, "degree-2 cross relation: RR^t = {Delta, S} with d_S <= 2"},
            {3, 8, {1, 3, 4}, {2, 3, 3}, K::DoesNotOccur, "degree-2 cross relation: RR^t = {Delta, S} with d_S <= 2"},
            {3, 9, {1, 2, 6}, {2, 2, 5}, K::DoesNotOccur, "coprime transfer"},
            {3, 9, {1, 2, 6}, {2, 3, 4}, K::DoesNotOccur, "intersection numbers"},
            {3, 9, {1, 2, 6}, {3, 3, 3}, K::DoesNotOccur, "intersection numbers (parity)"},
            {3, 10, {1, 1, 8}, {2, 3, 5}, K::DoesNotOccur, "coprime transfer"},
            {3, 10, {1, 1, 8}, {3, 3, 4}, K::DoesNotOccur, "coprime transfer"},
            {3, 10, {1, 1, 8}, {2, 4, 4}, K::DoesNotOccur, "intersection numbers with stabilizer divisibility"},
            {3, 10, {1, 1, 8}, {2, 2, 6}, K::DoesNotOccur, "intersection numbers with stabilizer divisibility"},
            {3, 10, {1, 3, 6}, {2, 3, 5}, K::DoesNotOccur, "coprime transfer"},
            {3, 10, {1, 3, 6}, {3, 3, 4}, K::DoesNotOccur, "intersection numbers with stabilizer divisibility"},
            {3, 10, {1, 3, 6}, {2, 4, 4}, K::DoesNotOccur, "coprime transfer"},
            {3, 10, {1, 3, 6}, {2, 2, 6}, K::DoesNotOccur, "degree-2 cross relation: RR^t = {Delta, S} with d_S <= 2"},
            {3, 10, {1, 4, 5}, {2, 3, 5}, K::DoesNotOccur, "coprime transfer"},
            {3, 10, {1, 4, 5}, {3, 3, 4}, K::DoesNotOccur, "coprime transfer"},
            {3, 10, {1, 4, 5}, {2, 4, 4}, K::DoesNotOccur, "degree-2 cross relation: RR^t = {Delta, S} with d_S <= 2"},
            {3, 10, {1, 4, 5}, {2, 2, 6}, K::DoesNotOccur, "degree-2 cross relation: RR^t = {Delta, S} with d_S <= 2"},
            {4, 8, {1, 1, 2, 4}, {2, 2, 2, 2}, K::AtMostTwoFibers, "point-level configuration argument"},
            {4, 9, {1, 1, 1, 6}, {2, 2, 2, 3}, K::DoesNotOccur, "degree-2 cross relation and odd-order symmetry"},
            {4, 9, {1, 2, 3, 3}, {2, 2, 2, 3}, K::DoesNotOccur, "intersection numbers"},
            {4, 10, {1, 2, 2, 5}, {2, 2, 2, 4}, K::DoesNotOccur, "coprime transfer"},
            {4, 10, {1, 2, 2, 5}, {2, 2, 3, 3}, K::DoesNotOccur, "coprime transfer"},
            {4, 10, {1, 1, 4, 4}, {2, 2, 3, 3}, K::DoesNotOccur, "coprime transfer"},
            {4, 10, {1, 1, 4, 4}, {2, 2, 2, 4}, K::DoesNotOccur, "intersection numbers"},
        };
        std::vector<KnownProfile> out;
        for (const auto &row : rows)
            out.push_back({{row.m, row.r, row.dx, row.dxy}, row.outcome, row.argument});
        return out;
    }();
    return table;
}

std::optional<std::string> known_bound(std::size_t r, std::size_t m)
{
    static const char *grid[4][8] = {
        {"1", "1", "1", "<=2", "1", "1", "1", "<=2"},
        {"1", "1", "1", "1", "<=2", "1", "1", "1"},
        {"1", "*", "1", "1", "<=2", "1", "1", "*"},
        {"*", "1", "*", "*", "1", "1", "*", "*"},
    };
    if (r < 2 || r > 5 || m < 4 || m > 11)
        return std::nullopt;
    return std::string(grid[r - 2][m - 4]);
}

TableReport table_report(std::size_t m_max, const Catalog *catalog, const FilterOptions &opts)
{
    if (m_max > 16)
        throw std::invalid_argument("table_report: m_max must be at most 16");
    TableReport report;
    report.m_max = m_max;
    report.catalog_supplied = catalog != nullptr;
    auto filter_opts = opts;
    filter_opts.csp.catalog = catalog;

    for (std::size_t r = 2; r <= 5; ++r)
        for (std::size_t m = 4; m <= m_max; ++m)
            for (const auto &p : enumerate_profiles(m, r)) {
                TableRow row{p, apply_rules(p, filter_opts), {}};
                const auto &known = known_profiles();
                auto hit = std::find_if(known.begin(), known.end(), [&](const KnownProfile &k) { return k.profile == p; });
                if (row.verdict.status == VerdictStatus::Survives) {
                    if (! catalog)
                        row.labels.emplace_back("unverified d_X");
                    if (hit != known.end())
                        row.labels.push_back(hit->outcome == KnownOutcome::DoesNotOccur
                                                 ? "requires structural argument (known not to occur: " + hit->argument + ")"
                                                 : "known n<=2 (" + hit->argument + ")");
                } else if (row.verdict.rule == Rule::Catalog) {
                    row.labels.emplace_back("eliminated externally");
                } else if (hit != known.end() && hit->outcome == KnownOutcome::AtMostTwoFibers) {
                    row.labels.emplace_back("CONFLICT: eliminated but known to admit n=2");
                }
                report.rows.push_back(std::move(row));
            }
    return report;
}

std::string format_table(const TableReport &report)
{
    std::ostringstream out;
    std::size_t current_r = 0, current_m = 0;
    for (const auto &row : report.rows) {
        const auto &p = row.profile;
        if (p.r != current_r || p.m != current_m) {
            current_r = p.r;
            current_m = p.m;
            std::size_t alive = 0, total = 0;
            for (const auto &other : report.rows)
                if (other.profile.r == p.r && other.profile.m == p.m) {
                    ++total;
                    alive += other.verdict.status == VerdictStatus::Survives;
                }
            out << "(r,m)=(" << p.r << "," << p.m << "): " << total << " profiles, " << alive << " survive";
            if (auto bound = known_bound(p.r, p.m))
                out << "; known bound n " << (*bound == "*" ? "(no homogeneous scheme)" : *bound);
            out << '\n';
        }
        out << "  d_X=" << multiset(p.d_x, '+') << " d_XY=" << multiset(p.d_xy, '+') << "  ";
        if (row.verdict.status == VerdictStatus::Eliminated)
            out << "eliminated [" << rule_name(*row.verdict.rule) << "]";
        else
            out << "survives";
        for (const auto &l : row.labels)
            out << "; " << l;
        out << '\n';
    }
    return out.str();
}

}  // namespace coco
