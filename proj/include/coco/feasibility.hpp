#pragma once

#include "coco/csp.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coco {

/// Degrees of a hypothetical reduced (m,n,r)-scheme seen from two fibers:
/// d_X on one fiber, d_XY across. Both sorted ascending.
struct DegreeProfile
{
    std::size_t m = 0;
    std::size_t r = 0;
    std::vector<std::size_t> d_x;
    std::vector<std::size_t> d_xy;

    friend bool operator==(const DegreeProfile &, const DegreeProfile &) = default;
};

/// "(m,r,{1,2,6},{2,2,5})"
[[nodiscard]] std::string to_string(const DegreeProfile &p);
[[nodiscard]] bool is_valid(const DegreeProfile &p);

/// Known-realizable d_X multisets per m.
using Catalog = std::map<std::size_t, std::vector<std::vector<std::size_t>>>;

/// Lines `m=<m>: 1+a2+...+ar`; blank lines and lines starting with '#'
/// are skipped. Throws ParseError.
[[nodiscard]] Catalog parse_catalog(std::string_view text);

/// Partitions of `total` into `parts` parts, each >= least, ascending.
[[nodiscard]] std::vector<std::vector<std::size_t>> partitions(std::size_t total, std::size_t parts, std::size_t least);

/// All valid profiles for (m, r). With a catalog, d_X is restricted to the
/// catalog's entries for m.
[[nodiscard]] std::vector<DegreeProfile> enumerate_profiles(std::size_t m, std::size_t r,
                                                            const Catalog *catalog = nullptr);

enum class Rule
{
    MLessThan2R,
    PrimeM,
    SymmetricOdd,
    PValenced,
    CoprimeTransfer,
    DesignDivisibility,
    MEquals2RStructure,
    Csp,
    /// d_X missing from the supplied catalog.
    Catalog,
};

[[nodiscard]] const char *rule_name(Rule rule);
[[nodiscard]] std::optional<Rule> parse_rule(std::string_view name);
/// m<2r, prime-m, symmetric-odd, p-valenced, coprime-transfer,
/// design-divisibility, m=2r-structure, csp
[[nodiscard]] const std::vector<Rule> &default_rule_order();

struct CspOptions
{
    /// For R != S in R_{X,Y}: some non-diagonal T of R_Y lies in R^tR and
    /// S^tS iff c_{RS^t}^{T'} >= 2 for some T' in R_X (and with X, Y swapped).
    bool overlap = true;
    /// For S in R_{X,Y}: the degrees of {R in R_X : RS = {S}} sum to a
    /// divisor of gcd(m, d_S).
    bool stabilizer = true;
    std::size_t node_budget = 200'000;
    /// Candidate d_Y multisets come from here when set.
    const Catalog *catalog = nullptr;
};

enum class CspStatus
{
    Feasible,
    Infeasible,
    Undecided,  // node budget ran out somewhere and nothing was feasible
};

struct CspWitness
{
    std::vector<std::size_t> d_y;
    std::vector<std::size_t> transpose_x, transpose_y;
    std::vector<std::pair<std::string, int>> constants;
};

struct CspOutcome
{
    CspStatus status = CspStatus::Infeasible;
    std::optional<CspWitness> witness;
    std::vector<std::string> trace;
    std::size_t cases = 0;
    std::size_t nodes = 0;
};

/// Intersection numbers among two fibers X, Y of a reduced scheme with
/// the given degrees. Families, by fibers of (R, S, T):
///   A:  X,X  X,Y  X,Y      B:  X,Y  Y,X  X,X
///   A': Y,Y  Y,X  Y,X      B': Y,X  X,Y  Y,Y
/// Relation 0 of R_X and of R_Y is the diagonal; relation s of R_{Y,X} is
/// the transpose of relation s of R_{X,Y}. tx and ty are the transpose
/// involutions of R_X and R_Y.
class TwoFiberModel
{
public:
    TwoFiberModel(const DegreeProfile &p, std::vector<std::size_t> d_y, std::vector<std::size_t> tx,
                  std::vector<std::size_t> ty, const CspOptions &opts = {});

    [[nodiscard]] const csp::Problem &problem() const { return problem_; }
    [[nodiscard]] std::size_t a(std::size_t r, std::size_t s, std::size_t t) const { return index(0, r, s, t); }
    [[nodiscard]] std::size_t b(std::size_t r, std::size_t s, std::size_t t) const { return index(1, r, s, t); }
    [[nodiscard]] std::size_t a2(std::size_t r, std::size_t s, std::size_t t) const { return index(2, r, s, t); }
    [[nodiscard]] std::size_t b2(std::size_t r, std::size_t s, std::size_t t) const { return index(3, r, s, t); }

private:
    [[nodiscard]] std::size_t index(std::size_t family, std::size_t r, std::size_t s, std::size_t t) const
    {
        return ((family * r_ + r) * r_ + s) * r_ + t;
    }

    std::size_t r_;
    csp::Problem problem_;
};

/// Transpose involutions of a sorted degree list, one per isomorphism
/// type: within each degree, self-paired relations first, then adjacent
/// pairs. Symmetric non-diagonal relations need m*d even.
[[nodiscard]] std::vector<std::vector<std::size_t>> canonical_pairings(std::size_t m,
                                                                       const std::vector<std::size_t> &degrees);

/// Infeasible only if every d_Y and every pair of transpose involutions
/// is refuted.
[[nodiscard]] CspOutcome solve_csp(const DegreeProfile &p, const CspOptions &opts = {});

enum class VerdictStatus
{
    Eliminated,
    Survives,
};

struct FilterVerdict
{
    VerdictStatus status = VerdictStatus::Survives;
    std::optional<Rule> rule;
    std::vector<std::string> trace;
};

struct FilterOptions
{
    std::vector<Rule> rules = default_rule_order();
    CspOptions csp;
};

/// Rules in the given order; the first that fires decides. When a catalog
/// is set in opts.csp, a d_X outside it is eliminated first.
[[nodiscard]] FilterVerdict apply_rules(const DegreeProfile &p, const FilterOptions &opts = {});

/// Number of d in 1..m-1 with d(d-1) divisible by m-1.
[[nodiscard]] std::size_t design_degree_count(std::size_t m);

/// (t, q) with v = 2^t q, t >= 1 and q an odd prime power > 1.
[[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>> two_power_times_odd_prime_power(std::size_t v);

[[nodiscard]] bool is_prime(std::size_t v);

enum class KnownOutcome
{
    DoesNotOccur,
    AtMostTwoFibers,
};

/// Profiles of homogeneous schemes not covered by the fiber-bound
/// criteria, with the published outcome and the kind of argument behind it.
struct KnownProfile
{
    DegreeProfile profile;
    KnownOutcome outcome;
    std::string argument;
};

[[nodiscard]] const std::vector<KnownProfile> &known_profiles();

/// Published bound on n for reduced (m,n,r)-schemes: "1", "<=2", or "*"
/// when no homogeneous (m,1,r)-scheme exists. r in 2..5, m in 4..11.
[[nodiscard]] std::optional<std::string> known_bound(std::size_t r, std::size_t m);

struct TableRow
{
    DegreeProfile profile;
    FilterVerdict verdict;
    std::vector<std::string> labels;
};

struct TableReport
{
    std::size_t m_max = 0;
    bool catalog_supplied = false;
    std::vector<TableRow> rows;
};

/// r in 2..5, m in 4..m_max (m_max <= 16). With a catalog, d_X outside it
/// are listed as eliminated externally.
[[nodiscard]] TableReport table_report(std::size_t m_max, const Catalog *catalog = nullptr,
                                       const FilterOptions &opts = {});
[[nodiscard]] std::string format_table(const TableReport &report);

}  // namespace coco
