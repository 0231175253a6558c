#pragma once

#include "coco/algebra.hpp"
#include "coco/scheme.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coco {

class NotBalanced : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct SchemeProfile
{
    bool is_balanced = false;
    std::optional<std::size_t> r;
    std::optional<std::size_t> m;  // fiber size, half-homogeneous only
    std::size_t n = 0;             // fiber count
    bool is_reduced = false;
    bool is_half_homogeneous = false;
    /// Primes p with every degree a power of p, among primes dividing some
    /// degree. Empty unless half-homogeneous.
    std::vector<std::size_t> p_valenced_primes;
    /// Every degree is 1, so the scheme is p-valenced for every prime.
    bool all_degrees_one = false;
    std::vector<std::vector<FiberIndex>> e_c_classes;
    std::vector<RelationHandle> thin_relations;
};

/// Purely combinatorial; no eigen computation.
[[nodiscard]] SchemeProfile profile(const Scheme &s);

/// Classes of E_C: fibers joined by a thin relation. Each class is sorted,
/// classes are ordered by their least fiber.
[[nodiscard]] std::vector<std::vector<FiberIndex>> e_c_classes(const Scheme &s);

/// Primes p such that every degree of a relation in R_X is a power of p,
/// among the primes dividing some such degree.
[[nodiscard]] std::vector<std::size_t> valenced_primes(const Scheme &s, FiberIndex x);

enum class Verdict
{
    Holds,
    Fails,
    NotApplicable,
    HypothesesNotMet,
};

[[nodiscard]] const char *to_string(Verdict v);

struct TheoremCheck
{
    Verdict verdict = Verdict::NotApplicable;
    /// False when the instance contradicts the statement being checked.
    bool consistent = true;
    std::vector<std::string> details;
    std::optional<std::pair<std::vector<FiberIndex>, std::vector<FiberIndex>>> bipartition;
};

/// Balanced iff for every fiber X, P -> P_X is a bijection onto P(C_X)
/// with n_P = |Fib| n_{P_X}. Holds when the right side is observed;
/// consistent when that agrees with profile().is_balanced.
[[nodiscard]] TheoremCheck check_balance_characterization(const Scheme &s, const IdempotentDecomposition &dec,
                                                          const AlgebraOptions &opts = {});

/// One central primitive idempotent iff 1-balanced; two iff the scheme is
/// the internal direct sum of a 2-balanced part and a 1-balanced part.
[[nodiscard]] TheoremCheck check_small_idempotent_count(const Scheme &s, const IdempotentDecomposition &dec);

/// For a reduced (m,n,r)-scheme: m < 2r forces n = 1, and so does C_X
/// being p-valenced for a prime p not dividing m.
[[nodiscard]] TheoremCheck check_reduced_fiber_bound(const Scheme &s);

struct ThinChoice
{
    FiberIndex from = 0;
    FiberIndex to = 0;
    RelationIndex relation = 0;
};

struct TransversalEmbedding
{
    std::vector<std::vector<FiberIndex>> classes;
    std::vector<FiberIndex> transversal;  // least fiber of each class
    std::size_t tensor_factor = 0;        // the n of T_n: the largest class size
    std::vector<ThinChoice> thin_choices;
    /// psi(x) = (index of x_i among the transversal's points, j)
    std::vector<std::pair<std::size_t, std::size_t>> point_map;
    bool embedding_verified = false;
    bool e_c_trivial = false;   // a single E_C class
    bool is_isomorphism = false;  // psi is onto C_X (x) T_n
    std::vector<bool> class_isomorphic;  // C restricted to each class vs C_X (x) T_k
    std::string failure;
};

/// Builds psi from the least-index thin relations (the diagonal inside a
/// class representative) and checks it maps relations of C onto relations
/// of C_U (x) T_n injectively. Throws NotBalanced.
[[nodiscard]] TransversalEmbedding decompose_by_transversal(const Scheme &s);

struct DirectSumSplit
{
    /// Connected components of the fiber graph with an edge X-Y whenever
    /// |R_{X,Y}| >= 2. Each is a summand; sorted.
    std::vector<std::vector<FiberIndex>> components;
    /// Whether the components match the idempotent criterion: no
    /// non-principal P is supported on two components.
    std::optional<bool> idempotent_criterion_agrees;

    [[nodiscard]] bool splits() const { return components.size() > 1; }
};

[[nodiscard]] DirectSumSplit find_direct_sum_split(const Scheme &s, const IdempotentDecomposition *dec = nullptr);

}  // namespace coco
