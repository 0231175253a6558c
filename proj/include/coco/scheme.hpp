#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coco {

using Point = std::size_t;
using RelationIndex = std::size_t;
using FiberIndex = std::size_t;

/// A possibly ragged integer matrix as read from user input, before any
/// axiom has been checked.
using RawMatrix = std::vector<std::vector<std::int64_t>>;

struct RelationHandle
{
    RelationIndex index = 0;
    FiberIndex source_fiber = 0;
    FiberIndex target_fiber = 0;

    friend bool operator==(const RelationHandle &, const RelationHandle &) = default;
    friend auto operator<=>(const RelationHandle &, const RelationHandle &) = default;
};

struct RelationMeta
{
    FiberIndex source_fiber = 0;
    FiberIndex target_fiber = 0;
    std::size_t degree = 0;    // out-valency d_R
    std::size_t codegree = 0;  // in-valency e_R
    std::size_t size = 0;      // |R|
};

/// Structure constants c_{RS}^T of a scheme. Only nonzero constants are
/// stored; every other triple, compatible or not, reads as zero.
class IntersectionTensor
{
public:
    struct Entry
    {
        RelationIndex left;
        RelationIndex right;
        std::uint32_t value;

        friend bool operator==(const Entry &, const Entry &) = default;
    };

    IntersectionTensor() = default;
    explicit IntersectionTensor(std::vector<std::vector<Entry>> by_target);

    [[nodiscard]] std::size_t relation_count() const { return by_target_.size(); }
    [[nodiscard]] std::uint32_t get(RelationIndex r, RelationIndex s, RelationIndex t) const;
    /// Nonzero constants c_{RS}^T for a fixed T, sorted by (R, S).
    [[nodiscard]] std::span<const Entry> entries_for(RelationIndex t) const { return by_target_.at(t); }
    [[nodiscard]] std::size_t nonzero_count() const;

    friend bool operator==(const IntersectionTensor &, const IntersectionTensor &) = default;

private:
    std::vector<std::vector<Entry>> by_target_;
};

enum class VerifyErrorKind
{
    EmptyMatrix,
    NonSquare,
    NonContiguousColors,
    DiagonalNotFiberUnion,
    TransposeNotClosed,
    IntersectionNumberNotConstant,
};

[[nodiscard]] const char *to_string(VerifyErrorKind kind);

/// Two pairs of the same relation T that see a different number of
/// R-S paths between their endpoints.
struct ConstancyWitness
{
    std::int64_t r = 0, s = 0, t = 0;
    std::pair<Point, Point> first{}, second{};
    std::size_t first_count = 0, second_count = 0;
};

class VerificationError : public std::runtime_error
{
public:
    VerificationError(VerifyErrorKind kind, const std::string &detail,
                      std::optional<ConstancyWitness> witness = std::nullopt);

    [[nodiscard]] VerifyErrorKind kind() const { return kind_; }
    [[nodiscard]] const std::optional<ConstancyWitness> &witness() const { return witness_; }

private:
    VerifyErrorKind kind_;
    std::optional<ConstancyWitness> witness_;
};

class IncompatibleRelations : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A verified coherent configuration. Immutable; construct through
/// verify_scheme() or one of the constructors.
class Scheme
{
public:
    [[nodiscard]] std::size_t point_count() const { return n_; }
    [[nodiscard]] std::size_t relation_count() const { return meta_.size(); }
    [[nodiscard]] std::size_t fiber_count() const { return fibers_.size(); }

    [[nodiscard]] RelationIndex color(Point u, Point v) const { return colors_[u * n_ + v]; }
    [[nodiscard]] std::span<const std::uint32_t> colors() const { return colors_; }
    [[nodiscard]] RawMatrix to_raw() const;

    [[nodiscard]] RelationIndex transpose(RelationIndex r) const { return transpose_.at(r); }
    [[nodiscard]] const RelationMeta &meta(RelationIndex r) const { return meta_.at(r); }
    [[nodiscard]] RelationHandle handle(RelationIndex r) const;
    [[nodiscard]] std::size_t degree(RelationIndex r) const { return meta(r).degree; }
    [[nodiscard]] std::size_t codegree(RelationIndex r) const { return meta(r).codegree; }
    [[nodiscard]] bool is_thin(RelationIndex r) const { return degree(r) == 1 && codegree(r) == 1; }

    /// Fibers ordered by their smallest point; each fiber is sorted.
    [[nodiscard]] const std::vector<std::vector<Point>> &fibers() const { return fibers_; }
    [[nodiscard]] const std::vector<Point> &fiber(FiberIndex x) const { return fibers_.at(x); }
    [[nodiscard]] FiberIndex fiber_of(Point u) const { return fiber_of_[u]; }
    /// The relation Delta_X of fiber X.
    [[nodiscard]] RelationIndex diagonal_relation(FiberIndex x) const { return diagonal_.at(x); }
    /// Relations contained in X x Y, in increasing index order.
    [[nodiscard]] const std::vector<RelationIndex> &relations_between(FiberIndex x, FiberIndex y) const
    {
        return blocks_.at(x * fibers_.size() + y);
    }

    [[nodiscard]] const IntersectionTensor &tensor() const { return tensor_; }

    friend bool operator==(const Scheme &a, const Scheme &b)
    {
        return a.n_ == b.n_ && a.colors_ == b.colors_;
    }

private:
    friend Scheme verify_scheme(const RawMatrix &);

    std::size_t n_ = 0;
    std::vector<std::uint32_t> colors_;
    std::vector<RelationIndex> transpose_;
    std::vector<RelationMeta> meta_;
    std::vector<std::vector<Point>> fibers_;
    std::vector<FiberIndex> fiber_of_;
    std::vector<RelationIndex> diagonal_;
    std::vector<std::vector<RelationIndex>> blocks_;
    IntersectionTensor tensor_;
};

/// Checks (C1)-(C4) on a color matrix and returns the scheme with all
/// relation metadata and the full intersection tensor. Relation indices are
/// the input colors. Throws VerificationError naming the first failed axiom.
[[nodiscard]] Scheme verify_scheme(const RawMatrix &colors);

/// c_{RS}^T; zero for triples whose fibers do not chain.
[[nodiscard]] std::uint32_t intersection_number(const Scheme &s, const RelationHandle &r,
                                                const RelationHandle &s_rel, const RelationHandle &t);

/// {T : c_{RS}^T > 0}. Throws IncompatibleRelations unless target(R) = source(S).
[[nodiscard]] std::vector<RelationHandle> complex_product(const Scheme &s, const RelationHandle &r,
                                                          const RelationHandle &s_rel);

/// The multiset d_{X,Y}, sorted ascending.
[[nodiscard]] std::vector<std::size_t> degree_multiset(const Scheme &s, FiberIndex x, FiberIndex y);

/// Recomputes every c_{RS}^T by averaging path counts over all pairs of T.
/// Shares no code with verify_scheme; used as an oracle.
[[nodiscard]] IntersectionTensor brute_force_tensor(const Scheme &s);

/// Renumbers colors by (source fiber, target fiber, first occurrence in a
/// row-major scan). The input must already describe a fiber structure.
[[nodiscard]] RawMatrix canonical_relabel(const RawMatrix &colors);

}  // namespace coco
