#include "coco/scheme.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace coco {

IntersectionTensor::IntersectionTensor(std::vector<std::vector<Entry>> by_target) :
    by_target_(std::move(by_target))
{
    for (auto &row : by_target_)
        std::sort(row.begin(), row.end(), [](const Entry &a, const Entry &b) {
            return std::tie(a.left, a.right) < std::tie(b.left, b.right);
        });
}

std::uint32_t IntersectionTensor::get(RelationIndex r, RelationIndex s, RelationIndex t) const
{
    if (t >= by_target_.size())
        return 0;
    const auto &row = by_target_[t];
    auto it = std::lower_bound(row.begin(), row.end(), std::pair{r, s}, [](const Entry &e, const auto &key) {
        return std::tie(e.left, e.right) < std::tie(key.first, key.second);
    });
    if (it != row.end() && it->left == r && it->right == s)
        return it->value;
    return 0;
}

std::size_t IntersectionTensor::nonzero_count() const
{
    std::size_t total = 0;
    for (const auto &row : by_target_)
        total += row.size();
    return total;
}

const char *to_string(VerifyErrorKind kind)
{
    switch (kind) {
    case VerifyErrorKind::EmptyMatrix: return "EmptyMatrix";
    case VerifyErrorKind::NonSquare: return "NonSquare";
    case VerifyErrorKind::NonContiguousColors: return "NonContiguousColors";
    case VerifyErrorKind::DiagonalNotFiberUnion: return "DiagonalNotFiberUnion";
    case VerifyErrorKind::TransposeNotClosed: return "TransposeNotClosed";
    case VerifyErrorKind::IntersectionNumberNotConstant: return "IntersectionNumberNotConstant";
    }
    return "unknown";
}

VerificationError::VerificationError(VerifyErrorKind kind, const std::string &detail,
                                     std::optional<ConstancyWitness> witness) :
    std::runtime_error(std::string(to_string(kind)) + ": " + detail),
    kind_(kind),
    witness_(std::move(witness))
{
}

RawMatrix Scheme::to_raw() const
{
    RawMatrix out(n_, std::vector<std::int64_t>(n_));
    for (Point u = 0; u < n_; ++u)
        for (Point v = 0; v < n_; ++v)
            out[u][v] = colors_[u * n_ + v];
    return out;
}

RelationHandle Scheme::handle(RelationIndex r) const
{
    const auto &m = meta(r);
    return {r, m.source_fiber, m.target_fiber};
}

namespace {

void check_shape(const RawMatrix &colors)
{
    if (colors.empty())
        throw VerificationError(VerifyErrorKind::EmptyMatrix, "matrix has no rows");
    const auto n = colors.size();
    for (std::size_t u = 0; u < n; ++u)
        if (colors[u].size() != n) {
            std::ostringstream msg;
            msg << "row " << u << " has " << colors[u].size() << " entries, expected " << n;
            throw VerificationError(VerifyErrorKind::NonSquare, msg.str());
        }
}

std::size_t check_contiguous(const RawMatrix &colors)
{
    std::int64_t max_color = -1;
    for (const auto &row : colors)
        for (auto c : row) {
            if (c < 0)
                throw VerificationError(VerifyErrorKind::NonContiguousColors,
                                        "negative color " + std::to_string(c));
            max_color = std::max(max_color, c);
        }
    const auto k = static_cast<std::size_t>(max_color + 1);
    if (k > colors.size() * colors.size())
        throw VerificationError(VerifyErrorKind::NonContiguousColors,
                                "color " + std::to_string(max_color) + " exceeds the number of pairs");
    std::vector<bool> used(k, false);
    for (const auto &row : colors)
        for (auto c : row)
            used[static_cast<std::size_t>(c)] = true;
    for (std::size_t c = 0; c < k; ++c)
        if (! used[c])
            throw VerificationError(VerifyErrorKind::NonContiguousColors,
                                    "color " + std::to_string(c) + " does not occur");
    return k;
}

// Groups points by their diagonal color; fibers ordered by smallest point.
std::vector<std::vector<Point>> fibers_from_diagonal(const RawMatrix &colors)
{
    const auto n = colors.size();
    std::map<std::int64_t, std::size_t> fiber_of_color;
    std::vector<std::vector<Point>> fibers;
    for (Point u = 0; u < n; ++u) {
        auto [it, inserted] = fiber_of_color.try_emplace(colors[u][u], fibers.size());
        if (inserted)
            fibers.emplace_back();
        fibers[it->second].push_back(u);
    }
    return fibers;
}

}  // namespace

Scheme verify_scheme(const RawMatrix &input)
{
    check_shape(input);
    const std::size_t k = check_contiguous(input);
    const std::size_t n = input.size();

    Scheme s;
    s.n_ = n;
    s.colors_.resize(n * n);
    for (Point u = 0; u < n; ++u)
        for (Point v = 0; v < n; ++v)
            s.colors_[u * n + v] = static_cast<std::uint32_t>(input[u][v]);
    auto col = [&](Point u, Point v) -> std::size_t { return s.colors_[u * n + v]; };

    // (C2): diagonal colors never appear off the diagonal.
    std::vector<bool> on_diagonal(k, false);
    for (Point u = 0; u < n; ++u)
        on_diagonal[col(u, u)] = true;
    for (Point u = 0; u < n; ++u)
        for (Point v = 0; v < n; ++v)
            if (u != v && on_diagonal[col(u, v)]) {
                std::ostringstream msg;
                msg << "diagonal color " << col(u, v) << " also occurs at (" << u << "," << v << ")";
                throw VerificationError(VerifyErrorKind::DiagonalNotFiberUnion, msg.str());
            }

    s.fibers_ = fibers_from_diagonal(input);
    s.fiber_of_.resize(n);
    s.diagonal_.resize(s.fibers_.size());
    for (FiberIndex x = 0; x < s.fibers_.size(); ++x) {
        s.diagonal_[x] = col(s.fibers_[x].front(), s.fibers_[x].front());
        for (auto u : s.fibers_[x])
            s.fiber_of_[u] = x;
    }

    // (C3)
    constexpr auto unset = static_cast<std::size_t>(-1);
    s.transpose_.assign(k, unset);
    for (Point u = 0; u < n; ++u)
        for (Point v = 0; v < n; ++v) {
            auto c = col(u, v), ct = col(v, u);
            if (s.transpose_[c] == unset)
                s.transpose_[c] = ct;
            else if (s.transpose_[c] != ct) {
                std::ostringstream msg;
                msg << "color " << c << " at (" << u << "," << v << ") is mirrored by " << ct
                    << ", but elsewhere by " << s.transpose_[c];
                throw VerificationError(VerifyErrorKind::TransposeNotClosed, msg.str());
            }
        }

    // (C4): every pair (u,v) of T must see the same multiset of
    // (color(u,w), color(w,v)) as the first pair of T in row-major order.
    std::vector<std::vector<std::uint64_t>> baseline(k);
    std::vector<std::pair<Point, Point>> first_pair(k, {unset, unset});
    std::vector<std::uint64_t> keys(n);
    for (Point u = 0; u < n; ++u)
        for (Point v = 0; v < n; ++v) {
            for (Point w = 0; w < n; ++w)
                keys[w] = static_cast<std::uint64_t>(col(u, w)) * k + col(w, v);
            std::sort(keys.begin(), keys.end());
            const auto t = col(u, v);
            if (first_pair[t].first == unset) {
                first_pair[t] = {u, v};
                baseline[t] = keys;
                continue;
            }
            if (keys == baseline[t])
                continue;

            auto count_of = [](const std::vector<std::uint64_t> &ks, std::uint64_t key) {
                auto [lo, hi] = std::equal_range(ks.begin(), ks.end(), key);
                return static_cast<std::size_t>(hi - lo);
            };
            const auto &base = baseline[t];
            auto mismatch = std::mismatch(base.begin(), base.end(), keys.begin());
            const auto key = std::min(*mismatch.first, *mismatch.second);
            ConstancyWitness w;
            w.r = static_cast<std::int64_t>(key / k);
            w.s = static_cast<std::int64_t>(key % k);
            w.t = static_cast<std::int64_t>(t);
            w.first = first_pair[t];
            w.second = {u, v};
            w.first_count = count_of(base, key);
            w.second_count = count_of(keys, key);
            std::ostringstream msg;
            msg << "c(" << w.r << "," << w.s << ";" << w.t << ") is " << w.first_count << " at (" << w.first.first
                << "," << w.first.second << ") but " << w.second_count << " at (" << u << "," << v << ")";
            throw VerificationError(VerifyErrorKind::IntersectionNumberNotConstant, msg.str(), w);
        }

    std::vector<std::vector<IntersectionTensor::Entry>> by_target(k);
    for (std::size_t t = 0; t < k; ++t) {
        const auto &base = baseline[t];
        for (std::size_t i = 0; i < base.size();) {
            std::size_t j = i;
            while (j < base.size() && base[j] == base[i])
                ++j;
            by_target[t].push_back({static_cast<RelationIndex>(base[i] / k), static_cast<RelationIndex>(base[i] % k),
                                    static_cast<std::uint32_t>(j - i)});
            i = j;
        }
    }
    s.tensor_ = IntersectionTensor(std::move(by_target));

    s.meta_.resize(k);
    for (std::size_t t = 0; t < k; ++t) {
        auto [u0, v0] = first_pair[t];
        auto &m = s.meta_[t];
        m.source_fiber = s.fiber_of_[u0];
        m.target_fiber = s.fiber_of_[v0];
        for (Point w = 0; w < n; ++w) {
            m.degree += col(u0, w) == t;
            m.codegree += col(w, v0) == t;
        }
        m.size = s.fibers_[m.source_fiber].size() * m.degree;
    }

    const auto f = s.fibers_.size();
    s.blocks_.assign(f * f, {});
    for (std::size_t t = 0; t < k; ++t)
        s.blocks_[s.meta_[t].source_fiber * f + s.meta_[t].target_fiber].push_back(t);

    return s;
}

std::uint32_t intersection_number(const Scheme &s, const RelationHandle &r, const RelationHandle &s_rel,
                                  const RelationHandle &t)
{
    if (r.target_fiber != s_rel.source_fiber || r.source_fiber != t.source_fiber ||
        s_rel.target_fiber != t.target_fiber)
        return 0;
    return s.tensor().get(r.index, s_rel.index, t.index);
}

std::vector<RelationHandle> complex_product(const Scheme &s, const RelationHandle &r, const RelationHandle &s_rel)
{
    if (r.target_fiber != s_rel.source_fiber)
        throw IncompatibleRelations("relation " + std::to_string(r.index) + " ends in fiber " +
                                    std::to_string(r.target_fiber) + " but relation " + std::to_string(s_rel.index) +
                                    " starts in fiber " + std::to_string(s_rel.source_fiber));
    std::vector<RelationHandle> out;
    for (auto t : s.relations_between(r.source_fiber, s_rel.target_fiber))
        if (s.tensor().get(r.index, s_rel.index, t) > 0)
            out.push_back(s.handle(t));
    return out;
}

std::vector<std::size_t> degree_multiset(const Scheme &s, FiberIndex x, FiberIndex y)
{
    std::vector<std::size_t> out;
    for (auto r : s.relations_between(x, y))
        out.push_back(s.degree(r));
    std::sort(out.begin(), out.end());
    return out;
}

IntersectionTensor brute_force_tensor(const Scheme &s)
{
    const auto n = s.point_count();
    const auto k = s.relation_count();
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::uint64_t> paths;
    std::vector<std::uint64_t> pair_count(k, 0);
    for (Point u = 0; u < n; ++u)
        for (Point v = 0; v < n; ++v) {
            const auto t = s.color(u, v);
            ++pair_count[t];
            for (Point w = 0; w < n; ++w)
                ++paths[{s.color(u, w), s.color(w, v), t}];
        }

    std::vector<std::vector<IntersectionTensor::Entry>> by_target(k);
    for (const auto &[key, total] : paths) {
        auto [r, sr, t] = key;
        // A non-integral average means the constant is not constant; report
        // it as a value that cannot match any verified tensor.
        const auto value = total % pair_count[t] == 0 ? total / pair_count[t] : UINT32_MAX;
        by_target[t].push_back({r, sr, static_cast<std::uint32_t>(value)});
    }
    return IntersectionTensor(std::move(by_target));
}

RawMatrix canonical_relabel(const RawMatrix &colors)
{
    const auto n = colors.size();
    const auto fibers = fibers_from_diagonal(colors);
    std::vector<std::size_t> fiber_of(n);
    for (std::size_t x = 0; x < fibers.size(); ++x)
        for (auto u : fibers[x])
            fiber_of[u] = x;

    // key: (source fiber, target fiber, first occurrence position)
    std::map<std::int64_t, std::tuple<std::size_t, std::size_t, std::size_t>> first_seen;
    for (Point u = 0; u < n; ++u)
        for (Point v = 0; v < n; ++v)
            first_seen.try_emplace(colors[u][v], fiber_of[u], fiber_of[v], u * n + v);

    std::vector<std::pair<std::tuple<std::size_t, std::size_t, std::size_t>, std::int64_t>> order;
    for (const auto &[c, key] : first_seen)
        order.emplace_back(key, c);
    std::sort(order.begin(), order.end());
    std::map<std::int64_t, std::int64_t> relabel;
    for (std::size_t i = 0; i < order.size(); ++i)
        relabel[order[i].second] = static_cast<std::int64_t>(i);

    RawMatrix out = colors;
    for (auto &row : out)
        for (auto &c : row)
            c = relabel.at(c);
    return out;
}

}  // namespace coco
