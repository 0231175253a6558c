#pragma once

#include "coco/io.hpp"
#include "coco/scheme.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coco {

class ConstructionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// The design input is not a symmetric 2-design with all eight derived
/// relations nonempty.
class NotASymmetricDesign : public ConstructionError
{
public:
    using ConstructionError::ConstructionError;
};

class UnknownFixture : public ConstructionError
{
public:
    using ConstructionError::ConstructionError;
};

/// T_n: every pair is its own relation, colored u*n+v.
[[nodiscard]] Scheme trivial_scheme(std::size_t n);

/// Points (u1,u2) are numbered u1*|V_b|+u2; relation R1 (x) R2 gets color
/// R1*|R_b|+R2.
[[nodiscard]] Scheme tensor_product(const Scheme &a, const Scheme &b);

/// Points of the chosen fibers, ascending. Relations keep their relative
/// order.
[[nodiscard]] Scheme restriction(const Scheme &s, const std::vector<FiberIndex> &fibers);

/// Sorted point list of the union of the given fibers; the i-th point of
/// restriction(s, fibers) is the i-th entry.
[[nodiscard]] std::vector<Point> union_points(const Scheme &s, const std::vector<FiberIndex> &fibers);

/// Points of a, then points of b; one relation on each cross fiber pair.
/// Relations are numbered canonically (see canonical_relabel).
[[nodiscard]] Scheme internal_direct_sum(const Scheme &a, const Scheme &b);

/// Points then blocks, with the eight relations in the order
/// Delta_X, Delta_B, X^2 - Delta_X, B^2 - Delta_B, I, I^t, (X x B) - I, its transpose.
[[nodiscard]] Scheme design_scheme(const DesignInput &design);

/// Orbits of the generated group on pairs, numbered by their least pair in
/// row-major order.
[[nodiscard]] Scheme two_orbit_scheme(const PermutationGroupInput &group);

/// "as16-122-fission" or "fano-design".
[[nodiscard]] Scheme load_fixture(std::string_view name);
[[nodiscard]] std::vector<std::string> fixture_names();

/// Incidence of the Fano plane, lines {i, i+1, i+3} mod 7.
[[nodiscard]] DesignInput fano_plane();

}  // namespace coco
