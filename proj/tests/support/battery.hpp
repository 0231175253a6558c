#pragma once

#include "coco/constructors.hpp"
#include "coco/io.hpp"
#include "coco/scheme.hpp"

#include <string>
#include <vector>

namespace coco::testing {

struct NamedScheme
{
    std::string name;
    Scheme scheme;
};

inline PermutationGroupInput cyclic_regular(std::size_t n)
{
    PermutationGroupInput g{n, {std::vector<std::size_t>(n)}};
    for (std::size_t i = 0; i < n; ++i)
        g.generators[0][i] = (i + 1) % n;
    return g;
}

inline PermutationGroupInput symmetric3_natural()
{
    return {3, {{1, 0, 2}, {1, 2, 0}}};
}

// S3 on {0,1,2} and the 2-subsets {0,1}=3, {0,2}=4, {1,2}=5
inline PermutationGroupInput symmetric3_points_and_pairs()
{
    return {6, {{1, 0, 2, 3, 5, 4}, {1, 2, 0, 5, 3, 4}}};
}

inline PermutationGroupInput dihedral5()
{
    return {5, {{1, 2, 3, 4, 0}, {0, 4, 3, 2, 1}}};
}

inline Scheme fano()
{
    return design_scheme(fano_plane());
}

/// Fixtures, T_1..T_5, Fano, Fano (x) T_2, Fano [+] T_1, Fano [+] T_3 and
/// 2-orbit schemes of four small groups.
inline const std::vector<NamedScheme> &battery()
{
    static const std::vector<NamedScheme> all = [] {
        std::vector<NamedScheme> out;
        out.push_back({"fixture as16-122-fission", load_fixture("as16-122-fission")});
        out.push_back({"fixture fano-design", load_fixture("fano-design")});
        for (std::size_t n = 1; n <= 5; ++n)
            out.push_back({"T" + std::to_string(n), trivial_scheme(n)});
        out.push_back({"Fano", fano()});
        out.push_back({"Fano x T2", tensor_product(fano(), trivial_scheme(2))});
        out.push_back({"Fano + T1", internal_direct_sum(fano(), trivial_scheme(1))});
        out.push_back({"Fano + T3", internal_direct_sum(fano(), trivial_scheme(3))});
        out.push_back({"2-orbit Z7", two_orbit_scheme(cyclic_regular(7))});
        out.push_back({"2-orbit S3", two_orbit_scheme(symmetric3_natural())});
        out.push_back({"2-orbit S3 points+pairs", two_orbit_scheme(symmetric3_points_and_pairs())});
        out.push_back({"2-orbit D5", two_orbit_scheme(dihedral5())});
        return out;
    }();
    return all;
}

}  // namespace coco::testing
