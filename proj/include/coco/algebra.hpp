#pragma once

#include "coco/scheme.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace coco {

class AlgebraError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Every generic central element tried had colliding eigenvalues.
class NumericalDegeneracy : public AlgebraError
{
public:
    using AlgebraError::AlgebraError;
};

/// A trace or rank that must be an integer was not, within tolerance.
class NonIntegralInvariant : public AlgebraError
{
public:
    using AlgebraError::AlgebraError;
};

/// Two routes to the same count disagreed.
class ConsistencyFailure : public AlgebraError
{
public:
    using AlgebraError::AlgebraError;
};

struct AlgebraOptions
{
    std::uint64_t seed = 20100601;
    double eigencluster_tol = 1e-7;  // absolute, after scaling to unit spectral radius
    double rank_tol = 1e-8;          // relative to the largest singular value
    double idempotency_tol = 1e-8;   // residual bound on P^2-P, P_iP_j, [P,A_R]
    double integrality_tol = 1e-6;
    double support_tol = 1e-6;       // ||P I_X|| above this puts X in Supp(P)
    int retries = 5;
};

struct Idempotent
{
    Eigen::MatrixXcd matrix;
    std::size_t degree = 0;        // n_P
    std::size_t multiplicity = 0;  // m_P
    std::vector<FiberIndex> support;
};

struct DecompositionResiduals
{
    double idempotency = 0;
    double orthogonality = 0;
    double centrality = 0;
    double completeness = 0;  // ||sum P - I||
    double trace_integrality = 0;
    double rank_gap = 0;  // worst distance of a projector eigenvalue from {0,1}
};

/// The central primitive idempotents of the adjacency algebra. The
/// principal idempotent sum_X J_X/|X| is always first.
struct IdempotentDecomposition
{
    std::vector<Idempotent> idempotents;
    std::size_t principal_index = 0;
    std::size_t center_dimension = 0;
    int attempts = 0;
    DecompositionResiduals residuals;

    [[nodiscard]] std::size_t size() const { return idempotents.size(); }
};

/// Dimension of the center Z(A), by exact rational elimination of
/// [Z, A_R] = 0 over span{A_R}.
[[nodiscard]] std::size_t center_dimension(const Scheme &s);

/// The adjacency matrix A_R as a dense real matrix.
[[nodiscard]] Eigen::MatrixXd adjacency_matrix(const Scheme &s, RelationIndex r);

/// Exact center basis, a generic Hermitian central element, eigenvalue
/// clustering and eigenprojections. Throws NumericalDegeneracy or
/// NonIntegralInvariant when no attempt yields a clean decomposition.
[[nodiscard]] IdempotentDecomposition central_primitive_idempotents(const Scheme &s,
                                                                    const AlgebraOptions &opts = {});

/// P I_U for U the union of the given fibers.
[[nodiscard]] Eigen::MatrixXcd restrict_idempotent(const Scheme &s, const IdempotentDecomposition &dec,
                                                   std::size_t p_index, const std::vector<FiberIndex> &fibers);

[[nodiscard]] std::vector<FiberIndex> support(const Scheme &s, const IdempotentDecomposition &dec,
                                              std::size_t p_index);

/// n_{P_U}: the degree of P I_U as a central idempotent of A_U. Zero when
/// P I_U vanishes.
[[nodiscard]] std::size_t restricted_degree(const Scheme &s, const IdempotentDecomposition &dec,
                                            std::size_t p_index, const std::vector<FiberIndex> &fibers,
                                            const AlgebraOptions &opts = {});

/// sum over P with X, Y in Supp(P) of n_{P_X} n_{P_Y}; throws
/// ConsistencyFailure unless it equals |R_{X,Y}|.
[[nodiscard]] std::size_t dim_A_XY(const Scheme &s, const IdempotentDecomposition &dec, FiberIndex x,
                                   FiberIndex y, const AlgebraOptions &opts = {});

/// sum_X J_X / |X|
[[nodiscard]] Eigen::MatrixXd principal_idempotent_matrix(const Scheme &s);

}  // namespace coco
