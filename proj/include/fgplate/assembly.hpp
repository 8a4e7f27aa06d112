#pragma once

#include "fgplate/element.hpp"
#include "fgplate/mesh.hpp"

#include <Eigen/Sparse>

#include <array>
#include <exception>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fgplate {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

enum class BoundaryCondition { SimplySupported, Clamped };

/// "SSSS" or "CCCC" (case-insensitive); anything else is a ConfigError.
BoundaryCondition parse_boundary_condition(std::string_view tag);
std::string to_string(BoundaryCondition bc);

/**
 * Global DOF numbering after constraint elimination.
 *
 * Nodes on the oblique edges of a skew plate carry their in-plane and
 * rotation DOFs in the edge frame (normal, tangential) so that boundary
 * conditions apply directly; all other nodes use the global frame.
 */
struct DofMap {
    int node_count = 0;
    int free_count = 0;
    double skew = 0.0;
    std::vector<int> free_index;  // 5 * node + dof -> free row, or -1 if constrained
    std::vector<bool> rotated;    // per node

    int index(int node, int dof) const { return free_index[kDofsPerNode * node + dof]; }
};

/// Simply supported: u_n = w = theta_t = 0 on every edge (immovable normal
/// in-plane motion). Clamped: all five DOFs fixed on every edge.
DofMap apply_boundary_conditions(const Mesh& mesh, BoundaryCondition bc);

/// T^T K T and T^T f for the element transformation of the flagged nodes.
ElementMatrix skew_transform(const ElementMatrix& k, const std::array<bool, kNodesPerElement>& rotated,
                             double psi);
ElementVector skew_transform(const ElementVector& f, const std::array<bool, kNodesPerElement>& rotated,
                             double psi);

/**
 * Scatter of element contributions into the reduced global system.
 *
 * Element matrices are produced in the global frame, rotated to the edge
 * frame where needed and scatter-added in fixed element order, so the result
 * does not depend on how element kernels were scheduled. All matrices share
 * one sparsity pattern (the full element connectivity) so they can be added
 * without re-analysis.
 */
class Assembler {
public:
    Assembler(const Mesh& mesh, const DofMap& dofs);

    int free_count() const { return free_count_; }
    const SparseMatrix& pattern() const { return pattern_; }

    SparseMatrix assemble(const std::vector<ElementMatrix>& element_matrices) const;
    Eigen::VectorXd assemble(const std::vector<ElementVector>& element_vectors) const;

    /// Evaluates kernel(e) for every element (OpenMP-parallel when not
    /// already inside a parallel region) and assembles the result.
    template <typename Kernel>
    SparseMatrix assemble_with(Kernel&& kernel) const {
        std::vector<ElementMatrix> buffer(element_count_);
        run_elements([&](int e) { buffer[e] = kernel(e); });
        return assemble(buffer);
    }

    template <typename Kernel>
    Eigen::VectorXd assemble_vector_with(Kernel&& kernel) const {
        std::vector<ElementVector> buffer(element_count_);
        run_elements([&](int e) { buffer[e] = kernel(e); });
        return assemble(buffer);
    }

    /// Element DOF vector in the global frame from a reduced vector.
    ElementVector gather(const Eigen::VectorXd& reduced, int element) const;

    /// Full 5*nodes vector in the global frame (constrained entries zero).
    Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;

    template <typename Body>
    void run_elements(Body&& body) const {
        std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (parallel_allowed())
        for (int e = 0; e < element_count_; ++e) {
            try {
                body(e);
            } catch (...) {
#pragma omp critical(fgplate_assembly_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

private:
    static bool parallel_allowed() {
#ifdef _OPENMP
        return !omp_in_parallel();
#else
        return false;
#endif
    }

    int element_count_ = 0;
    int free_count_ = 0;
    double skew_ = 0.0;
    std::vector<std::array<int, kElementDofs>> element_dofs_;  // free index or -1
    std::vector<std::array<bool, kNodesPerElement>> rotated_;
    std::vector<bool> has_rotation_;
    std::vector<std::vector<int>> slots_;  // element-local (i,j) -> value index, -1 if dropped
    SparseMatrix pattern_;
    std::vector<std::array<int, kNodesPerElement>> connectivity_;
};

/// Straightforward serial triplet assembly; kept as the reference the
/// parallel path is tested against.
SparseMatrix assemble_reference(const Mesh& mesh, const DofMap& dofs,
                                const std::function<ElementMatrix(int)>& kernel);

}  // namespace fgplate
