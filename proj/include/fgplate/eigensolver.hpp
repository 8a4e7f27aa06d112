#pragma once

#include "fgplate/assembly.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace fgplate {

/// Lowest eigenpairs of K x = lambda M x, ascending, M-orthonormal vectors.
struct EigenPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    int iterations = 0;
    double max_residual = 0.0;  // max_i |K x - lambda M x| / |K x|
};

struct SubspaceOptions {
    double residual_tolerance = 1e-10;
    int max_iterations = 400;
    int guard_vectors = 8;  // extra subspace vectors beyond the requested count
};

/**
 * Shift-invert (shift zero) subspace iteration with Rayleigh-Ritz
 * projection for symmetric sparse pencils.
 *
 * The symbolic factorisation is done once for the shared assembly pattern;
 * every solve() refactorises numerically. The last subspace is kept and
 * reused as the starting block of the next solve, which makes the repeated
 * solves of a direct iteration cheap.
 */
class SubspaceEigenSolver {
public:
    explicit SubspaceEigenSolver(const SparseMatrix& pattern, SubspaceOptions options = {});

    EigenPairs solve(const SparseMatrix& stiffness, const SparseMatrix& mass, int count);

    /// Drop the stored subspace; the next solve starts from the fixed seed.
    void reset() { subspace_.resize(0, 0); }
    void seed(const Eigen::MatrixXd& block) { subspace_ = block; }

private:
    SubspaceOptions options_;
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> factor_;
    Eigen::MatrixXd subspace_;
};

/// Dense generalized solve through a Cholesky factor of M; reference path.
EigenPairs dense_eigenpairs(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass,
                            int count);

}  // namespace fgplate
