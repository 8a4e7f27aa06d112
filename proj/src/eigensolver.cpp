#include "fgplate/eigensolver.hpp"

#include "fgplate/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>
#include <cmath>
#include <limits>
#include <sstream>

namespace fgplate {

SubspaceEigenSolver::SubspaceEigenSolver(const SparseMatrix& pattern, SubspaceOptions options)
    : options_(options) {
    factor_.analyzePattern(pattern);
}

EigenPairs SubspaceEigenSolver::solve(const SparseMatrix& stiffness, const SparseMatrix& mass,
                                      int count) {
    const Eigen::Index n = stiffness.rows();
    if (count < 1 || count > n) throw NumericError("requested eigenpair count out of range");
    const Eigen::Index q = std::min<Eigen::Index>(n, count + options_.guard_vectors);

    factor_.factorize(stiffness);
    if (factor_.info() != Eigen::Success)
        throw NumericError("stiffness factorisation failed (singular or unstable system)");

    Eigen::MatrixXd x;
    if (subspace_.rows() == n && subspace_.cols() >= q) {
        x = subspace_.leftCols(q);
    } else {
        std::mt19937_64 rng(20240917ULL);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        x.resize(n, q);
        const Eigen::VectorXd diag = mass.diagonal();
        for (Eigen::Index j = 0; j < q; ++j)
            for (Eigen::Index i = 0; i < n; ++i) x(i, j) = diag[i] * (j == 0 ? 1.0 : dist(rng));
    }

    EigenPairs out;
    Eigen::VectorXd previous = Eigen::VectorXd::Constant(count, std::numeric_limits<double>::max());
    int stalled = 0;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> reduced;
    for (int it = 1; it <= options_.max_iterations; ++it) {
        const Eigen::MatrixXd mx = mass * x;
        const Eigen::MatrixXd y = factor_.solve(mx);
        Eigen::MatrixXd kr = y.transpose() * mx;
        Eigen::MatrixXd mr = y.transpose() * (mass * y);
        kr = 0.5 * (kr + kr.transpose()).eval();
        mr = 0.5 * (mr + mr.transpose()).eval();
        reduced.compute(kr, mr);
        if (reduced.info() != Eigen::Success)
            throw NumericError("Rayleigh-Ritz projection lost rank");
        x = y * reduced.eigenvectors();

        // Residuals of the wanted pairs.
        const Eigen::VectorXd& lambda = reduced.eigenvalues();
        const Eigen::MatrixXd lead = x.leftCols(count);
        const Eigen::MatrixXd k_lead = stiffness * lead;
        const Eigen::MatrixXd m_lead = mass * lead;
        double worst = 0.0;
        for (int i = 0; i < count; ++i) {
            const double knorm = k_lead.col(i).norm();
            const double r = (k_lead.col(i) - lambda[i] * m_lead.col(i)).norm();
            worst = std::max(worst, knorm > 0.0 ? r / knorm : r);
        }
        out.iterations = it;
        out.max_residual = worst;
        if (worst < options_.residual_tolerance) break;

        // Round-off floor: on badly scaled pencils (thin plates) the residual
        // stalls just above the tolerance while the Ritz values no longer move.
        double shift = 0.0;
        for (int i = 0; i < count; ++i)
            shift = std::max(shift, std::abs(lambda[i] - previous[i]) / std::abs(lambda[i]));
        previous = lambda.head(count);
        stalled = shift < 1e-13 ? stalled + 1 : 0;
        if (stalled >= 3 && worst < options_.residual_tolerance * 100.0) break;
    }
    if (out.max_residual >= options_.residual_tolerance * 100.0) {
        std::ostringstream msg;
        msg << "subspace iteration did not converge: residual " << out.max_residual << " after "
            << out.iterations << " iterations";
        throw NumericError(msg.str());
    }
    subspace_ = x;
    out.values = reduced.eigenvalues().head(count);
    out.vectors = x.leftCols(count);
    return out;
}

EigenPairs dense_eigenpairs(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass,
                            int count) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(stiffness, mass);
    if (solver.info() != Eigen::Success)
        throw NumericError("dense generalized eigensolve failed (indefinite mass?)");
    EigenPairs out;
    out.values = solver.eigenvalues().head(count);
    out.vectors = solver.eigenvectors().leftCols(count);
    out.iterations = 1;
    return out;
}

}  // namespace fgplate
