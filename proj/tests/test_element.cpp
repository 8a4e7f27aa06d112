#include "fgplate/assembly.hpp"
#include "fgplate/element.hpp"
#include "fgplate/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fgplate;

namespace {

NodeCoords parallelogram(double a, double b, double psi, Eigen::Vector2d origin = {0, 0}) {
    NodeCoords nodes;
    const auto& ref = reference_nodes();
    for (int i = 0; i < kNodesPerElement; ++i) {
        const double s = 0.5 * (ref[i].x() + 1.0);
        const double t = 0.5 * (ref[i].y() + 1.0);
        const double y = t * b * std::cos(psi);
        nodes[i] = origin + Eigen::Vector2d(s * a + y * std::tan(psi), y);
    }
    return nodes;
}

double asymmetry(const ElementMatrix& m) { return (m - m.transpose()).norm() / m.norm(); }

// Strain energy of the von Karman plate by direct quadrature of the Green
// membrane strains, bending curvatures and consistent shear strains.
double strain_energy(const SectionProperties& sec, const ElementKinematics& kin,
                     const ElementVector& d) {
    double u = 0.0;
    const auto& quad = element_quadrature();
    for (int q = 0; q < 9; ++q) {
        const StrainOperators& op = kin[q];
        const Eigen::Vector2d slope = op.slope * d;
        Eigen::Vector3d eps = op.membrane * d;
        eps += 0.5 * Eigen::Vector3d(slope.x() * slope.x(), slope.y() * slope.y(),
                                     2.0 * slope.x() * slope.y());
        const Eigen::Vector3d kappa = op.bending * d;
        const Eigen::Vector2d gamma = op.shear * d;
        const double density = eps.dot(sec.A * eps) + 2.0 * eps.dot(sec.B * kappa) +
                               kappa.dot(sec.D * kappa) + gamma.dot(sec.shear * gamma);
        u += 0.5 * density * op.det_jacobian * quad[q].weight;
    }
    return u;
}

}  // namespace

TEST(Element, ShapeFunctionsAreNodalAndPartitionUnity) {
    const auto& ref = reference_nodes();
    for (int i = 0; i < kNodesPerElement; ++i) {
        const ShapeFunctions n = shape_functions(ref[i].x(), ref[i].y());
        for (int j = 0; j < kNodesPerElement; ++j) EXPECT_NEAR(n.values[j], i == j ? 1.0 : 0.0, 1e-15);
    }
    const ShapeFunctions n = shape_functions(0.3, -0.7);
    EXPECT_NEAR(n.values.sum(), 1.0, 1e-15);
    EXPECT_NEAR(n.derivatives.col(0).sum(), 0.0, 1e-15);
    EXPECT_NEAR(n.derivatives.col(1).sum(), 0.0, 1e-15);
}

TEST(Element, SubstituteFunctionsReproduceConstants) {
    for (double xi : {-0.8, 0.0, 0.45})
        for (double eta : {-0.2, 0.9}) {
            const SubstituteShapeFunctions s = substitute_shape_functions(xi, eta);
            EXPECT_NEAR(s.along_xi.sum(), 1.0, 1e-13);
            EXPECT_NEAR(s.along_eta.sum(), 1.0, 1e-13);
        }
}

TEST(Element, InvertedElementRejected) {
    NodeCoords nodes = parallelogram(1.0, 1.0, 0.0);
    std::swap(nodes[1], nodes[3]);
    std::swap(nodes[4], nodes[7]);
    std::swap(nodes[5], nodes[6]);
    EXPECT_THROW(strain_operators(nodes, 0.0, 0.0), GeometryError);
}

TEST(Element, PureBendingPatchHasNoShearEnergy) {
    const NodeCoords nodes = parallelogram(2.0, 2.0, 0.0);
    const SectionProperties sec = section_properties(si3n4_sus304(), 0.01, 0.0, ThermalState::ambient());
    // w = x^2 / 2, theta_x = -x: constant curvature with vanishing shear
    ElementVector d = ElementVector::Zero();
    for (int i = 0; i < kNodesPerElement; ++i) {
        const double x = nodes[i].x();
        d[kDofsPerNode * i + kW] = 0.5 * x * x;
        d[kDofsPerNode * i + kThetaX] = -x;
    }
    const LinearElementMatrices m = element_linear(sec, nodes);
    const double bending = d.dot(m.stiffness * d);
    const double shear = d.dot(m.shear_stiffness * d);
    EXPECT_GT(bending, 0.0);
    EXPECT_LT(std::abs(shear), 1e-10 * bending);
}

TEST(Element, RigidBodyMotionIsStrainFree) {
    const NodeCoords nodes = parallelogram(1.0, 0.7, 0.4);
    const SectionProperties sec = section_properties(si3n4_sus304(), 0.05, 2.0, ThermalState::ambient());
    ElementVector d = ElementVector::Zero();
    for (int i = 0; i < kNodesPerElement; ++i) {
        d[kDofsPerNode * i + kU] = 0.3 - 0.2 * nodes[i].y();
        d[kDofsPerNode * i + kV] = -0.1 + 0.2 * nodes[i].x();
        d[kDofsPerNode * i + kW] = 0.05;
    }
    const LinearElementMatrices m = element_linear(sec, nodes);
    EXPECT_LT((m.stiffness * d).norm(), 1e-6 * m.stiffness.norm() * d.norm());
    EXPECT_LT((m.shear_stiffness * d).norm(), 1e-6 * m.shear_stiffness.norm() * d.norm());
}

TEST(Element, LinearMatricesSymmetric) {
    const NodeCoords nodes = parallelogram(0.8, 0.6, 0.5);
    const SectionProperties sec =
        section_properties(si3n4_sus304(), 0.04, 2.0, ThermalState{600.0, 300.0, 300.0});
    const LinearElementMatrices m = element_linear(sec, nodes);
    EXPECT_LE(asymmetry(m.stiffness), 1e-12);
    EXPECT_LE(asymmetry(m.shear_stiffness), 1e-12);
    EXPECT_LE(asymmetry(m.mass), 1e-12);
}

TEST(Element, ZeroDisplacementGivesZeroNonlinearMatrices) {
    const NodeCoords nodes = parallelogram(1.0, 1.0, 0.0);
    const SectionProperties sec = section_properties(si3n4_sus304(), 0.1, 1.0, ThermalState::ambient());
    const NonlinearElementMatrices nl = element_nonlinear(sec, nodes, ElementVector::Zero());
    EXPECT_EQ(nl.n1.norm(), 0.0);
    EXPECT_EQ(nl.n2.norm(), 0.0);
}

TEST(Element, EnergyIdentityOverRandomDraws) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> kd(0.0, 10.0);
    std::uniform_real_distribution<double> angle(0.0, 0.8);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const NodeCoords nodes = parallelogram(0.5 + 0.5 * std::abs(unit(rng)),
                                               0.5 + 0.5 * std::abs(unit(rng)), angle(rng));
        const double h = 0.02 + 0.05 * std::abs(unit(rng));
        const SectionProperties sec = section_properties(si3n4_sus304(), h, kd(rng), ThermalState::ambient());
        const ElementKinematics kin = element_kinematics(nodes);
        ElementVector d;
        for (int i = 0; i < kElementDofs; ++i) d[i] = 1e-3 * unit(rng);
        const LinearElementMatrices lin = element_linear(sec, nodes);
        const NonlinearElementMatrices nl = element_nonlinear(sec, kin, d);
        const double quadratic = d.dot((0.5 * lin.stiffness + nl.n1 / 6.0 + nl.n2 / 12.0 +
                                        0.5 * lin.shear_stiffness) * d);
        const double direct = strain_energy(sec, kin, d);
        worst = std::max(worst, std::abs(quadratic - direct) / std::abs(direct));
    }
    EXPECT_LE(worst, 1e-8);
}

TEST(Element, NonlinearMatricesHomogeneous) {
    const NodeCoords nodes = parallelogram(1.0, 0.8, 0.3);
    const SectionProperties sec = section_properties(si3n4_sus304(), 0.05, 2.0, ThermalState::ambient());
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    ElementVector d;
    for (int i = 0; i < kElementDofs; ++i) d[i] = 1e-2 * unit(rng);
    const double c = 2.7;
    const NonlinearElementMatrices one = element_nonlinear(sec, nodes, d);
    const NonlinearElementMatrices scaled = element_nonlinear(sec, nodes, c * d);
    EXPECT_LT((scaled.n1 - c * one.n1).norm(), 1e-12 * scaled.n1.norm());
    EXPECT_LT((scaled.n2 - c * c * one.n2).norm(), 1e-12 * scaled.n2.norm());
    EXPECT_LE(asymmetry(one.n1), 1e-12);
    EXPECT_LE(asymmetry(one.n2), 1e-12);
}

TEST(Element, GeometricStiffnessVanishesWithoutPrestress) {
    const NodeCoords nodes = parallelogram(1.0, 1.0, 0.0);
    EXPECT_EQ(element_geometric(nodes, Eigen::Vector3d::Zero(), 0.1).norm(), 0.0);
}

TEST(Element, CompressiveGeometricStiffnessNegativeSemidefinite) {
    const NodeCoords nodes = parallelogram(1.0, 1.0, 0.0);
    const ElementMatrix kg = element_geometric(nodes, Eigen::Vector3d(-1e5, -1e5, 0.0), 0.1);
    EXPECT_LE(asymmetry(kg), 1e-12);
    const Eigen::SelfAdjointEigenSolver<ElementMatrix> eig(kg);
    EXPECT_LE(eig.eigenvalues().maxCoeff(), 1e-10 * kg.norm());
    EXPECT_LT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Element, EdgeRotationPreservesSpectrum) {
    const NodeCoords nodes = parallelogram(1.0, 1.0, 0.5);
    const SectionProperties sec = section_properties(si3n4_sus304(), 0.1, 1.0, ThermalState::ambient());
    const ElementMatrix k = element_linear(sec, nodes).stiffness;
    std::array<bool, kNodesPerElement> rotated{};
    rotated[0] = rotated[3] = rotated[7] = true;
    const ElementMatrix t = element_transformation(rotated, 0.5);
    EXPECT_LT((t.transpose() * t - ElementMatrix::Identity()).norm(), 1e-14);
    const ElementMatrix kt = skew_transform(k, rotated, 0.5);
    const Eigen::VectorXd e1 = Eigen::SelfAdjointEigenSolver<ElementMatrix>(k).eigenvalues();
    const Eigen::VectorXd e2 = Eigen::SelfAdjointEigenSolver<ElementMatrix>(kt).eigenvalues();
    EXPECT_LT((e1 - e2).norm(), 1e-10 * e1.norm());
}

TEST(Element, ZeroAngleRotationIsIdentity) {
    std::array<bool, kNodesPerElement> rotated;
    rotated.fill(true);
    EXPECT_LT((element_transformation(rotated, 0.0) - ElementMatrix::Identity()).norm(), 1e-15);
}
