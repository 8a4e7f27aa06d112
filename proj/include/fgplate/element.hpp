#pragma once

#include "fgplate/material.hpp"

#include <Eigen/Dense>

#include <array>

namespace fgplate {

/**
 * Eight-noded serendipity plate element (QUAD-8) with five degrees of
 * freedom per node.
 *
 * Node numbering in natural coordinates, corners first then midsides:
 *
 *   4 (-1,+1) --- 7 ( 0,+1) --- 3 (+1,+1)
 *       |                           |
 *   8 (-1, 0)                   6 (+1, 0)
 *       |                           |
 *   1 (-1,-1) --- 5 ( 0,-1) --- 2 (+1,-1)
 *
 * Element DOF vector: node-major, (u0, v0, w0, theta_x, theta_y) per node,
 * so DOF `f` of local node `i` sits at 5*i + f.
 *
 * Kinematics: u = u0 + z theta_x, v = v0 + z theta_y, w = w0. Transverse
 * shear strains are gamma = theta + grad w. The rotation part of each
 * covariant shear component is interpolated with substitute (projected)
 * shape functions so that it lives in the same polynomial space as the
 * matching w derivative; this removes shear locking in the thin limit.
 */
constexpr int kNodesPerElement = 8;
constexpr int kDofsPerNode = 5;
constexpr int kElementDofs = kNodesPerElement * kDofsPerNode;

enum NodalDof : int { kU = 0, kV = 1, kW = 2, kThetaX = 3, kThetaY = 4 };

using ElementMatrix = Eigen::Matrix<double, kElementDofs, kElementDofs>;
using ElementVector = Eigen::Matrix<double, kElementDofs, 1>;
using NodeCoords = std::array<Eigen::Vector2d, kNodesPerElement>;
using ShapeVector = Eigen::Matrix<double, kNodesPerElement, 1>;

/// Natural coordinates of the eight nodes.
const std::array<Eigen::Vector2d, kNodesPerElement>& reference_nodes();

struct ShapeFunctions {
    ShapeVector values;
    Eigen::Matrix<double, kNodesPerElement, 2> derivatives;  // d/dxi, d/deta
};

ShapeFunctions shape_functions(double xi, double eta);

/// Consistent interpolants for the rotation terms of the covariant shear
/// strains. `along_xi` is the L2 projection of each serendipity function onto
/// span{1, xi, eta, xi*eta, eta^2} (the space of w_,xi); `along_eta` onto
/// span{1, xi, eta, xi*eta, xi^2} (the space of w_,eta).
struct SubstituteShapeFunctions {
    ShapeVector along_xi;
    ShapeVector along_eta;
};

SubstituteShapeFunctions substitute_shape_functions(double xi, double eta);

/// Strain-displacement operators at one point of an element.
struct StrainOperators {
    Eigen::Matrix<double, 3, kElementDofs> membrane;   // (u_x, v_y, u_y + v_x)
    Eigen::Matrix<double, 3, kElementDofs> bending;    // (tx_x, ty_y, tx_y + ty_x)
    Eigen::Matrix<double, 2, kElementDofs> shear;      // (tx + w_x, ty + w_y), consistent
    Eigen::Matrix<double, 2, kElementDofs> slope;      // (w_x, w_y)
    Eigen::Matrix<double, 2, kElementDofs> grad_theta_x;
    Eigen::Matrix<double, 2, kElementDofs> grad_theta_y;
    ShapeVector values;
    double det_jacobian = 0.0;
};

/// Throws GeometryError if the Jacobian is not positive at (xi, eta).
StrainOperators strain_operators(const NodeCoords& nodes, double xi, double eta);

/// 3x3 Gauss points and weights on the reference square.
struct ElementQuadraturePoint {
    double xi;
    double eta;
    double weight;
};
const std::array<ElementQuadraturePoint, 9>& element_quadrature();

/// Strain operators at all nine quadrature points of one element.
using ElementKinematics = std::array<StrainOperators, 9>;
ElementKinematics element_kinematics(const NodeCoords& nodes);

struct LinearElementMatrices {
    ElementMatrix stiffness;        // membrane + coupling + bending
    ElementMatrix shear_stiffness;  // N3
    ElementMatrix mass;
    ElementVector thermal_load;
};

LinearElementMatrices element_linear(const SectionProperties& section, const NodeCoords& nodes);

struct NonlinearElementMatrices {
    ElementMatrix n1;  // linear in delta
    ElementMatrix n2;  // quadratic in delta
};

/// Incremental nonlinear stiffness matrices of the von Karman membrane
/// strains, built so that the strain energy is
///   delta^T [K/2 + N1/6 + N2/12 + N3/2] delta.
NonlinearElementMatrices element_nonlinear(const SectionProperties& section,
                                           const NodeCoords& nodes, const ElementVector& delta);
NonlinearElementMatrices element_nonlinear(const SectionProperties& section,
                                           const ElementKinematics& kinematics,
                                           const ElementVector& delta);

/// In-plane resultants (Nxx, Nyy, Nxy) at each quadrature point.
using PointResultants = std::array<Eigen::Vector3d, 9>;

/// N = A eps_p + B eps_b - N^T at the quadrature points for displacement delta.
PointResultants membrane_resultants(const SectionProperties& section, const NodeCoords& nodes,
                                    const ElementVector& delta);
PointResultants membrane_resultants(const SectionProperties& section,
                                    const ElementKinematics& kinematics,
                                    const ElementVector& delta);

/// Geometric stiffness of an in-plane pre-stress, including the rotation
/// gradient terms weighted by h^2/12.
ElementMatrix element_geometric(const NodeCoords& nodes, const PointResultants& prestress,
                                double thickness);
ElementMatrix element_geometric(const NodeCoords& nodes, const Eigen::Vector3d& prestress,
                                double thickness);
ElementMatrix element_geometric(const ElementKinematics& kinematics,
                                const PointResultants& prestress, double thickness);

/// Block-diagonal nodal rotation (u, v) and (theta_x, theta_y) by angle psi
/// for the flagged nodes: d_global = T d_local.
ElementMatrix element_transformation(const std::array<bool, kNodesPerElement>& rotated,
                                     double psi);

}  // namespace fgplate
