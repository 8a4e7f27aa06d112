#include "fgplate/element.hpp"

#include "fgplate/errors.hpp"

#include <cmath>
#include <sstream>

namespace fgplate {

const std::array<Eigen::Vector2d, kNodesPerElement>& reference_nodes() {
    static const std::array<Eigen::Vector2d, kNodesPerElement> nodes = {
        Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, -1), Eigen::Vector2d(1, 1),
        Eigen::Vector2d(-1, 1),  Eigen::Vector2d(0, -1), Eigen::Vector2d(1, 0),
        Eigen::Vector2d(0, 1),   Eigen::Vector2d(-1, 0)};
    return nodes;
}

ShapeFunctions shape_functions(double xi, double eta) {
    ShapeFunctions sf;
    const auto& ref = reference_nodes();
    for (int i = 0; i < 4; ++i) {
        const double xi_i = ref[i].x();
        const double eta_i = ref[i].y();
        const double a = 1.0 + xi * xi_i;
        const double b = 1.0 + eta * eta_i;
        const double c = xi * xi_i + eta * eta_i - 1.0;
        sf.values[i] = 0.25 * a * b * c;
        sf.derivatives(i, 0) = 0.25 * xi_i * b * (c + a);
        sf.derivatives(i, 1) = 0.25 * eta_i * a * (c + b);
    }
    for (int i = 4; i < 8; ++i) {
        const double xi_i = ref[i].x();
        const double eta_i = ref[i].y();
        if (xi_i == 0.0) {
            sf.values[i] = 0.5 * (1.0 - xi * xi) * (1.0 + eta * eta_i);
            sf.derivatives(i, 0) = -xi * (1.0 + eta * eta_i);
            sf.derivatives(i, 1) = 0.5 * (1.0 - xi * xi) * eta_i;
        } else {
            sf.values[i] = 0.5 * (1.0 + xi * xi_i) * (1.0 - eta * eta);
            sf.derivatives(i, 0) = 0.5 * xi_i * (1.0 - eta * eta);
            sf.derivatives(i, 1) = -eta * (1.0 + xi * xi_i);
        }
    }
    return sf;
}

const std::array<ElementQuadraturePoint, 9>& element_quadrature() {
    static const std::array<ElementQuadraturePoint, 9> rule = [] {
        const double p = std::sqrt(0.6);
        const double pts[3] = {-p, 0.0, p};
        const double wts[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        std::array<ElementQuadraturePoint, 9> r{};
        int n = 0;
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) r[n++] = {pts[i], pts[j], wts[i] * wts[j]};
        return r;
    }();
    return rule;
}

namespace {

// Legendre-orthogonal bases of the two consistent spaces. Index 0..4:
//   xi-space : 1, xi, eta, xi*eta, P2(eta)
//   eta-space: 1, xi, eta, xi*eta, P2(xi)
double p2(double t) { return 0.5 * (3.0 * t * t - 1.0); }

std::array<double, 5> consistent_basis(double xi, double eta, bool along_xi) {
    return {1.0, xi, eta, xi * eta, along_xi ? p2(eta) : p2(xi)};
}

struct ProjectionCoefficients {
    // coeff[b](i): coefficient of basis b in the projection of N_i
    std::array<ShapeVector, 5> along_xi;
    std::array<ShapeVector, 5> along_eta;
};

// <N_i, b> / <b, b> by 3x3 Gauss (exact: integrands are at most cubic per
// direction times quadratic).
const ProjectionCoefficients& projection_coefficients() {
    static const ProjectionCoefficients coeffs = [] {
        ProjectionCoefficients c;
        for (int dir = 0; dir < 2; ++dir) {
            const bool along_xi = dir == 0;
            auto& target = along_xi ? c.along_xi : c.along_eta;
            std::array<double, 5> norms{};
            for (auto& v : target) v.setZero();
            for (const auto& q : element_quadrature()) {
                const ShapeFunctions sf = shape_functions(q.xi, q.eta);
                const auto basis = consistent_basis(q.xi, q.eta, along_xi);
                for (int b = 0; b < 5; ++b) {
                    target[b] += q.weight * basis[b] * sf.values;
                    norms[b] += q.weight * basis[b] * basis[b];
                }
            }
            for (int b = 0; b < 5; ++b) target[b] /= norms[b];
        }
        return c;
    }();
    return coeffs;
}

}  // namespace

SubstituteShapeFunctions substitute_shape_functions(double xi, double eta) {
    const auto& coeffs = projection_coefficients();
    SubstituteShapeFunctions s;
    s.along_xi.setZero();
    s.along_eta.setZero();
    const auto bx = consistent_basis(xi, eta, true);
    const auto be = consistent_basis(xi, eta, false);
    for (int b = 0; b < 5; ++b) {
        s.along_xi += bx[b] * coeffs.along_xi[b];
        s.along_eta += be[b] * coeffs.along_eta[b];
    }
    return s;
}

StrainOperators strain_operators(const NodeCoords& nodes, double xi, double eta) {
    const ShapeFunctions sf = shape_functions(xi, eta);
    const SubstituteShapeFunctions sub = substitute_shape_functions(xi, eta);

    // J = [[x_xi, y_xi], [x_eta, y_eta]]
    Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
    for (int i = 0; i < kNodesPerElement; ++i) {
        jac(0, 0) += sf.derivatives(i, 0) * nodes[i].x();
        jac(0, 1) += sf.derivatives(i, 0) * nodes[i].y();
        jac(1, 0) += sf.derivatives(i, 1) * nodes[i].x();
        jac(1, 1) += sf.derivatives(i, 1) * nodes[i].y();
    }
    const double det = jac.determinant();
    if (!(det > 0.0)) {
        std::ostringstream msg;
        msg << "non-positive Jacobian determinant " << det << " at (" << xi << ", " << eta
            << ")";
        throw GeometryError(msg.str());
    }
    const Eigen::Matrix2d inv = jac.inverse();

    StrainOperators op;
    op.membrane.setZero();
    op.bending.setZero();
    op.shear.setZero();
    op.slope.setZero();
    op.grad_theta_x.setZero();
    op.grad_theta_y.setZero();
    op.values = sf.values;
    op.det_jacobian = det;

    for (int i = 0; i < kNodesPerElement; ++i) {
        const Eigen::Vector2d dnat(sf.derivatives(i, 0), sf.derivatives(i, 1));
        const Eigen::Vector2d d = inv * dnat;  // (N_x, N_y)
        const int c = kDofsPerNode * i;

        op.membrane(0, c + kU) = d.x();
        op.membrane(1, c + kV) = d.y();
        op.membrane(2, c + kU) = d.y();
        op.membrane(2, c + kV) = d.x();

        op.bending(0, c + kThetaX) = d.x();
        op.bending(1, c + kThetaY) = d.y();
        op.bending(2, c + kThetaX) = d.y();
        op.bending(2, c + kThetaY) = d.x();

        op.slope(0, c + kW) = d.x();
        op.slope(1, c + kW) = d.y();

        op.grad_theta_x(0, c + kThetaX) = d.x();
        op.grad_theta_x(1, c + kThetaX) = d.y();
        op.grad_theta_y(0, c + kThetaY) = d.x();
        op.grad_theta_y(1, c + kThetaY) = d.y();

        // Covariant shear: gamma_xi = x_xi tx + y_xi ty + w_xi, rotation part
        // interpolated with the xi-consistent functions (eta likewise).
        Eigen::Matrix<double, 2, 3> nat;  // columns: w, tx, ty
        nat(0, 0) = dnat.x();
        nat(0, 1) = sub.along_xi[i] * jac(0, 0);
        nat(0, 2) = sub.along_xi[i] * jac(0, 1);
        nat(1, 0) = dnat.y();
        nat(1, 1) = sub.along_eta[i] * jac(1, 0);
        nat(1, 2) = sub.along_eta[i] * jac(1, 1);
        const Eigen::Matrix<double, 2, 3> cart = inv * nat;
        op.shear(0, c + kW) = cart(0, 0);
        op.shear(1, c + kW) = cart(1, 0);
        op.shear(0, c + kThetaX) = cart(0, 1);
        op.shear(1, c + kThetaX) = cart(1, 1);
        op.shear(0, c + kThetaY) = cart(0, 2);
        op.shear(1, c + kThetaY) = cart(1, 2);
    }
    return op;
}

ElementKinematics element_kinematics(const NodeCoords& nodes) {
    ElementKinematics k;
    const auto& rule = element_quadrature();
    for (std::size_t g = 0; g < rule.size(); ++g)
        k[g] = strain_operators(nodes, rule[g].xi, rule[g].eta);
    return k;
}

LinearElementMatrices element_linear(const SectionProperties& s, const NodeCoords& nodes) {
    LinearElementMatrices out;
    out.stiffness.setZero();
    out.shear_stiffness.setZero();
    out.mass.setZero();
    out.thermal_load.setZero();

    for (const auto& q : element_quadrature()) {
        const StrainOperators op = strain_operators(nodes, q.xi, q.eta);
        const double w = q.weight * op.det_jacobian;

        const Eigen::Matrix<double, 3, kElementDofs> a_bp = s.A * op.membrane;
        const Eigen::Matrix<double, 3, kElementDofs> b_bb = s.B * op.bending;
        const Eigen::Matrix<double, 3, kElementDofs> d_bb = s.D * op.bending;
        out.stiffness.noalias() += w * (op.membrane.transpose() * (a_bp + b_bb));
        out.stiffness.noalias() +=
            w * (op.bending.transpose() * (s.B * op.membrane + d_bb));
        out.shear_stiffness.noalias() +=
            w * (op.shear.transpose() * (s.shear * op.shear));

        for (int i = 0; i < kNodesPerElement; ++i) {
            for (int j = 0; j < kNodesPerElement; ++j) {
                const double nn = w * op.values[i] * op.values[j];
                const int ci = kDofsPerNode * i;
                const int cj = kDofsPerNode * j;
                out.mass(ci + kU, cj + kU) += s.mass * nn;
                out.mass(ci + kV, cj + kV) += s.mass * nn;
                out.mass(ci + kW, cj + kW) += s.mass * nn;
                out.mass(ci + kThetaX, cj + kThetaX) += s.rotary_inertia * nn;
                out.mass(ci + kThetaY, cj + kThetaY) += s.rotary_inertia * nn;
            }
        }
        out.thermal_load.noalias() += w * (op.membrane.transpose() * s.thermal_force +
                                           op.bending.transpose() * s.thermal_moment);
    }
    // Remove round-off asymmetry from the coupling products.
    out.stiffness = 0.5 * (out.stiffness + out.stiffness.transpose()).eval();
    out.shear_stiffness = 0.5 * (out.shear_stiffness + out.shear_stiffness.transpose()).eval();
    return out;
}

namespace {

// H such that the von Karman membrane strain is (1/2) H (w_x, w_y).
Eigen::Matrix<double, 3, 2> slope_matrix(const Eigen::Vector2d& theta) {
    Eigen::Matrix<double, 3, 2> h;
    h << theta.x(), 0.0, 0.0, theta.y(), theta.y(), theta.x();
    return h;
}

Eigen::Matrix2d resultant_tensor(const Eigen::Vector3d& n) {
    Eigen::Matrix2d t;
    t << n.x(), n.z(), n.z(), n.y();
    return t;
}

}  // namespace

NonlinearElementMatrices element_nonlinear(const SectionProperties& s, const NodeCoords& nodes,
                                           const ElementVector& delta) {
    return element_nonlinear(s, element_kinematics(nodes), delta);
}

NonlinearElementMatrices element_nonlinear(const SectionProperties& s,
                                           const ElementKinematics& kinematics,
                                           const ElementVector& delta) {
    NonlinearElementMatrices out;
    out.n1.setZero();
    out.n2.setZero();

    const auto& rule = element_quadrature();
    for (std::size_t g = 0; g < rule.size(); ++g) {
        const StrainOperators& op = kinematics[g];
        const double w = rule[g].weight * op.det_jacobian;

        const Eigen::Vector2d theta = op.slope * delta;
        const Eigen::Matrix<double, 3, 2> h = slope_matrix(theta);
        const Eigen::Matrix<double, 3, kElementDofs> hg = h * op.slope;

        // Resultants of the linear strains and of the von Karman strains.
        const Eigen::Vector3d n_lin = s.A * (op.membrane * delta) + s.B * (op.bending * delta);
        const Eigen::Vector3d n_vk = 0.5 * (s.A * (hg * delta));

        // Membrane/bending rows coupled with the slope field.
        const Eigen::Matrix<double, 3, kElementDofs> coupling =
            s.A * op.membrane + s.B * op.bending;
        const ElementMatrix cross = coupling.transpose() * hg;
        out.n1.noalias() += w * (cross + cross.transpose());
        out.n1.noalias() +=
            w * (op.slope.transpose() * resultant_tensor(n_lin) * op.slope);

        out.n2.noalias() += w * (hg.transpose() * (s.A * hg));
        out.n2.noalias() +=
            w * (op.slope.transpose() * resultant_tensor(n_vk) * op.slope);
    }
    out.n1 = 0.5 * (out.n1 + out.n1.transpose()).eval();
    out.n2 = 0.5 * (out.n2 + out.n2.transpose()).eval();
    return out;
}

PointResultants membrane_resultants(const SectionProperties& s, const NodeCoords& nodes,
                                    const ElementVector& delta) {
    return membrane_resultants(s, element_kinematics(nodes), delta);
}

PointResultants membrane_resultants(const SectionProperties& s,
                                    const ElementKinematics& kinematics,
                                    const ElementVector& delta) {
    PointResultants out;
    for (std::size_t g = 0; g < kinematics.size(); ++g) {
        const StrainOperators& op = kinematics[g];
        out[g] = s.A * (op.membrane * delta) + s.B * (op.bending * delta) - s.thermal_force;
    }
    return out;
}

ElementMatrix element_geometric(const NodeCoords& nodes, const PointResultants& prestress,
                                double thickness) {
    return element_geometric(element_kinematics(nodes), prestress, thickness);
}

ElementMatrix element_geometric(const ElementKinematics& kinematics,
                                const PointResultants& prestress, double thickness) {
    ElementMatrix kg = ElementMatrix::Zero();
    const double rotary = thickness * thickness / 12.0;
    const auto& rule = element_quadrature();
    for (std::size_t g = 0; g < rule.size(); ++g) {
        const StrainOperators& op = kinematics[g];
        const double w = rule[g].weight * op.det_jacobian;
        const Eigen::Matrix2d t = resultant_tensor(prestress[g]);
        kg.noalias() += w * (op.slope.transpose() * t * op.slope);
        kg.noalias() += (w * rotary) * (op.grad_theta_x.transpose() * t * op.grad_theta_x +
                                        op.grad_theta_y.transpose() * t * op.grad_theta_y);
    }
    return 0.5 * (kg + kg.transpose());
}

ElementMatrix element_geometric(const NodeCoords& nodes, const Eigen::Vector3d& prestress,
                                double thickness) {
    PointResultants uniform;
    uniform.fill(prestress);
    return element_geometric(nodes, uniform, thickness);
}

ElementMatrix element_transformation(const std::array<bool, kNodesPerElement>& rotated,
                                     double psi) {
    ElementMatrix t = ElementMatrix::Identity();
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    for (int i = 0; i < kNodesPerElement; ++i) {
        if (!rotated[i]) continue;
        const int b = kDofsPerNode * i;
        for (int pair : {kU, kThetaX}) {
            t(b + pair, b + pair) = c;
            t(b + pair, b + pair + 1) = s;
            t(b + pair + 1, b + pair) = -s;
            t(b + pair + 1, b + pair + 1) = c;
        }
    }
    return t;
}

}  // namespace fgplate
