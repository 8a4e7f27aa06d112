#pragma once

#include <Eigen/Dense>

#include <vector>

namespace fgplate {

/// Temperature coefficients of a constituent property,
///   P(T) = P0 * (P-1/T + 1 + P1*T + P2*T^2 + P3*T^3),  T in kelvin.
struct TempCoeffs {
    double p0 = 0.0;
    double pm1 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
};

double eval_temp_property(const TempCoeffs& c, double temperature);

/// One phase of the graded mixture. Density and conductivity do not depend
/// on temperature.
struct Constituent {
    TempCoeffs modulus;    // Pa
    TempCoeffs expansion;  // 1/K
    double density = 0.0;       // kg/m^3
    double conductivity = 0.0;  // W/(m K)
};

/// Ceramic on the top face (z = +h/2), metal on the bottom face.
struct MaterialSpec {
    Constituent ceramic;
    Constituent metal;
    double poisson = 0.28;
    double shear_factor = 0.91;  // multiplies the transverse shear integral

    void validate() const;
};

/// Si3N4 / SUS304 with the temperature coefficients of Reddy and Chin.
MaterialSpec si3n4_sus304();

/// Homogeneous, temperature-independent material (both phases identical).
MaterialSpec isotropic_material(double modulus, double poisson, double density,
                                double shear_factor = 5.0 / 6.0);

struct ThermalState {
    double ceramic_face = 300.0;  // T_c at z = +h/2 [K]
    double metal_face = 300.0;    // T_m at z = -h/2 [K]
    double reference = 300.0;     // stress-free T_0 [K]

    static ThermalState ambient(double temperature = 300.0) {
        return {temperature, temperature, temperature};
    }
    bool is_ambient() const {
        return ceramic_face == reference && metal_face == reference;
    }
};

enum class Property { Modulus, Expansion, Density, Conductivity };

/// ((2z + h) / (2h))^k, the ceramic volume fraction.
double volume_fraction_ceramic(double z, double h, double k);

/// Rule-of-mixtures value of `property` at height z and temperature T.
/// Density and conductivity ignore T.
double graded_property(const MaterialSpec& spec, Property property, double z, double h,
                       double k, double temperature);

/// Steady 1-D conduction profile through a graded plate with face
/// temperatures taken from `thermal` (five-term series in (K_c - K_m)/K_m).
double temperature_at(double z, double h, double k, double ceramic_conductivity,
                      double metal_conductivity, const ThermalState& thermal);

/// Where material moduli and expansion coefficients are evaluated.
enum class MaterialTemperature {
    Local,  // at T(z) from the conduction profile
    Fixed,  // at SectionOptions::fixed_temperature everywhere
};

struct SectionOptions {
    MaterialTemperature material_temperature = MaterialTemperature::Local;
    double fixed_temperature = 300.0;
    int points_per_panel = 20;  // Gauss-Legendre points per thickness panel
};

/// Through-thickness integrals of the graded section. Voigt order (xx, yy, xy).
struct SectionProperties {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    Eigen::Matrix2d shear = Eigen::Matrix2d::Zero();  // (xz, yz) transverse shear
    Eigen::Vector3d thermal_force = Eigen::Vector3d::Zero();   // N^T
    Eigen::Vector3d thermal_moment = Eigen::Vector3d::Zero();  // M^T
    double mass = 0.0;            // p = int rho dz
    double rotary_inertia = 0.0;  // I = int z^2 rho dz
    double thickness = 0.0;
};

SectionProperties section_properties(const MaterialSpec& spec, double thickness,
                                     double gradient_index, const ThermalState& thermal,
                                     const SectionOptions& options = {});

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

}  // namespace fgplate
