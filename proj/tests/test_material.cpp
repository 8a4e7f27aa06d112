#include "fgplate/errors.hpp"
#include "fgplate/material.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fgplate;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Conduction profile by direct quadrature of 1/K(z) on a fine grid.
double conduction_oracle(double z, double h, double k, double kc, double km,
                         const ThermalState& t) {
    const int n = 10000;
    auto resistance = [&](double upper) {
        const double lo = -h / 2;
        const double dz = (upper - lo) / n;
        double sum = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double zi = lo + i * dz;
            const double vc = std::pow((2 * zi + h) / (2 * h), k);
            const double f = 1.0 / (km + (kc - km) * vc);
            sum += (i == 0 || i == n) ? 0.5 * f : f;
        }
        return sum * dz;
    };
    return t.metal_face + (t.ceramic_face - t.metal_face) * resistance(z) / resistance(h / 2);
}

}  // namespace

TEST(Material, VolumeFractionEndpoints) {
    EXPECT_DOUBLE_EQ(volume_fraction_ceramic(0.05, 0.1, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(volume_fraction_ceramic(-0.05, 0.1, 2.0), 0.0);
    EXPECT_DOUBLE_EQ(volume_fraction_ceramic(0.0, 0.1, 0.0), 1.0);
    EXPECT_THROW(volume_fraction_ceramic(0.0, 0.1, -1.0), DomainError);
    EXPECT_THROW(volume_fraction_ceramic(0.2, 0.1, 1.0), DomainError);
}

TEST(Material, ModulusAtFaces) {
    const MaterialSpec s = si3n4_sus304();
    const double h = 0.1;
    EXPECT_NEAR(graded_property(s, Property::Modulus, h / 2, h, 3.0, 300.0), 322.2715e9, 1e5);
    EXPECT_NEAR(graded_property(s, Property::Modulus, -h / 2, h, 3.0, 300.0), 207.7877e9, 1e5);
}

TEST(Material, ModulusQuarterHeightOracle) {
    const MaterialSpec s = si3n4_sus304();
    const double h = 0.2;
    const double ec = eval_temp_property(s.ceramic.modulus, 300.0);
    const double em = eval_temp_property(s.metal.modulus, 300.0);
    const double expected = em + (ec - em) * 0.75 * 0.75;
    EXPECT_LT(rel(graded_property(s, Property::Modulus, h / 4, h, 2.0, 300.0), expected), 1e-14);
}

TEST(Material, ExpansionAtAmbient) {
    const MaterialSpec s = si3n4_sus304();
    EXPECT_LT(rel(eval_temp_property(s.ceramic.expansion, 300.0), 7.4746e-6), 1e-4);
    EXPECT_LT(rel(eval_temp_property(s.metal.expansion, 300.0), 15.321e-6), 1e-4);
}

TEST(Material, TemperatureProfileMatchesConductionOracle) {
    const ThermalState t{400.0, 300.0, 300.0};
    for (double k : {0.5, 1.0, 2.0, 5.0})
        for (double z : {-0.03, 0.0, 0.02}) {
            const double got = temperature_at(z, 0.1, k, 9.19, 12.04, t);
            const double want = conduction_oracle(z, 0.1, k, 9.19, 12.04, t);
            EXPECT_LT(rel(got - 300.0, want - 300.0), 1e-3) << "k=" << k << " z=" << z;
        }
}

TEST(Material, TemperatureProfileFacesAndUniform) {
    const ThermalState t{600.0, 300.0, 300.0};
    EXPECT_NEAR(temperature_at(0.05, 0.1, 2.0, 9.19, 12.04, t), 600.0, 1e-9);
    EXPECT_NEAR(temperature_at(-0.05, 0.1, 2.0, 9.19, 12.04, t), 300.0, 1e-9);
    const ThermalState flat = ThermalState::ambient(350.0);
    EXPECT_DOUBLE_EQ(temperature_at(0.01, 0.1, 2.0, 9.19, 12.04, flat), 350.0);
}

TEST(Material, GaussRuleIntegratesPolynomialsExactly) {
    const GaussRule rule = gauss_legendre(20);
    for (int p = 0; p < 40; p += 3) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.points.size(); ++i)
            sum += rule.weights[i] * std::pow(rule.points[i], p);
        const double exact = (p % 2 == 0) ? 2.0 / (p + 1) : 0.0;
        EXPECT_NEAR(sum, exact, 1e-13) << "degree " << p;
    }
}

TEST(Material, SectionIntegralsAgainstFineQuadrature) {
    const MaterialSpec s = si3n4_sus304();
    const double h = 0.1;
    for (double k : {0.5, 2.0, 10.0, 20.0}) {
        const SectionProperties sec = section_properties(s, h, k, ThermalState::ambient());
        // composite midpoint reference for int E dz and int E z dz
        const int n = 400000;
        double a0 = 0.0;
        double a1 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double z = -h / 2 + (i + 0.5) * h / n;
            const double e = graded_property(s, Property::Modulus, z, h, k, 300.0);
            a0 += e * h / n;
            a1 += e * z * h / n;
        }
        const double q = 1.0 - s.poisson * s.poisson;
        EXPECT_LT(rel(sec.A(0, 0) * q, a0), 1e-9) << k;
        EXPECT_LT(rel(sec.B(0, 0) * q, a1), 1e-7) << k;
    }
}

TEST(Material, SectionMatricesSymmetricPositiveDefinite) {
    const MaterialSpec s = si3n4_sus304();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> kd(0.0, 100.0);
    std::uniform_real_distribution<double> td(300.0, 900.0);
    for (int draw = 0; draw < 50; ++draw) {
        const double t = td(rng);
        const SectionProperties sec =
            section_properties(s, 0.1, kd(rng), ThermalState{t, 300.0 + 0.5 * (t - 300.0), 300.0});
        EXPECT_LT((sec.A - sec.A.transpose()).norm(), 1e-12 * sec.A.norm());
        EXPECT_LT((sec.D - sec.D.transpose()).norm(), 1e-12 * sec.D.norm());
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(sec.A).eigenvalues().minCoeff(), 0.0);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(sec.D).eigenvalues().minCoeff(), 0.0);
    }
}

TEST(Material, ZeroIndexIsHomogeneousCeramic) {
    const MaterialSpec graded = si3n4_sus304();
    const double ec = eval_temp_property(graded.ceramic.modulus, 300.0);
    const MaterialSpec ceramic =
        isotropic_material(ec, graded.poisson, graded.ceramic.density, graded.shear_factor);
    const SectionProperties a = section_properties(graded, 0.1, 1e-13, ThermalState::ambient());
    const SectionProperties b = section_properties(ceramic, 0.1, 0.0, ThermalState::ambient());
    EXPECT_LT((a.A - b.A).norm(), 1e-10 * b.A.norm());
    EXPECT_LT((a.D - b.D).norm(), 1e-10 * b.D.norm());
    EXPECT_LT((a.shear - b.shear).norm(), 1e-10 * b.shear.norm());
    EXPECT_LT(a.B.norm(), 1e-10 * b.A.norm() * 0.1);
    EXPECT_LT(rel(a.mass, b.mass), 1e-10);
    EXPECT_LT(rel(a.rotary_inertia, b.rotary_inertia), 1e-10);
}

TEST(Material, AmbientHasNoThermalResultants) {
    const SectionProperties sec = section_properties(si3n4_sus304(), 0.1, 2.0, ThermalState::ambient());
    EXPECT_EQ(sec.thermal_force.norm(), 0.0);
    EXPECT_EQ(sec.thermal_moment.norm(), 0.0);
}

TEST(Material, RejectsUnphysicalInput) {
    EXPECT_THROW(eval_temp_property(si3n4_sus304().ceramic.modulus, -1.0), DomainError);
    EXPECT_THROW(section_properties(si3n4_sus304(), 0.0, 1.0, ThermalState::ambient()), DomainError);
    EXPECT_THROW(section_properties(si3n4_sus304(), 0.1, -0.5, ThermalState::ambient()), DomainError);
}
