#include "fgplate/material.hpp"

#include "fgplate/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fgplate {

double eval_temp_property(const TempCoeffs& c, double temperature) {
    if (!(temperature > 0.0)) {
        std::ostringstream msg;
        msg << "temperature must be positive, got " << temperature << " K";
        throw DomainError(msg.str());
    }
    const double t = temperature;
    return c.p0 * (c.pm1 / t + 1.0 + c.p1 * t + c.p2 * t * t + c.p3 * t * t * t);
}

void MaterialSpec::validate() const {
    if (!(poisson > 0.0 && poisson < 0.5))
        throw DomainError("Poisson ratio must lie in (0, 0.5)");
    if (!(shear_factor > 0.0 && shear_factor <= 1.0))
        throw DomainError("shear correction factor must lie in (0, 1]");
    for (const Constituent* c : {&ceramic, &metal}) {
        if (!(c->density > 0.0)) throw DomainError("constituent density must be positive");
        if (!(c->conductivity > 0.0))
            throw DomainError("constituent conductivity must be positive");
        if (c->modulus.p0 == 0.0) throw DomainError("constituent modulus P0 must be nonzero");
    }
}

MaterialSpec si3n4_sus304() {
    MaterialSpec spec;
    spec.ceramic.modulus = {348.43e9, 0.0, -3.070e-4, 2.160e-7, -8.946e-11};
    spec.ceramic.expansion = {5.8723e-6, 0.0, 9.095e-4, 0.0, 0.0};
    spec.ceramic.density = 2370.0;
    spec.ceramic.conductivity = 9.19;
    spec.metal.modulus = {201.04e9, 0.0, 3.079e-4, -6.534e-7, 0.0};
    spec.metal.expansion = {12.330e-6, 0.0, 8.086e-4, 0.0, 0.0};
    spec.metal.density = 8166.0;
    spec.metal.conductivity = 12.04;
    spec.poisson = 0.28;
    spec.shear_factor = 0.91;
    return spec;
}

MaterialSpec isotropic_material(double modulus, double poisson, double density,
                                double shear_factor) {
    MaterialSpec spec;
    Constituent c;
    c.modulus = {modulus, 0.0, 0.0, 0.0, 0.0};
    c.expansion = {0.0, 0.0, 0.0, 0.0, 0.0};
    c.density = density;
    c.conductivity = 1.0;
    spec.ceramic = c;
    spec.metal = c;
    spec.poisson = poisson;
    spec.shear_factor = shear_factor;
    return spec;
}

namespace {

void check_thickness_point(double z, double h) {
    if (!(h > 0.0)) throw DomainError("plate thickness must be positive");
    const double half = 0.5 * h;
    const double slack = 1e-12 * h;
    if (z < -half - slack || z > half + slack) {
        std::ostringstream msg;
        msg << "z = " << z << " lies outside the thickness [" << -half << ", " << half << "]";
        throw DomainError(msg.str());
    }
}

// Normalised height (2z + h) / (2h) in [0, 1], clamped against round-off.
double normalised_height(double z, double h) {
    return std::clamp((2.0 * z + h) / (2.0 * h), 0.0, 1.0);
}

}  // namespace

double volume_fraction_ceramic(double z, double h, double k) {
    check_thickness_point(z, h);
    if (!(k >= 0.0)) throw DomainError("gradient index k must be non-negative");
    return std::pow(normalised_height(z, h), k);
}

double graded_property(const MaterialSpec& spec, Property property, double z, double h,
                       double k, double temperature) {
    const double vc = volume_fraction_ceramic(z, h, k);
    double pc = 0.0;
    double pm = 0.0;
    switch (property) {
        case Property::Modulus:
            pc = eval_temp_property(spec.ceramic.modulus, temperature);
            pm = eval_temp_property(spec.metal.modulus, temperature);
            break;
        case Property::Expansion:
            pc = eval_temp_property(spec.ceramic.expansion, temperature);
            pm = eval_temp_property(spec.metal.expansion, temperature);
            break;
        case Property::Density:
            pc = spec.ceramic.density;
            pm = spec.metal.density;
            break;
        case Property::Conductivity:
            pc = spec.ceramic.conductivity;
            pm = spec.metal.conductivity;
            break;
    }
    return (pc - pm) * vc + pm;
}

namespace {

constexpr int kSeriesTerms = 6;

// Partial sums of  sum_n (-r)^n zeta^(nk+1) / (nk+1),  r = (K_c - K_m)/K_m.
double conduction_series(double zeta, double k, double ratio) {
    double sum = 0.0;
    double coeff = 1.0;
    for (int n = 0; n < kSeriesTerms; ++n) {
        const double power = n * k + 1.0;
        sum += coeff * std::pow(zeta, power) / power;
        coeff *= -ratio;
    }
    return sum;
}

}  // namespace

double temperature_at(double z, double h, double k, double ceramic_conductivity,
                      double metal_conductivity, const ThermalState& thermal) {
    check_thickness_point(z, h);
    if (!(k >= 0.0)) throw DomainError("gradient index k must be non-negative");
    if (!(ceramic_conductivity > 0.0 && metal_conductivity > 0.0))
        throw DomainError("conductivities must be positive");
    const double ratio = (ceramic_conductivity - metal_conductivity) / metal_conductivity;
    const double c = conduction_series(1.0, k, ratio);
    if (c == 0.0 || !std::isfinite(c))
        throw NumericError("conduction series normaliser vanished");
    const double eta = conduction_series(normalised_height(z, h), k, ratio) / c;
    return thermal.metal_face + (thermal.ceramic_face - thermal.metal_face) * eta;
}

GaussRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss rule needs at least one point");
    if (n == 1) return {{0.0}, {2.0}};
    GaussRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = -x;
        rule.points[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

namespace {

// Panel breakpoints in normalised height, graded geometrically towards both
// faces where zeta^k (non-integer k) and large-k boundary layers live.
std::vector<double> thickness_breakpoints() {
    constexpr int kLevels = 40;
    std::vector<double> lower;
    std::vector<double> upper;
    double step = 0.5;
    for (int j = 0; j < kLevels; ++j) {
        step *= 0.5;
        lower.push_back(step);
        upper.push_back(1.0 - step);
    }
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (auto it = lower.rbegin(); it != lower.rend(); ++it) cuts.push_back(*it);
    cuts.push_back(0.5);
    for (double u : upper) cuts.push_back(u);
    cuts.push_back(1.0);
    return cuts;
}

}  // namespace

SectionProperties section_properties(const MaterialSpec& spec, double thickness,
                                     double gradient_index, const ThermalState& thermal,
                                     const SectionOptions& options) {
    spec.validate();
    if (!(thickness > 0.0)) throw DomainError("plate thickness must be positive");
    if (!(gradient_index >= 0.0)) throw DomainError("gradient index k must be non-negative");
    if (options.points_per_panel < 1) throw DomainError("quadrature order must be positive");

    const double h = thickness;
    const double k = gradient_index;
    const double nu = spec.poisson;
    const GaussRule rule = gauss_legendre(options.points_per_panel);
    const std::vector<double> cuts = thickness_breakpoints();

    // Accumulators: int E dz, int E z dz, int E z^2 dz, int E alpha dT dz,
    // int E alpha dT z dz, int rho dz, int rho z^2 dz.
    std::array<double, 7> acc{};
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double z0 = (cuts[p] - 0.5) * h;
        const double z1 = (cuts[p + 1] - 0.5) * h;
        const double half = 0.5 * (z1 - z0);
        const double mid = 0.5 * (z1 + z0);
        for (std::size_t g = 0; g < rule.points.size(); ++g) {
            const double z = mid + half * rule.points[g];
            const double w = half * rule.weights[g];
            const double t_local = temperature_at(z, h, k, spec.ceramic.conductivity,
                                                  spec.metal.conductivity, thermal);
            const double t_material =
                options.material_temperature == MaterialTemperature::Local
                    ? t_local
                    : options.fixed_temperature;
            const double e = graded_property(spec, Property::Modulus, z, h, k, t_material);
            const double alpha = graded_property(spec, Property::Expansion, z, h, k, t_material);
            const double rho = graded_property(spec, Property::Density, z, h, k, t_material);
            const double dt = t_local - thermal.reference;
            acc[0] += w * e;
            acc[1] += w * e * z;
            acc[2] += w * e * z * z;
            acc[3] += w * e * alpha * dt;
            acc[4] += w * e * alpha * dt * z;
            acc[5] += w * rho;
            acc[6] += w * rho * z * z;
        }
    }

    // Qbar = E/(1-nu^2) [[1, nu, 0], [nu, 1, 0], [0, 0, (1-nu)/2]]
    Eigen::Matrix3d unit;
    unit << 1.0, nu, 0.0, nu, 1.0, 0.0, 0.0, 0.0, 0.5 * (1.0 - nu);
    unit /= (1.0 - nu * nu);

    SectionProperties s;
    s.thickness = h;
    s.A = acc[0] * unit;
    s.B = acc[1] * unit;
    s.D = acc[2] * unit;
    const double g = spec.shear_factor * acc[0] / (2.0 * (1.0 + nu));
    s.shear = g * Eigen::Matrix2d::Identity();
    // (Q11 + Q12) alpha dT = E alpha dT / (1 - nu)
    s.thermal_force = Eigen::Vector3d(acc[3], acc[3], 0.0) / (1.0 - nu);
    s.thermal_moment = Eigen::Vector3d(acc[4], acc[4], 0.0) / (1.0 - nu);
    s.mass = acc[5];
    s.rotary_inertia = acc[6];
    return s;
}

}  // namespace fgplate
