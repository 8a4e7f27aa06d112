#pragma once

#include "fgplate/assembly.hpp"
#include "fgplate/eigensolver.hpp"
#include "fgplate/material.hpp"
#include "fgplate/mesh.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fgplate {

/// One plate configuration: geometry, grading, thermal state, supports, mesh.
struct PlateModel {
    MaterialSpec material = si3n4_sus304();
    double a = 1.0;       // side along x [m]
    double b = 1.0;       // oblique side [m]
    double h = 0.1;       // thickness [m]
    double skew = 0.0;    // radians
    double gradient_index = 0.0;
    ThermalState thermal = ThermalState::ambient();
    BoundaryCondition bc = BoundaryCondition::SimplySupported;
    int nx = 8;
    int ny = 8;
    SectionOptions section_options;
};

/// Thermal pre-stress state of the flat plate.
struct Prestress {
    Eigen::VectorXd displacement;           // static response to the thermal load
    std::vector<PointResultants> resultants;  // per element, per quadrature point
    double residual = 0.0;                  // |(K + N3) d - F| / |F|
};

/// Assembled linear system of one plate model (reduced to free DOFs).
struct GlobalSystem {
    PlateModel model;
    Mesh mesh;
    DofMap dofs;
    SectionProperties section;
    std::vector<ElementKinematics> kinematics;
    Assembler assembler;
    SparseMatrix stiffness;        // K (membrane, coupling, bending)
    SparseMatrix shear_stiffness;  // N3
    SparseMatrix mass;             // M
    SparseMatrix geometric;        // K_G of the thermal pre-stress
    Eigen::VectorXd thermal_load;
    Prestress prestress;

    /// K + N3 + K_G.
    SparseMatrix linear_operator() const;
    /// Free-vector rows that hold transverse displacement w0.
    const std::vector<int>& w_rows() const { return w_rows_; }

    GlobalSystem(const PlateModel& model, Mesh mesh, DofMap dofs, SectionProperties section);

private:
    std::vector<int> w_rows_;
};

/// Builds mesh, section and matrices, resolves the thermal pre-stress and
/// assembles its geometric stiffness.
GlobalSystem build_system(const PlateModel& model);

Prestress solve_prestress(const GlobalSystem& system);
SparseMatrix assemble_geometric(const GlobalSystem& system, const Prestress& prestress);

/// ω̄ = ω (a²/h) sqrt(ρ_m (1 - ν²) / E_m), metal properties at T_0.
double nondimensional_frequency(const PlateModel& model, double omega);

using ModeLabel = std::pair<int, int>;  // half-waves (m along x, n along y)

struct ModeResult {
    int index = 0;            // position among the computed modes, ascending
    double omega = 0.0;       // rad/s
    double omega_bar = 0.0;
    Eigen::VectorXd shape;    // free-DOF vector, max |w0| = 1 for flexural modes
    double flexural_share = 0.0;  // fraction of kinetic energy carried by w0
    std::optional<ModeLabel> label;
    // Nonlinear iteration bookkeeping (linear modes: 0 iterations, converged).
    double amplitude = 0.0;   // w/h
    int iterations = 0;
    bool converged = true;
    bool redistributed = false;  // tracked correlation fell below threshold
    bool alternating = false;    // converged as a two-shape cycle at fixed frequency
    double correlation = 1.0;    // M-correlation of the final shape with the previous iterate
    std::vector<double> trace;   // omega per iteration
    std::string failure;         // set when the iteration had to stop early

    bool flexural() const { return flexural_share > 0.5; }
};

/// Lowest `count` eigenpairs of (K + N3 + K_G) φ = ω² M φ.
std::vector<ModeResult> solve_linear_modes(const GlobalSystem& system, int count);

/// Flexural modes only, in ascending order, drawn from `count` computed modes.
std::vector<ModeResult> flexural_modes(const GlobalSystem& system, int count);

/// Dominant (m, n) sine-series component of the w field on a rectangle.
std::optional<ModeLabel> classify_mode(const GlobalSystem& system, const Eigen::VectorXd& shape);

enum class ModeSelection {
    Tracked,  // eigenpair with maximal M-correlation to the previous shape
    Lowest,   // index-sorted: the lowest flexural eigenpair every iteration
};

struct NonlinearOptions {
    double tolerance = 1e-4;
    int max_iterations = 100;
    int candidate_modes = 4;
    double correlation_threshold = 0.5;
    ModeSelection selection = ModeSelection::Lowest;
    // Sign of the peak w0 of the starting shape. With membrane-bending
    // coupling the two senses of deflection give different frequencies;
    // -1 bends the plate toward the metal-rich face.
    double initial_sign = -1.0;
};

/// Direct iteration on (K + N1/2 + N2/3 + N3 + K_G) φ = ω² M φ with the
/// shape rescaled every step so that max |w0| = (w/h) h. `start` is the
/// linear mode, or the converged shape of a neighbouring amplitude.
ModeResult nonlinear_iterate(const GlobalSystem& system, const ModeResult& start,
                             double w_over_h, const NonlinearOptions& options = {});

struct AmplitudePoint {
    double w_over_h = 0.0;
    double ratio = 1.0;      // ω_NL / ω_L
    bool drop = false;       // ratio fell relative to the previous amplitude
    ModeResult mode;
};

struct AmplitudeCurve {
    double omega_linear = 0.0;
    double omega_bar_linear = 0.0;
    std::vector<AmplitudePoint> points;

    bool all_converged() const;
};

/// Runs nonlinear_iterate over increasing amplitudes, warm-starting each
/// point from the previous converged shape.
AmplitudeCurve amplitude_sweep(const GlobalSystem& system, const ModeResult& linear,
                               std::span<const double> amplitudes,
                               const NonlinearOptions& options = {});

/// Interpolated w0 at a planform point from a free-DOF vector.
double deflection_at(const GlobalSystem& system, const Eigen::VectorXd& shape,
                     const Eigen::Vector2d& point);

}  // namespace fgplate
