#include "fgplate/solver.hpp"

#include "fgplate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fgplate {

GlobalSystem::GlobalSystem(const PlateModel& plate, Mesh plate_mesh, DofMap plate_dofs,
                           SectionProperties plate_section)
    : model(plate),
      mesh(std::move(plate_mesh)),
      dofs(std::move(plate_dofs)),
      section(plate_section),
      assembler(mesh, dofs) {
    for (int n = 0; n < dofs.node_count; ++n) {
        const int row = dofs.index(n, kW);
        if (row >= 0) w_rows_.push_back(row);
    }
}

SparseMatrix GlobalSystem::linear_operator() const {
    return stiffness + shear_stiffness + geometric;
}

GlobalSystem build_system(const PlateModel& model) {
    if (!(model.h > 0.0)) throw DomainError("plate thickness must be positive");
    Mesh mesh = generate_mesh(model.a, model.b, model.skew, model.nx, model.ny);
    DofMap dofs = apply_boundary_conditions(mesh, model.bc);
    if (dofs.free_count == 0) throw GeometryError("every DOF is constrained");
    SectionProperties section = section_properties(model.material, model.h, model.gradient_index,
                                                   model.thermal, model.section_options);
    GlobalSystem sys(model, std::move(mesh), std::move(dofs), section);

    const int ne = sys.mesh.element_count();
    sys.kinematics.resize(ne);
    std::vector<LinearElementMatrices> linear(ne);
    sys.assembler.run_elements([&](int e) {
        const NodeCoords coords = sys.mesh.element_coords(e);
        sys.kinematics[e] = element_kinematics(coords);
        linear[e] = element_linear(sys.section, coords);
    });

    std::vector<ElementMatrix> buffer(ne);
    for (int e = 0; e < ne; ++e) buffer[e] = linear[e].stiffness;
    sys.stiffness = sys.assembler.assemble(buffer);
    for (int e = 0; e < ne; ++e) buffer[e] = linear[e].shear_stiffness;
    sys.shear_stiffness = sys.assembler.assemble(buffer);
    for (int e = 0; e < ne; ++e) buffer[e] = linear[e].mass;
    sys.mass = sys.assembler.assemble(buffer);
    std::vector<ElementVector> loads(ne);
    for (int e = 0; e < ne; ++e) loads[e] = linear[e].thermal_load;
    sys.thermal_load = sys.assembler.assemble(loads);

    sys.prestress = solve_prestress(sys);
    sys.geometric = assemble_geometric(sys, sys.prestress);
    return sys;
}

Prestress solve_prestress(const GlobalSystem& system) {
    Prestress out;
    const int n = system.assembler.free_count();
    out.displacement = Eigen::VectorXd::Zero(n);
    const double load_norm = system.thermal_load.norm();
    if (load_norm > 0.0) {
        const SparseMatrix k = system.stiffness + system.shear_stiffness;
        Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> factor(k);
        if (factor.info() != Eigen::Success)
            throw NumericError("thermal pre-stress: stiffness is singular");
        out.displacement = factor.solve(system.thermal_load);
        out.residual = (k * out.displacement - system.thermal_load).norm() / load_norm;
        if (!(out.residual < 1e-9)) {
            std::ostringstream msg;
            msg << "thermal pre-stress: static residual " << out.residual << " too large";
            throw NumericError(msg.str());
        }
    }
    const int ne = system.mesh.element_count();
    out.resultants.resize(ne);
    system.assembler.run_elements([&](int e) {
        const ElementVector de = system.assembler.gather(out.displacement, e);
        out.resultants[e] = membrane_resultants(system.section, system.kinematics[e], de);
    });
    return out;
}

SparseMatrix assemble_geometric(const GlobalSystem& system, const Prestress& prestress) {
    return system.assembler.assemble_with([&](int e) {
        return element_geometric(system.kinematics[e], prestress.resultants[e],
                                 system.section.thickness);
    });
}

double nondimensional_frequency(const PlateModel& model, double omega) {
    const double nu = model.material.poisson;
    const double rho_m = model.material.metal.density;
    const double e_m = eval_temp_property(model.material.metal.modulus, model.thermal.reference);
    return omega * (model.a * model.a / model.h) * std::sqrt(rho_m * (1.0 - nu * nu) / e_m);
}

namespace {

double flexural_share(const GlobalSystem& system, const Eigen::VectorXd& shape,
                      const Eigen::VectorXd& mass_times_shape) {
    const double total = shape.dot(mass_times_shape);
    if (!(total > 0.0)) return 0.0;
    double w = 0.0;
    for (int r : system.w_rows()) w += shape[r] * mass_times_shape[r];
    return w / total;
}

// Row of the largest |w0|, or -1 if the vector has no w content.
int peak_w_row(const GlobalSystem& system, const Eigen::VectorXd& shape) {
    int best = -1;
    double best_abs = 0.0;
    for (int r : system.w_rows()) {
        const double v = std::abs(shape[r]);
        if (v > best_abs) {
            best_abs = v;
            best = r;
        }
    }
    return best;
}

double m_correlation(const SparseMatrix& mass, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd mb = mass * b;
    const double ab = a.dot(mb);
    const double aa = a.dot(mass * a);
    const double bb = b.dot(mb);
    if (!(aa > 0.0 && bb > 0.0)) return 0.0;
    return std::abs(ab) / std::sqrt(aa * bb);
}

ModeResult make_mode(const GlobalSystem& system, int index, double lambda,
                     const Eigen::VectorXd& vector) {
    ModeResult mode;
    mode.index = index;
    mode.omega = std::sqrt(std::max(lambda, 0.0));
    mode.omega_bar = nondimensional_frequency(system.model, mode.omega);
    mode.flexural_share = flexural_share(system, vector, system.mass * vector);
    Eigen::VectorXd shape = vector;
    const int peak = peak_w_row(system, shape);
    if (mode.flexural() && peak >= 0) {
        shape /= shape[peak];
    } else {
        Eigen::Index at = 0;
        shape.cwiseAbs().maxCoeff(&at);
        shape /= shape[at];
    }
    mode.shape = std::move(shape);
    if (mode.flexural()) mode.label = classify_mode(system, mode.shape);
    return mode;
}

}  // namespace

std::optional<ModeLabel> classify_mode(const GlobalSystem& system, const Eigen::VectorXd& shape) {
    if (system.mesh.skew != 0.0) return std::nullopt;
    const Eigen::VectorXd full = system.assembler.expand(shape);
    constexpr int kMaxHalfWaves = 6;
    const double a = system.mesh.a;
    const double b = system.mesh.b;
    double best = -1.0;
    ModeLabel label{1, 1};
    for (int m = 1; m <= kMaxHalfWaves; ++m) {
        for (int n = 1; n <= kMaxHalfWaves; ++n) {
            double dot = 0.0;
            double norm = 0.0;
            for (int node = 0; node < system.mesh.node_count(); ++node) {
                const Eigen::Vector2d& p = system.mesh.nodes[node];
                const double s = std::sin(m * std::numbers::pi * p.x() / a) *
                                 std::sin(n * std::numbers::pi * p.y() / b);
                dot += s * full[kDofsPerNode * node + kW];
                norm += s * s;
            }
            const double c = norm > 0.0 ? std::abs(dot) / std::sqrt(norm) : 0.0;
            if (c > best * (1.0 + 1e-9)) {
                best = c;
                label = {m, n};
            }
        }
    }
    return label;
}

std::vector<ModeResult> solve_linear_modes(const GlobalSystem& system, int count) {
    SubspaceEigenSolver solver(system.assembler.pattern());
    const EigenPairs pairs = solver.solve(system.linear_operator(), system.mass, count);
    std::vector<ModeResult> modes;
    for (int i = 0; i < count; ++i)
        modes.push_back(make_mode(system, i, pairs.values[i], pairs.vectors.col(i)));
    return modes;
}

std::vector<ModeResult> flexural_modes(const GlobalSystem& system, int count) {
    std::vector<ModeResult> all = solve_linear_modes(system, count);
    std::vector<ModeResult> out;
    for (auto& m : all)
        if (m.flexural()) out.push_back(std::move(m));
    return out;
}

namespace {

// Scales `shape` so that its largest |w0| equals `amplitude`; the sign makes
// the peak positive, or aligns with `reference` when one is given.
Eigen::VectorXd scale_to_amplitude(const GlobalSystem& system, const Eigen::VectorXd& shape,
                                   double amplitude, const Eigen::VectorXd* reference) {
    const int peak = peak_w_row(system, shape);
    if (peak < 0) throw NumericError("mode has no transverse displacement to scale");
    Eigen::VectorXd out = shape * (amplitude / shape[peak]);
    if (reference != nullptr && out.dot(system.mass * *reference) < 0.0) out = -out;
    return out;
}

SparseMatrix assemble_secant_increment(const GlobalSystem& system, const Eigen::VectorXd& delta) {
    return system.assembler.assemble_with([&](int e) {
        const ElementVector de = system.assembler.gather(delta, e);
        const NonlinearElementMatrices nl =
            element_nonlinear(system.section, system.kinematics[e], de);
        return ElementMatrix(0.5 * nl.n1 + nl.n2 / 3.0);
    });
}

constexpr double kDistinctShapes = 0.05;
constexpr double kCycleSlack = 10.0;

}  // namespace

ModeResult nonlinear_iterate(const GlobalSystem& system, const ModeResult& start, double w_over_h,
                             const NonlinearOptions& options) {
    if (!(w_over_h > 0.0)) throw DomainError("amplitude ratio w/h must be positive");
    const double amplitude = w_over_h * system.section.thickness;
    const int n = system.assembler.free_count();
    const int candidates = std::min(options.candidate_modes, n);

    const SparseMatrix base = system.linear_operator();
    SubspaceEigenSolver solver(system.assembler.pattern());

    // A linear start takes the configured deflection sign; a converged
    // neighbour keeps its own orientation.
    Eigen::VectorXd delta = scale_to_amplitude(system, start.shape, amplitude, nullptr);
    if (start.iterations == 0) {
        if (options.initial_sign < 0.0) delta = -delta;
    } else {
        delta = scale_to_amplitude(system, start.shape, amplitude, &start.shape);
    }
    double omega_prev = start.omega;
    Eigen::VectorXd before;
    int steady = 0;

    ModeResult result;
    result.index = start.index;
    result.label = start.label;
    result.amplitude = w_over_h;
    result.converged = false;

    for (int it = 1; it <= options.max_iterations; ++it) {
        const SparseMatrix secant = base + assemble_secant_increment(system, delta);
        EigenPairs pairs;
        try {
            pairs = solver.solve(secant, system.mass, candidates);
        } catch (const NumericError& e) {
            // A diverging iterate can make the secant operator indefinite.
            result.failure = e.what();
            break;
        }

        int chosen = -1;
        double chosen_corr = 0.0;
        if (options.selection == ModeSelection::Tracked) {
            for (int j = 0; j < candidates; ++j) {
                const double c = m_correlation(system.mass, pairs.vectors.col(j), delta);
                if (c > chosen_corr) {
                    chosen_corr = c;
                    chosen = j;
                }
            }
        } else {
            for (int j = 0; j < candidates && chosen < 0; ++j) {
                const Eigen::VectorXd v = pairs.vectors.col(j);
                if (flexural_share(system, v, system.mass * v) > 0.5) chosen = j;
            }
            if (chosen < 0) chosen = 0;
            chosen_corr = m_correlation(system.mass, pairs.vectors.col(chosen), delta);
        }
        if (chosen < 0) {
            result.failure = "no candidate mode correlates with the iterate";
            break;
        }

        const double omega = std::sqrt(std::max(pairs.values[chosen], 0.0));
        const Eigen::VectorXd next =
            scale_to_amplitude(system, pairs.vectors.col(chosen), amplitude, &delta);

        const double freq_change = std::abs(omega - omega_prev) / omega;
        const double shape_change = (next - delta).lpNorm<1>() / next.lpNorm<1>();
        const double cycle_change =
            before.size() == next.size() ? (next - before).lpNorm<1>() / next.lpNorm<1>() : 1.0;

        result.trace.push_back(omega);
        result.iterations = it;
        result.omega = omega;
        result.correlation = chosen_corr;
        if (chosen_corr < options.correlation_threshold) result.redistributed = true;
        result.flexural_share = flexural_share(system, next, system.mass * next);
        before = delta;
        delta = next;
        omega_prev = omega;
        if (freq_change <= options.tolerance && shape_change <= options.tolerance) {
            result.converged = true;
            break;
        }
        // Past a redistribution the iterates can alternate between two
        // mirror-image shapes with one stationary frequency.
        steady = freq_change <= options.tolerance ? steady + 1 : 0;
        if (steady >= 2 && shape_change > kDistinctShapes &&
            cycle_change <= kCycleSlack * options.tolerance) {
            result.converged = true;
            result.alternating = true;
            break;
        }
    }
    result.omega_bar = nondimensional_frequency(system.model, result.omega);
    result.shape = delta / amplitude;
    return result;
}

bool AmplitudeCurve::all_converged() const {
    return std::all_of(points.begin(), points.end(),
                       [](const AmplitudePoint& p) { return p.mode.converged; });
}

AmplitudeCurve amplitude_sweep(const GlobalSystem& system, const ModeResult& linear,
                               std::span<const double> amplitudes,
                               const NonlinearOptions& options) {
    for (std::size_t i = 1; i < amplitudes.size(); ++i)
        if (!(amplitudes[i] > amplitudes[i - 1]))
            throw DomainError("amplitude list must be strictly increasing");
    AmplitudeCurve curve;
    curve.omega_linear = linear.omega;
    curve.omega_bar_linear = linear.omega_bar;
    const ModeResult* previous = &linear;
    ModeResult carry;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        AmplitudePoint point;
        point.w_over_h = amplitudes[i];
        point.mode = nonlinear_iterate(system, *previous, amplitudes[i], options);
        point.ratio = point.mode.omega / linear.omega;
        point.drop = !curve.points.empty() && point.ratio < curve.points.back().ratio;
        curve.points.push_back(point);
        carry = curve.points.back().mode;
        previous = &carry;
    }
    return curve;
}

double deflection_at(const GlobalSystem& system, const Eigen::VectorXd& shape,
                     const Eigen::Vector2d& point) {
    const MeshLocation loc = locate(system.mesh, point);
    const ElementVector de = system.assembler.gather(shape, loc.element);
    const ShapeFunctions sf = shape_functions(loc.xi, loc.eta);
    double w = 0.0;
    for (int i = 0; i < kNodesPerElement; ++i) w += sf.values[i] * de[kDofsPerNode * i + kW];
    return w;
}

}  // namespace fgplate
