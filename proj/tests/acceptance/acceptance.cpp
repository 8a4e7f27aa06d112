// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "fgplate/reference.hpp"
#include "fgplate/solver.hpp"
#include "fgplate/study.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

using namespace fgplate;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Counts failing non-excluded cells at or below `max_w`.
struct CellStats {
    int compared = 0;
    int failed = 0;
    double worst = 0.0;
    std::string worst_cell;
};

CellStats tally(const ReproduceResult& r, const std::function<bool(const CellComparison&)>& keep) {
    CellStats s;
    for (const CellComparison& c : r.cells) {
        if (c.cls == CellClass::Excluded || !keep(c)) continue;
        ++s.compared;
        if (!c.passed()) ++s.failed;
        if (c.deviation > s.worst) {
            s.worst = c.deviation;
            s.worst_cell = fmt("%s k=%g %s", c.preset.c_str(), c.k, c.column.c_str());
        }
    }
    return s;
}

std::string describe(const CellStats& s) {
    return fmt("%d cells, %d outside tolerance, worst %.3f%% (%s)", s.compared, s.failed,
               100.0 * s.worst, s.worst_cell.c_str());
}

const StudyReport& report_of(const ReproduceResult& r, const std::string& name) {
    for (const StudyReport& rep : r.reports)
        if (rep.name == name) return rep;
    throw std::runtime_error("missing report " + name);
}

ReproduceResult run(const char* table, std::vector<std::string> presets,
                    std::optional<double> max_amplitude, std::optional<double> tolerance = {}) {
    ReproduceOptions o;
    o.presets = std::move(presets);
    o.max_amplitude = max_amplitude;
    o.tolerance = tolerance;
    return reproduce(table, o);
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const ReproduceResult r = run("2a", {}, {}, 0.015);
    const double secs = seconds_since(t0);
    const CellStats s = tally(r, [](const CellComparison&) { return true; });
    return {s.failed == 0 && s.compared == 30 && secs < 60.0,
            describe(s) + fmt(", %.1f s", secs)};
}

Outcome criterion2() {
    const ReproduceResult r = run("2b", {}, {});
    const CellStats s = tally(r, [](const CellComparison&) { return true; });
    // closed-form column printed alongside the finite element results
    const std::vector<std::pair<double, double>> analytic{
        {0.2, 1.02599}, {0.4, 1.10027}, {0.6, 1.21402}, {0.8, 1.35735}, {1.0, 1.52192}};
    double worst = 0.0;
    bool ok = true;
    for (const auto& [w, v] : analytic) {
        const auto got = r.reports.front().ratio(0.0, w);
        if (!got) {
            ok = false;
            continue;
        }
        worst = std::max(worst, rel(*got, v));
    }
    ok = ok && worst <= 0.01 && s.failed == 0 && s.compared == 5;
    return {ok, describe(s) + fmt("; analytical column worst %.3f%%", 100.0 * worst)};
}

Outcome criterion3() {
    const ReproduceResult r = run("3", {"table3_ab1_ah10", "table3_ab1_ah20"}, {});
    CellStats primary = tally(r, [](const CellComparison& c) { return c.cls == CellClass::Primary; });
    CellStats extended = tally(r, [](const CellComparison& c) { return c.cls == CellClass::Extended; });
    bool primary_ok = primary.failed == 0;
    for (const CellComparison& c : r.cells)
        if (c.cls == CellClass::Primary && c.deviation > 0.015) primary_ok = false;

    // first decrease of the a/h = 10, k = 0 curve
    double drop_at = -1.0;
    for (const SweepRow& row : report_of(r, "table3_ab1_ah10").rows)
        if (row.k == 0.0 && row.drop) {
            drop_at = row.w_over_h;
            break;
        }
    const bool drop_ok = drop_at >= 1.2 - 1e-9 && drop_at <= 1.6 + 1e-9;
    return {primary_ok && extended.failed == 0 && drop_ok,
            "w/h<=1.0: " + describe(primary) + "; after drop/above 1.0: " + describe(extended) +
                fmt("; a/h=10 k=0 drop at w/h=%g (published 1.4)", drop_at)};
}

Outcome criterion4() {
    const ReproduceResult t4 = run("4", {}, 1.0, 0.02);
    const ReproduceResult t5 = run("5", {}, 1.0, 0.02);
    const ReproduceResult t3 = run("3", {"table3_ab1_ah10", "table3_ab2_ah20"}, 1.0);
    CellStats s4 = tally(t4, [](const CellComparison&) { return true; });
    CellStats s5 = tally(t5, [](const CellComparison&) { return true; });

    int checked = 0;
    int violations = 0;
    const std::vector<std::array<const char*, 3>> triples{
        {"table3_ab1_ah10", "table4_ab1_ah10", "table5_ab1_ah10"},
        {"table3_ab2_ah20", "table4_ab2_ah20", "table5_ab2_ah20"}};
    for (const auto& [amb, t400, t600] : triples) {
        const StudyReport& r0 = report_of(t3, amb);
        const StudyReport& r1 = report_of(t4, t400);
        const StudyReport& r2 = report_of(t5, t600);
        for (const SweepRow& row : r0.rows) {
            const auto a = r1.ratio(row.k, row.w_over_h);
            const auto b = r2.ratio(row.k, row.w_over_h);
            if (!a || !b) continue;
            ++checked;
            if (!(*b > *a && *a > row.ratio)) ++violations;
        }
    }
    return {s4.failed == 0 && s5.failed == 0 && checked > 0 && violations == 0,
            "T_c=400: " + describe(s4) + "; T_c=600: " + describe(s5) +
                fmt("; ordering 600 > 400 > ambient holds on %d of %d cells", checked - violations,
                    checked)};
}

Outcome criterion5() {
    const ReproduceResult t6 = run("6", {}, 1.0, 0.015);
    const ReproduceResult ss = run("4", {"table4_ab1_ah20", "table4_ab2_ah20"}, 1.0);
    const CellStats s = tally(t6, [](const CellComparison&) { return true; });
    int cells = 0;
    int below = 0;
    const std::vector<std::pair<const char*, const char*>> pairs{
        {"table6_ab1", "table4_ab1_ah20"}, {"table6_ab2", "table4_ab2_ah20"}};
    for (const auto& [clamped, supported] : pairs) {
        const StudyReport& c = report_of(t6, clamped);
        const StudyReport& p = report_of(ss, supported);
        for (const SweepRow& row : c.rows) {
            const auto other = p.ratio(row.k, row.w_over_h);
            if (!other) continue;
            ++cells;
            if (row.ratio < *other) ++below;
        }
    }
    const double share = cells > 0 ? double(below) / cells : 0.0;
    return {s.failed == 0 && share >= 0.9,
            describe(s) + fmt("; clamped below simply supported on %d of %d cells (%.0f%%)", below,
                              cells, 100.0 * share)};
}

Outcome criterion6() {
    const ReproduceResult r = run("7", {}, 1.0, 0.02);
    const CellStats low = tally(r, [](const CellComparison& c) { return c.preset != "table7_skew45"; });
    const CellStats high = tally(r, [](const CellComparison& c) { return c.preset == "table7_skew45"; });
    return {low.failed == 0 && high.failed == 0,
            "15/30 deg: " + describe(low) + "; 45 deg (consistent cells): " + describe(high)};
}

// Strain energy by direct quadrature of the Green strains.
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
        u += 0.5 *
             (eps.dot(sec.A * eps) + 2.0 * eps.dot(sec.B * kappa) + kappa.dot(sec.D * kappa) +
              gamma.dot(sec.shear * gamma)) *
             op.det_jacobian * quad[q].weight;
    }
    return u;
}

NodeCoords parallelogram(double a, double b, double psi) {
    NodeCoords nodes;
    const auto& ref = reference_nodes();
    for (int i = 0; i < kNodesPerElement; ++i) {
        const double y = 0.5 * (ref[i].y() + 1.0) * b * std::cos(psi);
        nodes[i] = {0.5 * (ref[i].x() + 1.0) * a + y * std::tan(psi), y};
    }
    return nodes;
}

double sparse_max(const SparseMatrix& m) {
    double v = 0.0;
    for (int c = 0; c < m.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
}

double sparse_asymmetry(const SparseMatrix& m) {
    return sparse_max(m - SparseMatrix(m.transpose())) / sparse_max(m);
}

PlateModel table2a_model(double k, double tc, int n) {
    PlateModel m;
    m.h = 1.0 / 8.0;
    m.gradient_index = k;
    m.thermal = ThermalState{tc, 300.0, 300.0};
    m.nx = m.ny = n;
    return m;
}

Outcome criterion7() {
    std::vector<std::string> failures;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    };

    // energy identity and homogeneity
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double energy_err = 0.0;
    double homog_err = 0.0;
    double element_asym = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const NodeCoords nodes = parallelogram(0.5 + 0.5 * std::abs(unit(rng)),
                                               0.5 + 0.5 * std::abs(unit(rng)), 0.7 * std::abs(unit(rng)));
        const SectionProperties sec = section_properties(si3n4_sus304(), 0.02 + 0.05 * std::abs(unit(rng)),
                                                         10.0 * std::abs(unit(rng)), ThermalState::ambient());
        const ElementKinematics kin = element_kinematics(nodes);
        ElementVector d;
        for (int i = 0; i < kElementDofs; ++i) d[i] = 1e-3 * unit(rng);
        const LinearElementMatrices lin = element_linear(sec, nodes);
        const NonlinearElementMatrices nl = element_nonlinear(sec, kin, d);
        const double quadratic =
            d.dot((0.5 * lin.stiffness + nl.n1 / 6.0 + nl.n2 / 12.0 + 0.5 * lin.shear_stiffness) * d);
        energy_err = std::max(energy_err, rel(quadratic, strain_energy(sec, kin, d)));
        const NonlinearElementMatrices scaled = element_nonlinear(sec, kin, 3.0 * d);
        homog_err = std::max({homog_err, (scaled.n1 - 3.0 * nl.n1).norm() / scaled.n1.norm(),
                              (scaled.n2 - 9.0 * nl.n2).norm() / scaled.n2.norm()});
        for (const ElementMatrix* m : {&lin.stiffness, &lin.shear_stiffness, &lin.mass, &nl.n1, &nl.n2})
            element_asym = std::max(element_asym, (*m - m->transpose()).norm() / m->norm());
    }
    check(energy_err <= 1e-8, fmt("energy identity %.2e", energy_err));
    check(homog_err <= 1e-12, fmt("N1/N2 homogeneity %.2e", homog_err));

    // global symmetry and M-orthogonality on a skew heated plate
    PlateModel skew = table2a_model(2.0, 600.0, 6);
    skew.skew = 30.0 * std::numbers::pi / 180.0;
    const GlobalSystem sys = build_system(skew);
    double global_asym = element_asym;
    for (const SparseMatrix* m : {&sys.stiffness, &sys.shear_stiffness, &sys.mass, &sys.geometric})
        global_asym = std::max(global_asym, sparse_asymmetry(*m));
    check(global_asym <= 1e-12, fmt("symmetry %.2e", global_asym));
    const std::vector<ModeResult> modes = solve_linear_modes(sys, 8);
    Eigen::MatrixXd phi(sys.dofs.free_count, modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        phi.col(i) = modes[i].shape / std::sqrt(modes[i].shape.dot(sys.mass * modes[i].shape));
    const Eigen::MatrixXd gram = phi.transpose() * (sys.mass * phi);
    const double ortho = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    check(ortho <= 1e-8, fmt("M-orthogonality %.2e", ortho));

    // zero skew through the edge-rotation path
    const Mesh mesh = generate_mesh(1.0, 1.0, 0.0, 6, 6);
    const DofMap plain = apply_boundary_conditions(mesh, BoundaryCondition::SimplySupported);
    DofMap forced = plain;
    for (int n = 0; n < mesh.node_count(); ++n)
        if (mesh.edge_flags[n] & (kEdgeLeft | kEdgeRight)) forced.rotated[n] = true;
    const SectionProperties sec = section_properties(si3n4_sus304(), 0.1, 2.0, ThermalState::ambient());
    auto kernel = [&](int e) {
        const LinearElementMatrices l = element_linear(sec, mesh.element_coords(e));
        return ElementMatrix(l.stiffness + l.shear_stiffness);
    };
    const SparseMatrix ka = Assembler(mesh, plain).assemble_with(kernel);
    const SparseMatrix kb = Assembler(mesh, forced).assemble_with(kernel);
    const double skew_diff = sparse_max(ka - kb) / sparse_max(ka);
    check(skew_diff <= 1e-10, fmt("psi=0 vs rectangle %.2e", skew_diff));

    // k -> 0 against a homogeneous ceramic plate
    const MaterialSpec fg = si3n4_sus304();
    PlateModel ceramic = table2a_model(0.0, 300.0, 6);
    ceramic.material = isotropic_material(eval_temp_property(fg.ceramic.modulus, 300.0), fg.poisson,
                                          fg.ceramic.density, fg.shear_factor);
    const double w_ceramic = flexural_modes(build_system(ceramic), 4).front().omega;
    const double w_zero = flexural_modes(build_system(table2a_model(1e-13, 300.0, 6)), 4).front().omega;
    check(rel(w_zero, w_ceramic) <= 1e-10, fmt("k->0 %.2e", rel(w_zero, w_ceramic)));

    // vanishing amplitude
    PlateModel heated = table2a_model(2.0, 400.0, 6);
    heated.h = 0.1;
    const GlobalSystem hs = build_system(heated);
    const ModeResult lin = flexural_modes(hs, 4).front();
    const double small = nonlinear_iterate(hs, lin, 1e-4).omega / lin.omega;
    check(std::abs(small - 1.0) <= 1e-4, fmt("w/h->0 ratio %.8f", small));

    // mesh refinement on the fundamental frequencies of the linear validation set
    double refine = 0.0;
    for (double tc : {400.0, 600.0})
        for (double k : {0.0, 0.5, 1.0, 2.0, 10.0}) {
            const double w8 = flexural_modes(build_system(table2a_model(k, tc, 8)), 4).front().omega;
            const double w12 = flexural_modes(build_system(table2a_model(k, tc, 12)), 4).front().omega;
            refine = std::max(refine, rel(w8, w12));
        }
    check(refine < 1e-3, fmt("8x8 -> 12x12 change %.4f%%", 100.0 * refine));

    std::string detail = fmt(
        "energy %.1e, homogeneity %.1e, symmetry %.1e, M-orth %.1e, psi=0 %.1e, k->0 %.1e, "
        "w/h->0 |ratio-1| %.1e, refinement %.4f%%",
        energy_err, homog_err, global_asym, ortho, skew_diff, rel(w_zero, w_ceramic),
        std::abs(small - 1.0), 100.0 * refine);
    for (const std::string& f : failures) detail += "; FAILED " + f;
    return {failures.empty(), detail};
}

Outcome criterion8() {
    const double e = 210e9;
    const double nu = 0.3;
    const double rho = 7800.0;
    PlateModel m;
    m.material = isotropic_material(e, nu, rho, 0.91);
    m.h = 1e-3;
    const double d = e * std::pow(m.h, 3) / (12.0 * (1.0 - nu * nu));
    const double navier = std::numbers::pi * std::numbers::pi * 2.0 * std::sqrt(d / (rho * m.h));
    const double omega = flexural_modes(build_system(m), 4).front().omega;
    const double dev = rel(omega, navier);
    return {dev <= 0.005, fmt("omega %.6f rad/s vs closed form %.6f (%.4f%%)", omega, navier, 100.0 * dev)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"linear FGM frequencies", criterion1},
        {"thin isotropic nonlinear ratios", criterion2},
        {"ambient FGM sweeps and drop", criterion3},
        {"thermal-gradient sweeps and ordering", criterion4},
        {"clamped plates", criterion5},
        {"skew plates", criterion6},
        {"property suite", criterion7},
        {"thin-plate closed form", criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %zu (%s): %s [%.1f s] %s\n", i + 1, criteria[i].first,
                    o.pass ? "PASS" : "FAIL", seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
