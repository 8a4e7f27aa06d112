#pragma once

#include "fgplate/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fgplate {

/// A batch of plate cases sharing geometry, loading and mesh; one case per
/// gradient index. Lengths in metres, temperatures in kelvin, the skew angle
/// in degrees.
struct StudyConfig {
    int version = 1;
    std::string name = "study";
    std::string material_name = "Si3N4/SUS304";
    MaterialSpec material = si3n4_sus304();
    double a = 1.0;
    double b = 1.0;
    double h = 0.1;
    double skew_deg = 0.0;
    std::vector<double> gradient_indices{0.0};
    ThermalState thermal = ThermalState::ambient();
    BoundaryCondition bc = BoundaryCondition::SimplySupported;
    int nx = 8;
    int ny = 8;
    std::vector<double> amplitudes;  // w/h; empty means linear only
    int linear_modes = 4;            // flexural modes reported per case
    int mode = 1;                    // flexural mode followed by the sweep, 1-based
    NonlinearOptions nonlinear;

    PlateModel model(double gradient_index) const;
};

/// Flat INI text: top-level `version` and `name`, then sections [material],
/// [geometry], [grading], [thermal], [boundary], [mesh], [analysis].
/// Throws ConfigError carrying the offending line.
StudyConfig parse_study(std::string_view text);
StudyConfig load_study(const std::filesystem::path& path);

/// Semantic fields only (the name is a label and does not take part).
std::string canonical_form(const StudyConfig& config);
/// 64-bit FNV-1a of canonical_form, 16 hex digits.
std::string config_hash(const StudyConfig& config);

struct LinearRow {
    double k = 0.0;
    int order = 0;  // 1-based among flexural modes
    std::optional<ModeLabel> label;
    double omega = 0.0;
    double omega_bar = 0.0;
    double flexural_share = 0.0;
};

struct SweepRow {
    double k = 0.0;
    double w_over_h = 0.0;
    double omega_bar_linear = 0.0;
    double ratio = 1.0;
    bool drop = false;
    int iterations = 0;
    bool converged = true;
    bool alternating = false;
    bool redistributed = false;
    std::string failure;
};

struct StudyReport {
    std::string name;
    std::string hash;
    std::string version;
    std::vector<double> gradient_indices;
    std::vector<double> amplitudes;
    std::vector<LinearRow> linear;
    std::vector<SweepRow> rows;  // k-major, amplitudes ascending
    double seconds = 0.0;

    bool all_converged() const;
    std::optional<double> ratio(double k, double w_over_h) const;
    /// Lowest flexural mode carrying the (m, n) or (n, m) label.
    std::optional<double> omega_bar(double k, ModeLabel label) const;
};

/// Runs every case; with jobs > 1 the cases run concurrently and are merged
/// in configuration order, so the report does not depend on `jobs`.
StudyReport run_study(const StudyConfig& config, int jobs = 1);

void write_linear_csv(const StudyReport& report, std::ostream& out);
void write_rows_csv(const StudyReport& report, std::ostream& out);
/// Ratios laid out as one row per k and one column per amplitude.
void write_table_csv(const StudyReport& report, std::ostream& out);
void write_report_json(const StudyReport& report, std::ostream& out);

/// Writes <name>_linear.csv, <name>_rows.csv, <name>_table.csv and
/// <name>_report.json into `dir` (created if needed); returns the paths.
std::vector<std::filesystem::path> write_study_outputs(const StudyReport& report,
                                                       const std::filesystem::path& dir);

struct ModeShapeSample {
    double s = 0.0;  // parametric position along a
    double t = 0.0;  // parametric position along b
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
};

struct ModeShapeExport {
    double k = 0.0;
    double w_over_h = 0.0;
    double ratio = 1.0;
    std::vector<ModeShapeSample> grid;      // corner-node grid
    std::vector<ModeShapeSample> slice_x;   // along y = b/2
    std::vector<ModeShapeSample> slice_y;   // along x = a/2
};

/// Converged w field of the first case at `w_over_h` (0 gives the linear
/// mode), reached by sweeping the configured amplitudes below it. Scaled so
/// that the largest grid value is exactly 1. Throws NumericError if the
/// iteration did not converge.
ModeShapeExport export_mode_shape(const StudyConfig& config, double w_over_h, int samples = 41);
void write_mode_shape_csv(const ModeShapeExport& shape, std::ostream& grid, std::ostream& slices);

std::string library_version();

}  // namespace fgplate
