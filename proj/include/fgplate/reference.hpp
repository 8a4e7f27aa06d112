#pragma once

#include "fgplate/study.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fgplate {

/// Built-in study configurations (INI text), by name.
std::vector<std::string> preset_names();
std::optional<std::string> preset_text(std::string_view name);
/// Parses a preset; throws ConfigError for unknown names.
StudyConfig preset_config(std::string_view name);

enum class ReferenceKind {
    Ratio,      // columns are amplitudes w/h, cells are omega_NL / omega_L
    Frequency,  // columns are (m, n) mode labels, cells are omega_bar
};

struct ReferenceRow {
    double k = 0.0;
    std::vector<double> values;  // NaN where the published table is blank
};

/// One published block, reproduced by one preset.
struct ReferenceBlock {
    std::string preset;
    ReferenceKind kind = ReferenceKind::Ratio;
    std::vector<double> amplitudes;  // Ratio blocks
    std::vector<ModeLabel> modes;    // Frequency blocks
    std::vector<ReferenceRow> rows;

    std::size_t column_count() const;
    std::string column_name(std::size_t column) const;
};

/// A reference cell left out of the comparison, with the reason.
struct Exclusion {
    std::string preset;
    double k = 0.0;
    double column = 0.0;  // w/h, or the mode position for frequency blocks
    std::string reason;
};

struct ReferenceTable {
    std::string id;  // "2a", "2b", "3", ..., "7"
    std::string title;
    double tolerance = 0.01;           // relative, for cells up to w/h = 1.0
    double extended_tolerance = 0.05;  // beyond w/h = 1.0 or after a drop
    std::vector<ReferenceBlock> blocks;
    std::vector<Exclusion> exclusions;
};

std::vector<std::string> table_ids();
/// Throws ConfigError for unknown ids.
const ReferenceTable& reference_table(std::string_view id);

enum class CellClass {
    Primary,   // w/h <= 1.0 before any drop of the published row
    Extended,  // after a published drop, or above w/h = 1.0
    Excluded,
};

struct CellComparison {
    std::string preset;
    double k = 0.0;
    std::string column;
    double reference = 0.0;
    double computed = 0.0;
    double deviation = 0.0;  // |computed - reference| / reference
    double tolerance = 0.0;
    CellClass cls = CellClass::Primary;
    std::string note;
    bool converged = true;

    bool passed() const { return cls == CellClass::Excluded || deviation <= tolerance; }
};

struct ReproduceOptions {
    int jobs = 1;
    std::optional<double> tolerance;      // overrides the primary tolerance
    std::optional<double> max_amplitude;  // skip reference columns above this w/h
    std::optional<int> mesh;              // overrides nx = ny
    std::vector<std::string> presets;     // run only these blocks (empty: all)
};

struct ReproduceResult {
    std::string id;
    std::vector<StudyReport> reports;  // one per block
    std::vector<CellComparison> cells;
    double max_deviation = 0.0;   // over compared (non-excluded) cells
    double mean_deviation = 0.0;
    int compared = 0;
    int failed = 0;
    int excluded = 0;

    bool passed() const { return failed == 0; }
};

/// Runs the presets of a published table and compares cell by cell.
ReproduceResult reproduce(std::string_view id, const ReproduceOptions& options = {});

void write_comparison_csv(const ReproduceResult& result, std::ostream& out);
/// Human-readable summary: one line per failing cell plus totals.
void write_comparison_summary(const ReproduceResult& result, std::ostream& out);

}  // namespace fgplate
