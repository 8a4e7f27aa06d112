// Batch front-end: run study configs, reproduce the published tables,
// export mode shapes and mesh dumps.

#include "fgplate/errors.hpp"
#include "fgplate/reference.hpp"
#include "fgplate/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace fgplate;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kNotConverged = 3, kMismatch = 4 };

struct Common {
    std::string mesh;
    std::optional<double> tolerance;
    int jobs = 1;
    std::string out;
};

fs::path output_dir(const Common& c) {
    if (!c.out.empty()) return c.out;
    if (const char* env = std::getenv("FGPLATE_OUT_DIR"); env && *env) return env;
    return "fgplate_out";
}

std::optional<int> parse_mesh(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto x = text.find_first_of("xX");
    try {
        std::size_t used = 0;
        const int nx = std::stoi(text.substr(0, x), &used);
        if (x != std::string::npos) {
            const int ny = std::stoi(text.substr(x + 1));
            if (ny != nx) throw ConfigError("--mesh: only square subdivisions NxN are supported");
        }
        if (nx < 1 || nx > 64) throw ConfigError("--mesh: N must lie in [1, 64]");
        return nx;
    } catch (const std::logic_error&) {
        throw ConfigError("--mesh: expected NxN, got '" + text + "'");
    }
}

StudyConfig load(const std::string& source) {
    if (fs::exists(source)) return load_study(source);
    if (preset_text(source)) return preset_config(source);
    throw ConfigError("'" + source + "' is neither a config file nor a preset name");
}

void apply(StudyConfig& config, const Common& c) {
    if (const auto n = parse_mesh(c.mesh)) config.nx = config.ny = *n;
    if (c.tolerance) {
        if (!(*c.tolerance > 0.0)) throw ConfigError("--tolerance must be positive");
        config.nonlinear.tolerance = *c.tolerance;
    }
}

int cmd_run(const std::string& source, const Common& c) {
    StudyConfig config = load(source);
    apply(config, c);
    const StudyReport report = run_study(config, c.jobs);
    for (const auto& path : write_study_outputs(report, output_dir(c)))
        std::cout << "wrote " << path.string() << '\n';
    if (!report.amplitudes.empty()) write_table_csv(report, std::cout);
    int flagged = 0;
    for (const SweepRow& r : report.rows) {
        if (r.converged) continue;
        ++flagged;
        std::fprintf(stderr, "not converged: k=%g w/h=%g after %d iterations%s%s\n", r.k,
                     r.w_over_h, r.iterations, r.failure.empty() ? "" : ": ", r.failure.c_str());
    }
    std::printf("%zu cases, %.1f s, config %s\n", report.gradient_indices.size(), report.seconds,
                report.hash.c_str());
    return flagged > 0 ? kNotConverged : kOk;
}

int cmd_reproduce(const std::string& id, const Common& c, std::optional<double> max_amplitude) {
    std::vector<std::string> ids;
    if (id == "all")
        ids = table_ids();
    else
        ids.push_back(reference_table(id).id);
    ReproduceOptions options;
    options.jobs = c.jobs;
    options.tolerance = c.tolerance;
    options.max_amplitude = max_amplitude;
    options.mesh = parse_mesh(c.mesh);
    if (options.tolerance && *options.tolerance < 0.0)
        throw ConfigError("--tolerance must be non-negative");

    const fs::path dir = output_dir(c);
    bool ok = true;
    for (const std::string& table : ids) {
        const ReproduceResult result = reproduce(table, options);
        for (const StudyReport& report : result.reports) write_study_outputs(report, dir);
        const fs::path path = dir / ("table" + table + "_comparison.csv");
        std::ofstream out(path);
        write_comparison_csv(result, out);
        write_comparison_summary(result, std::cout);
        std::cout << "wrote " << path.string() << '\n';
        ok = ok && result.passed();
    }
    return ok ? kOk : kMismatch;
}

int cmd_export(const std::string& source, const Common& c, double amplitude, int samples) {
    StudyConfig config = load(source);
    apply(config, c);
    const ModeShapeExport shape = export_mode_shape(config, amplitude, samples);
    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    char tag[64];
    std::snprintf(tag, sizeof tag, "_k%g_w%g", shape.k, shape.w_over_h);
    const fs::path grid = dir / (config.name + tag + "_grid.csv");
    const fs::path slices = dir / (config.name + tag + "_slices.csv");
    std::ofstream g(grid);
    std::ofstream s(slices);
    write_mode_shape_csv(shape, g, s);
    std::cout << "wrote " << grid.string() << "\nwrote " << slices.string() << '\n';
    std::printf("k=%g w/h=%g ratio=%.5f\n", shape.k, shape.w_over_h, shape.ratio);
    return kOk;
}

int cmd_mesh(const std::string& source, const Common& c) {
    StudyConfig config = load(source);
    apply(config, c);
    const PlateModel model = config.model(config.gradient_indices.front());
    const Mesh mesh = generate_mesh(model.a, model.b, model.skew, model.nx, model.ny);
    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    const fs::path nodes = dir / (config.name + "_nodes.csv");
    const fs::path elements = dir / (config.name + "_elements.csv");
    std::ofstream n(nodes);
    std::ofstream e(elements);
    write_mesh_nodes_csv(mesh, n);
    write_mesh_elements_csv(mesh, e);
    std::cout << "wrote " << nodes.string() << "\nwrote " << elements.string() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear free vibration of FGM plates in thermal environments"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--mesh", common.mesh, "Mesh subdivisions NxN (overrides the config)");
        cmd->add_option("--jobs", common.jobs, "Cases run concurrently")->check(CLI::Range(1, 256));
        cmd->add_option("--out", common.out,
                        "Output directory (default $FGPLATE_OUT_DIR or ./fgplate_out)");
    };

    std::string source;
    std::string table;
    double amplitude = 0.0;
    int samples = 41;
    std::optional<double> max_amplitude;

    CLI::App* run = app.add_subcommand("run", "Run a study config file or preset");
    run->add_option("config", source, "Config file or preset name")->required();
    run->add_option("--tolerance", common.tolerance, "Direct-iteration convergence tolerance");
    add_common(run);

    CLI::App* repro = app.add_subcommand("reproduce", "Recompute a published table and compare");
    repro->add_option("table", table, "2a, 2b, 3, 4, 5, 6, 7 or all")->required();
    repro->add_option("--tolerance", common.tolerance,
                      "Relative comparison tolerance (overrides the per-table value)");
    repro->add_option("--max-amplitude", max_amplitude, "Skip columns above this w/h");
    add_common(repro);

    CLI::App* exp = app.add_subcommand("export-mode", "Export a converged mode shape as CSV");
    exp->add_option("config", source, "Config file or preset name")->required();
    exp->add_option("--amplitude", amplitude, "w/h of the exported shape (0 = linear)")
        ->required()
        ->check(CLI::NonNegativeNumber);
    exp->add_option("--samples", samples, "Points per centre-line slice")->check(CLI::Range(3, 10001));
    exp->add_option("--tolerance", common.tolerance, "Direct-iteration convergence tolerance");
    add_common(exp);

    CLI::App* mesh = app.add_subcommand("mesh", "Dump the mesh of a config as CSV");
    mesh->add_option("config", source, "Config file or preset name")->required();
    add_common(mesh);

    CLI::App* list = app.add_subcommand("presets", "List built-in configurations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return cmd_run(source, common);
        if (*repro) return cmd_reproduce(table, common, max_amplitude);
        if (*exp) return cmd_export(source, common, amplitude, samples);
        if (*mesh) return cmd_mesh(source, common);
        if (*list) {
            for (const auto& name : preset_names()) std::cout << name << '\n';
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
