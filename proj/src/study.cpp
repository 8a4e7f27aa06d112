#include "fgplate/study.hpp"

#include "fgplate/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#ifndef FGPLATE_VERSION
#define FGPLATE_VERSION "0.0.0"
#endif

namespace fgplate {

std::string library_version() { return FGPLATE_VERSION; }

PlateModel StudyConfig::model(double gradient_index) const {
    PlateModel m;
    m.material = material;
    m.a = a;
    m.b = b;
    m.h = h;
    m.skew = skew_deg * std::numbers::pi / 180.0;
    m.gradient_index = gradient_index;
    m.thermal = thermal;
    m.bc = bc;
    m.nx = nx;
    m.ny = ny;
    return m;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Strips ';' and '#' comments (the INI reader only knows whole-line ones)
// and records the line of every "section.key".
struct Preprocessed {
    std::string text;
    std::map<std::string, int> lines;
    std::map<std::string, int> sections;
};

Preprocessed preprocess(std::string_view text) {
    Preprocessed out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::string section;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto cut = line.find_first_of(";#");
        if (cut != std::string::npos) line.erase(cut);
        const std::string body = trim(line);
        if (!body.empty() && body.front() == '[') {
            const auto close = body.find(']');
            section = trim(body.substr(1, close == std::string::npos ? std::string::npos : close - 1));
            out.sections.emplace(section, number);
        } else if (const auto eq = body.find('='); eq != std::string::npos) {
            const std::string key = trim(body.substr(0, eq));
            out.lines.emplace(section.empty() ? key : section + "." + key, number);
        }
        out.text += line;
        out.text += '\n';
    }
    return out;
}

class Reader {
public:
    Reader(const pt::ptree& tree, const Preprocessed& pre) : tree_(tree), pre_(pre) {}

    int line(const std::string& path) const {
        const auto it = pre_.lines.find(path);
        if (it != pre_.lines.end()) return it->second;
        const auto dot = path.find('.');
        const auto sec = pre_.sections.find(path.substr(0, dot));
        return sec != pre_.sections.end() ? sec->second : 0;
    }

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw ConfigError(path + ": " + what, line(path));
    }

    bool has(const std::string& path) const {
        used_.insert(path);
        return static_cast<bool>(tree_.get_optional<std::string>(pt::ptree::path_type(path, '.')));
    }

    std::string text(const std::string& path, const std::string& fallback) const {
        used_.insert(path);
        const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'));
        return v ? trim(*v) : fallback;
    }

    double number(const std::string& path, double fallback) const {
        if (!has(path)) return fallback;
        return parse_number(path, text(path, ""));
    }

    int integer(const std::string& path, int fallback) const {
        const double v = number(path, fallback);
        if (v != std::floor(v) || std::abs(v) > 1e9) fail(path, "expected an integer");
        return static_cast<int>(v);
    }

    std::vector<double> list(const std::string& path, const std::vector<double>& fallback) const {
        if (!has(path)) return fallback;
        std::string raw = text(path, "");
        std::replace(raw.begin(), raw.end(), ',', ' ');
        std::istringstream in(raw);
        std::vector<double> out;
        std::string item;
        while (in >> item) out.push_back(parse_number(path, item));
        return out;
    }

    // Every key present must have been read by now.
    void reject_unknown() const {
        for (const auto& [section, sub] : tree_) {
            if (sub.empty()) {
                if (pre_.sections.count(section)) continue;
                if (!used_.count(section)) fail(section, "unknown key");
                continue;
            }
            for (const auto& [key, value] : sub) {
                const std::string path = section + "." + key;
                if (!used_.count(path)) fail(path, "unknown key");
            }
        }
    }

private:
    double parse_number(const std::string& path, const std::string& token) const {
        double v = 0.0;
        const char* first = token.data();
        const char* last = first + token.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v))
            fail(path, "'" + token + "' is not a number");
        return v;
    }

    const pt::ptree& tree_;
    const Preprocessed& pre_;
    mutable std::set<std::string> used_;
};

}  // namespace

StudyConfig parse_study(std::string_view text) {
    const Preprocessed pre = preprocess(text);
    pt::ptree tree;
    try {
        std::istringstream in(pre.text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.message(), static_cast<int>(e.line()));
    }
    const Reader r(tree, pre);
    StudyConfig c;

    c.version = r.integer("version", 1);
    if (c.version != 1) r.fail("version", "unsupported config version " + std::to_string(c.version));
    c.name = r.text("name", c.name);
    if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos)
        r.fail("name", "must be a non-empty word usable as a file name");

    // [material]
    const std::string preset = lower(r.text("material.preset", "si3n4/sus304"));
    if (preset == "si3n4/sus304") {
        c.material = si3n4_sus304();
        c.material_name = "Si3N4/SUS304";
        c.material.poisson = r.number("material.poisson", c.material.poisson);
        c.material.shear_factor = r.number("material.shear_factor", c.material.shear_factor);
    } else if (preset == "isotropic") {
        if (!r.has("material.modulus") || !r.has("material.density"))
            r.fail("material.preset", "isotropic material needs modulus and density");
        const double modulus = r.number("material.modulus", 0.0);
        const double density = r.number("material.density", 0.0);
        const double poisson = r.number("material.poisson", 0.3);
        const double shear = r.number("material.shear_factor", 5.0 / 6.0);
        if (!(modulus > 0.0)) r.fail("material.modulus", "must be positive");
        if (!(density > 0.0)) r.fail("material.density", "must be positive");
        if (!(poisson > 0.0 && poisson < 0.5)) r.fail("material.poisson", "must lie in (0, 0.5)");
        c.material = isotropic_material(modulus, poisson, density, shear);
        c.material_name = "isotropic";
    } else {
        r.fail("material.preset", "unknown material '" + preset + "' (Si3N4/SUS304 or isotropic)");
    }
    try {
        c.material.validate();
    } catch (const std::exception& e) {
        r.fail("material.preset", e.what());
    }

    // [geometry]
    c.a = r.number("geometry.a", 1.0);
    if (!(c.a > 0.0)) r.fail("geometry.a", "must be positive");
    if (r.has("geometry.b") && r.has("geometry.aspect"))
        r.fail("geometry.aspect", "give either b or aspect, not both");
    if (r.has("geometry.aspect")) {
        const double ab = r.number("geometry.aspect", 1.0);
        if (!(ab > 0.0)) r.fail("geometry.aspect", "must be positive");
        c.b = c.a / ab;
    } else {
        c.b = r.number("geometry.b", c.a);
        if (!(c.b > 0.0)) r.fail("geometry.b", "must be positive");
    }
    if (r.has("geometry.h") && r.has("geometry.thickness_ratio"))
        r.fail("geometry.thickness_ratio", "give either h or thickness_ratio, not both");
    if (r.has("geometry.thickness_ratio")) {
        const double ah = r.number("geometry.thickness_ratio", 10.0);
        if (!(ah > 0.0)) r.fail("geometry.thickness_ratio", "must be positive");
        c.h = c.a / ah;
    } else {
        c.h = r.number("geometry.h", c.a / 10.0);
        if (!(c.h > 0.0)) r.fail("geometry.h", "must be positive");
    }
    c.skew_deg = r.number("geometry.skew", 0.0);
    if (!(c.skew_deg >= 0.0 && c.skew_deg < 75.0))
        r.fail("geometry.skew", "skew angle must lie in [0, 75) degrees");

    // [grading]
    c.gradient_indices = r.list("grading.k", {0.0});
    if (c.gradient_indices.empty()) r.fail("grading.k", "needs at least one gradient index");
    for (double k : c.gradient_indices)
        if (!(k >= 0.0)) r.fail("grading.k", "gradient indices must be non-negative");

    // [thermal]
    c.thermal.reference = r.number("thermal.reference", 300.0);
    c.thermal.ceramic_face = r.number("thermal.ceramic", c.thermal.reference);
    c.thermal.metal_face = r.number("thermal.metal", c.thermal.reference);
    for (const char* key : {"thermal.reference", "thermal.ceramic", "thermal.metal"})
        if (!(r.number(key, 300.0) > 0.0)) r.fail(key, "temperature must be positive (kelvin)");

    // [boundary]
    try {
        c.bc = parse_boundary_condition(r.text("boundary.type", "SSSS"));
    } catch (const ConfigError& e) {
        r.fail("boundary.type", e.what());
    }

    // [mesh]
    c.nx = r.integer("mesh.nx", 8);
    c.ny = r.integer("mesh.ny", c.nx);
    if (c.nx < 1 || c.nx > 64) r.fail("mesh.nx", "must lie in [1, 64]");
    if (c.ny < 1 || c.ny > 64) r.fail("mesh.ny", "must lie in [1, 64]");

    // [analysis]
    c.amplitudes = r.list("analysis.amplitudes", {});
    for (std::size_t i = 0; i < c.amplitudes.size(); ++i) {
        if (!(c.amplitudes[i] > 0.0)) r.fail("analysis.amplitudes", "amplitudes must be positive");
        if (i > 0 && !(c.amplitudes[i] > c.amplitudes[i - 1]))
            r.fail("analysis.amplitudes", "amplitudes must be strictly increasing");
    }
    c.linear_modes = r.integer("analysis.linear_modes", 4);
    if (c.linear_modes < 1 || c.linear_modes > 50) r.fail("analysis.linear_modes", "must lie in [1, 50]");
    c.mode = r.integer("analysis.mode", 1);
    if (c.mode < 1 || c.mode > c.linear_modes)
        r.fail("analysis.mode", "must lie in [1, linear_modes]");
    const std::string selection = lower(r.text("analysis.selection", "lowest"));
    if (selection == "lowest")
        c.nonlinear.selection = ModeSelection::Lowest;
    else if (selection == "tracked")
        c.nonlinear.selection = ModeSelection::Tracked;
    else
        r.fail("analysis.selection", "expected 'lowest' or 'tracked'");
    const double sign = r.number("analysis.sign", -1.0);
    if (sign != 1.0 && sign != -1.0) r.fail("analysis.sign", "expected -1 or 1");
    c.nonlinear.initial_sign = sign;
    c.nonlinear.tolerance = r.number("analysis.tolerance", 1e-4);
    if (!(c.nonlinear.tolerance > 0.0)) r.fail("analysis.tolerance", "must be positive");
    c.nonlinear.max_iterations = r.integer("analysis.max_iterations", 100);
    if (c.nonlinear.max_iterations < 1) r.fail("analysis.max_iterations", "must be at least 1");
    c.nonlinear.candidate_modes = r.integer("analysis.candidates", 4);
    if (c.nonlinear.candidate_modes < 1) r.fail("analysis.candidates", "must be at least 1");

    r.reject_unknown();
    return c;
}

StudyConfig load_study(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_study(buffer.str());
}

// ---------------------------------------------------------------------------
// Hashing

namespace {

void put(std::ostringstream& out, const char* key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << '=' << buf << '\n';
}

void put(std::ostringstream& out, const char* key, const TempCoeffs& c) {
    out << key << ":\n";
    put(out, " p0", c.p0);
    put(out, " pm1", c.pm1);
    put(out, " p1", c.p1);
    put(out, " p2", c.p2);
    put(out, " p3", c.p3);
}

}  // namespace

std::string canonical_form(const StudyConfig& c) {
    std::ostringstream out;
    put(out, "version", c.version);
    for (const auto* phase : {&c.material.ceramic, &c.material.metal}) {
        put(out, "modulus", phase->modulus);
        put(out, "expansion", phase->expansion);
        put(out, "density", phase->density);
        put(out, "conductivity", phase->conductivity);
    }
    put(out, "poisson", c.material.poisson);
    put(out, "shear_factor", c.material.shear_factor);
    put(out, "a", c.a);
    put(out, "b", c.b);
    put(out, "h", c.h);
    put(out, "skew", c.skew_deg);
    for (double k : c.gradient_indices) put(out, "k", k);
    put(out, "ceramic", c.thermal.ceramic_face);
    put(out, "metal", c.thermal.metal_face);
    put(out, "reference", c.thermal.reference);
    out << "bc=" << to_string(c.bc) << '\n';
    put(out, "nx", c.nx);
    put(out, "ny", c.ny);
    for (double w : c.amplitudes) put(out, "amplitude", w);
    put(out, "linear_modes", c.linear_modes);
    put(out, "mode", c.mode);
    out << "selection=" << (c.nonlinear.selection == ModeSelection::Lowest ? "lowest" : "tracked")
        << '\n';
    put(out, "sign", c.nonlinear.initial_sign);
    put(out, "tolerance", c.nonlinear.tolerance);
    put(out, "max_iterations", c.nonlinear.max_iterations);
    put(out, "candidates", c.nonlinear.candidate_modes);
    put(out, "correlation_threshold", c.nonlinear.correlation_threshold);
    return out.str();
}

std::string config_hash(const StudyConfig& config) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : canonical_form(config)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct CaseResult {
    std::vector<LinearRow> linear;
    std::vector<SweepRow> rows;
};

std::vector<ModeResult> enough_flexural_modes(const GlobalSystem& system, int wanted) {
    const int available = system.assembler.free_count();
    int count = std::min(available, 2 * wanted + 4);
    for (;;) {
        std::vector<ModeResult> modes = flexural_modes(system, count);
        if (static_cast<int>(modes.size()) >= wanted || count == available) return modes;
        count = std::min(available, 2 * count);
    }
}

CaseResult run_case(const StudyConfig& config, double k) {
    const GlobalSystem system = build_system(config.model(k));
    const std::vector<ModeResult> modes = enough_flexural_modes(system, config.linear_modes);
    if (static_cast<int>(modes.size()) < config.mode)
        throw NumericError("fewer flexural modes than the requested sweep mode");

    CaseResult out;
    const int reported = std::min<int>(config.linear_modes, static_cast<int>(modes.size()));
    for (int i = 0; i < reported; ++i) {
        LinearRow row;
        row.k = k;
        row.order = i + 1;
        row.label = modes[i].label;
        row.omega = modes[i].omega;
        row.omega_bar = modes[i].omega_bar;
        row.flexural_share = modes[i].flexural_share;
        out.linear.push_back(row);
    }
    if (config.amplitudes.empty()) return out;

    const ModeResult& start = modes[config.mode - 1];
    const AmplitudeCurve curve = amplitude_sweep(system, start, config.amplitudes, config.nonlinear);
    for (const AmplitudePoint& p : curve.points) {
        SweepRow row;
        row.k = k;
        row.w_over_h = p.w_over_h;
        row.omega_bar_linear = curve.omega_bar_linear;
        row.ratio = p.ratio;
        row.drop = p.drop;
        row.iterations = p.mode.iterations;
        row.converged = p.mode.converged;
        row.alternating = p.mode.alternating;
        row.redistributed = p.mode.redistributed;
        row.failure = p.mode.failure;
        out.rows.push_back(row);
    }
    return out;
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

StudyReport run_study(const StudyConfig& config, int jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    const int cases = static_cast<int>(config.gradient_indices.size());
    std::vector<CaseResult> results(cases);
    std::exception_ptr failure;
    const int threads = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
    for (int i = 0; i < cases; ++i) {
        try {
            results[i] = run_case(config, config.gradient_indices[i]);
        } catch (...) {
#pragma omp critical(fgplate_study_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    StudyReport report;
    report.name = config.name;
    report.hash = config_hash(config);
    report.version = library_version();
    report.gradient_indices = config.gradient_indices;
    report.amplitudes = config.amplitudes;
    for (auto& r : results) {
        report.linear.insert(report.linear.end(), r.linear.begin(), r.linear.end());
        report.rows.insert(report.rows.end(), r.rows.begin(), r.rows.end());
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

bool StudyReport::all_converged() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; });
}

std::optional<double> StudyReport::ratio(double k, double w_over_h) const {
    for (const SweepRow& r : rows)
        if (same(r.k, k) && same(r.w_over_h, w_over_h)) return r.ratio;
    return std::nullopt;
}

std::optional<double> StudyReport::omega_bar(double k, ModeLabel label) const {
    const ModeLabel swapped{label.second, label.first};
    for (const LinearRow& r : linear)
        if (same(r.k, k) && r.label && (*r.label == label || *r.label == swapped))
            return r.omega_bar;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

void write_linear_csv(const StudyReport& report, std::ostream& out) {
    out << "k,order,m,n,omega,omega_bar,flexural_share\n";
    for (const LinearRow& r : report.linear) {
        out << fmt("%g", r.k) << ',' << r.order << ',' << (r.label ? r.label->first : 0) << ','
            << (r.label ? r.label->second : 0) << ',' << fmt("%.6f", r.omega) << ','
            << fmt("%.5f", r.omega_bar) << ',' << fmt("%.4f", r.flexural_share) << '\n';
    }
}

void write_rows_csv(const StudyReport& report, std::ostream& out) {
    out << "k,w_over_h,omega_bar_linear,ratio,drop,iterations,converged,alternating,redistributed\n";
    for (const SweepRow& r : report.rows) {
        out << fmt("%g", r.k) << ',' << fmt("%g", r.w_over_h) << ','
            << fmt("%.5f", r.omega_bar_linear) << ',' << fmt("%.5f", r.ratio) << ','
            << int(r.drop) << ',' << r.iterations << ',' << int(r.converged) << ','
            << int(r.alternating) << ',' << int(r.redistributed) << '\n';
    }
}

void write_table_csv(const StudyReport& report, std::ostream& out) {
    out << "k";
    for (double w : report.amplitudes) out << ',' << fmt("%g", w);
    out << '\n';
    for (double k : report.gradient_indices) {
        out << fmt("%g", k);
        for (double w : report.amplitudes) {
            const auto v = report.ratio(k, w);
            out << ',' << (v ? fmt("%.5f", *v) : std::string());
        }
        out << '\n';
    }
}

void write_report_json(const StudyReport& report, std::ostream& out) {
    nlohmann::json j;
    j["name"] = report.name;
    j["version"] = report.version;
    j["config_hash"] = report.hash;
    j["seconds"] = report.seconds;
    j["all_converged"] = report.all_converged();
    j["linear"] = nlohmann::json::array();
    for (const LinearRow& r : report.linear) {
        nlohmann::json row{{"k", r.k}, {"order", r.order}, {"omega", r.omega},
                           {"omega_bar", r.omega_bar}, {"flexural_share", r.flexural_share}};
        if (r.label) row["mode"] = {r.label->first, r.label->second};
        j["linear"].push_back(row);
    }
    j["rows"] = nlohmann::json::array();
    for (const SweepRow& r : report.rows) {
        nlohmann::json row{{"k", r.k},
                           {"w_over_h", r.w_over_h},
                           {"omega_bar_linear", r.omega_bar_linear},
                           {"ratio", r.ratio},
                           {"drop", r.drop},
                           {"iterations", r.iterations},
                           {"converged", r.converged},
                           {"alternating", r.alternating},
                           {"redistributed", r.redistributed}};
        if (!r.failure.empty()) row["failure"] = r.failure;
        j["rows"].push_back(row);
    }
    out << j.dump(2) << '\n';
}

std::vector<std::filesystem::path> write_study_outputs(const StudyReport& report,
                                                       const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    auto emit = [&](const std::string& suffix, auto&& writer) {
        const auto path = dir / (report.name + suffix);
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        writer(report, out);
        paths.push_back(path);
    };
    emit("_linear.csv", write_linear_csv);
    if (!report.amplitudes.empty()) {
        emit("_rows.csv", write_rows_csv);
        emit("_table.csv", write_table_csv);
    }
    emit("_report.json", write_report_json);
    return paths;
}

// ---------------------------------------------------------------------------
// Mode shapes

ModeShapeExport export_mode_shape(const StudyConfig& config, double w_over_h, int samples) {
    if (w_over_h < 0.0) throw DomainError("amplitude must be non-negative");
    if (samples < 3) throw DomainError("a slice needs at least 3 samples");
    const double k = config.gradient_indices.front();
    const GlobalSystem system = build_system(config.model(k));
    const std::vector<ModeResult> modes = enough_flexural_modes(system, config.mode);
    if (static_cast<int>(modes.size()) < config.mode)
        throw NumericError("fewer flexural modes than the requested mode");

    ModeShapeExport out;
    out.k = k;
    out.w_over_h = w_over_h;
    Eigen::VectorXd shape = modes[config.mode - 1].shape;
    if (w_over_h > 0.0) {
        std::vector<double> path;
        for (double w : config.amplitudes)
            if (w < w_over_h) path.push_back(w);
        path.push_back(w_over_h);
        const AmplitudeCurve curve =
            amplitude_sweep(system, modes[config.mode - 1], path, config.nonlinear);
        const AmplitudePoint& last = curve.points.back();
        if (!last.mode.converged)
            throw NumericError("direct iteration did not converge at w/h = " +
                               fmt("%g", w_over_h) + "; refusing to export its shape");
        shape = last.mode.shape;
        out.ratio = last.ratio;
    }

    const Mesh& mesh = system.mesh;
    const double cs = std::cos(mesh.skew);
    const double sn = std::sin(mesh.skew);
    auto sample = [&](double s, double t) {
        ModeShapeSample p;
        p.s = s;
        p.t = t;
        p.x = s * mesh.a + t * mesh.b * sn;
        p.y = t * mesh.b * cs;
        p.w = deflection_at(system, shape, Eigen::Vector2d(p.x, p.y));
        return p;
    };
    for (int j = 0; j <= mesh.ny; ++j)
        for (int i = 0; i <= mesh.nx; ++i)
            out.grid.push_back(sample(static_cast<double>(i) / mesh.nx,
                                      static_cast<double>(j) / mesh.ny));
    for (int i = 0; i < samples; ++i) {
        const double u = static_cast<double>(i) / (samples - 1);
        out.slice_x.push_back(sample(u, 0.5));
        out.slice_y.push_back(sample(0.5, u));
    }

    double peak = 0.0;
    for (const auto& p : out.grid)
        if (std::abs(p.w) > std::abs(peak)) peak = p.w;
    if (peak == 0.0) throw NumericError("mode shape has no transverse displacement");
    for (auto* set : {&out.grid, &out.slice_x, &out.slice_y})
        for (auto& p : *set) p.w /= peak;
    return out;
}

void write_mode_shape_csv(const ModeShapeExport& shape, std::ostream& grid, std::ostream& slices) {
    grid << "s,t,x,y,w\n";
    for (const auto& p : shape.grid)
        grid << fmt("%.6f", p.s) << ',' << fmt("%.6f", p.t) << ',' << fmt("%.6f", p.x) << ','
             << fmt("%.6f", p.y) << ',' << fmt("%.8f", p.w) << '\n';
    slices << "slice,s,t,x,y,w\n";
    for (const auto& [name, set] : {std::pair{"y_mid", &shape.slice_x}, std::pair{"x_mid", &shape.slice_y}})
        for (const auto& p : *set)
            slices << name << ',' << fmt("%.6f", p.s) << ',' << fmt("%.6f", p.t) << ','
                   << fmt("%.6f", p.x) << ',' << fmt("%.6f", p.y) << ',' << fmt("%.8f", p.w)
                   << '\n';
}

}  // namespace fgplate
