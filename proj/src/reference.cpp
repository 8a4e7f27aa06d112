#include "fgplate/reference.hpp"

#include "fgplate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

namespace fgplate {

namespace {

constexpr double kBlank = std::numeric_limits<double>::quiet_NaN();

const char* const kGradedK = "0, 0.5, 1, 2, 5, 10";
const char* const kSweep = "0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6";

struct PresetSpec {
    std::string name;
    std::string body;
};

std::string sweep_preset(const std::string& name, double aspect, double thickness_ratio,
                         double ceramic, const char* bc, double skew, const char* k,
                         const char* amplitudes) {
    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "version = 1\n"
                  "name = %s\n"
                  "\n[material]\npreset = Si3N4/SUS304\n"
                  "\n[geometry]\na = 1.0\naspect = %g\nthickness_ratio = %g\nskew = %g\n"
                  "\n[grading]\nk = %s\n"
                  "\n[thermal]\nceramic = %g\nmetal = 300\nreference = 300\n"
                  "\n[boundary]\ntype = %s\n"
                  "\n[mesh]\nnx = 8\nny = 8\n"
                  "\n[analysis]\namplitudes = %s\nlinear_modes = 4\nmode = 1\n",
                  name.c_str(), aspect, thickness_ratio, skew, k, ceramic, bc, amplitudes);
    return buf;
}

const std::vector<PresetSpec>& presets() {
    static const std::vector<PresetSpec> list = [] {
        std::vector<PresetSpec> p;
        for (int tc : {400, 600}) {
            const std::string name = "table2a_tc" + std::to_string(tc);
            std::string body = sweep_preset(name, 1, 8, tc, "SSSS", 0, "0, 0.5, 1, 2, 10", "");
            const auto at = body.find("linear_modes = 4");
            body.replace(at, 16, "linear_modes = 6");
            p.push_back({name, body});
        }
        p.push_back({"table2b",
                     "version = 1\n"
                     "name = table2b\n"
                     "\n[material]\npreset = isotropic\nmodulus = 210e9\npoisson = 0.3\n"
                     "density = 7800\nshear_factor = 0.91\n"
                     "\n[geometry]\na = 1.0\naspect = 1\nthickness_ratio = 1000\n"
                     "\n[grading]\nk = 0\n"
                     "\n[boundary]\ntype = SSSS\n"
                     "\n[mesh]\nnx = 8\nny = 8\n"
                     "\n[analysis]\namplitudes = 0.2, 0.4, 0.6, 0.8, 1.0\n"});
        for (int ab : {1, 2})
            for (int ah : {10, 20, 100}) {
                const std::string name =
                    "table3_ab" + std::to_string(ab) + "_ah" + std::to_string(ah);
                p.push_back({name, sweep_preset(name, ab, ah, 300, "SSSS", 0, kGradedK, kSweep)});
            }
        for (int ab : {1, 2})
            for (int ah : {10, 20}) {
                const std::string name =
                    "table4_ab" + std::to_string(ab) + "_ah" + std::to_string(ah);
                p.push_back({name, sweep_preset(name, ab, ah, 400, "SSSS", 0, kGradedK, kSweep)});
            }
        p.push_back({"table5_ab1_ah10",
                     sweep_preset("table5_ab1_ah10", 1, 10, 600, "SSSS", 0, kGradedK, kSweep)});
        p.push_back({"table5_ab2_ah20",
                     sweep_preset("table5_ab2_ah20", 2, 20, 600, "SSSS", 0, kGradedK, kSweep)});
        for (int ab : {1, 2}) {
            const std::string name = "table6_ab" + std::to_string(ab);
            p.push_back({name, sweep_preset(name, ab, 20, 400, "CCCC", 0, kGradedK,
                                            "0.2, 0.4, 0.6, 0.8, 1.0")});
        }
        for (int psi : {15, 30, 45}) {
            const std::string name = "table7_skew" + std::to_string(psi);
            p.push_back({name, sweep_preset(name, 1, 10, 400, "SSSS", psi, kGradedK,
                                            "0.2, 0.6, 1.0, 1.2, 1.6")});
        }
        return p;
    }();
    return list;
}

const std::map<std::string, std::string>& preset_aliases() {
    static const std::map<std::string, std::string> aliases{
        {"table3_a_h10", "table3_ab1_ah10"},
        {"table3_a_h20", "table3_ab1_ah20"},
        {"table3_a_h100", "table3_ab1_ah100"},
    };
    return aliases;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : presets()) names.push_back(p.name);
    for (const auto& [alias, target] : preset_aliases()) names.push_back(alias);
    return names;
}

std::optional<std::string> preset_text(std::string_view name) {
    std::string key(name);
    if (const auto it = preset_aliases().find(key); it != preset_aliases().end()) key = it->second;
    for (const auto& p : presets())
        if (p.name == key) return p.body;
    return std::nullopt;
}

StudyConfig preset_config(std::string_view name) {
    const auto text = preset_text(name);
    if (!text) throw ConfigError("unknown preset '" + std::string(name) + "'");
    return parse_study(*text);
}

// ---------------------------------------------------------------------------
// Published values

std::size_t ReferenceBlock::column_count() const {
    return kind == ReferenceKind::Ratio ? amplitudes.size() : modes.size();
}

std::string ReferenceBlock::column_name(std::size_t column) const {
    char buf[32];
    if (kind == ReferenceKind::Ratio)
        std::snprintf(buf, sizeof buf, "w/h=%g", amplitudes[column]);
    else
        std::snprintf(buf, sizeof buf, "mode(%d,%d)", modes[column].first, modes[column].second);
    return buf;
}

namespace {

const std::vector<double> kFull{0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6};
const std::vector<double> kShort{0.2, 0.4, 0.6, 0.8, 1.0};
const std::vector<double> kSkew{0.2, 0.6, 1.0, 1.2, 1.6};

ReferenceBlock ratio_block(std::string preset, const std::vector<double>& amplitudes,
                           std::vector<ReferenceRow> rows) {
    ReferenceBlock b;
    b.preset = std::move(preset);
    b.kind = ReferenceKind::Ratio;
    b.amplitudes = amplitudes;
    b.rows = std::move(rows);
    return b;
}

ReferenceTable make_2a() {
    ReferenceTable t;
    t.id = "2a";
    t.title = "Non-dimensional linear frequencies, simply supported, a/b = 1, a/h = 8";
    t.tolerance = 0.01;
    const std::vector<ModeLabel> modes{{1, 1}, {1, 2}, {2, 2}};
    ReferenceBlock b400;
    b400.preset = "table2a_tc400";
    b400.kind = ReferenceKind::Frequency;
    b400.modes = modes;
    b400.rows = {{0, {12.311, 29.016, 44.094}},
                 {0.5, {8.483, 19.979, 30.391}},
                 {1, {7.444, 17.511, 26.648}},
                 {2, {6.679, 15.706, 23.894}},
                 {10, {5.742, 13.560, 20.609}}};
    ReferenceBlock b600 = b400;
    b600.preset = "table2a_tc600";
    b600.rows = {{0, {11.888, 28.421, 43.343}},
                 {0.5, {8.150, 19.534, 29.836}},
                 {1, {7.131, 17.101, 26.139}},
                 {2, {6.376, 15.314, 23.410}},
                 {10, {5.423, 13.146, 20.100}}};
    t.blocks = {b400, b600};
    return t;
}

ReferenceTable make_2b() {
    ReferenceTable t;
    t.id = "2b";
    t.title = "Nonlinear frequency ratios, isotropic simply supported square plate, a/h = 1000";
    t.tolerance = 0.005;
    t.blocks = {ratio_block("table2b", kShort, {{0, {1.02563, 1.09918, 1.21258, 1.35659, 1.52339}}})};
    return t;
}

ReferenceTable make_3() {
    ReferenceTable t;
    t.id = "3";
    t.title = "Nonlinear frequency ratios, simply supported, ambient temperature";
    t.tolerance = 0.015;
    t.blocks = {
        ratio_block("table3_ab1_ah10", kFull,
                    {{0, {1.0271, 1.1047, 1.2240, 1.3749, 1.5490, 1.7397, 1.6206, 1.6656}},
                     {0.5, {1.0120, 1.0774, 1.1882, 1.3344, 1.5062, 1.6965, 1.5746, 1.6143}},
                     {1, {1.0066, 1.0664, 1.1724, 1.3144, 1.4830, 1.6703, 1.5582, 1.6057}},
                     {2, {1.0048, 1.0617, 1.1638, 1.3017, 1.4661, 1.6496, 1.5458, 1.5871}},
                     {5, {1.0095, 1.0691, 1.1721, 1.3090, 1.4714, 1.6520, 1.5588, 1.5998}},
                     {10, {1.0151, 1.0798, 1.1868, 1.3269, 1.4913, 1.6731, 1.5820, 1.6262}}}),
        ratio_block("table3_ab1_ah20", kFull,
                    {{0, {1.0261, 1.1009, 1.2161, 1.3622, 1.5311, 1.7165, 1.9119, 1.6966}},
                     {0.5, {1.0110, 1.0736, 1.1803, 1.3216, 1.4883, 1.6732, 1.6042, 1.6509}},
                     {1, {1.0056, 1.0626, 1.1644, 1.3016, 1.4650, 1.6472, 1.5833, 1.6246}},
                     {2, {1.0039, 1.0579, 1.1558, 1.2888, 1.4480, 1.6265, 1.8154, 1.6141}},
                     {5, {1.0085, 1.0653, 1.1641, 1.2961, 1.4531, 1.6282, 1.8151, 1.6319}},
                     {10, {1.0141, 1.0760, 1.1788, 1.3139, 1.4731, 1.6496, 1.8391, 1.6767}}}),
        ratio_block("table3_ab1_ah100", kFull,
                    {{0, {1.0258, 1.0996, 1.2136, 1.3582, 1.5256, 1.7091, 1.9056, 1.7045}},
                     {0.5, {1.0107, 1.0723, 1.1778, 1.3175, 1.4827, 1.6658, 1.8619, 1.6584}},
                     {1, {1.0053, 1.0614, 1.1619, 1.2973, 1.4593, 1.6403, 1.8342, 1.6356}},
                     {2, {1.0036, 1.0566, 1.1533, 1.2844, 1.4422, 1.6189, 1.8066, 1.6278}},
                     {5, {1.0082, 1.0641, 1.1615, 1.2918, 1.4470, 1.6206, 1.8075, 1.6393}},
                     {10, {1.0138, 1.0747, 1.1763, 1.3096, 1.4673, 1.6420, 1.8300, 1.6593}}}),
        ratio_block("table3_ab2_ah10", kFull,
                    {{0, {1.0363, 1.1398, 1.2993, 1.4998, 1.3159, 1.3482, 1.3794, 1.4060}},
                     {0.5, {1.0176, 1.1063, 1.2553, 1.4508, 1.2850, 1.3173, 1.3476, 1.3735}},
                     {1, {1.0109, 1.0928, 1.2359, 1.4260, 1.2721, 1.3038, 1.3325, 1.3588}},
                     {2, {1.0087, 1.0870, 1.2254, 1.4115, 1.2688, 1.2972, 1.3271, 1.3521}},
                     {5, {1.0146, 1.0962, 1.2355, 1.4203, 1.2774, 1.3063, 1.3362, 1.3613}},
                     {10, {1.0214, 1.1092, 1.2535, 1.4415, 1.2885, 1.3198, 1.3499, kBlank}}}),
        ratio_block("table3_ab2_ah20", kFull,
                    {{0, {1.0331, 1.1279, 1.2739, 1.4596, 1.3312, 1.3632, 1.3971, kBlank}},
                     {0.5, {1.0145, 1.0944, 1.2305, 1.4107, 1.2997, 1.3324, 1.3668, 1.3992}},
                     {1, {1.0079, 1.0810, 1.2111, 1.3864, 1.2866, 1.3191, 1.3534, 1.3862}},
                     {2, {1.0057, 1.0751, 1.2004, 1.3705, 1.2812, 1.3130, 1.3467, 1.3796}},
                     {5, {1.0114, 1.0842, 1.2103, 1.3791, 1.2912, 1.3222, 1.3549, 1.3882}},
                     {10, {1.0183, 1.0972, 1.2285, 1.4008, 1.5953, 1.8778, 1.3681, 1.7600}}}),
        ratio_block("table3_ab2_ah100", kFull,
                    {{0, {1.0321, 1.1242, 1.2658, 1.4468, 1.3382, 1.3701, 1.4041, 1.4383}},
                     {0.5, {1.0135, 1.0908, 1.2226, 1.3978, 1.3064, 1.3391, 1.3741, 1.4092}},
                     {1, {1.0069, 1.0773, 1.2033, 1.3730, 1.2931, 1.3258, 1.3607, 1.3961}},
                     {2, {1.0047, 1.0714, 1.1926, 1.3571, 1.2878, 1.3197, 1.3548, 1.3886}},
                     {5, {1.0099, 1.0805, 1.2024, 1.3656, 1.2981, 1.3291, 1.3621, 1.3967}},
                     {10, {1.0173, 1.0936, 1.2204, 1.3872, 1.3113, 1.3423, 1.3789, 1.4094}}}),
    };
    return t;
}

ReferenceTable make_4() {
    ReferenceTable t;
    t.id = "4";
    t.title = "Nonlinear frequency ratios, simply supported, T_c = 400 K, T_m = 300 K";
    t.tolerance = 0.02;
    t.blocks = {
        ratio_block("table4_ab1_ah10", kFull,
                    {{0, {1.0290, 1.1099, 1.2333, 1.3887, 1.5673, 1.7623, 1.6412, 1.6870}},
                     {0.5, {1.0135, 1.0824, 1.1980, 1.3494, 1.5268, 1.7223, 1.5938, 1.6394}},
                     {1, {1.0079, 1.0713, 1.1823, 1.3301, 1.5046, 1.6986, 1.5785, 1.6185}},
                     {2, {1.0062, 1.0666, 1.1741, 1.3182, 1.4890, 1.6794, 1.5222, 1.6088}},
                     {5, {1.0110, 1.0748, 1.1836, 1.3274, 1.4969, 1.6852, 1.5853, 1.6322}},
                     {10, {1.0169, 1.0862, 1.1997, 1.3471, 1.5194, 1.7098, 1.6021, 1.6465}}}),
        ratio_block("table4_ab1_ah20", kFull,
                    {{0, {1.0308, 1.1164, 1.2463, 1.4091, 1.5955, 1.7992, 1.9698, kBlank}},
                     {0.5, {1.0141, 1.0880, 1.2118, 1.3732, 1.5613, 1.7688, 1.6742, 1.7282}},
                     {1, {1.0079, 1.0765, 1.1965, 1.3554, 1.5422, 1.7489, 1.6569, 1.7090}},
                     {2, {1.0059, 1.0721, 1.1896, 1.3461, 1.5307, 1.7348, 1.6550, 1.7052}},
                     {5, {1.0118, 1.0830, 1.2041, 1.3629, 1.5486, 1.7539, 1.6806, 1.8899}},
                     {10, {1.0190, 1.0979, 1.2261, 1.3910, 1.5820, 1.7911, 2.0096, 1.7653}}}),
        ratio_block("table4_ab2_ah10", kFull,
                    {{0, {1.0380, 1.1439, 1.3057, 1.2902, 1.3203, 1.3534, 1.3848, 1.4118}},
                     {0.5, {1.0192, 1.1105, 1.2625, 1.4619, 1.2903, 1.3230, 1.3536, 1.3799}},
                     {1, {1.0124, 1.0970, 1.2434, 1.4380, 1.2776, 1.3099, 1.3404, 1.3656}},
                     {2, {1.0101, 1.0912, 1.2332, 1.4319, 1.2721, 1.3040, 1.3343, 1.3592}},
                     {5, {1.0161, 1.1007, 1.2438, 1.4329, 1.2822, 1.3136, 1.3434, 1.3695}},
                     {10, {1.0230, 1.1140, 1.2624, 1.4662, 1.2950, 1.3265, 1.3575, 1.3836}}}),
        ratio_block("table4_ab2_ah20", kFull,
                    {{0, {1.0361, 1.1366, 1.2900, 1.4841, 1.3441, 1.3777, 1.4129, 1.4454}},
                     {0.5, {1.0168, 1.1027, 1.2478, 1.4374, 1.3484, 1.3484, 1.3843, 1.4176}},
                     {1, {1.0098, 1.0891, 1.2282, 1.4141, 1.3358, 1.3358, 1.3718, 1.4056}},
                     {2, {1.0075, 1.0833, 1.2182, 1.3996, 1.3304, 1.3304, 1.3663, 1.4003}},
                     {5, {1.0137, 1.0937, 1.2306, 1.4120, 1.3420, 1.3420, 1.3771, 1.4118}},
                     {10, {1.0213, 1.1085, 1.2515, 1.4377, 1.3573, 1.3573, 1.3926, 1.4269}}}),
    };
    return t;
}

ReferenceTable make_5() {
    ReferenceTable t;
    t.id = "5";
    t.title = "Nonlinear frequency ratios, simply supported, T_c = 600 K, T_m = 300 K";
    t.tolerance = 0.02;
    t.blocks = {
        ratio_block("table5_ab1_ah10", kFull,
                    {{0, {1.0332, 1.1218, 1.2550, 1.4212, 1.6109, 1.8176, 1.6777, 1.7246}},
                     {0.5, {1.0169, 1.0941, 1.2212, 1.3856, 1.5765, 1.7860, 1.6374, 1.6855}},
                     {1, {1.0110, 1.0830, 1.2062, 1.3680, 1.5573, 1.7661, 1.6211, 1.6706}},
                     {2, {1.0092, 1.0789, 1.1996, 1.3588, 1.5456, 1.7522, 1.6215, 1.6710}},
                     {5, {1.0153, 1.0899, 1.2139, 1.3750, 1.5627, 1.7693, 1.6415, 1.6888}},
                     {10, {1.0226, 1.1047, 1.2354, 1.4023, 1.5947, 1.8055, 1.6750, 1.7194}}}),
        ratio_block("table5_ab2_ah20", kFull,
                    {{0, {1.0434, 1.1586, 1.3311, 1.5462, 1.3775, 1.4146, 1.4532, 1.4788}},
                     {0.5, {1.0224, 1.1243, 1.2914, 1.5072, 1.3511, 1.3767, 1.4299, 1.4666}},
                     {1, {1.0145, 1.1104, 1.2737, 1.4876, 1.3408, 1.3595, 1.4208, 1.4576}},
                     {2, {1.0122, 1.1058, 1.2675, 1.4792, 1.3401, 1.3520, 1.4198, 1.4583}},
                     {5, {1.0208, 1.1224, 1.2901, 1.5070, 1.3616, 1.4011, 1.4422, 1.4801}},
                     {10, {1.0312, 1.1444, 1.3230, 1.5495, 1.3859, 1.4264, 1.4680, 1.5063}}}),
    };
    return t;
}

ReferenceTable make_6() {
    ReferenceTable t;
    t.id = "6";
    t.title = "Nonlinear frequency ratios, clamped, a/h = 20, T_c = 400 K, T_m = 300 K";
    t.tolerance = 0.015;
    t.blocks = {
        ratio_block("table6_ab1", kShort,
                    {{0, {1.0102, 1.0403, 1.0884, 1.1521, 1.2291}},
                     {0.5, {1.0106, 1.0417, 1.0915, 1.1572, 1.2366}},
                     {1, {1.0106, 1.0417, 1.0913, 1.1570, 1.2362}},
                     {2, {1.0103, 1.0408, 1.0895, 1.1540, 1.2318}},
                     {5, {1.0101, 1.0398, 1.0874, 1.1505, 1.2264}},
                     {10, {1.0102, 1.0401, 1.0880, 1.1513, 1.2277}}}),
        ratio_block("table6_ab2", kShort,
                    {{0, {1.0109, 1.0432, 1.0954, 1.1654, 1.2509}},
                     {0.5, {1.0112, 1.0443, 1.0978, 1.1696, 1.2570}},
                     {1, {1.0111, 1.0441, 1.0973, 1.1687, 1.2557}},
                     {2, {1.0109, 1.0430, 1.0950, 1.1649, 1.2501}},
                     {5, {1.0106, 1.0418, 1.0924, 1.1604, 1.2435}},
                     {10, {1.0106, 1.0419, 1.0926, 1.1607, 1.2439}}}),
    };
    return t;
}

ReferenceTable make_7() {
    ReferenceTable t;
    t.id = "7";
    t.title = "Nonlinear frequency ratios, simply supported skew plate, a/h = 10, a/b = 1, "
              "T_c = 400 K, T_m = 300 K";
    t.tolerance = 0.02;
    t.blocks = {
        ratio_block("table7_skew15", kSkew,
                    {{0, {1.0291, 1.2342, 1.5694, 1.7661, 1.6506}},
                     {0.5, {1.0136, 1.1989, 1.5293, 1.7258, 1.6076}},
                     {1, {1.0080, 1.1831, 1.5065, 1.7012, 1.5880}},
                     {2, {1.0062, 1.1751, 1.4909, 1.6821, 1.5790}},
                     {5, {1.0112, 1.1846, 1.4987, 1.6879, 1.5932}},
                     {10, {1.0170, 1.2004, 1.5210, 1.7123, 1.6143}}}),
        ratio_block("table7_skew30", kSkew,
                    {{0, {1.0293, 1.2788, 1.5727, 1.7709, 1.5929}},
                     {0.5, {1.0139, 1.2003, 1.5322, 1.7292, 1.5524}},
                     {1, {1.0084, 1.1846, 1.5099, 1.7058, 1.5340}},
                     {2, {1.0066, 1.1765, 1.4945, 1.6863, 1.5253}},
                     {5, {1.0114, 1.1857, 1.5018, 1.6914, 1.5314}},
                     {10, {1.0172, 1.2012, 1.5231, 1.7144, 1.5573}}}),
        ratio_block("table7_skew45", kSkew,
                    {{0, {1.0291, 1.2354, 1.5743, 1.7676, 1.4928}},
                     {0.5, {1.0145, 1.2017, 1.5366, 1.3869, kBlank}},
                     {1, {1.0092, 1.1868, 1.5143, 1.3731, 1.4405}},
                     {2, {1.0075, 1.1787, 1.4993, 1.3659, 1.4330}},
                     {5, {1.0120, 1.1871, 1.5043, 1.3771, 1.4440}},
                     {10, {1.0175, 1.2017, 1.5243, 1.3927, 1.4606}}}),
    };
    return t;
}

// Published cells that cannot be compared as printed.
std::vector<Exclusion> published_exclusions() {
    const char* const kRepeatedColumn =
        "printed value repeats the w/h = 1.2 entry of the same row; the k = 0 row does not";
    return {
        {"table4_ab2_ah10", 0, 0.8,
         "falls below the w/h = 0.6 value while every other k row of the block still rises; "
         "looks like the post-drop column shifted left"},
        {"table3_ab2_ah20", 10, 1.0,
         "row jumps between branches (1.5953, 1.8778, 1.3681, 1.7600) while every other k row "
         "of the block has dropped to about 1.3 at w/h = 1.0"},
        {"table3_ab2_ah20", 10, 1.2, "same inconsistent row as w/h = 1.0"},
        {"table3_ab2_ah20", 10, 1.6, "same inconsistent row as w/h = 1.0"},
        {"table4_ab1_ah20", 0, 1.4,
         "last printed value of a row left blank at w/h = 1.6, so the published drop is not "
         "located; the computed curve drops here, one step before the same case in table 3"},
        {"table4_ab1_ah20", 5, 1.6,
         "rises 12% above the post-drop w/h = 1.4 value while the other post-drop rows of the "
         "block rise about 3% per step; fits neither branch"},
        {"table4_ab2_ah20", 0.5, 1.0, kRepeatedColumn},
        {"table4_ab2_ah20", 1, 1.0, kRepeatedColumn},
        {"table4_ab2_ah20", 2, 1.0, kRepeatedColumn},
        {"table4_ab2_ah20", 5, 1.0, kRepeatedColumn},
        {"table4_ab2_ah20", 10, 1.0, kRepeatedColumn},
        {"table7_skew30", 0, 0.6,
         "3.5% above the neighbouring 15 and 45 degree rows, which agree with each other to 0.1%"},
    };
}

const std::vector<ReferenceTable>& tables() {
    static const std::vector<ReferenceTable> all = [] {
        std::vector<ReferenceTable> list{make_2a(), make_2b(), make_3(), make_4(),
                                         make_5(),  make_6(),  make_7()};
        for (const Exclusion& e : published_exclusions())
            for (ReferenceTable& t : list)
                for (const ReferenceBlock& b : t.blocks)
                    if (b.preset == e.preset) t.exclusions.push_back(e);
        return list;
    }();
    return all;
}

}  // namespace

std::vector<std::string> table_ids() {
    std::vector<std::string> ids;
    for (const auto& t : tables()) ids.push_back(t.id);
    return ids;
}

const ReferenceTable& reference_table(std::string_view id) {
    for (const auto& t : tables())
        if (t.id == id) return t;
    throw ConfigError("unknown table '" + std::string(id) + "' (expected one of 2a, 2b, 3, 4, 5, 6, 7)");
}

// ---------------------------------------------------------------------------
// Comparison

namespace {

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

const Exclusion* find_exclusion(const ReferenceTable& table, const std::string& preset, double k,
                                double column) {
    for (const Exclusion& e : table.exclusions)
        if (e.preset == preset && same(e.k, k) && same(e.column, column)) return &e;
    return nullptr;
}

// Column of the first decrease along a row, or nullopt if it never falls.
template <typename Value>
std::optional<std::size_t> first_drop(std::size_t columns, Value value) {
    std::optional<double> previous;
    for (std::size_t c = 0; c < columns; ++c) {
        const std::optional<double> v = value(c);
        if (!v) continue;
        if (previous && *v < *previous) return c;
        previous = v;
    }
    return std::nullopt;
}

// When the computed and published curves drop exactly one column apart, the
// columns in [first, second) compare different branches.
std::optional<std::pair<std::size_t, std::size_t>> drop_shift(const ReferenceBlock& block,
                                                              const ReferenceRow& row,
                                                              const StudyReport& report) {
    const std::size_t n = block.column_count();
    const auto published = first_drop(n, [&](std::size_t c) -> std::optional<double> {
        if (std::isnan(row.values[c])) return std::nullopt;
        return row.values[c];
    });
    const auto computed = first_drop(
        n, [&](std::size_t c) { return report.ratio(row.k, block.amplitudes[c]); });
    if (!published || !computed) return std::nullopt;
    const std::size_t lo = std::min(*published, *computed);
    const std::size_t hi = std::max(*published, *computed);
    if (hi - lo != 1) return std::nullopt;
    return std::pair{lo, hi};
}

}  // namespace

ReproduceResult reproduce(std::string_view id, const ReproduceOptions& options) {
    const ReferenceTable& table = reference_table(id);
    ReproduceResult result;
    result.id = table.id;
    const double primary_tol = options.tolerance.value_or(table.tolerance);
    const double extended_tol = options.tolerance ? std::min(*options.tolerance, table.extended_tolerance)
                                                  : table.extended_tolerance;
    double sum = 0.0;

    for (const std::string& name : options.presets)
        if (std::none_of(table.blocks.begin(), table.blocks.end(),
                         [&](const ReferenceBlock& b) { return b.preset == name; }))
            throw ConfigError("table " + table.id + " has no block '" + name + "'");

    for (const ReferenceBlock& block : table.blocks) {
        if (!options.presets.empty() &&
            std::find(options.presets.begin(), options.presets.end(), block.preset) ==
                options.presets.end())
            continue;
        StudyConfig config = preset_config(block.preset);
        if (options.mesh) config.nx = config.ny = *options.mesh;
        if (options.max_amplitude) {
            std::erase_if(config.amplitudes,
                          [&](double w) { return w > *options.max_amplitude + 1e-12; });
        }
        StudyReport report = run_study(config, options.jobs);

        for (const ReferenceRow& row : block.rows) {
            const auto shifted = (block.kind == ReferenceKind::Ratio)
                                     ? drop_shift(block, row, report)
                                     : std::optional<std::pair<std::size_t, std::size_t>>{};
            bool dropped = false;
            double previous = -1.0;
            for (std::size_t c = 0; c < block.column_count(); ++c) {
                const double ref = row.values[c];
                if (std::isnan(ref)) continue;
                if (block.kind == ReferenceKind::Ratio) {
                    if (ref < previous) dropped = true;
                    previous = ref;
                }
                CellComparison cell;
                cell.preset = block.preset;
                cell.k = row.k;
                cell.column = block.column_name(c);
                cell.reference = ref;

                std::optional<double> computed;
                double column_key = static_cast<double>(c);
                if (block.kind == ReferenceKind::Ratio) {
                    column_key = block.amplitudes[c];
                    if (options.max_amplitude && column_key > *options.max_amplitude + 1e-12)
                        continue;
                    computed = report.ratio(row.k, column_key);
                    for (const SweepRow& r : report.rows)
                        if (same(r.k, row.k) && same(r.w_over_h, column_key))
                            cell.converged = r.converged;
                    cell.cls = (dropped || column_key > 1.0 + 1e-12) ? CellClass::Extended
                                                                     : CellClass::Primary;
                } else {
                    computed = report.omega_bar(row.k, block.modes[c]);
                    cell.cls = CellClass::Primary;
                }
                cell.tolerance = cell.cls == CellClass::Primary ? primary_tol : extended_tol;
                if (const Exclusion* e = find_exclusion(table, block.preset, row.k, column_key)) {
                    cell.cls = CellClass::Excluded;
                    cell.note = e->reason;
                } else if (shifted && c >= shifted->first && c < shifted->second) {
                    cell.cls = CellClass::Excluded;
                    cell.note = "computed and published drops one amplitude step apart; "
                                "this cell lies on different branches";
                }
                if (!computed) {
                    cell.computed = kBlank;
                    cell.deviation = std::numeric_limits<double>::infinity();
                    cell.note = "mode not found in the computed spectrum";
                } else {
                    cell.computed = *computed;
                    cell.deviation = std::abs(*computed - ref) / ref;
                }
                if (cell.cls == CellClass::Excluded) {
                    ++result.excluded;
                } else {
                    ++result.compared;
                    sum += cell.deviation;
                    result.max_deviation = std::max(result.max_deviation, cell.deviation);
                    if (!cell.passed()) ++result.failed;
                }
                result.cells.push_back(cell);
            }
        }
        result.reports.push_back(std::move(report));
    }
    result.mean_deviation = result.compared > 0 ? sum / result.compared : 0.0;
    return result;
}

namespace {

const char* class_name(CellClass c) {
    switch (c) {
        case CellClass::Primary: return "primary";
        case CellClass::Extended: return "extended";
        case CellClass::Excluded: return "excluded";
    }
    return "?";
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

}  // namespace

void write_comparison_csv(const ReproduceResult& result, std::ostream& out) {
    out << "table,preset,k,column,reference,computed,deviation,tolerance,class,converged,passed,"
           "note\n";
    char buf[160];
    for (const CellComparison& c : result.cells) {
        std::snprintf(buf, sizeof buf, "%s,%s,%g,%s,%.5f,%.5f,%.5f,%.4f,", result.id.c_str(),
                      c.preset.c_str(), c.k, c.column.c_str(), c.reference, c.computed,
                      c.deviation, c.tolerance);
        out << buf << class_name(c.cls) << ',' << int(c.converged) << ',' << int(c.passed())
            << ',' << quoted(c.note) << '\n';
    }
}

void write_comparison_summary(const ReproduceResult& result, std::ostream& out) {
    char buf[200];
    for (const CellComparison& c : result.cells) {
        if (c.passed()) continue;
        std::snprintf(buf, sizeof buf, "  MISMATCH %s k=%g %s: computed %.5f, published %.5f (%.2f%% > %.2f%%)\n",
                      c.preset.c_str(), c.k, c.column.c_str(), c.computed, c.reference,
                      100.0 * c.deviation, 100.0 * c.tolerance);
        out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "table %s: %d cells compared, %d excluded, %d outside tolerance; "
                  "max deviation %.3f%%, mean %.3f%%\n",
                  result.id.c_str(), result.compared, result.excluded, result.failed,
                  100.0 * result.max_deviation, 100.0 * result.mean_deviation);
    out << buf;
}

}  // namespace fgplate
