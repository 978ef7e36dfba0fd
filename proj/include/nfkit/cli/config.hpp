#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nfkit/channel.hpp"
#include "nfkit/dipole.hpp"
#include "nfkit/geometry.hpp"

namespace nfkit::cli {

// Malformed file, unknown key or bad value. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// START:STOP:COUNT, inclusive, evenly spaced.
struct Sweep {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    static Sweep parse(std::string_view text);
    std::vector<double> values() const;
};

enum class OutputFormat { Csv, Json };

struct CoverageSetup {
    double frequency_hz = 0.0;
    double side_m = 0.0; // square aperture side; D is its diagonal
};

struct RunConfig {
    // [array]
    double frequency_hz = 28e9;
    ArrayKind array_kind = ArrayKind::ULA;
    std::vector<int> n_list; // empty: command default
    double spacing_wl = 0.5;
    std::vector<ChannelModelKind> models; // empty: command default

    // [output]
    OutputFormat format = OutputFormat::Csv;
    std::string out_path;     // empty: stdout
    std::string summary_path; // focus-profile summary in csv mode
    std::string curves_path;  // nonrad power curves

    // [run]
    std::optional<Sweep> sweep;

    // [fraunhofer]
    double element_length_wl = 0.5; // aperture used for single-element rows

    // [coverage]
    std::vector<CoverageSetup> setups;

    // [focus]
    double target_m = 6.0;
    double theta_deg = 90.0;
    double phi_deg = 90.0;

    // [solve]
    double focal_m = 4.0;
    double epsilon = 0.02;
    double focal_tolerance_m = 0.01;

    // [kappa]
    double kappa_target_m = 6.0;
    double kappa_target_theta_deg = 90.0;
    double kappa_point_m = 4.0;
    double kappa_point_theta_deg = 90.0;

    // [nonrad]
    std::vector<double> ds_list_wl;
    std::vector<ExcitationPattern> patterns;
    int curve_n = 1;
    double curve_ds_wl = 0.01;
    ExcitationPattern curve_pattern = ExcitationPattern::InPhase;
    int curve_points = 200;

    double wavelength() const;
};

// Applies one "section.key" = value pair. ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Flat key = value lines grouped under [section] headers; '#' and ';' start comments.
// Keys outside a section must be written fully qualified (section.key).
void apply_config_text(RunConfig& config, std::string_view text);
void apply_config_file(RunConfig& config, const std::string& path);

// Every recognised "section.key".
std::vector<std::string> known_keys();

std::string to_string(ExcitationPattern pattern);
ExcitationPattern parse_pattern(std::string_view text);

} // namespace nfkit::cli
