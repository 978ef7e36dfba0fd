#include "nfkit/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nfkit/constants.hpp"
#include "nfkit/errors.hpp"

namespace nfkit::cli {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

double parse_double(std::string_view text, std::string_view what)
{
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError("invalid number '" + std::string(text) + "' for " + std::string(what));
    return v;
}

int parse_int(std::string_view text, std::string_view what)
{
    text = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v < -2147483647LL || v > 2147483647LL) {
        // Accept integral values written in float notation (e.g. 1e3).
        const double d = parse_double(text, what);
        if (d != std::floor(d) || std::abs(d) > 2147483647.0)
            throw ConfigError("invalid integer '" + std::string(text) + "' for " + std::string(what));
        return static_cast<int>(d);
    }
    return static_cast<int>(v);
}

double positive(double v, std::string_view what)
{
    if (!(v > 0.0))
        throw ConfigError(std::string(what) + " must be positive");
    return v;
}

std::vector<int> parse_counts(std::string_view text, std::string_view what)
{
    std::vector<int> out;
    for (std::string_view part : split(text, ',')) {
        const int n = parse_int(part, what);
        if (n < 1)
            throw ConfigError(std::string(what) + " entries must be >= 1");
        out.push_back(n);
    }
    return out;
}

std::vector<double> parse_doubles(std::string_view text, std::string_view what)
{
    std::vector<double> out;
    for (std::string_view part : split(text, ','))
        out.push_back(parse_double(part, what));
    return out;
}

double angle_deg(std::string_view text, std::string_view what, double lo, double hi)
{
    const double v = parse_double(text, what);
    if (v < lo || v > hi)
        throw ConfigError(std::string(what) + " out of range");
    return v;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"array.frequency_hz", [](RunConfig& c, std::string_view v) { c.frequency_hz = positive(parse_double(v, "frequency"), "frequency"); }},
        {"array.kind",
         [](RunConfig& c, std::string_view v) {
             const std::string s = lower(trim(v));
             if (s == "ula")
                 c.array_kind = ArrayKind::ULA;
             else if (s == "upa")
                 c.array_kind = ArrayKind::UPA;
             else
                 throw ConfigError("array kind must be ula or upa");
         }},
        {"array.n", [](RunConfig& c, std::string_view v) { c.n_list = parse_counts(v, "array.n"); }},
        {"array.spacing_wl", [](RunConfig& c, std::string_view v) { c.spacing_wl = positive(parse_double(v, "spacing"), "spacing"); }},
        {"array.model",
         [](RunConfig& c, std::string_view v) {
             c.models.clear();
             for (std::string_view part : split(v, ',')) {
                 try {
                     c.models.push_back(parse_model(part));
                 } catch (const ParameterError& e) {
                     throw ConfigError(e.what());
                 }
             }
         }},
        {"output.format",
         [](RunConfig& c, std::string_view v) {
             const std::string s = lower(trim(v));
             if (s == "csv")
                 c.format = OutputFormat::Csv;
             else if (s == "json")
                 c.format = OutputFormat::Json;
             else
                 throw ConfigError("format must be csv or json");
         }},
        {"output.path", [](RunConfig& c, std::string_view v) { c.out_path = std::string(trim(v)); }},
        {"output.summary", [](RunConfig& c, std::string_view v) { c.summary_path = std::string(trim(v)); }},
        {"output.curves", [](RunConfig& c, std::string_view v) { c.curves_path = std::string(trim(v)); }},
        {"run.sweep", [](RunConfig& c, std::string_view v) { c.sweep = Sweep::parse(v); }},
        {"fraunhofer.element_length_wl",
         [](RunConfig& c, std::string_view v) { c.element_length_wl = positive(parse_double(v, "element length"), "element length"); }},
        {"coverage.setups",
         [](RunConfig& c, std::string_view v) {
             c.setups.clear();
             for (std::string_view part : split(v, ',')) {
                 const auto fs = split(part, ':');
                 if (fs.size() != 2)
                     throw ConfigError("coverage setups are FREQ_HZ:SIDE_M pairs");
                 c.setups.push_back({positive(parse_double(fs[0], "setup frequency"), "setup frequency"),
                                     positive(parse_double(fs[1], "setup side"), "setup side")});
             }
         }},
        {"focus.target_m", [](RunConfig& c, std::string_view v) { c.target_m = positive(parse_double(v, "target"), "target"); }},
        {"focus.theta_deg", [](RunConfig& c, std::string_view v) { c.theta_deg = angle_deg(v, "theta", 0.0, 180.0); }},
        {"focus.phi_deg", [](RunConfig& c, std::string_view v) { c.phi_deg = angle_deg(v, "phi", 0.0, 359.999999999); }},
        {"solve.focal_m", [](RunConfig& c, std::string_view v) { c.focal_m = positive(parse_double(v, "focal radius"), "focal radius"); }},
        {"solve.epsilon", [](RunConfig& c, std::string_view v) { c.epsilon = positive(parse_double(v, "epsilon"), "epsilon"); }},
        {"solve.tolerance_m", [](RunConfig& c, std::string_view v) { c.focal_tolerance_m = positive(parse_double(v, "tolerance"), "tolerance"); }},
        {"kappa.target_m", [](RunConfig& c, std::string_view v) { c.kappa_target_m = positive(parse_double(v, "kappa target"), "kappa target"); }},
        {"kappa.target_theta_deg", [](RunConfig& c, std::string_view v) { c.kappa_target_theta_deg = angle_deg(v, "target theta", 0.0, 180.0); }},
        {"kappa.point_m", [](RunConfig& c, std::string_view v) { c.kappa_point_m = positive(parse_double(v, "kappa point"), "kappa point"); }},
        {"kappa.point_theta_deg", [](RunConfig& c, std::string_view v) { c.kappa_point_theta_deg = angle_deg(v, "point theta", 0.0, 180.0); }},
        {"nonrad.ds_wl",
         [](RunConfig& c, std::string_view v) {
             c.ds_list_wl = parse_doubles(v, "nonrad.ds_wl");
             for (double d : c.ds_list_wl)
                 positive(d, "element length");
         }},
        {"nonrad.patterns",
         [](RunConfig& c, std::string_view v) {
             c.patterns.clear();
             for (std::string_view part : split(v, ','))
                 c.patterns.push_back(parse_pattern(part));
         }},
        {"nonrad.curve_n", [](RunConfig& c, std::string_view v) { c.curve_n = parse_counts(v, "curve_n").front(); }},
        {"nonrad.curve_ds_wl", [](RunConfig& c, std::string_view v) { c.curve_ds_wl = positive(parse_double(v, "curve_ds_wl"), "curve_ds_wl"); }},
        {"nonrad.curve_pattern", [](RunConfig& c, std::string_view v) { c.curve_pattern = parse_pattern(v); }},
        {"nonrad.curve_points",
         [](RunConfig& c, std::string_view v) {
             c.curve_points = parse_int(v, "curve_points");
             if (c.curve_points < 2)
                 throw ConfigError("curve_points must be at least 2");
         }},
    };
    return table;
}

} // namespace

Sweep Sweep::parse(std::string_view text)
{
    const auto parts = split(trim(text), ':');
    if (parts.size() != 3)
        throw ConfigError("sweep must look like START:STOP:COUNT");
    Sweep s;
    s.start = parse_double(parts[0], "sweep start");
    s.stop = parse_double(parts[1], "sweep stop");
    s.count = parse_int(parts[2], "sweep count");
    if (s.count < 1)
        throw ConfigError("sweep count must be >= 1");
    if (s.count == 1 && s.start != s.stop)
        throw ConfigError("a one-point sweep needs START == STOP");
    return s;
}

std::vector<double> Sweep::values() const
{
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = start;
        return v;
    }
    for (int i = 0; i < count; ++i)
        v[i] = start + (stop - start) * (static_cast<double>(i) / (count - 1));
    v.back() = stop;
    return v;
}

double RunConfig::wavelength() const { return kSpeedOfLight / frequency_hz; }

std::string to_string(ExcitationPattern pattern)
{
    return pattern == ExcitationPattern::InPhase ? "in_phase" : "alternating";
}

ExcitationPattern parse_pattern(std::string_view text)
{
    const std::string s = lower(trim(text));
    if (s == "in_phase" || s == "inphase")
        return ExcitationPattern::InPhase;
    if (s == "alternating")
        return ExcitationPattern::Alternating;
    throw ConfigError("excitation pattern must be in_phase or alternating");
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value)
{
    const std::string k = lower(trim(key));
    const auto& table = setters();
    const auto it = table.find(k);
    if (it == table.end())
        throw ConfigError("unknown configuration key '" + std::string(trim(key)) + "'");
    it->second(config, trim(value));
}

void apply_config_text(RunConfig& config, std::string_view text)
{
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + "unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (section.empty())
                throw ConfigError(where + "empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + "expected key = value");
        const std::string_view key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError(where + "missing key");
        const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        try {
            apply_setting(config, full, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
}

void apply_config_file(RunConfig& config, const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(config, buf.str());
}

std::vector<std::string> known_keys()
{
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters())
        keys.push_back(k);
    return keys;
}

} // namespace nfkit::cli
