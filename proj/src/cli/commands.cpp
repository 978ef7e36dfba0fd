#include "nfkit/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "nfkit/cli/table.hpp"
#include "nfkit/constants.hpp"
#include "nfkit/dipole.hpp"
#include "nfkit/errors.hpp"
#include "nfkit/focusing.hpp"
#include "nfkit/fraunhofer.hpp"
#include "nfkit/parallel.hpp"

namespace nfkit::cli {

using nlohmann::json;

namespace {

double deg_to_rad(double deg)
{
    // deg / 180 first keeps 90 and 180 exact.
    return std::clamp(deg / 180.0 * kPi, 0.0, kTwoPi);
}

json num(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return round12(v);
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

json cell_json(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Empty>)
                return nullptr;
            else if constexpr (std::is_same_v<T, double>)
                return num(v);
            else
                return v;
        },
        c);
}

json table_json(const std::string& command, const Table& t)
{
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const Cell& c : row)
            r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    return json{{"command", command}, {"columns", t.columns}, {"rows", std::move(rows)}};
}

std::string exact_text(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(std::ostream& os, const json& doc) { os << doc.dump(2) << '\n'; }

void emit(std::ostream& os, const RunConfig& c, const std::string& command, const Table& t, const json& extra = {})
{
    if (c.format == OutputFormat::Csv) {
        write_csv(os, t);
        return;
    }
    json doc = table_json(command, t);
    if (extra.is_object())
        for (auto it = extra.begin(); it != extra.end(); ++it)
            doc[it.key()] = it.value();
    write_json(os, doc);
}

std::ofstream open_side_file(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write '" + path + "'");
    return f;
}

ArrayGeometry geometry_for(const RunConfig& c, int n)
{
    const double lambda = c.wavelength();
    const int n2 = c.array_kind == ArrayKind::UPA ? n : 1;
    return build_array(c.array_kind, n, n2, c.spacing_wl * lambda, lambda);
}

std::vector<int> counts_or(const RunConfig& c, std::vector<int> fallback)
{
    return c.n_list.empty() ? fallback : c.n_list;
}

std::vector<ChannelModelKind> models_or(const RunConfig& c, std::vector<ChannelModelKind> fallback)
{
    return c.models.empty() ? fallback : c.models;
}

} // namespace

int cmd_fraunhofer(const RunConfig& c, std::ostream& out)
{
    const double lambda = c.wavelength();
    const std::vector<int> ns = counts_or(c, {1, 3, 10, 40});
    const std::vector<double> angles = c.sweep.value_or(Sweep{0.0, 180.0, 361}).values();
    for (double a : angles)
        if (a < 0.0 || a > 180.0)
            throw ConfigError("theta sweep must stay inside [0, 180] degrees");

    Table t{{"n", "theta_deg", "dF_over_lambda", "branch"}, {}};
    for (int n : ns) {
        const bool single = n == 1;
        const double D = single ? c.element_length_wl * lambda : geometry_for(c, n).aperture_diameter();
        for (double deg : angles) {
            const double theta = deg_to_rad(deg);
            double d;
            std::string branch;
            if (single) {
                d = fraunhofer_single(D, lambda, theta);
                branch = "single";
            } else {
                const FraunhoferResult r = fraunhofer_array(D, lambda, theta);
                d = r.distance;
                branch = r.branch == FraunhoferBranch::Transition ? "transition" : "off_boresight";
            }
            t.rows.push_back({static_cast<long long>(n), deg, d / lambda, branch});
        }
    }
    emit(out, c, "fraunhofer", t);
    return kExitOk;
}

int cmd_coverage(const RunConfig& c, std::ostream& out)
{
    std::vector<CoverageSetup> setups = c.setups;
    if (setups.empty())
        setups = {{28e9, 0.7}, {28e9, 0.2}, {2.8e9, 0.7}};
    const std::vector<double> hs = c.sweep.value_or(Sweep{0.0, 300.0, 301}).values();
    for (double h : hs)
        if (h < 0.0)
            throw ConfigError("heights must be non-negative");

    struct Job {
        CoverageSetup s;
        double h;
    };
    std::vector<Job> jobs;
    for (const auto& s : setups)
        for (double h : hs)
            jobs.push_back({s, h});
    std::vector<double> dbar(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const double lambda = kSpeedOfLight / jobs[i].s.frequency_hz;
        dbar[i] = coverage_distance(jobs[i].h, std::sqrt(2.0) * jobs[i].s.side_m, lambda);
    });

    Table t{{"frequency_hz", "aperture_m", "h_m", "dbar_m"}, {}};
    for (std::size_t i = 0; i < jobs.size(); ++i)
        t.rows.push_back({jobs[i].s.frequency_hz, jobs[i].s.side_m, jobs[i].h, dbar[i]});
    emit(out, c, "coverage", t);
    return kExitOk;
}

int cmd_focus_profile(const RunConfig& c, std::ostream& out)
{
    const std::vector<int> ns = counts_or(c, {40, 120, 500});
    const std::vector<ChannelModelKind> models = models_or(c, {ChannelModelKind::NUSW, ChannelModelKind::USW});
    const Sweep window = c.sweep.value_or(Sweep{0.5, 8.0, 2000});
    if (!(window.start > 0.0) || !(window.stop > window.start) || window.count < 3)
        throw ConfigError("focus-profile sweep must be START:STOP:COUNT with 0 < START < STOP and COUNT >= 3");
    const double theta = deg_to_rad(c.theta_deg);
    const double phi = deg_to_rad(c.phi_deg);
    const SphericalPoint target{c.target_m, theta, phi};

    Table t{{"n", "model", "r_m", "mag_norm"}, {}};
    json profiles = json::array();
    std::map<int, std::map<ChannelModelKind, RadialFocusReport>> reports;

    for (int n : ns) {
        const ArrayGeometry g = geometry_for(c, n);
        const Beamformer b = mrt(g, target);
        for (ChannelModelKind kind : models) {
            const RadialProfile p =
                radial_profile(ChannelModel::of(kind), g, theta, phi, b, window.start, window.stop, window.count);
            RadialFocusReport rep = find_focal_points(p);
            classify_focus(rep, p, c.target_m);

            const double peak = *std::max_element(p.magnitudes.begin(), p.magnitudes.end());
            if (!(peak > 0.0))
                throw NumericError("profile vanished everywhere");
            for (std::size_t i = 0; i < p.radii.size(); ++i)
                t.rows.push_back({static_cast<long long>(n), to_string(kind), p.radii[i], p.magnitudes[i] / peak});

            json radii = json::array();
            for (double r : rep.focal_radii)
                radii.push_back(num(r));
            profiles.push_back({{"n", n},
                                {"model", to_string(kind)},
                                {"focal_radii_m", radii},
                                {"dominant_focal_m", opt_num(rep.dominant_focal)},
                                {"gap_m", opt_num(rep.gap)},
                                {"depth_3db_m", {{"lo", opt_num(rep.depth_3db.lo)}, {"hi", opt_num(rep.depth_3db.hi)}}},
                                {"property3_holds", rep.property3_holds}});
            reports[n][kind] = std::move(rep);
        }
    }

    // Peak-location disagreement between the uniform and non-uniform models.
    json comparisons = json::array();
    for (const auto& [n, by_model] : reports) {
        const auto nu = by_model.find(ChannelModelKind::NUSW);
        const auto us = by_model.find(ChannelModelKind::USW);
        if (nu == by_model.end() || us == by_model.end())
            continue;
        const RadialFocusReport& a = nu->second;
        const RadialFocusReport& b = us->second;
        std::optional<double> half_depth;
        if (a.depth_3db.lo && a.depth_3db.hi)
            half_depth = 0.5 * (*a.depth_3db.hi - *a.depth_3db.lo);
        json diverges = nullptr;
        if (a.dominant_focal && b.dominant_focal && half_depth)
            diverges = std::abs(*a.dominant_focal - *b.dominant_focal) > *half_depth;
        comparisons.push_back({{"n", n},
                               {"nusw_peak_m", opt_num(a.dominant_focal)},
                               {"usw_peak_m", opt_num(b.dominant_focal)},
                               {"nusw_half_depth_m", opt_num(half_depth)},
                               {"diverges", diverges}});
    }

    const json summary{{"command", "focus-profile"},
                       {"target_m", num(c.target_m)},
                       {"theta_deg", num(c.theta_deg)},
                       {"phi_deg", num(c.phi_deg)},
                       {"profiles", profiles},
                       {"comparisons", comparisons}};

    if (c.format == OutputFormat::Json) {
        emit(out, c, "focus-profile", t, json{{"summary", summary}});
        return kExitOk;
    }
    write_csv(out, t);
    std::string path = c.summary_path;
    if (path.empty() && !c.out_path.empty())
        path = c.out_path + ".summary.json";
    if (!path.empty()) {
        std::ofstream f = open_side_file(path);
        write_json(f, summary);
    }
    return kExitOk;
}

int cmd_focus_solve(const RunConfig& c, std::ostream& out)
{
    const std::vector<int> ns = counts_or(c, {130, 150, 200});
    const ChannelModelKind kind = models_or(c, {ChannelModelKind::NUSW}).front();
    const double theta = deg_to_rad(c.theta_deg);
    const double phi = deg_to_rad(c.phi_deg);

    Algorithm1Options opt;
    opt.epsilon = c.epsilon;
    opt.focal_tolerance_fraction = c.focal_tolerance_m / c.focal_m;

    json runs = json::array();
    Table t{{"n", "k", "r_bar_m", "y_hat", "slope", "achieved_focal_m"}, {}};
    int code = kExitOk;
    for (int n : ns) {
        const ArrayGeometry g = geometry_for(c, n);
        try {
            const Algorithm1Result r = algorithm1_focus(ChannelModel::of(kind), g, c.focal_m, theta, phi, opt);
            json trace = json::array();
            for (const Algorithm1Step& s : r.trace) {
                trace.push_back({{"k", s.k},
                                 {"r_bar_m", num(s.r_bar)},
                                 {"y_hat", num(s.y_hat)},
                                 {"slope", num(s.slope)},
                                 {"achieved_focal_m", opt_num(s.achieved_focal)}});
                t.rows.push_back({static_cast<long long>(n), static_cast<long long>(s.k), s.r_bar, s.y_hat, s.slope,
                                  s.achieved_focal ? Cell{*s.achieved_focal} : Cell{Empty{}}});
            }
            json phases = json::array();
            for (double p : r.beamformer.phases())
                phases.push_back(num(p * 180.0 / kPi));
            runs.push_back({{"n", n},
                            {"feasible", true},
                            {"loop_iterations", r.loop_iterations},
                            {"bisection_iterations", r.bisection_iterations},
                            {"epsilon_used", num(r.epsilon_used)},
                            {"r_bar_star_m", num(r.r_bar_star)},
                            {"achieved_focal_m", opt_num(r.achieved_focal)},
                            {"tolerance_m", num(c.focal_tolerance_m)},
                            {"within_tolerance", r.within_tolerance},
                            {"trace", trace},
                            {"phases_deg", phases}});
        } catch (const InfeasibleError& e) {
            runs.push_back({{"n", n}, {"feasible", false}, {"error", e.what()}});
            std::cerr << "nfkit: infeasible for n=" << n << ": " << e.what() << '\n';
            code = kExitInfeasible;
        }
    }

    if (c.format == OutputFormat::Csv) {
        write_csv(out, t);
    } else {
        write_json(out, json{{"command", "focus-solve"},
                             {"focal_m", num(c.focal_m)},
                             {"theta_deg", num(c.theta_deg)},
                             {"phi_deg", num(c.phi_deg)},
                             {"model", to_string(kind)},
                             {"epsilon", num(c.epsilon)},
                             {"runs", runs}});
    }
    return code;
}

int cmd_kappa(const RunConfig& c, std::ostream& out)
{
    const bool ula = c.array_kind == ArrayKind::ULA;
    const std::vector<int> ns = counts_or(c, ula ? std::vector<int>{101, 401, 1601} : std::vector<int>{21, 61, 181});
    const double phi = kPi / 2.0;
    const SphericalPoint target{c.kappa_target_m, deg_to_rad(c.kappa_target_theta_deg), phi};
    const SphericalPoint point{c.kappa_point_m, deg_to_rad(c.kappa_point_theta_deg), phi};

    std::vector<double> direct(ns.size());
    std::vector<std::optional<double>> integral(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        const ArrayGeometry g = geometry_for(c, ns[i]);
        direct[i] = kappa_direct(g, target, point).kappa;
        if (ula)
            integral[i] = kappa_integral_decomposition(g, target, point).kappa_est;
    });

    Table t{{"n", "kappa_direct", "kappa_integral"}, {}};
    json agreement = json::array();
    for (std::size_t i = 0; i < ns.size(); ++i) {
        t.rows.push_back({static_cast<long long>(ns[i]), direct[i], integral[i] ? Cell{*integral[i]} : Cell{Empty{}}});
        if (integral[i] && ns[i] >= 200) {
            const double rel = std::abs(*integral[i] - direct[i]) / direct[i];
            agreement.push_back({{"n", ns[i]}, {"relative_difference", num(rel)}, {"within_10pct", rel < 0.10}});
        }
    }
    emit(out, c, "kappa", t, json{{"integral_agreement", agreement}});
    return kExitOk;
}

int cmd_nonrad(const RunConfig& c, std::ostream& out)
{
    const double lambda = c.wavelength();
    const std::vector<int> ns = counts_or(c, {1, 3, 5, 7, 9});
    std::vector<double> ds = c.ds_list_wl;
    if (c.sweep)
        ds = c.sweep->values();
    if (ds.empty())
        ds = {0.01, 0.1, 0.25, 0.4, 0.48};
    std::vector<ExcitationPattern> patterns = c.patterns;
    if (patterns.empty())
        patterns = {ExcitationPattern::InPhase, ExcitationPattern::Alternating};

    struct Job {
        double ds;
        int n;
        ExcitationPattern pattern;
    };
    std::vector<Job> jobs;
    for (double d : ds)
        for (int n : ns)
            for (ExcitationPattern p : patterns)
                jobs.push_back({d, n, p});

    std::vector<NonRadiatingResult> res(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto spec =
            DipoleArraySpec::make(jobs[i].n, jobs[i].ds * lambda, c.spacing_wl * lambda, lambda, jobs[i].pattern);
        res[i] = nonradiating_distance(spec);
    });

    Table t{{"ds_over_lambda", "n", "phase_pattern", "dnr_over_lambda"}, {}};
    json flags = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        t.rows.push_back({jobs[i].ds, static_cast<long long>(jobs[i].n), to_string(jobs[i].pattern),
                          res[i].distance / lambda});
        flags.push_back(res[i].fully_radiative);
    }
    emit(out, c, "nonrad", t, json{{"fully_radiative", flags}});

    if (!c.curves_path.empty()) {
        const auto spec =
            DipoleArraySpec::make(c.curve_n, c.curve_ds_wl * lambda, c.spacing_wl * lambda, lambda, c.curve_pattern);
        const auto curve = power_curve(spec, 0.01 * lambda, lambda, c.curve_points);
        Table ct{{"r_over_lambda", "active_mag", "reactive_mag"}, {}};
        for (const PowerSample& s : curve)
            ct.rows.push_back({s.r / lambda, s.active_mag, s.reactive_mag});
        std::ofstream f = open_side_file(c.curves_path);
        emit(f, c, "nonrad-curves", ct);
    }
    return kExitOk;
}

std::vector<std::string> command_names()
{
    return {"fraunhofer", "coverage", "focus-profile", "focus-solve", "kappa", "nonrad"};
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& fallback, std::ostream& err)
{
    using Fn = int (*)(const RunConfig&, std::ostream&);
    static const std::map<std::string, Fn> table = {
        {"fraunhofer", cmd_fraunhofer}, {"coverage", cmd_coverage}, {"focus-profile", cmd_focus_profile},
        {"focus-solve", cmd_focus_solve}, {"kappa", cmd_kappa},      {"nonrad", cmd_nonrad},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        err << "nfkit: unknown command '" << name << "'\n";
        return kExitConfig;
    }
    try {
        if (config.out_path.empty())
            return it->second(config, fallback);
        std::ofstream f = open_side_file(config.out_path);
        const int code = it->second(config, f);
        f.flush();
        if (!f)
            throw NumericError("failed writing '" + config.out_path + "'");
        return code;
    } catch (const ConfigError& e) {
        err << "nfkit: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        err << "nfkit: invalid parameter: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "nfkit: out of domain: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SingularityError& e) {
        err << "nfkit: singular geometry: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        err << "nfkit: infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const NumericError& e) {
        err << "nfkit: numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "nfkit: " << e.what() << '\n';
        return kExitNumeric;
    }
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"Near-field phased-array toolkit: Fraunhofer boundary, radial focusing, non-radiating distance"};
    app.require_subcommand(1);

    struct Flags {
        std::string config;
        std::optional<double> freq;
        std::string n;
        std::optional<double> spacing;
        std::string model;
        std::string out;
        std::string format;
        std::string sweep;
        std::string summary;
        std::string curves;
        std::vector<std::string> set;
    } flags;

    const std::map<std::string, std::string> blurbs = {
        {"fraunhofer", "Fraunhofer distance per wavelength versus observation angle"},
        {"coverage", "Near-field coverage distance versus array height"},
        {"focus-profile", "Radial |y| profiles under MRT, focal points and gaps"},
        {"focus-solve", "Iterative MRT target search that places the focal point at a radius"},
        {"kappa", "Normalized off-target amplitude versus element count"},
        {"nonrad", "Non-radiating distance of thin-dipole ULAs"},
    };
    for (const std::string& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
        sub->add_option("--config", flags.config, "key=value config file");
        sub->add_option("--freq", flags.freq, "carrier frequency in Hz");
        sub->add_option("--n", flags.n, "element count(s), comma separated");
        sub->add_option("--spacing-wl", flags.spacing, "element spacing in wavelengths");
        sub->add_option("--model", flags.model, "usw | nusw | gnc (comma list allowed)");
        sub->add_option("--out", flags.out, "output path (default stdout)");
        sub->add_option("--format", flags.format, "csv | json");
        sub->add_option("--sweep", flags.sweep, "START:STOP:COUNT for the command's sweep axis");
        sub->add_option("--summary", flags.summary, "focus-profile summary JSON path (csv mode)");
        sub->add_option("--curves", flags.curves, "nonrad power-curve table path");
        sub->add_option("--set", flags.set, "extra section.key=value override (repeatable)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    std::string command;
    for (CLI::App* sub : app.get_subcommands())
        command = sub->get_name();

    RunConfig config;
    try {
        if (!flags.config.empty())
            apply_config_file(config, flags.config);
        for (const std::string& kv : flags.set) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects section.key=value");
            apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (flags.freq)
            apply_setting(config, "array.frequency_hz", exact_text(*flags.freq));
        if (!flags.n.empty())
            apply_setting(config, "array.n", flags.n);
        if (flags.spacing)
            apply_setting(config, "array.spacing_wl", exact_text(*flags.spacing));
        if (!flags.model.empty())
            apply_setting(config, "array.model", flags.model);
        if (!flags.out.empty())
            apply_setting(config, "output.path", flags.out);
        if (!flags.format.empty())
            apply_setting(config, "output.format", flags.format);
        if (!flags.sweep.empty())
            apply_setting(config, "run.sweep", flags.sweep);
        if (!flags.summary.empty())
            apply_setting(config, "output.summary", flags.summary);
        if (!flags.curves.empty())
            apply_setting(config, "output.curves", flags.curves);
    } catch (const ConfigError& e) {
        std::cerr << "nfkit: config error: " << e.what() << '\n';
        return kExitConfig;
    }

    return run_command(command, config, std::cout, std::cerr);
}

} // namespace nfkit::cli
