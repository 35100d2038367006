#include "nic/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "nic/experiments.hpp"
#include "nic/reference.hpp"
#include "nic/solver.hpp"
#include "nic/specfun.hpp"

namespace nic {

namespace {

using nlohmann::json;
using std::numbers::pi;
namespace fs = std::filesystem;

enum class KeyType { Real, Int, Text, IntList, Flag };

const std::map<std::string, KeyType>& key_table() {
    static const std::map<std::string, KeyType> table = {
        {"k", KeyType::Real},          {"K", KeyType::Real},
        {"m", KeyType::Int},           {"a", KeyType::Real},
        {"R0", KeyType::Real},         {"R", KeyType::Real},
        {"S", KeyType::Real},          {"n", KeyType::Int},
        {"sigma", KeyType::Real},      {"scheme", KeyType::Text},
        {"N", KeyType::Int},           {"geometry", KeyType::Text},
        {"modes", KeyType::Int},       {"theta-count", KeyType::Int},
        {"N-list", KeyType::IntList},  {"samples", KeyType::Int},
        {"target", KeyType::Text},     {"undamped", KeyType::Flag},
        {"out", KeyType::Text},
    };
    return table;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
    throw ConfigurationError("option '" + key + "': " + why);
}

double parse_real(const std::string& key, const json& v) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) bad_value(key, "expected a number");
    const auto s = v.get<std::string>();
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        bad_value(key, "cannot parse '" + s + "' as a number");
    }
    if (used != s.size()) bad_value(key, "cannot parse '" + s + "' as a number");
    return x;
}

int parse_int(const std::string& key, const json& v) {
    if (v.is_number_integer()) return v.get<int>();
    const double x = parse_real(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9) bad_value(key, "expected an integer");
    return static_cast<int>(x);
}

std::vector<int> parse_int_list(const std::string& key, const json& v) {
    std::vector<int> out;
    if (v.is_array()) {
        for (const auto& item : v) out.push_back(parse_int(key, item));
        return out;
    }
    if (!v.is_string()) bad_value(key, "expected a comma-separated list of integers");
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_int(key, json(item)));
    return out;
}

bool parse_flag(const std::string& key, const json& v) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
    }
    bad_value(key, "expected true or false");
}

std::string parse_text(const std::string& key, const json& v) {
    if (!v.is_string()) bad_value(key, "expected a string");
    return v.get<std::string>();
}

std::string scheme_name(Scheme s) {
    switch (s) {
    case Scheme::FD2:
        return "fd2";
    case Scheme::Chebyshev:
        return "cheb";
    case Scheme::TwoDomainChebyshev:
        return "cheb2";
    }
    return "?";
}

std::string target_name(ConvergeTarget t) {
    switch (t) {
    case ConvergeTarget::OneD:
        return "oned";
    case ConvergeTarget::Mode2D:
        return "mode2d";
    case ConvergeTarget::Scatter:
        return "scatter";
    }
    return "?";
}

void validate(const RunConfig& c) {
    if (!(c.k > 0.0) || !std::isfinite(c.k)) throw ConfigurationError("k must be positive");
    if (c.K && !(*c.K > 0.0)) throw ConfigurationError("K must be positive");
    if (c.N && *c.N < 2) throw ConfigurationError("N must be at least 2");
    if (!(c.a > 0.0)) throw ConfigurationError("a must be positive");
    if (!(c.R0 > 0.0)) throw ConfigurationError("R0 must be positive");
    if (c.m < 0 || c.m > kMaxBesselOrder) {
        throw ConfigurationError("m must lie in [0, " + std::to_string(kMaxBesselOrder) + "]");
    }
    if (c.theta_count < 1) throw ConfigurationError("theta-count must be positive");
    if (c.samples < 2) throw ConfigurationError("samples must be at least 2");
    if (c.modes && *c.modes < 0) throw ConfigurationError("modes must be non-negative");
    if (c.geometry != "nic" && c.geometry != "nil") {
        throw ConfigurationError("geometry must be nic or nil");
    }
    const bool layered = c.experiment == Experiment::LayerDemo ||
                         c.experiment == Experiment::CheckGeom || c.geometry == "nil";
    if (layered) {
        if (!(c.R > 0.0) || !(c.S > c.R)) throw ConfigurationError("layer needs 0 < R < S");
        if (c.n < 1) throw ConfigurationError("layer exponent n must be at least 1");
    }
    if (c.geometry == "nil" && !(c.R0 < c.R)) {
        throw ConfigurationError("nil geometry needs R0 < R");
    }
    if (c.experiment == Experiment::Converge) {
        if (c.N_list.empty()) throw ConfigurationError("converge needs a non-empty N-list");
        for (std::size_t j = 0; j < c.N_list.size(); ++j) {
            if (c.N_list[j] < 2) throw ConfigurationError("N-list entries must be at least 2");
            if (j > 0 && c.N_list[j] <= c.N_list[j - 1]) {
                throw ConfigurationError("N-list must be strictly increasing");
            }
        }
    }
}

std::string num(double x) {
    if (!std::isfinite(x)) {
        if (std::isnan(x)) return "nan";
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string cnum(cplx z) { return num(z.real()) + "," + num(z.imag()); }

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::ofstream open_output(const RunConfig& c, const std::string& name) {
    std::ofstream out(fs::path(c.out) / name, std::ios::binary);
    if (!out) throw ConfigurationError("cannot open output file " + (fs::path(c.out) / name).string());
    return out;
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json norms_json(const ErrorNorms& e) {
    return {{"max_rel", e.max_rel}, {"l2_rel", e.l2_rel}, {"absolute", e.absolute}};
}

void write_radial_csv(const RunConfig& c, const RadialRun& run, int dimension) {
    auto out = open_output(c, "solution.csv");
    out << "rho,u_re,u_im,U_re,U_im\n";
    const auto& nodes = run.solution.grid.nodes;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double rho = nodes[j];
        const cplx u = run.solution.values[j];
        out << num(rho) << ',' << cnum(u) << ',';
        if (rho >= run.map.outer()) {
            out << ",\n";
            continue;
        }
        const double r = run.map.radius(rho);
        const cplx U = std::polar(1.0, c.k * run.height.height(run.map, rho)) * u /
                       std::pow(r, 0.5 * (dimension - 1));
        out << cnum(U) << '\n';
    }
}

json boundary_json(const ModeSolution& s, const ErrorNorms& interior) {
    const double floor = std::max(interior.max_rel, 1e-15);
    return {{"residual", s.boundary_residual},
            {"residual_relative", s.boundary_residual_relative},
            {"interior_error", interior.max_rel},
            {"pass", s.boundary_residual_relative < 10.0 * floor},
            // at the roundoff floor the derivative row amplifies rounding by ~N^2
            {"roundoff_limited", interior.max_rel < 1e-12}};
}

Scheme radial_scheme(const RunConfig& c) {
    return c.scheme == Scheme::FD2 ? Scheme::FD2 : Scheme::Chebyshev;
}

json run_oned(const RunConfig& c) {
    PlaneWaveProblem p{c.k, c.resolved_K(), c.a, radial_scheme(c)};
    const auto run = run_plane_wave(p, c.resolved_N());
    write_radial_csv(c, run, 1);
    return {{"norms", norms_json(run.norms)},
            {"u_at_infinity", cjson(run.solution.at_infinity())},
            {"relative_residual", run.solution.relative_residual},
            {"rcond", run.solution.rcond},
            {"checks", {{"behavioral_boundary", boundary_json(run.solution, run.norms)}}}};
}

json run_mode2d(const RunConfig& c) {
    HankelModeProblem p{c.k, c.resolved_K(), c.m, c.a, radial_scheme(c)};
    const auto run = run_hankel_mode(p, c.resolved_N());
    write_radial_csv(c, run, 2);
    const cplx farfield = run.solution.at_infinity();
    const cplx expected = farfield_limit(c.m, c.k, c.resolved_K());
    return {{"norms", norms_json(run.norms)},
            {"u_at_infinity", cjson(farfield)},
            {"farfield_expected", cjson(expected)},
            {"farfield_modulus", std::abs(farfield)},
            {"farfield_error", std::abs(farfield - expected)},
            {"relative_residual", run.solution.relative_residual},
            {"rcond", run.solution.rcond},
            {"checks", {{"behavioral_boundary", boundary_json(run.solution, run.norms)}}}};
}

ScatterSetup scatter_setup(const RunConfig& c, int N) {
    ScatterSetup s;
    s.k = c.k;
    s.R0 = c.R0;
    s.K = c.resolved_K();
    s.geometry = c.geometry == "nil" ? ScatterGeometry::NIL : ScatterGeometry::NIC;
    s.layer = LayerConfig{c.R, c.S, c.n};
    s.scheme = c.scheme;
    // A single Chebyshev domain cannot resolve the layer kink; split at R.
    if (s.geometry == ScatterGeometry::NIL && c.scheme != Scheme::FD2) {
        s.scheme = Scheme::TwoDomainChebyshev;
    }
    s.N = N;
    s.modes = c.modes;
    return s;
}

/// Physical error below R for NIL, transformed error on the nodes for NIC.
ErrorNorms scatter_error(const RunConfig& c, const ScatteringProblem& problem,
                         const ScatteringSolution& solution, const ScatteringSeries& series) {
    if (c.geometry == "nil") {
        return scattering_error_physical(solution, series, problem, c.R, c.theta_count);
    }
    return scattering_error_transformed(solution, series, solution.modes.front().grid.nodes,
                                        c.theta_count);
}

json run_scatter(const RunConfig& c) {
    const auto problem = make_scattering_problem(scatter_setup(c, c.resolved_N()));
    const auto t0 = std::chrono::steady_clock::now();
    const auto solution = solve_scattering(problem);
    const double solve_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const ScatteringSeries series(problem.k, problem.R0, oracle_modes(solution.M), problem.map,
                                  problem.height);
    const ScatteringSeries truncated(problem.k, problem.R0, solution.M, problem.map, problem.height);

    auto field = reconstruct_field(solution.modes, c.theta_count);
    attach_physical(field, problem.map, problem.height, problem.k);
    {
        auto out = open_output(c, "field.csv");
        out << "rho,theta,u_re,u_im,U_re,U_im\n";
        for (Eigen::Index j = 0; j < field.transformed.rows(); ++j) {
            const double rho = field.rho[static_cast<std::size_t>(j)];
            const bool at_infinity = rho >= problem.map.outer();
            for (Eigen::Index l = 0; l < field.transformed.cols(); ++l) {
                out << num(rho) << ',' << num(field.theta[static_cast<std::size_t>(l)]) << ','
                    << cnum(field.transformed(j, l)) << ',';
                if (at_infinity) {
                    out << ",\n";
                } else {
                    out << cnum((*field.physical)(j, l)) << '\n';
                }
            }
        }
    }
    const auto farfield = farfield_extract(solution.modes);
    {
        auto out = open_output(c, "farfield.csv");
        out << "m,u_re,u_im\n";
        for (std::size_t j = 0; j < solution.modes.size(); ++j) {
            out << solution.modes[j].m << ',' << cnum(farfield[j]) << '\n';
        }
    }

    double dirichlet_error = 0.0, truncated_dirichlet_error = 0.0;
    for (int l = 0; l < c.theta_count; ++l) {
        const double theta = 2.0 * pi * l / c.theta_count;
        const cplx incident = std::polar(1.0, c.k * c.R0 * std::cos(theta));
        dirichlet_error = std::max(dirichlet_error, std::abs(series.physical(c.R0, theta) + incident));
        truncated_dirichlet_error =
            std::max(truncated_dirichlet_error, std::abs(truncated.physical(c.R0, theta) + incident));
    }
    const ErrorNorms transformed = scattering_error_transformed(
        solution, series, solution.modes.front().grid.nodes, c.theta_count);
    const double rho_limit = c.geometry == "nil" ? c.R : problem.map.outer();
    const ErrorNorms physical =
        scattering_error_physical(solution, series, problem, rho_limit, c.theta_count);

    double worst_boundary = 0.0;
    json farfield_json = json::array();
    for (std::size_t j = 0; j < solution.modes.size(); ++j) {
        worst_boundary = std::max(worst_boundary, solution.modes[j].boundary_residual_relative);
        farfield_json.push_back({{"m", solution.modes[j].m}, {"u", cjson(farfield[j])}});
    }
    return {{"M", solution.M},
            {"oracle_M", series.M()},
            {"scheme_used", scheme_name(problem.scheme)},
            {"map", problem.map.describe()},
            {"height", problem.height.describe()},
            {"tail_ratio", solution.tail_ratio},
            {"norms_transformed", norms_json(transformed)},
            {"norms_physical", norms_json(physical)},
            {"physical_region_rho_max", rho_limit},
            {"farfield", farfield_json},
            {"solve_runtime_s", solve_time},
            {"checks",
             {{"truncation", solution.truncation_ok},
              {"series_dirichlet_error", dirichlet_error},
              {"series_dirichlet", dirichlet_error < 1e-10},
              {"truncated_series_dirichlet_error", truncated_dirichlet_error},
              {"max_boundary_residual_relative", worst_boundary}}}};
}

json run_dispersion(const RunConfig& c) {
    auto transformed = open_output(c, "dispersion.csv");
    auto naive = open_output(c, "dispersion_compactified.csv");
    transformed << "rho,xip_re,xip_im,xim_re,xim_im\n";
    naive << "rho,xip_re,xip_im,xim_re,xim_im\n";
    bool plus_exact = true, minus_dominates = true;
    for (int j = 0; j < c.samples; ++j) {
        const double rho = 0.5 * pi * j / c.samples;
        const auto t = dispersion_transformed(c.k, rho);
        const auto n = dispersion_compactified(c.k, rho);
        transformed << num(rho) << ',' << cnum(t.plus) << ',' << cnum(t.minus) << '\n';
        naive << num(rho) << ',' << cnum(n.plus) << ',' << cnum(n.minus) << '\n';
        plus_exact = plus_exact && t.plus == cplx(c.k, 0.0);
        if (rho > 0.0) minus_dominates = minus_dominates && std::abs(t.minus) > std::abs(t.plus);
    }
    return {{"checks", {{"xi_plus_equals_k", plus_exact}, {"xi_minus_dominates", minus_dominates}}}};
}

json run_layerdemo(const RunConfig& c) {
    const auto trio = layer_trio(c.k, c.sigma, c.R, c.S, c.n, c.undamped);
    auto out = open_output(c, "layer.csv");
    out << "rho,r,pml_re,pml_im,pal_re,pal_im,nil_re,nil_im\n";
    double nil_modulus_error = 0.0;
    for (int j = 0; j < c.samples; ++j) {
        const double rho = c.S * j / (c.samples - 1);
        out << num(rho) << ',';
        if (rho < c.S) {
            const double r = rho <= c.R ? rho : c.R + (c.S - c.R) * (rho - c.R) / (c.S - rho);
            out << num(r) << ',' << cnum(trio.pml(r)) << ',';
        } else {
            out << ",,,";
        }
        const cplx nil = trio.nil(rho);
        nil_modulus_error = std::max(nil_modulus_error, std::abs(std::abs(nil) - 1.0));
        out << cnum(trio.pal(rho)) << ',' << cnum(nil) << '\n';
    }
    return {{"checks",
             {{"pml_unit_at_interface", std::abs(std::abs(trio.pml(c.R)) - 1.0) < 1e-15},
              {"nil_modulus_error", nil_modulus_error},
              {"nil_unit_modulus", nil_modulus_error < 1e-12}}}};
}

json run_converge(const RunConfig& c) {
    std::function<ErrorNorms(int)> study;
    switch (c.target) {
    case ConvergeTarget::OneD:
        study = [&c](int N) {
            return run_plane_wave({c.k, c.resolved_K(), c.a, radial_scheme(c)}, N).norms;
        };
        break;
    case ConvergeTarget::Mode2D:
        study = [&c](int N) {
            return run_hankel_mode({c.k, c.resolved_K(), c.m, c.a, radial_scheme(c)}, N).norms;
        };
        break;
    case ConvergeTarget::Scatter:
        study = [&c](int N) {
            const auto problem = make_scattering_problem(scatter_setup(c, N));
            const auto solution = solve_scattering(problem);
            const ScatteringSeries series(problem.k, problem.R0, oracle_modes(solution.M),
                                          problem.map, problem.height);
            return scatter_error(c, problem, solution, series);
        };
        break;
    }
    const auto records = convergence_study(study, c.N_list);
    auto out = open_output(c, "convergence.csv");
    out << "N,error_max,error_l2,observed_order,runtime_s\n";
    json rows = json::array();
    for (const auto& r : records) {
        out << r.N << ',' << num(r.error_max) << ',' << num(r.error_l2) << ','
            << (std::isnan(r.observed_order) ? std::string() : num(r.observed_order)) << ','
            << num(r.runtime_s) << '\n';
        rows.push_back({{"N", r.N},
                        {"error_max", r.error_max},
                        {"error_l2", r.error_l2},
                        {"observed_order", finite_or_null(r.observed_order)},
                        {"runtime_s", r.runtime_s}});
    }
    return {{"records", rows}};
}

json run_checkgeom(const RunConfig& c) {
    struct Case {
        std::string name;
        CompactificationMap map;
    };
    const std::vector<Case> maps = {
        {"rational", CompactificationMap::rational()},
        {"tangent", CompactificationMap::tangent()},
        {"layer", CompactificationMap::layer({c.R, c.S, c.n})},
    };
    auto out = open_output(c, "checkgeom.csv");
    out << "map,height,max_boost_excess,boost_at_outer_error,boost_slope_at_outer,pass\n";
    json rows = json::array();
    bool all = true;
    for (const auto& mc : maps) {
        std::vector<std::pair<std::string, HeightFunction>> heights = {
            {"hyperboloidal", HeightFunction(HeightKind::Hyperboloidal, c.resolved_K())},
            {"characteristic", HeightFunction(HeightKind::Characteristic, 1.0)},
        };
        if (mc.map.kind() == MapKind::Layer) {
            heights.emplace_back("layer", make_height(HeightKind::LayerHeight, c.resolved_K(), mc.map));
        }
        for (const auto& [hname, height] : heights) {
            const auto rep = check_boost_conditions(mc.map, height, c.samples);
            all = all && rep.pass;
            out << mc.name << ',' << hname << ',' << num(rep.max_boost_excess) << ','
                << num(rep.boost_at_outer_error) << ',' << num(rep.boost_slope_at_outer) << ','
                << (rep.pass ? "true" : "false") << '\n';
            rows.push_back({{"map", mc.name},
                            {"height", hname},
                            {"max_boost_excess", rep.max_boost_excess},
                            {"boost_at_outer_error", rep.boost_at_outer_error},
                            {"boost_slope_at_outer", rep.boost_slope_at_outer},
                            {"pass", rep.pass}});
        }
    }
    if (!all) throw DomainError("checkgeom: a boost condition failed, see checkgeom.csv");
    return {{"cases", rows}, {"checks", {{"all_boost_conditions", all}}}};
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const ConfigurationError*>(&e)) return "configuration";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    if (dynamic_cast<const UnsupportedError*>(&e)) return "unsupported";
    if (dynamic_cast<const RegularityError*>(&e)) return "regularity";
    if (dynamic_cast<const AssemblyError*>(&e)) return "assembly";
    if (dynamic_cast<const SolveError*>(&e)) return "solve";
    return "internal";
}

void report(std::ostream& err, int code, const std::string& kind, const std::string& message) {
    err << "nic-error code=" << code << " kind=" << kind << " message=" << json(message).dump()
        << '\n';
}

} // namespace

double RunConfig::resolved_K() const {
    if (K) return *K;
    return experiment == Experiment::OneD ||
                   (experiment == Experiment::Converge && target == ConvergeTarget::OneD)
               ? k
               : 1.0;
}

int RunConfig::resolved_N() const {
    if (N) return *N;
    switch (experiment) {
    case Experiment::OneD:
        return scheme == Scheme::FD2 ? 512 : 64;
    case Experiment::Mode2D:
        return scheme == Scheme::FD2 ? 512 : 128;
    case Experiment::Scatter:
        return scheme == Scheme::FD2 ? 512 : 160;
    default:
        return 64;
    }
}

json RunConfig::to_json() const {
    json j = {{"experiment", experiment_name(experiment)},
              {"k", k},
              {"K", resolved_K()},
              {"m", m},
              {"a", a},
              {"R0", R0},
              {"R", R},
              {"S", S},
              {"n", n},
              {"sigma", sigma},
              {"scheme", scheme_name(scheme)},
              {"N", resolved_N()},
              {"geometry", geometry},
              {"modes", modes ? json(*modes) : json(nullptr)},
              {"theta-count", theta_count},
              {"N-list", N_list},
              {"samples", samples},
              {"target", target_name(target)},
              {"undamped", undamped},
              {"out", out}};
    return j;
}

std::string experiment_name(Experiment e) {
    switch (e) {
    case Experiment::OneD:
        return "oned";
    case Experiment::Mode2D:
        return "mode2d";
    case Experiment::Scatter:
        return "scatter";
    case Experiment::Dispersion:
        return "dispersion";
    case Experiment::LayerDemo:
        return "layerdemo";
    case Experiment::Converge:
        return "converge";
    case Experiment::CheckGeom:
        return "checkgeom";
    }
    return "?";
}

RunConfig resolve_config(Experiment experiment, const json& file, const json& flags) {
    if (!file.is_null() && !file.is_object()) {
        throw ConfigurationError("config file must hold a flat JSON object");
    }
    json merged = file.is_null() ? json::object() : file;
    for (const auto& [key, value] : flags.items()) merged[key] = value;

    RunConfig c;
    c.experiment = experiment;
    const auto& table = key_table();
    for (const auto& [key, value] : merged.items()) {
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigurationError("unknown option '" + key + "'");
        if (value.is_null()) continue;
        if (key == "k") c.k = parse_real(key, value);
        else if (key == "K") c.K = parse_real(key, value);
        else if (key == "m") c.m = parse_int(key, value);
        else if (key == "a") c.a = parse_real(key, value);
        else if (key == "R0") c.R0 = parse_real(key, value);
        else if (key == "R") c.R = parse_real(key, value);
        else if (key == "S") c.S = parse_real(key, value);
        else if (key == "n") c.n = parse_int(key, value);
        else if (key == "sigma") c.sigma = parse_real(key, value);
        else if (key == "N") c.N = parse_int(key, value);
        else if (key == "modes") c.modes = parse_int(key, value);
        else if (key == "theta-count") c.theta_count = parse_int(key, value);
        else if (key == "N-list") c.N_list = parse_int_list(key, value);
        else if (key == "samples") c.samples = parse_int(key, value);
        else if (key == "undamped") c.undamped = parse_flag(key, value);
        else if (key == "out") c.out = parse_text(key, value);
        else if (key == "geometry") c.geometry = parse_text(key, value);
        else if (key == "scheme") {
            const auto s = parse_text(key, value);
            if (s == "fd2") c.scheme = Scheme::FD2;
            else if (s == "cheb") c.scheme = Scheme::Chebyshev;
            else bad_value(key, "expected fd2 or cheb");
        } else if (key == "target") {
            const auto s = parse_text(key, value);
            if (s == "oned") c.target = ConvergeTarget::OneD;
            else if (s == "mode2d") c.target = ConvergeTarget::Mode2D;
            else if (s == "scatter") c.target = ConvergeTarget::Scatter;
            else bad_value(key, "expected oned, mode2d or scatter");
        }
    }
    if (experiment == Experiment::Converge && c.N_list.empty()) {
        c.N_list = c.scheme == Scheme::FD2 ? std::vector<int>{64, 128, 256, 512}
                                           : std::vector<int>{8, 16, 32, 64};
    }
    validate(c);
    return c;
}

int run(const RunConfig& config, std::ostream& err) {
    try {
        validate(config);
        fs::create_directories(config.out);
        const auto t0 = std::chrono::steady_clock::now();
        json result;
        switch (config.experiment) {
        case Experiment::OneD:
            result = run_oned(config);
            break;
        case Experiment::Mode2D:
            result = run_mode2d(config);
            break;
        case Experiment::Scatter:
            result = run_scatter(config);
            break;
        case Experiment::Dispersion:
            result = run_dispersion(config);
            break;
        case Experiment::LayerDemo:
            result = run_layerdemo(config);
            break;
        case Experiment::Converge:
            result = run_converge(config);
            break;
        case Experiment::CheckGeom:
            result = run_checkgeom(config);
            break;
        }
        const double runtime =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json summary = {{"config", config.to_json()},
                        {"results", result},
                        {"runtime_s", runtime},
                        {"timestamp", timestamp_utc()}};
        auto out = open_output(config, "summary.json");
        out << summary.dump(2) << '\n';
        return kExitOk;
    } catch (const ConfigurationError& e) {
        report(err, kExitValidation, error_kind(e), e.what());
        return kExitValidation;
    } catch (const fs::filesystem_error& e) {
        report(err, kExitValidation, "io", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        report(err, kExitNumerical, error_kind(e), e.what());
        return kExitNumerical;
    }
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Helmholtz solves on compactified domains with the outer boundary at null infinity"};
    app.require_subcommand(1);

    struct Sub {
        Experiment experiment;
        const char* name;
        const char* help;
        std::vector<std::string> keys;
    };
    const std::vector<std::string> common = {"k", "K", "scheme", "N", "out"};
    const std::vector<std::string> scatter_keys = {"geometry", "R0", "R", "S", "n", "modes",
                                                   "theta-count"};
    std::vector<Sub> subs = {
        {Experiment::OneD, "oned", "1D plane wave", {"a"}},
        {Experiment::Mode2D, "mode2d", "2D single Hankel mode", {"a", "m"}},
        {Experiment::Scatter, "scatter", "2D sound-soft circle scattering", scatter_keys},
        {Experiment::Dispersion, "dispersion", "dispersion tables", {"samples"}},
        {Experiment::LayerDemo, "layerdemo", "PML / PAL / NIL closed forms",
         {"R", "S", "n", "sigma", "samples", "undamped"}},
        {Experiment::Converge, "converge", "convergence study", {"N-list", "target", "a", "m"}},
        {Experiment::CheckGeom, "checkgeom", "boost-condition checks", {"R", "S", "n", "samples"}},
    };
    for (const auto& k : scatter_keys) subs[5].keys.push_back(k);

    std::map<std::string, std::string> raw;
    std::string config_path;
    bool undamped = false;
    std::vector<std::pair<CLI::App*, std::map<std::string, CLI::Option*>>> registered;
    for (auto& sub : subs) {
        auto* cmd = app.add_subcommand(sub.name, sub.help);
        std::map<std::string, CLI::Option*> options;
        cmd->add_option("--config", config_path, "flat JSON config; flags override it");
        std::vector<std::string> keys = common;
        keys.insert(keys.end(), sub.keys.begin(), sub.keys.end());
        for (const auto& key : keys) {
            if (key == "undamped") {
                options[key] = cmd->add_flag("--undamped", undamped, "use the undamped NIL height");
            } else {
                options[key] = cmd->add_option("--" + key, raw[key]);
            }
        }
        registered.emplace_back(cmd, std::move(options));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report(std::cerr, kExitValidation, "usage", e.what());
        return kExitValidation;
    }

    for (std::size_t s = 0; s < subs.size(); ++s) {
        auto* cmd = registered[s].first;
        if (!cmd->parsed()) continue;
        try {
            json file = nullptr;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw ConfigurationError("cannot read config file " + config_path);
                try {
                    file = json::parse(in);
                } catch (const json::parse_error& e) {
                    throw ConfigurationError(std::string("config file is not valid JSON: ") + e.what());
                }
            }
            json flags = json::object();
            for (const auto& [key, option] : registered[s].second) {
                if (option->count() == 0) continue;
                flags[key] = key == "undamped" ? json(undamped) : json(raw[key]);
            }
            return run(resolve_config(subs[s].experiment, file, flags), std::cerr);
        } catch (const ConfigurationError& e) {
            report(std::cerr, kExitValidation, "configuration", e.what());
            return kExitValidation;
        }
    }
    report(std::cerr, kExitValidation, "usage", "no subcommand given");
    return kExitValidation;
}

} // namespace nic
