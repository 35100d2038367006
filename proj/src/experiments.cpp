#include "nic/experiments.hpp"

#include <cmath>
#include <numbers>

namespace nic {

namespace {

RadialRun finish_run(RadialRun run, const RadialOperator& op, const Grid& grid,
                     const ReferenceSolution& exact) {
    const cplx datum = exact(op.finite_node());
    run.solution = solve(discretize(op, grid, datum));
    run.exact.reserve(grid.nodes.size());
    for (const double rho : grid.nodes) run.exact.push_back(exact(rho));
    run.norms = error_norms(std::span<const cplx>(run.solution.values),
                            std::span<const cplx>(run.exact));
    return run;
}

Scheme checked_radial_scheme(Scheme scheme) {
    if (scheme == Scheme::TwoDomainChebyshev) {
        throw ConfigurationError("radial runs use fd2 or cheb on a single domain");
    }
    return scheme;
}

} // namespace

RadialRun run_plane_wave(const PlaneWaveProblem& p, int N) {
    if (!(p.a > 0.0)) throw ConfigurationError("plane wave: a must be positive");
    RadialRun run{CompactificationMap::rational(p.a / (1.0 + p.a)),
                  HeightFunction(HeightKind::Hyperboloidal, p.K), {}, {}, {}};
    const auto op = coefficients_general(1, 0, p.k, run.map, run.height);
    const auto grid = build_grid(checked_radial_scheme(p.scheme), N, op.lo, op.hi);
    const auto exact = plane_wave_1d(p.k, run.map, run.height, Representation::Transformed);
    return finish_run(std::move(run), op, grid, exact);
}

RadialRun run_hankel_mode(const HankelModeProblem& p, int N) {
    if (!(p.a > 0.0)) throw ConfigurationError("hankel mode: a must be positive");
    RadialRun run{CompactificationMap::rational(p.a / (1.0 + p.a)),
                  HeightFunction(HeightKind::Hyperboloidal, p.K), {}, {}, {}};
    const auto op = coefficients_general(2, p.m, p.k, run.map, run.height);
    const auto grid = build_grid(checked_radial_scheme(p.scheme), N, op.lo, op.hi);
    const auto exact = hankel_mode(p.k, p.m, run.map, run.height, Representation::Transformed);
    auto out = finish_run(std::move(run), op, grid, exact);
    out.solution.m = p.m;
    return out;
}

ScatteringProblem make_scattering_problem(const ScatterSetup& s) {
    ScatteringProblem p;
    p.k = s.k;
    p.R0 = s.R0;
    p.modes = s.modes;
    p.scheme = s.scheme;
    p.N = s.N;
    if (!(s.R0 > 0.0)) throw ConfigurationError("scatter: R0 must be positive");
    if (s.geometry == ScatterGeometry::NIC) {
        p.map = CompactificationMap::rational(s.R0 / (1.0 + s.R0));
        p.height = HeightFunction(HeightKind::Hyperboloidal, s.K);
    } else {
        // Inside the layer g is the identity, so the scatterer sits at rho = R0.
        p.map = CompactificationMap::layer(s.layer, s.R0);
        p.height = make_height(HeightKind::LayerHeight, s.K, p.map);
    }
    return p;
}

std::vector<double> uniform_samples(double lo, double hi, int count) {
    if (count < 2) throw ConfigurationError("uniform_samples: need at least two samples");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        out[static_cast<std::size_t>(j)] = lo + (hi - lo) * j / (count - 1);
    }
    out.back() = hi;
    return out;
}

ErrorNorms scattering_error_transformed(const ScatteringSolution& solution,
                                        const ScatteringSeries& series,
                                        const std::vector<double>& rho_samples, int theta_count) {
    const auto field = reconstruct_field(solution.modes, theta_count, rho_samples);
    std::vector<cplx> numeric, exact;
    numeric.reserve(rho_samples.size() * static_cast<std::size_t>(theta_count));
    exact.reserve(numeric.capacity());
    for (std::size_t j = 0; j < rho_samples.size(); ++j) {
        for (std::size_t l = 0; l < field.theta.size(); ++l) {
            numeric.push_back(field.transformed(static_cast<Eigen::Index>(j),
                                                static_cast<Eigen::Index>(l)));
            exact.push_back(series.transformed(rho_samples[j], field.theta[l]));
        }
    }
    return error_norms(std::span<const cplx>(numeric), std::span<const cplx>(exact));
}

ErrorNorms scattering_error_physical(const ScatteringSolution& solution,
                                     const ScatteringSeries& series,
                                     const ScatteringProblem& problem, double rho_limit,
                                     int theta_count) {
    std::vector<double> rho;
    for (const double x : solution.modes.front().grid.nodes) {
        if (x < rho_limit) rho.push_back(x);
    }
    auto field = reconstruct_field(solution.modes, theta_count, rho);
    attach_physical(field, problem.map, problem.height, problem.k);
    std::vector<cplx> numeric, exact;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double r = problem.map.radius(rho[j]);
        for (std::size_t l = 0; l < field.theta.size(); ++l) {
            numeric.push_back((*field.physical)(static_cast<Eigen::Index>(j),
                                                static_cast<Eigen::Index>(l)));
            exact.push_back(series.physical(r, field.theta[l]));
        }
    }
    return error_norms(std::span<const cplx>(numeric), std::span<const cplx>(exact));
}

std::vector<cplx> physical_field_at(const ScatteringSolution& solution,
                                    const ScatteringProblem& problem,
                                    const std::vector<double>& radii, int theta_count) {
    std::vector<double> rho;
    rho.reserve(radii.size());
    for (const double r : radii) rho.push_back(problem.map.inverse(r));
    auto field = reconstruct_field(solution.modes, theta_count, rho);
    attach_physical(field, problem.map, problem.height, problem.k);
    std::vector<cplx> out;
    out.reserve(radii.size() * static_cast<std::size_t>(theta_count));
    for (Eigen::Index j = 0; j < field.physical->rows(); ++j) {
        for (Eigen::Index l = 0; l < field.physical->cols(); ++l) out.push_back((*field.physical)(j, l));
    }
    return out;
}

int oracle_modes(int M) { return M + 10; }

} // namespace nic
