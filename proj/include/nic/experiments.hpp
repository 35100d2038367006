#pragma once

#include <vector>

#include "nic/reference.hpp"
#include "nic/solver.hpp"

namespace nic {

/// One radial solve compared against its closed form at the solver nodes.
struct RadialRun {
    CompactificationMap map;
    HeightFunction height;
    ModeSolution solution;
    std::vector<cplx> exact;
    ErrorNorms norms;
};

/// U'' + k^2 U = 0 on [a, inf) with U(a) = e^{ika}, rational map and
/// hyperboloidal height with parameter K.
struct PlaneWaveProblem {
    double k = 40.0;
    double K = 40.0;
    double a = 1.0;
    Scheme scheme = Scheme::Chebyshev;
};

RadialRun run_plane_wave(const PlaneWaveProblem& problem, int N);

/// Single outgoing mode H_m^{(1)}(kr) e^{im theta} outside r = a.
struct HankelModeProblem {
    double k = 40.0;
    double K = 1.0;
    int m = 20;
    double a = 1.0;
    Scheme scheme = Scheme::Chebyshev;
};

RadialRun run_hankel_mode(const HankelModeProblem& problem, int N);

enum class ScatterGeometry { NIC, NIL };

struct ScatterSetup {
    double k = 40.0;
    double R0 = 1.0;
    double K = 1.0;
    ScatterGeometry geometry = ScatterGeometry::NIC;
    LayerConfig layer{2.0, 2.2, 2};
    Scheme scheme = Scheme::Chebyshev;
    int N = 160;
    std::optional<int> modes;
};

ScatteringProblem make_scattering_problem(const ScatterSetup& setup);

/// `count` uniformly spaced samples of [lo, hi], both ends included.
std::vector<double> uniform_samples(double lo, double hi, int count);

/// Transformed-field error of a scattering solve against the series, on
/// the given rho samples (interpolated) and a uniform theta grid.
ErrorNorms scattering_error_transformed(const ScatteringSolution& solution,
                                        const ScatteringSeries& series,
                                        const std::vector<double>& rho_samples, int theta_count);

/// Physical-field error at the solver nodes with rho < rho_limit.
ErrorNorms scattering_error_physical(const ScatteringSolution& solution,
                                     const ScatteringSeries& series,
                                     const ScatteringProblem& problem, double rho_limit,
                                     int theta_count);

/// Physical field of a scattering solve at radii r (interpolated in rho),
/// r-major over a uniform theta grid.
std::vector<cplx> physical_field_at(const ScatteringSolution& solution,
                                    const ScatteringProblem& problem,
                                    const std::vector<double>& radii, int theta_count);

/// Oracle truncation used when checking a solve with `M` modes: M + 10.
int oracle_modes(int M);

} // namespace nic
