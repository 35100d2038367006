#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nic/assembly.hpp"
#include "nic/geometry.hpp"

namespace nic {

struct ModeSolution {
    int m = 0;
    Grid grid;
    std::vector<cplx> values;
    cplx dirichlet_datum;
    /// |u' - lambda u| at the infinity node with the scheme's own derivative.
    double boundary_residual = 0.0;
    /// Same, divided by max(|u'|, |lambda u|) at that node.
    double boundary_residual_relative = 0.0;
    /// ||A x - b||_inf / (||A||_inf ||x||_inf)
    double relative_residual = 0.0;
    double rcond = 0.0;
    std::size_t infinity_node = 0;

    cplx at_infinity() const { return values[infinity_node]; }
};

/// Dense LU with partial pivoting; sparse LU for FD2 systems.
ModeSolution solve(const DiscreteSystem& system);

/// Interpolate nodal values to rho: barycentric on Chebyshev grids,
/// local quadratic on FD2 grids.
cplx interpolate(const Grid& grid, std::span<const cplx> values, double rho);

struct ScatteringModeData {
    int m = 0;
    cplx coefficient; ///< c_m of the physical series
    cplx datum;       ///< transformed Dirichlet value at rho_0
    bool negligible = false;
};

/// Transformed datum sqrt(R0) e^{-ik h(rho_0)} (-i^m J_m(kR0)) with
/// rho_0 = map.rho_in(), which must map onto R0.
ScatteringModeData scattering_mode_data(int m, double k, double R0, const CompactificationMap& map,
                                        const HeightFunction& height);

struct ScatteringProblem {
    double k = 40.0;
    double R0 = 1.0;
    std::optional<int> modes; ///< overrides the truncation rule
    CompactificationMap map = CompactificationMap::rational(0.5);
    HeightFunction height{HeightKind::Hyperboloidal, 1.0};
    Scheme scheme = Scheme::Chebyshev;
    int N = 160;
};

struct ScatteringSolution {
    int M = 0;
    std::vector<ModeSolution> modes; ///< m = -M .. M
    std::vector<ScatteringModeData> data;
    /// |c_M| / max |c_m|; the truncation is adequate below 1e-12.
    double tail_ratio = 0.0;
    bool truncation_ok = false;
};

ScatteringSolution solve_scattering(const ScatteringProblem& problem);

/// Field on a (rho, theta) tensor grid, theta uniform on [0, 2 pi).
struct FieldSolution {
    std::vector<double> rho;
    std::vector<double> theta;
    Eigen::MatrixXcd transformed; ///< rho x theta
    /// Physical field; rows at rho = S hold NaN.
    std::optional<Eigen::MatrixXcd> physical;
};

/// u(rho_j, theta_l) = sum_m u_m(rho_j) e^{i m theta_l}. Rho defaults to
/// the shared mode grid; other samples are interpolated.
FieldSolution reconstruct_field(std::span<const ModeSolution> modes, int theta_count,
                                std::optional<std::vector<double>> rho_samples = std::nullopt);

/// Fill FieldSolution::physical for rho < S (two-dimensional rescaling).
void attach_physical(FieldSolution& field, const CompactificationMap& map,
                     const HeightFunction& height, double k);

struct ErrorNorms {
    double max_rel = 0.0;
    double l2_rel = 0.0;
    bool absolute = false; ///< exact field vanished, norms are absolute
};

ErrorNorms error_norms(std::span<const cplx> numeric, std::span<const cplx> exact);
ErrorNorms error_norms(const FieldSample& numeric, const FieldSample& exact);

struct ConvergenceRecord {
    int N = 0;
    double error_max = 0.0;
    double error_l2 = 0.0;
    double runtime_s = 0.0;
    /// log(e_prev / e) / log(N / N_prev); NaN for the first entry.
    double observed_order = 0.0;
};

std::vector<ConvergenceRecord> convergence_study(const std::function<ErrorNorms(int)>& run,
                                                 const std::vector<int>& N_list);

/// Value at the infinity node of each mode.
std::vector<cplx> farfield_extract(std::span<const ModeSolution> modes);

} // namespace nic
