#include "nic/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SparseLU>

#include "nic/reference.hpp"
#include "nic/specfun.hpp"

namespace nic {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx barycentric_chebyshev(std::span<const double> nodes, std::span<const cplx> values, double x) {
    const std::size_t n = nodes.size();
    cplx num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double diff = x - nodes[j];
        if (diff == 0.0) return values[j];
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j + 1 == n) w *= 0.5;
        num += (w / diff) * values[j];
        den += w / diff;
    }
    return num / den;
}

cplx quadratic_local(std::span<const double> nodes, std::span<const cplx> values, double x) {
    const std::size_t n = nodes.size();
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    std::size_t nearest = static_cast<std::size_t>(std::distance(nodes.begin(), it));
    if (nearest == n || (nearest > 0 && x - nodes[nearest - 1] < nodes[nearest] - x)) --nearest;
    const std::size_t first = std::min(nearest == 0 ? 0 : nearest - 1, n - 3);
    cplx sum = 0.0;
    for (std::size_t a = first; a < first + 3; ++a) {
        double basis = 1.0;
        for (std::size_t b = first; b < first + 3; ++b) {
            if (a != b) basis *= (x - nodes[b]) / (nodes[a] - nodes[b]);
        }
        sum += basis * values[a];
    }
    return sum;
}

cplx i_power(int m) {
    static const cplx table[4] = {1.0, kI, -1.0, -kI};
    return table[((m % 4) + 4) % 4];
}

} // namespace

namespace {

Eigen::VectorXcd solve_dense(const DiscreteSystem& system, double& rcond) {
    const auto& A = system.matrix;
    if (A.rows() != A.cols() || A.rows() != system.rhs.size()) {
        throw SolveError("solve: system is not square");
    }
    if (!A.allFinite()) throw SolveError("solve: matrix has non-finite entries");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    rcond = lu.rcond();
    if (!(min_pivot >= 1e-300)) {
        std::ostringstream os;
        os << "solve: matrix is numerically singular (min pivot " << min_pivot
           << ", rcond estimate " << rcond << ")";
        throw SolveError(os.str());
    }
    return lu.solve(system.rhs);
}

Eigen::VectorXcd solve_sparse(const DiscreteSystem& system, double& rcond) {
    const auto& A = system.sparse;
    if (A.rows() != A.cols() || A.rows() != system.rhs.size()) {
        throw SolveError("solve: system is not square");
    }
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) {
        throw SolveError("solve: sparse factorization failed, matrix is numerically singular (" +
                         lu.lastErrorMessage() + ")");
    }
    rcond = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXcd x = lu.solve(system.rhs);
    if (!x.allFinite()) throw SolveError("solve: sparse solve produced non-finite values");
    return x;
}

} // namespace

ModeSolution solve(const DiscreteSystem& system) {
    double rcond = 0.0;
    const Eigen::VectorXcd x =
        system.is_sparse() ? solve_sparse(system, rcond) : solve_dense(system, rcond);

    ModeSolution sol;
    sol.m = system.mode;
    sol.grid = system.grid;
    sol.rcond = rcond;
    sol.values.assign(x.data(), x.data() + x.size());
    sol.dirichlet_datum = system.dirichlet_value;
    sol.values[system.dirichlet_row] = system.dirichlet_value;

    double anorm = 0.0;
    if (system.is_sparse()) {
        Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(system.size());
        for (Eigen::Index c = 0; c < system.sparse.outerSize(); ++c) {
            for (Eigen::SparseMatrix<cplx>::InnerIterator it(system.sparse, c); it; ++it) {
                row_sums(it.row()) += std::abs(it.value());
            }
        }
        anorm = row_sums.maxCoeff();
    } else {
        anorm = system.matrix.cwiseAbs().rowwise().sum().maxCoeff();
    }
    const double xnorm = x.cwiseAbs().maxCoeff();
    const double rnorm = (system.apply(x) - system.rhs).cwiseAbs().maxCoeff();
    sol.relative_residual = xnorm > 0.0 ? rnorm / (anorm * xnorm) : rnorm;

    sol.infinity_node = system.outer.node;
    const cplx derivative = system.outer.derivative_row.cast<cplx>() * x;
    const cplx scaled = system.outer.lambda * x(static_cast<Eigen::Index>(system.outer.node));
    sol.boundary_residual = std::abs(derivative - scaled);
    const double size = std::max(std::abs(derivative), std::abs(scaled));
    sol.boundary_residual_relative = size > 0.0 ? sol.boundary_residual / size : 0.0;
    return sol;
}

cplx interpolate(const Grid& grid, std::span<const cplx> values, double rho) {
    const std::span<const double> nodes(grid.nodes);
    switch (grid.scheme) {
    case Scheme::FD2:
        return quadratic_local(nodes, values, rho);
    case Scheme::Chebyshev:
        return barycentric_chebyshev(nodes, values, rho);
    case Scheme::TwoDomainChebyshev: {
        const std::size_t I = *grid.interface_index;
        if (rho <= nodes[I]) {
            return barycentric_chebyshev(nodes.first(I + 1), values.first(I + 1), rho);
        }
        return barycentric_chebyshev(nodes.subspan(I), values.subspan(I), rho);
    }
    }
    return 0.0;
}

ScatteringModeData scattering_mode_data(int m, double k, double R0, const CompactificationMap& map,
                                        const HeightFunction& height) {
    const double rho0 = map.rho_in();
    if (std::abs(map.radius(rho0) - R0) > 1e-10 * R0) {
        throw ConfigurationError("scattering: map inner edge does not sit at the scatterer radius");
    }
    const int order = std::abs(m);
    const double z = k * R0;
    double j = bessel_j(order, z);
    if (m < 0 && order % 2 == 1) j = -j;

    ScatteringModeData data;
    data.m = m;
    data.coefficient = scattering_coefficient(m, k, R0);
    const cplx amplitude = -i_power(m) * j;
    if (data.coefficient == 0.0 || amplitude == 0.0) {
        data.negligible = true;
        data.datum = 0.0;
        return data;
    }
    data.datum = std::sqrt(R0) * std::polar(1.0, -k * height.height(map, rho0)) * amplitude;
    return data;
}

ScatteringSolution solve_scattering(const ScatteringProblem& p) {
    if (!(p.k > 0.0) || !(p.R0 > 0.0)) {
        throw ConfigurationError("scattering: k and R0 must be positive");
    }
    ScatteringSolution out;
    out.M = p.modes.value_or(truncation_order(p.k, p.R0));
    if (out.M < static_cast<int>(std::ceil(p.k * p.R0))) {
        throw ConfigurationError("scattering: mode truncation M must be at least ceil(k R0)");
    }

    std::optional<double> interface;
    if (p.scheme == Scheme::TwoDomainChebyshev) {
        if (!p.map.layer_config()) {
            throw ConfigurationError("scattering: two-domain scheme needs a layer map");
        }
        interface = p.map.layer_config()->R;
    }
    const Grid grid = build_grid(p.scheme, p.N, p.map.rho_in(), p.map.outer(), interface);

    double largest = 0.0;
    for (int m = -out.M; m <= out.M; ++m) {
        try {
            auto data = scattering_mode_data(m, p.k, p.R0, p.map, p.height);
            const auto op = coefficients_general(2, m, p.k, p.map, p.height);
            auto sol = solve(discretize(op, grid, data.datum));
            sol.m = m;
            largest = std::max(largest, std::abs(data.coefficient));
            out.modes.push_back(std::move(sol));
            out.data.push_back(data);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "scattering: mode m=" << m << " failed: " << e.what();
            throw SolveError(os.str());
        }
    }
    const double tail = std::max(std::abs(out.data.front().coefficient),
                                 std::abs(out.data.back().coefficient));
    out.tail_ratio = largest > 0.0 ? tail / largest : 0.0;
    out.truncation_ok = out.tail_ratio < 1e-12;
    return out;
}

FieldSolution reconstruct_field(std::span<const ModeSolution> modes, int theta_count,
                                std::optional<std::vector<double>> rho_samples) {
    if (modes.empty()) throw ConfigurationError("reconstruct_field: no modes");
    if (theta_count < 1) throw ConfigurationError("reconstruct_field: theta_count must be positive");
    const Grid& grid = modes.front().grid;
    for (const auto& mode : modes) {
        if (mode.grid.nodes != grid.nodes) {
            throw ConfigurationError("reconstruct_field: modes do not share a grid");
        }
    }

    FieldSolution field;
    field.rho = rho_samples ? *rho_samples : grid.nodes;
    field.theta.resize(static_cast<std::size_t>(theta_count));
    for (int l = 0; l < theta_count; ++l) {
        field.theta[static_cast<std::size_t>(l)] = 2.0 * std::numbers::pi * l / theta_count;
    }

    const auto nr = static_cast<Eigen::Index>(field.rho.size());
    field.transformed = Eigen::MatrixXcd::Zero(nr, theta_count);
    for (const auto& mode : modes) {
        Eigen::VectorXcd radial(nr);
        for (Eigen::Index j = 0; j < nr; ++j) {
            radial(j) = rho_samples ? interpolate(grid, mode.values, field.rho[static_cast<std::size_t>(j)])
                                    : mode.values[static_cast<std::size_t>(j)];
        }
        Eigen::RowVectorXcd angular(theta_count);
        for (int l = 0; l < theta_count; ++l) {
            angular(l) = std::polar(1.0, mode.m * field.theta[static_cast<std::size_t>(l)]);
        }
        field.transformed += radial * angular;
    }
    return field;
}

void attach_physical(FieldSolution& field, const CompactificationMap& map,
                     const HeightFunction& height, double k) {
    Eigen::MatrixXcd physical(field.transformed.rows(), field.transformed.cols());
    for (Eigen::Index j = 0; j < physical.rows(); ++j) {
        const double rho = field.rho[static_cast<std::size_t>(j)];
        if (rho >= map.outer()) {
            physical.row(j).setConstant(cplx(std::numeric_limits<double>::quiet_NaN(),
                                             std::numeric_limits<double>::quiet_NaN()));
            continue;
        }
        const double r = map.radius(rho);
        const cplx factor = std::polar(1.0, k * height.height(map, rho)) / std::sqrt(r);
        physical.row(j) = factor * field.transformed.row(j);
    }
    field.physical = std::move(physical);
}

ErrorNorms error_norms(std::span<const cplx> numeric, std::span<const cplx> exact) {
    if (numeric.size() != exact.size()) {
        throw ConfigurationError("error_norms: sample sizes differ");
    }
    double diff_max = 0.0, diff_l2 = 0.0, ref_max = 0.0, ref_l2 = 0.0;
    for (std::size_t j = 0; j < numeric.size(); ++j) {
        const double d = std::abs(numeric[j] - exact[j]);
        const double e = std::abs(exact[j]);
        diff_max = std::max(diff_max, d);
        diff_l2 += d * d;
        ref_max = std::max(ref_max, e);
        ref_l2 += e * e;
    }
    ErrorNorms norms;
    if (ref_max == 0.0) {
        norms.absolute = true;
        norms.max_rel = diff_max;
        norms.l2_rel = std::sqrt(diff_l2);
        return norms;
    }
    norms.max_rel = diff_max / ref_max;
    norms.l2_rel = std::sqrt(diff_l2 / ref_l2);
    return norms;
}

ErrorNorms error_norms(const FieldSample& numeric, const FieldSample& exact) {
    if (numeric.nodes != exact.nodes) {
        throw ConfigurationError("error_norms: fields are sampled on different nodes");
    }
    return error_norms(std::span<const cplx>(numeric.values), std::span<const cplx>(exact.values));
}

std::vector<ConvergenceRecord> convergence_study(const std::function<ErrorNorms(int)>& run,
                                                 const std::vector<int>& N_list) {
    for (std::size_t j = 1; j < N_list.size(); ++j) {
        if (N_list[j] <= N_list[j - 1]) {
            throw ConfigurationError("convergence study: N list must be increasing");
        }
    }
    std::vector<ConvergenceRecord> records;
    for (const int N : N_list) {
        const auto start = std::chrono::steady_clock::now();
        const ErrorNorms norms = run(N);
        const auto stop = std::chrono::steady_clock::now();
        ConvergenceRecord rec;
        rec.N = N;
        rec.error_max = norms.max_rel;
        rec.error_l2 = norms.l2_rel;
        rec.runtime_s = std::chrono::duration<double>(stop - start).count();
        rec.observed_order = std::numeric_limits<double>::quiet_NaN();
        if (!records.empty()) {
            const auto& prev = records.back();
            rec.observed_order = std::log(prev.error_max / rec.error_max) /
                                 std::log(static_cast<double>(N) / prev.N);
        }
        records.push_back(rec);
    }
    return records;
}

std::vector<cplx> farfield_extract(std::span<const ModeSolution> modes) {
    std::vector<cplx> out;
    out.reserve(modes.size());
    for (const auto& mode : modes) out.push_back(mode.at_infinity());
    return out;
}

} // namespace nic
