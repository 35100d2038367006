#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "nic/geometry.hpp"

namespace nic {

using CoefficientFn = std::function<cplx(double)>;

/// Which end of the radial domain is the degenerate boundary at infinity.
enum class InfinityEnd { Upper, Lower };

/**
 * Radial ODE  c2 u'' + c1 u' + c0 u = src  on [lo, hi].
 *
 * The principal coefficient c2 vanishes at the end that corresponds to
 * infinity; no boundary datum is imposed there.
 */
struct RadialOperator {
    CoefficientFn c2;
    CoefficientFn c1;
    CoefficientFn c0;
    CoefficientFn src;
    double lo = 0.0;
    double hi = 1.0;
    InfinityEnd infinity = InfinityEnd::Upper;
    int dimension = 1;
    int mode = 0;
    double k = 1.0;
    std::optional<CompactificationMap> map;
    std::optional<HeightFunction> height;

    double infinity_node() const { return infinity == InfinityEnd::Upper ? hi : lo; }
    double finite_node() const { return infinity == InfinityEnd::Upper ? lo : hi; }
};

/// Physical source F(r); absent means source free.
using SourceFn = std::function<cplx(double)>;

/**
 * Coefficients of the transformed Helmholtz operator for angular mode m in
 * d dimensions on [map.rho_in(), S]:
 *
 *   c2 = G,  c1 = G' + 2ikH,
 *   c0 = k^2 (1 - H^2)/G - [(1-d)(3-d)/4 + lambda_m] / (G g^2) + ik H',
 *   src = (F/G) g^{(d-1)/2} e^{-ikh},
 *
 * where lambda_m = m^2 in two dimensions and m(m+1) in three.
 */
RadialOperator coefficients_general(int d, int m, double k, const CompactificationMap& map,
                                    const HeightFunction& height, const SourceFn& source = {});

/// Decay estimate of a coefficient combination that must fall off like x^{-2}.
struct FalloffEntry {
    std::string name;
    double exponent = 0.0; ///< log-log slope over x in [1e2, 1e6]; -inf if identically zero
    bool pass = false;
};

struct FalloffReport {
    std::vector<FalloffEntry> entries;
    std::vector<std::string> warnings;
    bool pass() const;
};

/// Coefficient functions of a(x) U'' + b(x) U' + c(x) U = 0 together with
/// the phase rate H(x) = dh/dx of u = e^{-ih(x)} U.
struct VariableCoefficients {
    std::function<cplx(double)> a;
    std::function<cplx(double)> b;
    std::function<cplx(double)> c;
    std::function<double(double)> phase_rate;
    std::function<double(double)> phase_rate_derivative; ///< dH/dx
    /// Optional closed form of c - a H^2; avoids cancellation for large x.
    std::function<cplx(double)> reduced_c;
};

struct VariableOperator {
    RadialOperator op;
    FalloffReport falloff;
};

/**
 * Transformed operator under x = 1/rho on rho in [0, 1/x_inner]:
 *
 *   a rho^2 u'' + (2 a rho - b - 2 i a H) u'
 *     + [(c - a H^2)/rho^2 + i H b / rho^2 - i a dH/drho] u = 0.
 *
 * Infinity sits at rho = 0. Slow decay of b or c - a H^2 is reported as a
 * warning; the operator is still returned.
 */
VariableOperator coefficients_variable_1d(const VariableCoefficients& coeffs, double x_inner);

enum class Scheme { FD2, Chebyshev, TwoDomainChebyshev };

struct Grid {
    Scheme scheme = Scheme::FD2;
    std::vector<double> nodes;
    /// Shared node of the two Chebyshev subdomains.
    std::optional<std::size_t> interface_index;
};

/**
 * FD2: N+1 uniform nodes. Chebyshev: N+1 Gauss-Lobatto nodes mapped so
 * that node 0 is lo and node N is hi. TwoDomainChebyshev: N+1 Lobatto
 * nodes on each of [lo, interface] and [interface, hi], sharing the
 * interface node.
 */
Grid build_grid(Scheme scheme, int N, double lo, double hi,
                std::optional<double> interface = std::nullopt);

/// Chebyshev differentiation matrix on ascending Lobatto nodes of [lo, hi].
Eigen::MatrixXd chebyshev_differentiation(int N, double lo, double hi);

/// The degenerate equation evaluated at infinity, u' = lambda u, with the
/// scheme's own first-derivative row at that node.
struct BoundaryRelation {
    std::size_t node = 0;
    Eigen::RowVectorXd derivative_row;
    cplx lambda;
};

/// Chebyshev systems are dense; FD2 systems are tridiagonal apart from the
/// one-sided row at infinity and are stored sparse.
struct DiscreteSystem {
    Eigen::MatrixXcd matrix;
    Eigen::SparseMatrix<cplx> sparse;
    Eigen::VectorXcd rhs;
    std::size_t dirichlet_row = 0;
    cplx dirichlet_value;
    Grid grid;
    BoundaryRelation outer;
    int mode = 0;

    bool is_sparse() const { return grid.scheme == Scheme::FD2; }
    Eigen::Index size() const { return rhs.size(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
        return is_sparse() ? Eigen::VectorXcd(sparse * x) : Eigen::VectorXcd(matrix * x);
    }
    Eigen::MatrixXcd dense() const { return is_sparse() ? Eigen::MatrixXcd(sparse) : matrix; }
};

DiscreteSystem discretize(const RadialOperator& op, const Grid& grid, cplx dirichlet_value);

struct DispersionPair {
    cplx plus;
    cplx minus;
};

/// Plane-wave roots of the compactified equation d(cos^2 U') + k^2/cos^2 U = 0.
DispersionPair dispersion_compactified(double k, double rho);

/// Plane-wave roots of the transformed tangent-map equation.
DispersionPair dispersion_transformed(double k, double rho);

} // namespace nic
