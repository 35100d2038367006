#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "nic/assembly.hpp"
#include "nic/solver.hpp"
#include "nic/specfun.hpp"

using namespace nic;
using doctest::Approx;

namespace {

// (1 - rho) u'' + u' + u = 2 + rho^2 on [0, 1]; u = rho^2 with u(0) = 0.
RadialOperator quadratic_operator() {
    RadialOperator op;
    op.c2 = [](double rho) { return cplx(1.0 - rho); };
    op.c1 = [](double) { return cplx(1.0); };
    op.c0 = [](double) { return cplx(1.0); };
    op.src = [](double rho) { return cplx(2.0 + rho * rho); };
    return op;
}

double max_error_vs(const ModeSolution& sol, const std::function<cplx(double)>& exact) {
    double err = 0.0;
    for (std::size_t j = 0; j < sol.grid.nodes.size(); ++j) {
        err = std::max(err, std::abs(sol.values[j] - exact(sol.grid.nodes[j])));
    }
    return err;
}

} // namespace

TEST_CASE("grids") {
    const auto fd = build_grid(Scheme::FD2, 4, 0.0, 1.0);
    CHECK(fd.nodes.size() == 5);
    CHECK(fd.nodes[2] == Approx(0.5));
    const auto ch = build_grid(Scheme::Chebyshev, 4, 0.0, 1.0);
    CHECK(ch.nodes.front() == 0.0);
    CHECK(ch.nodes.back() == 1.0);
    CHECK(ch.nodes[2] == Approx(0.5));
    const auto two = build_grid(Scheme::TwoDomainChebyshev, 4, 0.0, 3.0, 2.0);
    CHECK(two.nodes.size() == 9);
    REQUIRE(two.interface_index);
    CHECK(two.nodes[*two.interface_index] == 2.0);
    CHECK_THROWS_AS(build_grid(Scheme::FD2, 1, 0.0, 1.0), ConfigurationError);
    CHECK_THROWS_AS(build_grid(Scheme::TwoDomainChebyshev, 4, 0.0, 1.0), ConfigurationError);
}

TEST_CASE("Chebyshev differentiation is exact for polynomials") {
    const int N = 8;
    const auto grid = build_grid(Scheme::Chebyshev, N, -0.5, 2.0);
    const Eigen::MatrixXd D = chebyshev_differentiation(N, -0.5, 2.0);
    Eigen::VectorXd p(N + 1), dp(N + 1);
    for (int j = 0; j <= N; ++j) {
        const double x = grid.nodes[j];
        p(j) = std::pow(x, 5) - 3.0 * x * x + 1.0;
        dp(j) = 5.0 * std::pow(x, 4) - 6.0 * x;
    }
    CHECK((D * p - dp).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("FD2 reproduces a quadratic solution exactly") {
    const auto op = quadratic_operator();
    const auto sys = discretize(op, build_grid(Scheme::FD2, 10, 0.0, 1.0), 0.0);
    CHECK(sys.is_sparse());
    CHECK(sys.outer.node == 10);
    const auto sol = solve(sys);
    CHECK(max_error_vs(sol, [](double r) { return cplx(r * r); }) < 1e-12);
}

TEST_CASE("Chebyshev reproduces a polynomial solution") {
    // u = rho^3
    auto op = quadratic_operator();
    op.src = [](double r) { return cplx(6.0 * r * (1.0 - r) + 3.0 * r * r + r * r * r); };
    const auto sys = discretize(op, build_grid(Scheme::Chebyshev, 6, 0.0, 1.0), 0.0);
    CHECK_FALSE(sys.is_sparse());
    const auto sol = solve(sys);
    CHECK(max_error_vs(sol, [](double r) { return cplx(r * r * r); }) < 1e-12);
}

TEST_CASE("no datum is imposed at infinity") {
    const auto map = CompactificationMap::rational(0.5);
    const HeightFunction h(HeightKind::Hyperboloidal, 1.0);
    const auto op = coefficients_general(2, 3, 5.0, map, h);
    CHECK(op.c2(1.0) == cplx(0.0));
    for (const auto scheme : {Scheme::FD2, Scheme::Chebyshev}) {
        const auto sys = discretize(op, build_grid(scheme, 16, op.lo, op.hi), 1.0);
        const Eigen::MatrixXcd A = sys.dense();
        const auto i = static_cast<Eigen::Index>(sys.outer.node);
        CHECK(sys.rhs(i) == cplx(0.0));
        CHECK((A.row(i).array() != cplx(0.0)).count() > 1);
        CHECK(sys.rhs(0) == cplx(1.0));
    }
}

TEST_CASE("outer relation of the transformed operator") {
    const auto map = CompactificationMap::rational(0.5);
    const double k = 7.0;
    SUBCASE("one dimension") {
        const HeightFunction h(HeightKind::Hyperboloidal, 3.0);
        const auto op = coefficients_general(1, 0, k, map, h);
        const cplx lambda = -op.c0(1.0) / op.c1(1.0);
        CHECK(std::abs(lambda - cplx(0.0, k / 3.0)) < 1e-13);
    }
    SUBCASE("two dimensions") {
        const HeightFunction h(HeightKind::Hyperboloidal, 1.0);
        const int m = 4;
        const auto op = coefficients_general(2, m, k, map, h);
        const cplx lambda = -op.c0(1.0) / op.c1(1.0);
        const cplx expected(0.0, k - (m * m - 0.25) / (2.0 * k));
        CHECK(std::abs(lambda - expected) < 1e-13);
    }
}

TEST_CASE("coefficient validation") {
    const auto map = CompactificationMap::rational();
    const HeightFunction h(HeightKind::Hyperboloidal, 1.0);
    CHECK_THROWS_AS(coefficients_general(4, 0, 1.0, map, h), ConfigurationError);
    CHECK_THROWS_AS(coefficients_general(1, 2, 1.0, map, h), ConfigurationError);
    CHECK_THROWS_AS(coefficients_general(2, 0, 0.0, map, h), ConfigurationError);

    const auto blowup = HeightFunction::custom({
        [](double rho) { return rho; },
        [](double) { return 1.0; },
        [](double) { return 0.0; },
        [](double rho) { return 1.0 / (1.0 - rho); },
    });
    CHECK_THROWS_AS(coefficients_general(1, 0, 1.0, map, blowup), RegularityError);

    // A source that does not decay fast enough is not finite at S.
    CHECK_THROWS_AS(coefficients_general(1, 0, 1.0, map, h, [](double r) { return cplx(r); }),
                    RegularityError);
}

TEST_CASE("layer map with single-domain Chebyshev needs a smooth layer") {
    const auto map = CompactificationMap::layer({2.0, 2.2, 2}, 1.0);
    const auto h = make_height(HeightKind::LayerHeight, 1.0, map);
    const auto op = coefficients_general(2, 0, 3.0, map, h);
    CHECK_THROWS_AS(discretize(op, build_grid(Scheme::Chebyshev, 16, op.lo, op.hi), 1.0),
                    ConfigurationError);
    CHECK_THROWS_AS(
        discretize(op, build_grid(Scheme::TwoDomainChebyshev, 16, op.lo, op.hi, 1.5), 1.0),
        ConfigurationError);
    CHECK_NOTHROW(
        discretize(op, build_grid(Scheme::TwoDomainChebyshev, 16, op.lo, op.hi, 2.0), 1.0));
}

TEST_CASE("grid must span the operator") {
    const auto op = quadratic_operator();
    CHECK_THROWS_AS(discretize(op, build_grid(Scheme::FD2, 8, 0.0, 0.9), 0.0), ConfigurationError);
}

TEST_CASE("dispersion roots") {
    const auto c = dispersion_compactified(1.0, 0.0);
    CHECK(std::abs(c.plus - cplx(1.0)) < 1e-15);
    CHECK(std::abs(c.minus - cplx(-1.0)) < 1e-15);
    const auto t = dispersion_transformed(3.0, 0.0);
    CHECK(std::abs(t.plus - cplx(3.0)) < 1e-15);
    CHECK(std::abs(t.minus - cplx(-3.0)) < 1e-15);
    const auto q = dispersion_transformed(2.0, std::numbers::pi / 4.0);
    CHECK(std::abs(q.minus - cplx(-6.0, -2.0)) < 1e-13);
    CHECK_THROWS_AS(dispersion_compactified(1.0, std::numbers::pi / 2.0), DomainError);
    CHECK_THROWS_AS(dispersion_transformed(1.0, -0.1), DomainError);
}

TEST_CASE("variable coefficients: Bessel-type equation") {
    // U'' + (k^2 - (m^2 - 1/4)/x^2) U = 0 has U = sqrt(x) H_m(kx).
    const double k = 5.0;
    const int m = 2;
    const double nu = m * m - 0.25;
    VariableCoefficients vc;
    vc.a = [](double) { return cplx(1.0); };
    vc.b = [](double) { return cplx(0.0); };
    vc.c = [k, nu](double x) { return cplx(k * k - nu / (x * x)); };
    vc.phase_rate = [k](double) { return k; };
    vc.phase_rate_derivative = [](double) { return 0.0; };
    vc.reduced_c = [nu](double x) { return cplx(-nu / (x * x)); };

    const double x_inner = 1.0;
    const auto var = coefficients_variable_1d(vc, x_inner);
    CHECK(var.falloff.pass());
    CHECK(var.falloff.warnings.empty());
    CHECK(var.op.infinity == InfinityEnd::Lower);

    auto exact = [k, m](double rho) {
        if (rho == 0.0) return farfield_limit(m, k, std::numeric_limits<double>::infinity());
        const double x = 1.0 / rho;
        return std::sqrt(x) * hankel1_scaled(m, k * x);
    };
    const auto grid = build_grid(Scheme::Chebyshev, 48, var.op.lo, var.op.hi);
    const auto sol = solve(discretize(var.op, grid, exact(var.op.hi)));
    CHECK(max_error_vs(sol, exact) < 1e-9);
}

TEST_CASE("variable coefficients: slow falloff is reported") {
    VariableCoefficients vc;
    vc.a = [](double) { return cplx(1.0); };
    vc.b = [](double x) { return cplx(1.0 / x); };
    vc.c = [](double) { return cplx(1.0); };
    vc.phase_rate = [](double) { return 1.0; };
    vc.phase_rate_derivative = [](double) { return 0.0; };
    const auto var = coefficients_variable_1d(vc, 1.0);
    CHECK_FALSE(var.falloff.pass());
    CHECK(var.falloff.warnings.size() == 1);

    VariableCoefficients missing;
    CHECK_THROWS_AS(coefficients_variable_1d(missing, 1.0), ConfigurationError);
}
