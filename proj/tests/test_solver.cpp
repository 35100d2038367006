#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nic/experiments.hpp"
#include "nic/reference.hpp"
#include "nic/solver.hpp"
#include "nic/specfun.hpp"

using namespace nic;
using doctest::Approx;

namespace {

DiscreteSystem dense_system(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
    DiscreteSystem sys;
    sys.grid = build_grid(Scheme::Chebyshev, static_cast<int>(A.rows()) - 1, 0.0, 1.0);
    sys.matrix = A;
    sys.rhs = b;
    sys.dirichlet_value = b(0);
    sys.outer.node = static_cast<std::size_t>(A.rows() - 1);
    sys.outer.derivative_row = Eigen::RowVectorXd::Zero(A.rows());
    return sys;
}

} // namespace

TEST_CASE("identity system") {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(3, 3);
    Eigen::VectorXcd b(3);
    b << cplx(1.0, 2.0), 3.0, cplx(0.0, -1.0);
    const auto sol = solve(dense_system(A, b));
    for (int j = 0; j < 3; ++j) CHECK(sol.values[j] == b(j));
    CHECK(sol.relative_residual == 0.0);
    CHECK(sol.rcond == Approx(1.0));
}

TEST_CASE("singular system") {
    Eigen::MatrixXcd A(3, 3);
    A << 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(solve(dense_system(A, Eigen::VectorXcd::Ones(3))), SolveError);
}

TEST_CASE("Dirichlet datum and linearity") {
    const auto map = CompactificationMap::rational(0.5);
    const HeightFunction h(HeightKind::Hyperboloidal, 1.0);
    const auto op = coefficients_general(2, 1, 6.0, map, h);
    for (const auto scheme : {Scheme::FD2, Scheme::Chebyshev}) {
        const auto grid = build_grid(scheme, 24, op.lo, op.hi);
        const cplx datum(0.3, -1.7);
        const auto a = solve(discretize(op, grid, 1.0));
        const auto b = solve(discretize(op, grid, datum));
        CHECK(b.values.front() == datum);
        for (std::size_t j = 0; j < a.values.size(); ++j) {
            CHECK(std::abs(b.values[j] - datum * a.values[j]) <= 1e-12 * std::abs(b.values[j]) + 1e-14);
        }
        CHECK(a.relative_residual < 1e-12);
        CHECK(a.infinity_node == a.values.size() - 1);
    }
}

TEST_CASE("interpolation") {
    const auto cheb = build_grid(Scheme::Chebyshev, 12, 0.0, 2.0);
    const auto fd = build_grid(Scheme::FD2, 20, 0.0, 2.0);
    auto f = [](double x) { return cplx(x * x * x - x, 2.0 * x * x); };
    auto g = [](double x) { return cplx(x * x, -x); };
    std::vector<cplx> vc, vf;
    for (double x : cheb.nodes) vc.push_back(f(x));
    for (double x : fd.nodes) vf.push_back(g(x));
    for (double x : {0.0, 0.123, 1.0, 1.77, 2.0}) {
        CHECK(std::abs(interpolate(cheb, vc, x) - f(x)) < 1e-13);
        CHECK(std::abs(interpolate(fd, vf, x) - g(x)) < 1e-13);
    }
}

TEST_CASE("error norms") {
    const std::vector<cplx> exact{1.0, 2.0, cplx(0.0, 2.0)};
    const std::vector<cplx> numeric{1.0, 2.2, cplx(0.0, 2.0)};
    const auto e = error_norms(std::span<const cplx>(numeric), std::span<const cplx>(exact));
    CHECK(e.max_rel == Approx(0.1));
    CHECK(e.l2_rel == Approx(0.2 / 3.0));
    CHECK_FALSE(e.absolute);

    const std::vector<cplx> zero(2, 0.0), small{1e-3, 0.0};
    const auto z = error_norms(std::span<const cplx>(small), std::span<const cplx>(zero));
    CHECK(z.absolute);
    CHECK(z.max_rel == Approx(1e-3));
    CHECK_THROWS_AS(error_norms(std::span<const cplx>(small), std::span<const cplx>(exact)),
                    ConfigurationError);
}

TEST_CASE("convergence study reports observed orders") {
    const auto rec = convergence_study(
        [](int N) { return ErrorNorms{1.0 / (N * N), 0.5 / (N * N), false}; }, {10, 20, 40});
    REQUIRE(rec.size() == 3);
    CHECK(std::isnan(rec[0].observed_order));
    CHECK(rec[1].observed_order == Approx(2.0));
    CHECK(rec[2].observed_order == Approx(2.0));
    CHECK(rec[2].error_l2 == Approx(0.5 / 1600.0));
    CHECK_THROWS_AS(convergence_study([](int) { return ErrorNorms{}; }, {20, 10}),
                    ConfigurationError);
}

TEST_CASE("plane wave and Hankel mode runs") {
    const auto pw = run_plane_wave({7.0, 7.0, 1.0, Scheme::Chebyshev}, 32);
    CHECK(pw.norms.max_rel < 1e-12);
    const auto hm = run_hankel_mode({10.0, 1.0, 3, 1.0, Scheme::Chebyshev}, 48);
    CHECK(hm.norms.max_rel < 1e-10);
    CHECK(std::abs(hm.solution.at_infinity() - farfield_limit(3, 10.0, 1.0)) < 1e-10);
}

TEST_CASE("far-field phase with K = k") {
    const double k = 9.0;
    const auto run = run_hankel_mode({k, k, 0, 1.0, Scheme::Chebyshev}, 48);
    CHECK(std::arg(run.solution.at_infinity()) == Approx(1.0 - std::numbers::pi / 4.0).epsilon(1e-9));
}

TEST_CASE("small scattering run") {
    ScatterSetup setup;
    setup.k = 5.0;
    setup.N = 40;
    const auto problem = make_scattering_problem(setup);
    const auto sol = solve_scattering(problem);
    CHECK(sol.M == truncation_order(5.0, 1.0));
    REQUIRE(sol.modes.size() == static_cast<std::size_t>(2 * sol.M + 1));
    CHECK(sol.truncation_ok);

    // Symmetric about theta = 0: u_{-m} = u_m.
    for (int m = 1; m <= sol.M; ++m) {
        const auto& plus = sol.modes[static_cast<std::size_t>(sol.M + m)];
        const auto& minus = sol.modes[static_cast<std::size_t>(sol.M - m)];
        CHECK(plus.m == m);
        for (std::size_t j = 0; j < plus.values.size(); ++j) {
            CHECK(std::abs(plus.values[j] - minus.values[j]) <= 1e-13 * std::abs(plus.values[j]) + 1e-16);
        }
    }

    const ScatteringSeries series(5.0, 1.0, oracle_modes(sol.M), problem.map, problem.height);
    const auto rho = uniform_samples(problem.map.rho_in(), problem.map.outer(), 20);
    CHECK(scattering_error_transformed(sol, series, rho, 32).max_rel < 1e-10);

    const auto field = reconstruct_field(sol.modes, 8);
    for (std::size_t l = 1; l < 4; ++l) {
        const auto j = static_cast<Eigen::Index>(field.rho.size() / 2);
        CHECK(std::abs(field.transformed(j, static_cast<Eigen::Index>(l)) -
                       field.transformed(j, static_cast<Eigen::Index>(8 - l))) < 1e-12);
    }

    const auto far = farfield_extract(sol.modes);
    CHECK(far.size() == sol.modes.size());
}

TEST_CASE("scattering validation") {
    ScatteringProblem p;
    p.k = 5.0;
    p.modes = 2;
    CHECK_THROWS_AS(solve_scattering(p), ConfigurationError);
    CHECK_THROWS_AS(scattering_mode_data(0, 5.0, 2.0, CompactificationMap::rational(0.5),
                                         HeightFunction(HeightKind::Hyperboloidal, 1.0)),
                    ConfigurationError);
}
