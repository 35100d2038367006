#include "nic/assembly.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SparseCore>

namespace nic {

namespace {

using std::numbers::pi;

// Lobatto nodes of [lo, hi] in ascending order, endpoints exact.
std::vector<double> lobatto_nodes(int N, double lo, double hi) {
    std::vector<double> nodes(N + 1);
    for (int j = 0; j <= N; ++j) {
        const double s = std::sin(pi * j / (2.0 * N));
        nodes[j] = lo + (hi - lo) * s * s;
    }
    nodes.front() = lo;
    nodes.back() = hi;
    return nodes;
}

void check_grid_matches(const RadialOperator& op, const Grid& grid) {
    const double scale = std::max(1.0, std::abs(op.hi) + std::abs(op.lo));
    if (grid.nodes.size() < 3 || std::abs(grid.nodes.front() - op.lo) > 1e-12 * scale ||
        std::abs(grid.nodes.back() - op.hi) > 1e-12 * scale) {
        throw ConfigurationError("discretize: grid does not span the operator domain");
    }
}

} // namespace

Grid build_grid(Scheme scheme, int N, double lo, double hi, std::optional<double> interface) {
    if (N < 2) throw ConfigurationError("grid: N must be at least 2");
    if (!(lo < hi)) throw ConfigurationError("grid: lower end must be below upper end");
    Grid grid;
    grid.scheme = scheme;
    switch (scheme) {
    case Scheme::FD2:
        grid.nodes.resize(N + 1);
        for (int j = 0; j <= N; ++j) grid.nodes[j] = lo + (hi - lo) * j / N;
        grid.nodes.back() = hi;
        break;
    case Scheme::Chebyshev:
        grid.nodes = lobatto_nodes(N, lo, hi);
        break;
    case Scheme::TwoDomainChebyshev: {
        if (!interface || !(*interface > lo) || !(*interface < hi)) {
            throw ConfigurationError("grid: interface must lie strictly inside (lo, hi)");
        }
        grid.nodes = lobatto_nodes(N, lo, *interface);
        const auto outer = lobatto_nodes(N, *interface, hi);
        grid.nodes.insert(grid.nodes.end(), outer.begin() + 1, outer.end());
        grid.interface_index = static_cast<std::size_t>(N);
        break;
    }
    }
    return grid;
}

Eigen::MatrixXd chebyshev_differentiation(int N, double lo, double hi) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
    const double scale = 2.0 / (hi - lo);
    for (int i = 0; i <= N; ++i) {
        const double ci = (i == 0 || i == N) ? 2.0 : 1.0;
        double row_sum = 0.0;
        for (int j = 0; j <= N; ++j) {
            if (i == j) continue;
            const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            // t_i - t_j for t = -cos(pi j / N), in product form
            const double diff = 2.0 * std::sin(pi * (i + j) / (2.0 * N)) *
                                std::sin(pi * (i - j) / (2.0 * N));
            D(i, j) = scale * (ci / cj) * sign / diff;
            row_sum += D(i, j);
        }
        D(i, i) = -row_sum;
    }
    return D;
}

namespace {

void check_rows(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        if (!A.row(i).allFinite() || !std::isfinite(std::abs(b(i)))) {
            std::ostringstream os;
            os << "discretize: non-finite entry in row " << i;
            throw AssemblyError(os.str());
        }
        if (A.row(i).cwiseAbs().maxCoeff() == 0.0) {
            std::ostringstream os;
            os << "discretize: row " << i << " is identically zero";
            throw AssemblyError(os.str());
        }
    }
}

// Three-point stencils in the interior, one-sided first derivative at
// infinity where the u'' term is dropped because c2 vanishes there.
DiscreteSystem discretize_fd2(const RadialOperator& op, const Grid& grid, cplx dirichlet_value) {
    const auto n = static_cast<Eigen::Index>(grid.nodes.size());
    const Eigen::Index last = n - 1;
    const bool upper = op.infinity == InfinityEnd::Upper;
    const Eigen::Index inf_node = upper ? last : 0;
    const Eigen::Index dir_node = upper ? 0 : last;
    const double h = (grid.nodes.back() - grid.nodes.front()) / static_cast<double>(last);

    DiscreteSystem sys;
    sys.grid = grid;
    sys.mode = op.mode;
    sys.rhs = Eigen::VectorXcd::Zero(n);
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(static_cast<std::size_t>(3 * n));
    auto add = [&](Eigen::Index i, Eigen::Index j, cplx v) {
        if (!std::isfinite(std::abs(v))) {
            std::ostringstream os;
            os << "discretize: non-finite entry in row " << i;
            throw AssemblyError(os.str());
        }
        entries.emplace_back(i, j, v);
    };

    Eigen::RowVectorXd outer_row = Eigen::RowVectorXd::Zero(n);
    const Eigen::Index s = upper ? 1 : -1; // step away from the infinity node
    outer_row(inf_node) = 1.5 / h * static_cast<double>(s);
    outer_row(inf_node - s) = -2.0 / h * static_cast<double>(s);
    outer_row(inf_node - 2 * s) = 0.5 / h * static_cast<double>(s);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double rho = grid.nodes[static_cast<std::size_t>(i)];
        if (i == dir_node) {
            add(i, i, 1.0);
            sys.rhs(i) = dirichlet_value;
            continue;
        }
        const cplx c1 = op.c1(rho);
        const cplx c0 = op.c0(rho);
        sys.rhs(i) = op.src(rho);
        if (!std::isfinite(std::abs(sys.rhs(i)))) {
            std::ostringstream os;
            os << "discretize: non-finite entry in row " << i;
            throw AssemblyError(os.str());
        }
        if (i == inf_node) {
            for (const Eigen::Index j : {inf_node, inf_node - s, inf_node - 2 * s}) {
                add(i, j, c1 * outer_row(j) + (j == i ? c0 : cplx(0.0)));
            }
            if (c1 == 0.0 && c0 == 0.0) throw AssemblyError("discretize: outer row is identically zero");
            continue;
        }
        const cplx c2 = op.c2(rho);
        add(i, i - 1, c2 / (h * h) - c1 * (0.5 / h));
        add(i, i, -2.0 * c2 / (h * h) + c0);
        add(i, i + 1, c2 / (h * h) + c1 * (0.5 / h));
    }

    sys.sparse.resize(n, n);
    sys.sparse.setFromTriplets(entries.begin(), entries.end());
    sys.sparse.makeCompressed();
    sys.dirichlet_row = static_cast<std::size_t>(dir_node);
    sys.dirichlet_value = dirichlet_value;
    const double rho_inf = grid.nodes[static_cast<std::size_t>(inf_node)];
    sys.outer.node = static_cast<std::size_t>(inf_node);
    sys.outer.derivative_row = outer_row;
    sys.outer.lambda = -op.c0(rho_inf) / op.c1(rho_inf);
    return sys;
}

} // namespace

DiscreteSystem discretize(const RadialOperator& op, const Grid& grid, cplx dirichlet_value) {
    check_grid_matches(op, grid);
    if (grid.scheme == Scheme::Chebyshev && op.map && op.map->kind() == MapKind::Layer &&
        op.map->layer_config()->n < 4) {
        throw ConfigurationError(
            "discretize: single-domain Chebyshev needs layer exponent n >= 4; use two domains");
    }
    if (grid.scheme == Scheme::TwoDomainChebyshev && op.map && op.map->kind() == MapKind::Layer) {
        const double R = op.map->layer_config()->R;
        if (std::abs(grid.nodes[*grid.interface_index] - R) > 1e-12 * std::max(1.0, R)) {
            throw ConfigurationError("discretize: two-domain interface must sit at the layer radius");
        }
    }

    if (grid.scheme == Scheme::FD2) return discretize_fd2(op, grid, dirichlet_value);

    const auto n = static_cast<Eigen::Index>(grid.nodes.size());
    const Eigen::Index last = n - 1;
    const Eigen::Index inf_node = op.infinity == InfinityEnd::Upper ? last : 0;
    const Eigen::Index dir_node = op.infinity == InfinityEnd::Upper ? 0 : last;

    // First and second derivative operators, as dense rows per node.
    Eigen::MatrixXd D1 = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd D2 = Eigen::MatrixXd::Zero(n, n);
    std::optional<Eigen::Index> iface;
    switch (grid.scheme) {
    case Scheme::FD2:
        break;
    case Scheme::Chebyshev: {
        D1 = chebyshev_differentiation(static_cast<int>(last), grid.nodes.front(), grid.nodes.back());
        D2 = D1 * D1;
        break;
    }
    case Scheme::TwoDomainChebyshev: {
        const auto I = static_cast<Eigen::Index>(*grid.interface_index);
        iface = I;
        const Eigen::Index NR = last - I;
        const Eigen::MatrixXd DL =
            chebyshev_differentiation(static_cast<int>(I), grid.nodes.front(), grid.nodes[I]);
        const Eigen::MatrixXd DR =
            chebyshev_differentiation(static_cast<int>(NR), grid.nodes[I], grid.nodes.back());
        D1.block(0, 0, I + 1, I + 1) = DL;
        D2.block(0, 0, I + 1, I + 1) = DL * DL;
        // Rows right of the interface (and the interface itself for the
        // outward derivative) use the right block.
        D1.block(I + 1, I, NR, NR + 1) = DR.bottomRows(NR);
        D2.block(I + 1, I, NR, NR + 1) = (DR * DR).bottomRows(NR);
        // Interface row: jump of u' across R.
        D1.row(I).setZero();
        D1.block(I, 0, 1, I + 1) = DL.row(I);
        D1.block(I, I, 1, NR + 1) -= DR.row(0);
        break;
    }
    }

    DiscreteSystem sys;
    sys.grid = grid;
    sys.mode = op.mode;
    sys.matrix = Eigen::MatrixXcd::Zero(n, n);
    sys.rhs = Eigen::VectorXcd::Zero(n);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double rho = grid.nodes[static_cast<std::size_t>(i)];
        if (i == dir_node) {
            sys.matrix(i, i) = 1.0;
            sys.rhs(i) = dirichlet_value;
            continue;
        }
        if (iface && i == *iface) {
            sys.matrix.row(i) = D1.row(i).cast<cplx>();
            continue;
        }
        const cplx c1 = op.c1(rho);
        const cplx c0 = op.c0(rho);
        sys.matrix.row(i) = c1 * D1.row(i).cast<cplx>() + op.c2(rho) * D2.row(i).cast<cplx>();
        sys.matrix(i, i) += c0;
        sys.rhs(i) = op.src(rho);
    }

    check_rows(sys.matrix, sys.rhs);

    sys.dirichlet_row = static_cast<std::size_t>(dir_node);
    sys.dirichlet_value = dirichlet_value;
    const double rho_inf = grid.nodes[static_cast<std::size_t>(inf_node)];
    sys.outer.node = static_cast<std::size_t>(inf_node);
    sys.outer.derivative_row = D1.row(inf_node);
    sys.outer.lambda = -op.c0(rho_inf) / op.c1(rho_inf);
    return sys;
}

} // namespace nic
