#include "nic/assembly.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace nic {

namespace {

constexpr cplx kI{0.0, 1.0};

double angular_eigenvalue(int d, int m) {
    switch (d) {
    case 1:
        return 0.0;
    case 2:
        return static_cast<double>(m) * m;
    default:
        return static_cast<double>(m) * (m + 1);
    }
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Value at rho = 0 of a function only evaluable for rho > 0, by quadratic
// extrapolation from rho = h, 2h, 3h.
cplx limit_at_zero(const std::function<cplx(double)>& f, double h) {
    return 3.0 * f(h) - 3.0 * f(2.0 * h) + f(3.0 * h);
}

double loglog_slope(const std::function<double(double)>& magnitude, bool& vanishes) {
    constexpr int kSamples = 9;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    vanishes = true;
    for (int j = 0; j < kSamples; ++j) {
        const double lx = std::log(10.0) * (2.0 + 4.0 * j / (kSamples - 1));
        const double value = magnitude(std::exp(lx));
        if (value == 0.0) continue;
        vanishes = false;
        const double ly = std::log(value);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    if (vanishes || used < 2) return -std::numeric_limits<double>::infinity();
    return (used * sxy - sx * sy) / (used * sxx - sx * sx);
}

} // namespace

RadialOperator coefficients_general(int d, int m, double k, const CompactificationMap& map,
                                    const HeightFunction& height, const SourceFn& source) {
    if (d < 1 || d > 3) throw ConfigurationError("dimension must be 1, 2 or 3");
    if (d == 1 && m != 0) throw ConfigurationError("one-dimensional operator has no angular mode");
    if (!(k > 0.0)) throw ConfigurationError("wavenumber must be positive");

    const double angular = (1.0 - d) * (3.0 - d) / 4.0 + angular_eigenvalue(d, m);

    RadialOperator op;
    op.lo = map.rho_in();
    op.hi = map.outer();
    op.infinity = InfinityEnd::Upper;
    op.dimension = d;
    op.mode = m;
    op.k = k;
    op.map = map;
    op.height = height;

    op.c2 = [map](double rho) { return cplx(map.inverse_jacobian(rho)); };
    op.c1 = [map, height, k](double rho) {
        return map.inverse_jacobian_derivative(rho) + 2.0 * kI * k * height.boost(map, rho);
    };
    op.c0 = [map, height, k, angular](double rho) {
        cplx value = k * k * height.defect_over_G(map, rho) +
                     kI * k * height.boost_derivative(map, rho);
        if (angular != 0.0) value -= angular * map.inverse_angular_scale(rho);
        return value;
    };

    if (source) {
        const double power = 0.5 * (d - 1);
        auto interior = [map, height, k, power, source](double rho) {
            const double r = map.radius(rho);
            return source(r) / map.inverse_jacobian(rho) * std::pow(r, power) *
                   std::polar(1.0, -k * height.height(map, rho));
        };
        const double S = map.outer();
        const double width = S - map.rho_in();
        const cplx far = interior(S - 1e-6 * width);
        const cplx mid = interior(S - 1e-4 * width);
        const cplx near = interior(S - 1e-2 * width);
        if (!finite(far) || !finite(mid) || !finite(near) ||
            std::abs(far) > 10.0 * std::max(std::abs(mid), std::abs(near)) + 1e-300) {
            throw RegularityError("source term: transformed source is not finite at rho = S");
        }
        op.src = [interior, S, far](double rho) { return rho >= S ? far : interior(rho); };
    } else {
        op.src = [](double) { return cplx(0.0); };
    }

    // Probe every term on the closed domain.
    constexpr int kProbes = 33;
    for (int j = 0; j < kProbes; ++j) {
        const double rho = op.lo + (op.hi - op.lo) * j / (kProbes - 1);
        const double rho_p = j + 1 == kProbes ? op.hi : rho;
        auto fail = [&](const char* term) {
            std::ostringstream os;
            os << "operator coefficient " << term << " is not finite at rho=" << rho_p;
            throw RegularityError(os.str());
        };
        if (!finite(op.c2(rho_p))) fail("c2 (G)");
        if (!finite(op.c1(rho_p))) fail("c1 (dG/drho + 2ikH)");
        if (!finite(k * k * height.defect_over_G(map, rho_p))) fail("c0 term k^2 (1-H^2)/G");
        if (!std::isfinite(height.boost_derivative(map, rho_p))) fail("c0 term ik dH/drho");
        if (angular != 0.0 && !std::isfinite(map.inverse_angular_scale(rho_p))) {
            fail("c0 angular term 1/(G g^2)");
        }
        if (!finite(op.src(rho_p))) fail("src");
    }
    return op;
}

bool FalloffReport::pass() const {
    for (const auto& e : entries) {
        if (!e.pass) return false;
    }
    return true;
}

VariableOperator coefficients_variable_1d(const VariableCoefficients& coeffs, double x_inner) {
    if (!coeffs.a || !coeffs.b || !coeffs.c || !coeffs.phase_rate ||
        !coeffs.phase_rate_derivative) {
        throw ConfigurationError("variable coefficients: a, b, c, H and dH/dx are required");
    }
    if (!(x_inner > 0.0)) throw ConfigurationError("variable coefficients: x_inner must be positive");

    auto reduced = [coeffs](double x) {
        if (coeffs.reduced_c) return coeffs.reduced_c(x);
        const double H = coeffs.phase_rate(x);
        return coeffs.c(x) - coeffs.a(x) * H * H;
    };

    const double hi = 1.0 / x_inner;
    const double step = 1e-3 * hi;

    auto c2_open = [coeffs](double rho) { return coeffs.a(1.0 / rho) * rho * rho; };
    auto c1_open = [coeffs](double rho) {
        const double x = 1.0 / rho;
        const cplx a = coeffs.a(x);
        return 2.0 * a * rho - coeffs.b(x) - 2.0 * kI * a * coeffs.phase_rate(x);
    };
    auto c0_open = [coeffs, reduced](double rho) {
        const double x = 1.0 / rho;
        const double H = coeffs.phase_rate(x);
        // dH/drho = -x^2 dH/dx
        return x * x * (reduced(x) + kI * H * coeffs.b(x) +
                        kI * coeffs.a(x) * coeffs.phase_rate_derivative(x));
    };

    VariableOperator result;
    RadialOperator& op = result.op;
    op.lo = 0.0;
    op.hi = hi;
    op.infinity = InfinityEnd::Lower;
    op.dimension = 1;
    op.k = 1.0;
    const cplx c1_inf = limit_at_zero(c1_open, step);
    const cplx c0_inf = limit_at_zero(c0_open, step);
    op.c2 = [c2_open](double rho) { return rho == 0.0 ? cplx(0.0) : c2_open(rho); };
    op.c1 = [c1_open, c1_inf](double rho) { return rho == 0.0 ? c1_inf : c1_open(rho); };
    op.c0 = [c0_open, c0_inf](double rho) { return rho == 0.0 ? c0_inf : c0_open(rho); };
    op.src = [](double) { return cplx(0.0); };

    auto add_entry = [&result](const std::string& name, const std::function<double(double)>& mag) {
        FalloffEntry e;
        e.name = name;
        bool vanishes = false;
        e.exponent = loglog_slope(mag, vanishes);
        e.pass = vanishes || e.exponent <= -2.0 + 0.05;
        if (!e.pass) {
            std::ostringstream os;
            os << name << " decays like x^" << e.exponent << ", slower than x^-2";
            result.falloff.warnings.push_back(os.str());
        }
        result.falloff.entries.push_back(e);
    };
    add_entry("b", [coeffs](double x) { return std::abs(coeffs.b(x)); });
    add_entry("c - a H^2", [reduced](double x) { return std::abs(reduced(x)); });

    if (!finite(c1_inf) || !finite(c0_inf)) {
        throw RegularityError("variable coefficients: operator is not finite at infinity");
    }
    return result;
}

DispersionPair dispersion_compactified(double k, double rho) {
    if (!(rho >= 0.0) || !(rho < std::numbers::pi / 2)) {
        throw DomainError("dispersion: rho must lie in [0, pi/2)");
    }
    const double c = std::cos(rho);
    const double t = std::tan(rho);
    const cplx root = std::sqrt(cplx(k * k / (c * c * c * c) - t * t));
    return {root - kI * t, -root - kI * t};
}

DispersionPair dispersion_transformed(double k, double rho) {
    if (!(rho >= 0.0) || !(rho < std::numbers::pi / 2)) {
        throw DomainError("dispersion: rho must lie in [0, pi/2)");
    }
    const double s = std::sin(rho);
    const double c = std::cos(rho);
    return {cplx(k), -(k * (1.0 + s * s) + kI * std::sin(2.0 * rho)) / (c * c)};
}

} // namespace nic
