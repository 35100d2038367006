#include "nic/reference.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "nic/specfun.hpp"

namespace nic {

namespace {

using std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

cplx i_power(int m) {
    switch (((m % 4) + 4) % 4) {
    case 0:
        return 1.0;
    case 1:
        return kI;
    case 2:
        return -1.0;
    default:
        return -kI;
    }
}

double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// sqrt(g) Hbar_m(k g) -> sqrt(2/(pi k)) e^{-i pi (m/2 + 1/4)} as g -> inf.
cplx scaled_mode_at_infinity(int m, double k) {
    return std::sqrt(2.0 / (pi * k)) * std::polar(1.0, -pi * (0.5 * m + 0.25));
}

} // namespace

ReferenceSolution plane_wave_1d(double k, const CompactificationMap& map,
                                const HeightFunction& height, Representation representation) {
    ReferenceSolution ref;
    ref.kind = ReferenceKind::PlaneWave1D;
    ref.representation = representation;
    ref.params.k = k;
    ref.params.K = height.K();
    if (representation == Representation::Physical) {
        ref.evaluator = [k](double x, double) { return std::polar(1.0, k * x); };
    } else {
        ref.evaluator = [k, map, height](double rho, double) {
            return std::polar(1.0, k * height.deficit(map, rho));
        };
    }
    return ref;
}

ReferenceSolution hankel_mode(double k, int m, const CompactificationMap& map,
                              const HeightFunction& height, Representation representation) {
    ReferenceSolution ref;
    ref.kind = ReferenceKind::HankelMode;
    ref.representation = representation;
    ref.params.k = k;
    ref.params.K = height.K();
    ref.params.m = m;
    if (representation == Representation::Physical) {
        ref.evaluator = [k, m](double r, double) {
            return std::polar(1.0, k * r) * hankel1_scaled(m, k * r);
        };
    } else {
        ref.evaluator = [k, m, map, height](double rho, double) {
            const cplx phase = std::polar(1.0, k * height.deficit(map, rho));
            if (rho >= map.outer()) return phase * scaled_mode_at_infinity(m, k);
            const double r = map.radius(rho);
            return phase * std::sqrt(r) * hankel1_scaled(m, k * r);
        };
    }
    return ref;
}

int truncation_order(double k, double R0) {
    const double kr = k * R0;
    return static_cast<int>(std::ceil(kr + 4.0 * std::cbrt(kr) + 8.0));
}

cplx scattering_coefficient(int m, double k, double R0) {
    const int order = std::abs(m);
    const double z = k * R0;
    const double j = bessel_j(order, z);
    // H_m = e^{iz} Hbar_m; negative orders pick up (-1)^m in both J and H.
    const cplx h = std::polar(1.0, z) * hankel1_scaled(order, z);
    if (!std::isfinite(std::abs(h)) || j == 0.0) return 0.0;
    return -i_power(m) * j / h;
}

ScatteringSeries::ScatteringSeries(double k, double R0, int M, CompactificationMap map,
                                   HeightFunction height)
    : k_(k), R0_(R0), M_(M), map_(std::move(map)), height_(std::move(height)) {
    if (!(k > 0.0) || !(R0 > 0.0) || M < 0) {
        throw ConfigurationError("scattering series: need k > 0, R0 > 0, M >= 0");
    }
    coefficients_.reserve(static_cast<std::size_t>(2 * M + 1));
    for (int m = -M; m <= M; ++m) coefficients_.push_back(scattering_coefficient(m, k, R0));
}

std::vector<cplx> ScatteringSeries::physical_modes(double r) const {
    const auto hbar = hankel1_scaled_sequence(M_, k_ * r);
    const cplx phase = std::polar(1.0, k_ * r);
    std::vector<cplx> modes(static_cast<std::size_t>(2 * M_ + 1));
    for (int m = -M_; m <= M_; ++m) {
        const int a = std::abs(m);
        const double sign = m < 0 ? parity(a) : 1.0;
        modes[static_cast<std::size_t>(m + M_)] = coefficient(m) * sign * phase * hbar[a];
    }
    return modes;
}

std::vector<cplx> ScatteringSeries::transformed_modes(double rho) const {
    const cplx phase = std::polar(1.0, k_ * height_.deficit(map_, rho));
    std::vector<cplx> modes(static_cast<std::size_t>(2 * M_ + 1));
    if (rho >= map_.outer()) {
        for (int m = -M_; m <= M_; ++m) {
            modes[static_cast<std::size_t>(m + M_)] =
                coefficient(m) * phase * scaled_mode_at_infinity(m, k_);
        }
        return modes;
    }
    const double r = map_.radius(rho);
    const auto hbar = hankel1_scaled_sequence(M_, k_ * r);
    const double root = std::sqrt(r);
    for (int m = -M_; m <= M_; ++m) {
        const int a = std::abs(m);
        const double sign = m < 0 ? parity(a) : 1.0;
        modes[static_cast<std::size_t>(m + M_)] = coefficient(m) * sign * phase * root * hbar[a];
    }
    return modes;
}

cplx ScatteringSeries::physical(double r, double theta) const {
    const auto modes = physical_modes(r);
    cplx sum = 0.0;
    for (int m = -M_; m <= M_; ++m) {
        sum += modes[static_cast<std::size_t>(m + M_)] * std::polar(1.0, m * theta);
    }
    return sum;
}

cplx ScatteringSeries::transformed(double rho, double theta) const {
    const auto modes = transformed_modes(rho);
    cplx sum = 0.0;
    for (int m = -M_; m <= M_; ++m) {
        sum += modes[static_cast<std::size_t>(m + M_)] * std::polar(1.0, m * theta);
    }
    return sum;
}

ReferenceSolution ScatteringSeries::as_reference(Representation representation) const {
    ReferenceSolution ref;
    ref.kind = ReferenceKind::ScatteringSeries;
    ref.representation = representation;
    ref.params.k = k_;
    ref.params.K = height_.K();
    ref.params.M = M_;
    ref.params.R0 = R0_;
    auto self = std::make_shared<const ScatteringSeries>(*this);
    if (representation == Representation::Physical) {
        ref.evaluator = [self](double r, double theta) { return self->physical(r, theta); };
    } else {
        ref.evaluator = [self](double rho, double theta) { return self->transformed(rho, theta); };
    }
    return ref;
}

ReferenceSolution scattering_series(double k, double R0, int M, const CompactificationMap& map,
                                    const HeightFunction& height, Representation representation) {
    return ScatteringSeries(k, R0, M, map, height).as_reference(representation);
}

LayerTrio layer_trio(double k, double sigma, double R, double S, int n, bool undamped_pal_height) {
    if (!(sigma > 0.0)) throw ConfigurationError("layer trio: sigma must be positive");
    const auto map = CompactificationMap::layer({R, S, n}, 0.0);

    ReferenceParams params;
    params.k = k;
    params.sigma = sigma;
    params.R = R;
    params.S = S;

    LayerTrio trio;
    trio.pml.kind = ReferenceKind::PML;
    trio.pml.representation = Representation::Physical;
    trio.pml.params = params;
    trio.pml.evaluator = [k, sigma, R](double r, double) {
        const double damping = r > R ? std::exp(-k * sigma * (r - R)) : 1.0;
        return std::polar(damping, k * r);
    };

    trio.pal.kind = ReferenceKind::PAL;
    trio.pal.representation = Representation::Transformed;
    trio.pal.params = params;
    trio.pal.evaluator = [k, sigma, R, S](double rho, double) {
        if (rho <= R) return std::polar(1.0, k * rho);
        if (rho >= S) return cplx(0.0);
        const double T = (S - R) * (rho - R) / (S - rho);
        return std::polar(std::exp(-k * sigma * T), k * R);
    };

    HeightFunction height = make_height(HeightKind::LayerHeight, 1.0, map);
    if (undamped_pal_height) {
        height = HeightFunction::custom({
            [R](double) { return R; },
            [](double) { return 1.0; },
            [](double) { return 0.0; },
            [](double) { return 0.0; },
        });
    }
    trio.nil.kind = ReferenceKind::NILPlane;
    trio.nil.representation = Representation::Transformed;
    trio.nil.params = params;
    trio.nil.evaluator = [k, map, height](double rho, double) {
        if (rho >= map.outer()) return std::polar(1.0, k * height.deficit(map, rho));
        // e^{-ikh} applied to U = e^{ikg}, evaluated without simplification
        FieldSample field;
        field.nodes = {rho};
        field.values = {std::polar(1.0, k * map.radius(rho))};
        field.k = k;
        return to_transformed(field, map, height).values[0];
    };
    return trio;
}

} // namespace nic
