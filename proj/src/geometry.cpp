#include "nic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace nic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Quantities of the layer map for rho > R, written in s = (rho - R)/(S - R).
struct LayerTerms {
    double t;      // rho - R
    double omega;  // 1 - s^n
    double domega; // dOmega/drho
    double p;      // 1 + (n - 1) s^n, so that g' = p / omega^2
    double dp;     // dp/drho
};

LayerTerms layer_terms(const LayerConfig& c, double rho) {
    const double width = c.S - c.R;
    const double t = rho - c.R;
    const double s = t / width;
    const double sn1 = std::pow(s, c.n - 1);
    const double sn = sn1 * s;
    return {t, 1.0 - sn, -c.n * sn1 / width, 1.0 + (c.n - 1) * sn,
            c.n * (c.n - 1) * sn1 / width};
}

} // namespace

CompactificationMap::CompactificationMap(MapKind kind, double rho_in, double outer,
                                         std::optional<LayerConfig> layer)
    : kind_(kind), rho_in_(rho_in), outer_(outer), layer_(std::move(layer)) {
    if (!(rho_in_ >= 0.0) || !(rho_in_ < outer_)) {
        throw ConfigurationError("compactification map: rho_in must lie in [0, S)");
    }
}

CompactificationMap CompactificationMap::rational(double rho_in) {
    return CompactificationMap(MapKind::Rational, rho_in, 1.0, std::nullopt);
}

CompactificationMap CompactificationMap::tangent(double rho_in) {
    return CompactificationMap(MapKind::Tangent, rho_in, std::numbers::pi / 2, std::nullopt);
}

CompactificationMap CompactificationMap::layer(const LayerConfig& config, double rho_in) {
    if (!(config.R < config.S)) {
        throw ConfigurationError("layer map: interface R must be smaller than S");
    }
    if (config.n < 1) {
        throw ConfigurationError("layer map: exponent n must be >= 1");
    }
    if (!(config.R > 0.0)) {
        throw ConfigurationError("layer map: interface R must be positive");
    }
    if (!(rho_in < config.R)) {
        throw ConfigurationError("layer map: rho_in must lie inside the interface radius");
    }
    return CompactificationMap(MapKind::Layer, rho_in, config.S, config);
}

CompactificationMap make_map(MapKind kind, const MapParams& params) {
    switch (kind) {
    case MapKind::Rational:
        return CompactificationMap::rational(params.rho_in);
    case MapKind::Tangent:
        return CompactificationMap::tangent(params.rho_in);
    case MapKind::Layer:
        if (!params.layer) {
            throw ConfigurationError("layer map requires a layer configuration");
        }
        return CompactificationMap::layer(*params.layer, params.rho_in);
    }
    throw ConfigurationError("unknown map kind");
}

double CompactificationMap::radius(double rho) const {
    if (rho >= outer_) return kInf;
    switch (kind_) {
    case MapKind::Rational:
        return rho / (1.0 - rho);
    case MapKind::Tangent:
        return std::tan(rho);
    case MapKind::Layer: {
        if (rho <= layer_->R) return rho;
        const auto lt = layer_terms(*layer_, rho);
        return layer_->R + lt.t / lt.omega;
    }
    }
    return kInf;
}

double CompactificationMap::inverse_jacobian(double rho) const {
    if (rho >= outer_) return 0.0;
    switch (kind_) {
    case MapKind::Rational:
        return (1.0 - rho) * (1.0 - rho);
    case MapKind::Tangent: {
        const double c = std::cos(rho);
        return c * c;
    }
    case MapKind::Layer: {
        if (rho <= layer_->R) return 1.0;
        const auto lt = layer_terms(*layer_, rho);
        return lt.omega * lt.omega / lt.p;
    }
    }
    return 0.0;
}

double CompactificationMap::inverse_jacobian_derivative(double rho) const {
    switch (kind_) {
    case MapKind::Rational:
        return -2.0 * (1.0 - std::min(rho, outer_));
    case MapKind::Tangent:
        return rho >= outer_ ? 0.0 : -std::sin(2.0 * rho);
    case MapKind::Layer: {
        if (rho <= layer_->R) return 0.0;
        const auto lt = layer_terms(*layer_, std::min(rho, outer_));
        const double omega = rho >= outer_ ? 0.0 : lt.omega;
        return (2.0 * omega * lt.domega * lt.p - omega * omega * lt.dp) / (lt.p * lt.p);
    }
    }
    return 0.0;
}

double CompactificationMap::conformal_factor(double rho) const {
    if (rho >= outer_) return 0.0;
    switch (kind_) {
    case MapKind::Rational:
        return 1.0 - rho;
    case MapKind::Tangent:
        return std::cos(rho);
    case MapKind::Layer:
        if (rho <= layer_->R) return 1.0;
        return layer_terms(*layer_, rho).omega;
    }
    return 0.0;
}

double CompactificationMap::inverse_angular_scale(double rho) const {
    switch (kind_) {
    case MapKind::Rational:
        // G g^2 = rho^2 for g = rho / (1 - rho)
        return 1.0 / (rho * rho);
    case MapKind::Tangent: {
        // G g^2 = cos^2 tan^2 = sin^2
        const double s = rho >= outer_ ? 1.0 : std::sin(rho);
        return 1.0 / (s * s);
    }
    case MapKind::Layer: {
        if (rho <= layer_->R) return 1.0 / (rho * rho);
        const auto lt = layer_terms(*layer_, std::min(rho, outer_));
        const double omega = rho >= outer_ ? 0.0 : lt.omega;
        // G g^2 = (R omega + t)^2 / p
        const double scaled_radius = layer_->R * omega + lt.t;
        return lt.p / (scaled_radius * scaled_radius);
    }
    }
    return 0.0;
}

double CompactificationMap::inverse(double r) const {
    if (std::isinf(r)) return outer_;
    switch (kind_) {
    case MapKind::Rational:
        return r / (1.0 + r);
    case MapKind::Tangent:
        return std::atan(r);
    case MapKind::Layer: {
        if (r <= layer_->R) return r;
        // g is strictly increasing on (R, S); bisect to machine precision.
        double lo = layer_->R;
        double hi = outer_;
        for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (radius(mid) < r ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    }
    return outer_;
}

std::string CompactificationMap::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case MapKind::Rational:
        os << "rational";
        break;
    case MapKind::Tangent:
        os << "tangent";
        break;
    case MapKind::Layer:
        os << "layer(R=" << layer_->R << ",S=" << layer_->S << ",n=" << layer_->n << ")";
        break;
    }
    os << " rho_in=" << rho_in_;
    return os.str();
}

HeightFunction::HeightFunction(HeightKind kind, double K) : kind_(kind), K_(K) {
    if (kind != HeightKind::Custom && !(K > 0.0)) {
        throw ConfigurationError("height function: K must be positive");
    }
}

HeightFunction HeightFunction::custom(CustomHeight custom) {
    if (!custom.deficit || !custom.boost || !custom.boost_derivative || !custom.defect_over_G) {
        throw ConfigurationError("custom height: all four functions are required");
    }
    HeightFunction h(HeightKind::Custom, 1.0);
    h.custom_ = std::move(custom);
    return h;
}

HeightFunction make_height(HeightKind kind, double K, const CompactificationMap& map) {
    if (kind == HeightKind::Custom) {
        throw ConfigurationError("custom heights are built with HeightFunction::custom");
    }
    if (kind == HeightKind::LayerHeight && map.kind() != MapKind::Layer) {
        throw ConfigurationError("layer height requires a layer map");
    }
    return HeightFunction(kind, K);
}

double HeightFunction::height(const CompactificationMap& map, double rho) const {
    return map.radius(rho) - deficit(map, rho);
}

double HeightFunction::deficit(const CompactificationMap& map, double rho) const {
    switch (kind_) {
    case HeightKind::Hyperboloidal:
    case HeightKind::LayerHeight:
        return rho / K_;
    case HeightKind::Characteristic:
        return 0.0;
    case HeightKind::Custom:
        return custom_->deficit(rho);
    }
    (void)map;
    return 0.0;
}

double HeightFunction::boost(const CompactificationMap& map, double rho) const {
    switch (kind_) {
    case HeightKind::Hyperboloidal:
    case HeightKind::LayerHeight:
        return 1.0 - map.inverse_jacobian(rho) / K_;
    case HeightKind::Characteristic:
        return 1.0;
    case HeightKind::Custom:
        return custom_->boost(rho);
    }
    return 1.0;
}

double HeightFunction::boost_derivative(const CompactificationMap& map, double rho) const {
    switch (kind_) {
    case HeightKind::Hyperboloidal:
    case HeightKind::LayerHeight:
        return -map.inverse_jacobian_derivative(rho) / K_;
    case HeightKind::Characteristic:
        return 0.0;
    case HeightKind::Custom:
        return custom_->boost_derivative(rho);
    }
    return 0.0;
}

double HeightFunction::defect_over_G(const CompactificationMap& map, double rho) const {
    switch (kind_) {
    case HeightKind::Hyperboloidal:
    case HeightKind::LayerHeight: {
        const double G = map.inverse_jacobian(rho);
        return 2.0 / K_ - G / (K_ * K_);
    }
    case HeightKind::Characteristic:
        return 0.0;
    case HeightKind::Custom:
        return custom_->defect_over_G(rho);
    }
    return 0.0;
}

std::string HeightFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case HeightKind::Hyperboloidal:
        os << "hyperboloidal(K=" << K_ << ")";
        break;
    case HeightKind::Characteristic:
        os << "characteristic";
        break;
    case HeightKind::LayerHeight:
        os << "layer(K=" << K_ << ")";
        break;
    case HeightKind::Custom:
        os << "custom";
        break;
    }
    return os.str();
}

FieldSample to_transformed(const FieldSample& field, const CompactificationMap& map,
                           const HeightFunction& height) {
    if (field.representation != Representation::Physical) {
        throw ConfigurationError("to_transformed expects a physical field");
    }
    if (field.nodes.size() != field.values.size()) {
        throw ConfigurationError("field sample: node and value counts differ");
    }
    FieldSample out = field;
    out.representation = Representation::Transformed;
    const double power = 0.5 * (field.dimension - 1);
    for (std::size_t j = 0; j < field.nodes.size(); ++j) {
        const double rho = field.nodes[j];
        if (rho >= map.outer()) {
            throw DomainError("physical field is undefined at rho = S");
        }
        const double r = map.radius(rho);
        const double h = height.height(map, rho);
        out.values[j] = std::pow(r, power) * std::polar(1.0, -field.k * h) * field.values[j];
    }
    return out;
}

FieldSample to_physical(const FieldSample& field, const CompactificationMap& map,
                        const HeightFunction& height) {
    if (field.representation != Representation::Transformed) {
        throw ConfigurationError("to_physical expects a transformed field");
    }
    if (field.nodes.size() != field.values.size()) {
        throw ConfigurationError("field sample: node and value counts differ");
    }
    FieldSample out;
    out.representation = Representation::Physical;
    out.dimension = field.dimension;
    out.k = field.k;
    out.warnings = field.warnings;
    const double power = 0.5 * (field.dimension - 1);
    for (std::size_t j = 0; j < field.nodes.size(); ++j) {
        const double rho = field.nodes[j];
        if (rho >= map.outer()) {
            out.warnings.push_back("dropped node at rho = S: physical field undefined at infinity");
            continue;
        }
        const double r = map.radius(rho);
        const double h = height.height(map, rho);
        out.nodes.push_back(rho);
        out.values.push_back(std::polar(1.0, field.k * h) * field.values[j] / std::pow(r, power));
    }
    return out;
}

BoostReport check_boost_conditions(const CompactificationMap& map,
                                   const HeightFunction& height, int sample_count) {
    if (sample_count < 2) {
        throw ConfigurationError("boost check needs at least two samples");
    }
    BoostReport report;
    report.max_boost_excess = -std::numeric_limits<double>::infinity();
    const double a = map.rho_in();
    const double b = map.outer();
    for (int j = 0; j < sample_count; ++j) {
        const double rho = j + 1 == sample_count ? b : a + (b - a) * j / (sample_count - 1);
        report.max_boost_excess = std::max(report.max_boost_excess, height.boost(map, rho) - 1.0);
    }
    report.boost_at_outer_error = std::abs(height.boost(map, b) - 1.0);
    report.boost_slope_at_outer =
        std::abs(map.inverse_jacobian(b) * height.boost_derivative(map, b));
    report.pass = report.max_boost_excess <= 1e-12 && report.boost_at_outer_error < 1e-14 &&
                  report.boost_slope_at_outer < 1e-12;
    return report;
}

} // namespace nic
