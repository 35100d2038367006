#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nic/error.hpp"

namespace nic {

using cplx = std::complex<double>;

enum class MapKind { Rational, Tangent, Layer };

/// Interface radius R, outer boundary S and smoothness exponent n of a
/// null infinity layer. The map is the identity for rho <= R.
struct LayerConfig {
    double R = 2.0;
    double S = 2.2;
    int n = 2;
};

struct MapParams {
    double rho_in = 0.0;
    std::optional<LayerConfig> layer;
};

/**
 * Radial compactification r = g(rho) of [r_in, inf) onto [rho_in, S].
 *
 * Besides g itself the map exposes G = 1/g', its derivative, the conformal
 * factor Omega and the combination 1/(G g^2), each in a closed form that
 * stays finite at rho = S. g(S) is reported as +infinity.
 */
class CompactificationMap {
public:
    static CompactificationMap rational(double rho_in = 0.0);
    static CompactificationMap tangent(double rho_in = 0.0);
    static CompactificationMap layer(const LayerConfig& config, double rho_in = 0.0);

    MapKind kind() const { return kind_; }
    double rho_in() const { return rho_in_; }
    double outer() const { return outer_; }
    const std::optional<LayerConfig>& layer_config() const { return layer_; }

    /// g(rho); +inf at rho = S.
    double radius(double rho) const;
    /// G(rho) = 1 / g'(rho).
    double inverse_jacobian(double rho) const;
    /// dG/drho.
    double inverse_jacobian_derivative(double rho) const;
    /// Omega(rho); vanishes at S.
    double conformal_factor(double rho) const;
    /// 1 / (G g^2), finite at S. Infinite at rho = 0 for maps with g(0) = 0.
    double inverse_angular_scale(double rho) const;
    /// rho such that g(rho) = r.
    double inverse(double r) const;

    std::string describe() const;

private:
    CompactificationMap(MapKind kind, double rho_in, double outer,
                        std::optional<LayerConfig> layer);

    MapKind kind_;
    double rho_in_;
    double outer_;
    std::optional<LayerConfig> layer_;
};

CompactificationMap make_map(MapKind kind, const MapParams& params = {});

enum class HeightKind { Hyperboloidal, Characteristic, LayerHeight, Custom };

/// User-supplied height data, all as functions of rho. `deficit` is g - h,
/// `defect_over_G` is (1 - H^2)/G; both must be given in a form that is
/// finite at S.
struct CustomHeight {
    std::function<double(double)> deficit;
    std::function<double(double)> boost;
    std::function<double(double)> boost_derivative;
    std::function<double(double)> defect_over_G;
};

/**
 * Height function h(rho) and its boost H = G dh/drho.
 *
 * Hyperboloidal and LayerHeight use h = g - rho/K, for which
 * H = 1 - G/K and (1 - H^2)/G = 2/K - G/K^2 on every map kind.
 * Characteristic uses h = g, H = 1.
 */
class HeightFunction {
public:
    HeightFunction(HeightKind kind, double K);
    static HeightFunction custom(CustomHeight custom);

    HeightKind kind() const { return kind_; }
    double K() const { return K_; }

    /// h(rho); +inf at S.
    double height(const CompactificationMap& map, double rho) const;
    /// g(rho) - h(rho), finite on the closed domain.
    double deficit(const CompactificationMap& map, double rho) const;
    double boost(const CompactificationMap& map, double rho) const;
    double boost_derivative(const CompactificationMap& map, double rho) const;
    /// (1 - H^2) / G without the 0/0 at S.
    double defect_over_G(const CompactificationMap& map, double rho) const;

    std::string describe() const;

private:
    HeightKind kind_;
    double K_;
    std::optional<CustomHeight> custom_;
};

HeightFunction make_height(HeightKind kind, double K, const CompactificationMap& map);

enum class Representation { Physical, Transformed };

/// Complex nodal values on compact-coordinate nodes.
struct FieldSample {
    std::vector<double> nodes;
    std::vector<cplx> values;
    Representation representation = Representation::Physical;
    int dimension = 1;
    double k = 1.0;
    std::vector<std::string> warnings;
};

/// u = g^{(d-1)/2} e^{-i k h} U at every node; nodes must lie below S.
FieldSample to_transformed(const FieldSample& field, const CompactificationMap& map,
                           const HeightFunction& height);

/// Inverse of to_transformed. Nodes at S are dropped and a warning recorded.
FieldSample to_physical(const FieldSample& field, const CompactificationMap& map,
                        const HeightFunction& height);

struct BoostReport {
    double max_boost_excess = 0.0;   ///< max(H) - 1 over the samples
    double boost_at_outer_error = 0.0; ///< |H(S) - 1|
    double boost_slope_at_outer = 0.0; ///< |G dH/drho| at S
    bool pass = false;
};

BoostReport check_boost_conditions(const CompactificationMap& map,
                                   const HeightFunction& height, int sample_count);

} // namespace nic
