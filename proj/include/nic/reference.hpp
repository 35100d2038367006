#pragma once

#include <functional>
#include <vector>

#include "nic/geometry.hpp"

namespace nic {

enum class ReferenceKind { PlaneWave1D, HankelMode, ScatteringSeries, PML, PAL, NILPlane };

struct ReferenceParams {
    double k = 0.0;
    double K = 1.0;
    int m = 0;
    int M = 0;
    double R0 = 0.0;
    double sigma = 0.0;
    double R = 0.0;
    double S = 0.0;
};

/**
 * Closed-form solution. Physical evaluators take the physical radius r
 * (or x); transformed evaluators take the compact coordinate rho and are
 * finite at rho = S. The angle is ignored by radial solutions.
 */
struct ReferenceSolution {
    ReferenceKind kind = ReferenceKind::PlaneWave1D;
    Representation representation = Representation::Physical;
    ReferenceParams params;
    std::function<cplx(double, double)> evaluator;

    cplx operator()(double coordinate, double theta = 0.0) const {
        return evaluator(coordinate, theta);
    }
};

/// U = e^{ikx}; transformed u = e^{ik(g - h)} (e^{i(k/K)rho} for a hyperboloidal height).
ReferenceSolution plane_wave_1d(double k, const CompactificationMap& map,
                                const HeightFunction& height, Representation representation);

/// U = H_m^{(1)}(kr); transformed u = sqrt(g) e^{ik(g - h)} Hbar_m(kg).
ReferenceSolution hankel_mode(double k, int m, const CompactificationMap& map,
                              const HeightFunction& height, Representation representation);

/// Mode truncation M = ceil(kR0 + 4 (kR0)^{1/3} + 8).
int truncation_order(double k, double R0);

/// c_m = -i^m J_m(kR0) / H_m^{(1)}(kR0), for any integer m.
cplx scattering_coefficient(int m, double k, double R0);

/**
 * Sound-soft circle scattering series sum_{|m|<=M} c_m H_m^{(1)}(kr) e^{im theta}
 * and its transformed counterpart.
 */
class ScatteringSeries {
public:
    ScatteringSeries(double k, double R0, int M, CompactificationMap map, HeightFunction height);

    int M() const { return M_; }
    double k() const { return k_; }
    double R0() const { return R0_; }
    cplx coefficient(int m) const { return coefficients_[static_cast<std::size_t>(m + M_)]; }

    /// Per-mode radial values c_m H_m^{(1)}(kr), index m + M.
    std::vector<cplx> physical_modes(double r) const;
    /// Per-mode transformed radial values, index m + M.
    std::vector<cplx> transformed_modes(double rho) const;

    cplx physical(double r, double theta) const;
    cplx transformed(double rho, double theta) const;

    ReferenceSolution as_reference(Representation representation) const;

private:
    double k_;
    double R0_;
    int M_;
    CompactificationMap map_;
    HeightFunction height_;
    std::vector<cplx> coefficients_;
};

ReferenceSolution scattering_series(double k, double R0, int M, const CompactificationMap& map,
                                    const HeightFunction& height, Representation representation);

struct LayerTrio {
    ReferenceSolution pml; ///< in r
    ReferenceSolution pal; ///< in rho
    ReferenceSolution nil; ///< in rho
};

/**
 * Outgoing plane wave e^{ikx} seen through a PML (x = r + i sigma (r - R)),
 * a PAL (compactified PML with rescaling) and a null infinity layer on the
 * layer map with exponent n. With `undamped_pal_height` the NIL uses
 * h = g - R, which reproduces the PAL profile without damping.
 */
LayerTrio layer_trio(double k, double sigma, double R, double S, int n = 1,
                     bool undamped_pal_height = false);

} // namespace nic
