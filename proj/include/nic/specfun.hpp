#pragma once

#include <complex>
#include <vector>

namespace nic {

using cplx = std::complex<double>;

/// Highest integer order accepted by the Bessel routines.
inline constexpr int kMaxBesselOrder = 200;

/// J_m(z) for integer m >= 0 and real z > 0.
double bessel_j(int m, double z);

/// Y_m(z) for integer m >= 0 and real z > 0.
double bessel_y(int m, double z);

/// e^{-iz} H_m^{(1)}(z). Bounded like z^{-1/2} for large z.
cplx hankel1_scaled(int m, double z);

/// J_0(z) ... J_{max_order}(z).
std::vector<double> bessel_j_sequence(int max_order, double z);

/// Y_0(z) ... Y_{max_order}(z).
std::vector<double> bessel_y_sequence(int max_order, double z);

/// e^{-iz} H_0^{(1)}(z) ... e^{-iz} H_{max_order}^{(1)}(z).
std::vector<cplx> hankel1_scaled_sequence(int max_order, double z);

/// Far-field value sqrt(2/(pi k)) e^{i(k/K - pi(m/2 + 1/4))} of a single
/// transformed Hankel mode on the rational map with outer boundary at 1.
cplx farfield_limit(int m, double k, double K);

} // namespace nic
