#include "nic/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nic/error.hpp"

namespace nic {

namespace {

using std::numbers::pi;

// Below this argument Y_0, Y_1 come from Neumann series over Miller J values;
// above it the Hankel asymptotic expansion reaches full double precision.
constexpr double kAsymptoticThreshold = 25.0;

// Above this argument J_m comes from forward recurrence on the scaled Hankel
// functions (m < z there, so the recurrence is stable).
constexpr double kMillerLimit = 1000.0;

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

void check_arguments(int m, double z) {
    if (!(z > 0.0)) {
        throw DomainError("bessel: argument must be positive, got z=" + std::to_string(z));
    }
    if (m < 0 || m > kMaxBesselOrder) {
        throw UnsupportedError("bessel: order " + std::to_string(m) + " outside [0, " +
                               std::to_string(kMaxBesselOrder) + "]");
    }
}

// Miller's backward recurrence normalized by J_0 + 2 sum J_{2n} = 1.
// Returns J_0 ... J_N for the start order N, which is at least max_order.
std::vector<double> miller_sequence(int max_order, double z) {
    const double turning = std::max<double>(max_order, std::ceil(z));
    int start = static_cast<int>(turning + std::max(40.0, std::ceil(10.0 * std::cbrt(z))));
    start += start % 2;

    std::vector<double> v(start + 2, 0.0);
    v[start] = 1.0;
    constexpr double kRescaleAbove = 1e250;
    for (int n = start; n >= 1; --n) {
        v[n - 1] = (2.0 * n / z) * v[n] - v[n + 1];
        if (std::abs(v[n - 1]) > kRescaleAbove) {
            for (int j = n - 1; j <= start; ++j) v[j] /= kRescaleAbove;
        }
    }
    double norm = v[0];
    for (int n = 2; n <= start; n += 2) norm += 2.0 * v[n];
    v.resize(start + 1);
    for (double& x : v) x /= norm;
    return v;
}

// Scaled Hankel function of order 0 or 1 by its asymptotic expansion.
cplx hankel_scaled_asymptotic(int nu, double z) {
    const double mu = 4.0 * nu * nu;
    cplx term = 1.0;
    cplx sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= cplx(0.0, 1.0) * ((mu - odd * odd) / (8.0 * k * z));
        const double size = std::abs(term);
        if (size > last) break; // divergent tail
        sum += term;
        last = size;
        if (size < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(2.0 / (pi * z)) * std::polar(1.0, -pi * (0.5 * nu + 0.25)) * sum;
}

std::vector<cplx> scaled_hankel_recurrence(int max_order, double z) {
    std::vector<cplx> h(std::max(max_order, 1) + 1);
    h[0] = hankel_scaled_asymptotic(0, z);
    h[1] = hankel_scaled_asymptotic(1, z);
    for (int n = 1; n < max_order; ++n) h[n + 1] = (2.0 * n / z) * h[n] - h[n - 1];
    h.resize(max_order + 1);
    return h;
}

// Y_0 and Y_1 from the Neumann series in the Miller sequence.
std::pair<double, double> y01_neumann(const std::vector<double>& j, double z) {
    const double log_term = std::log(0.5 * z) + kEulerGamma;
    double s0 = 0.0;
    double s1 = 0.0;
    for (std::size_t k = 1; 2 * k + 1 < j.size(); ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s0 += sign * j[2 * k] / static_cast<double>(k);
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / static_cast<double>(k);
    }
    const double y0 = (2.0 / pi) * log_term * j[0] - (4.0 / pi) * s0;
    const double y1 = (2.0 / pi) * log_term * j[1] - (2.0 / pi) * j[0] / z + (2.0 / pi) * s1;
    return {y0, y1};
}

std::vector<double> y_upward(int max_order, double z, double y0, double y1) {
    std::vector<double> y(std::max(max_order, 1) + 1);
    y[0] = y0;
    y[1] = y1;
    for (int n = 1; n < max_order; ++n) y[n + 1] = (2.0 * n / z) * y[n] - y[n - 1];
    y.resize(max_order + 1);
    return y;
}

} // namespace

std::vector<double> bessel_j_sequence(int max_order, double z) {
    check_arguments(max_order, z);
    if (z > kMillerLimit) {
        const auto h = scaled_hankel_recurrence(max_order, z);
        const cplx phase = std::polar(1.0, z);
        std::vector<double> j(max_order + 1);
        for (int n = 0; n <= max_order; ++n) j[n] = (phase * h[n]).real();
        return j;
    }
    auto j = miller_sequence(max_order, z);
    j.resize(max_order + 1);
    return j;
}

std::vector<double> bessel_y_sequence(int max_order, double z) {
    check_arguments(max_order, z);
    if (z >= kAsymptoticThreshold) {
        const cplx phase = std::polar(1.0, z);
        const double y0 = (phase * hankel_scaled_asymptotic(0, z)).imag();
        const double y1 = (phase * hankel_scaled_asymptotic(1, z)).imag();
        return y_upward(max_order, z, y0, y1);
    }
    const auto [y0, y1] = y01_neumann(miller_sequence(1, z), z);
    return y_upward(max_order, z, y0, y1);
}

std::vector<cplx> hankel1_scaled_sequence(int max_order, double z) {
    check_arguments(max_order, z);
    if (z >= kAsymptoticThreshold) return scaled_hankel_recurrence(max_order, z);
    const auto miller = miller_sequence(max_order, z);
    const auto [y0, y1] = y01_neumann(miller, z);
    const auto y = y_upward(max_order, z, y0, y1);
    const cplx phase = std::polar(1.0, -z);
    std::vector<cplx> h(max_order + 1);
    for (int n = 0; n <= max_order; ++n) h[n] = phase * cplx(miller[n], y[n]);
    return h;
}

double bessel_j(int m, double z) {
    check_arguments(m, z);
    if (z > kMillerLimit) return bessel_j_sequence(m, z)[m];
    return miller_sequence(m, z)[m];
}

double bessel_y(int m, double z) { return bessel_y_sequence(m, z)[m]; }

cplx hankel1_scaled(int m, double z) { return hankel1_scaled_sequence(m, z)[m]; }

cplx farfield_limit(int m, double k, double K) {
    return std::sqrt(2.0 / (pi * k)) * std::polar(1.0, k / K - pi * (0.5 * m + 0.25));
}

} // namespace nic
