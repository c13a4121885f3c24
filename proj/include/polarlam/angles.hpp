#pragma once

#include <cmath>
#include <numbers>

namespace polarlam {

inline constexpr double pi = std::numbers::pi;

constexpr double deg_to_rad(double deg) noexcept { return deg * pi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / pi; }

/// Maps `x` into [lo, lo + period).
inline double wrap_angle(double x, double lo, double period) noexcept {
    double r = std::fmod(x - lo, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return lo + r;
}

/// Distance of `x` to the nearest multiple of `step`.
inline double grid_distance(double x, double step) noexcept {
    return std::abs(x - step * std::round(x / step));
}

/// Index of the nearest multiple of `step`, reduced modulo `mod`.
inline int grid_index(double x, double step, int mod) noexcept {
    const long k = std::lround(x / step);
    const long m = k % mod;
    return static_cast<int>(m < 0 ? m + mod : m);
}

}  // namespace polarlam
