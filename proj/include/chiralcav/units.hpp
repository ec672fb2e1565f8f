// units.hpp - angular-frequency strong type.
//
// Every rate in the model is carried internally as an angular frequency in
// rad/us. At the I/O boundary values are quoted as "value/2pi in MHz", which
// is how experimental couplings and decay rates are normally written.

#pragma once

#include <cmath>
#include <numbers>

namespace chiralcav {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

class AngularFrequency {
public:
    constexpr AngularFrequency() = default;

    /// x is the frequency divided by 2pi, in MHz
    static constexpr AngularFrequency from_mhz(double x) { return AngularFrequency{two_pi * x}; }
    static constexpr AngularFrequency from_khz(double x) { return AngularFrequency{two_pi * x * 1e-3}; }
    static constexpr AngularFrequency rad_per_us(double w) { return AngularFrequency{w}; }

    constexpr double value() const { return value_; }
    constexpr double to_mhz() const { return value_ / two_pi; }
    bool is_finite() const { return std::isfinite(value_); }

    constexpr AngularFrequency operator-() const { return AngularFrequency{-value_}; }
    constexpr AngularFrequency operator+(AngularFrequency o) const { return AngularFrequency{value_ + o.value_}; }
    constexpr AngularFrequency operator-(AngularFrequency o) const { return AngularFrequency{value_ - o.value_}; }
    constexpr AngularFrequency operator*(double s) const { return AngularFrequency{value_ * s}; }
    constexpr auto operator<=>(const AngularFrequency&) const = default;

private:
    constexpr explicit AngularFrequency(double w) : value_{w} {}
    double value_ = 0.0;
};

namespace literals {
constexpr AngularFrequency operator""_mhz(long double x) { return AngularFrequency::from_mhz(static_cast<double>(x)); }
constexpr AngularFrequency operator""_khz(long double x) { return AngularFrequency::from_khz(static_cast<double>(x)); }
}  // namespace literals

}  // namespace chiralcav
