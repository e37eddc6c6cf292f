// v2vsim/fuel.hpp - gridded fuel-consumption map lookup and trip fuel integration
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "v2vsim/dynamics.hpp"
#include "v2vsim/error.hpp"

namespace v2vsim {

// Instantaneous consumption over (engine torque, engine angular velocity),
// bilinear between grid nodes.
struct FuelMap {
    std::vector<double> torque_axis;  // N*m, strictly increasing
    std::vector<double> omega_axis;   // rad/s, strictly increasing
    std::vector<double> rate;         // g/s, row-major torque x omega

    double at(std::size_t ti, std::size_t wi) const { return rate[ti * omega_axis.size() + wi]; }

    void validate() const {
        if (torque_axis.empty() || omega_axis.empty()) throw ConfigError("fuel map: empty axis");
        for (std::size_t i = 1; i < torque_axis.size(); ++i)
            if (!(torque_axis[i] > torque_axis[i - 1]))
                throw ConfigError("fuel map: torque axis must be strictly increasing");
        for (std::size_t i = 1; i < omega_axis.size(); ++i)
            if (!(omega_axis[i] > omega_axis[i - 1]))
                throw ConfigError("fuel map: omega axis must be strictly increasing");
        if (rate.size() != torque_axis.size() * omega_axis.size())
            throw ConfigError("fuel map: rate matrix does not match axes");
        for (double r : rate)
            if (!(r >= 0.0)) throw ConfigError("fuel map: rates must be >= 0");
    }
};

struct FuelSample {
    double grams_per_s = 0.0;
    bool clamped = false;  // query fell outside the grid and was clamped
};

namespace detail {

// Clamping index lookup: cell index and interpolation weight for `q` on
// `axis`, with out-of-range queries pinned to the boundary and flagged.
struct AxisPos {
    std::size_t lo = 0;
    double frac = 0.0;
    bool clamped = false;
};

inline AxisPos locate(const std::vector<double>& axis, double q) {
    AxisPos p;
    if (q <= axis.front()) {
        p.clamped = q < axis.front();
        return p;
    }
    if (q >= axis.back()) {
        p.lo = axis.size() >= 2 ? axis.size() - 2 : 0;
        p.frac = axis.size() >= 2 ? 1.0 : 0.0;
        p.clamped = q > axis.back();
        return p;
    }
    auto it = std::upper_bound(axis.begin(), axis.end(), q);
    p.lo = static_cast<std::size_t>(it - axis.begin()) - 1;
    p.frac = (q - axis[p.lo]) / (axis[p.lo + 1] - axis[p.lo]);
    return p;
}

}  // namespace detail

// Pre: map.validate() holds.
inline FuelSample fuel_rate(const FuelMap& map, const EngineOperatingPoint& pt) {
    auto tp = detail::locate(map.torque_axis, pt.torque_nm);
    auto wp = detail::locate(map.omega_axis, pt.omega_rad_s);

    std::size_t t1 = std::min(tp.lo + 1, map.torque_axis.size() - 1);
    std::size_t w1 = std::min(wp.lo + 1, map.omega_axis.size() - 1);
    double r00 = map.at(tp.lo, wp.lo);
    double r01 = map.at(tp.lo, w1);
    double r10 = map.at(t1, wp.lo);
    double r11 = map.at(t1, w1);
    double low = r00 + (r01 - r00) * wp.frac;
    double high = r10 + (r11 - r10) * wp.frac;
    return FuelSample{low + (high - low) * tp.frac, tp.clamped || wp.clamped};
}

// Full backward pipeline result for one speed trace.
struct FuelResult {
    double total_g = 0.0;
    std::vector<double> rate_trace;               // g/s, one per speed sample
    std::vector<ForceBreakdown> forces;           // one per speed sample
    std::vector<EngineOperatingPoint> points;     // one per speed sample
    std::vector<std::uint8_t> clamped;            // 1 where the map query was clamped
    std::size_t clamped_steps = 0;
};

// speed trace -> backward forces -> engine operating points -> map lookups,
// then trapezoidal integration of the instantaneous rate.
inline FuelResult total_fuel(const VehicleParams& params, const RoadProfile& profile,
                             const FuelMap& map, std::span<const double> speeds, double dt) {
    map.validate();
    FuelResult result;
    result.forces = backward_forces(params, profile, speeds, dt);
    result.points.reserve(speeds.size());
    result.rate_trace.reserve(speeds.size());
    result.clamped.reserve(speeds.size());
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        result.points.push_back(engine_point(result.forces[i].traction_n, speeds[i], params));
        FuelSample sample = fuel_rate(map, result.points.back());
        result.rate_trace.push_back(sample.grams_per_s);
        result.clamped.push_back(sample.clamped ? 1 : 0);
        if (sample.clamped) ++result.clamped_steps;
    }
    for (std::size_t i = 1; i < result.rate_trace.size(); ++i)
        result.total_g += 0.5 * (result.rate_trace[i - 1] + result.rate_trace[i]) * dt;
    return result;
}

}  // namespace v2vsim
