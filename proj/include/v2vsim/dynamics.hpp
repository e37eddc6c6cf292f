// v2vsim/dynamics.hpp - vehicle longitudinal dynamics: forward (forces -> speed) and
// backward (speed -> forces) evaluation with engine operating-point mapping
#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "v2vsim/error.hpp"

namespace v2vsim {

// Gear table row: `ratio` applies from `min_speed` up to the next row.
struct GearEntry {
    double min_speed = 0.0;  // m/s
    double ratio = 1.0;      // dimensionless
};

// Physical constants of the longitudinal model:
//   traction = (mass + rotating_mass) * dv/dt + rolling + aero + grade + braking
// with aero = drag_coeff * v^2, rolling = rolling_coeff * cos(alpha) and
// grade = mass * gravity * sin(alpha). The rotating drivetrain inertia enters
// as the translational-equivalent rotating_mass; gravity acts on mass alone.
struct VehicleParams {
    double mass_kg = 0.0;           // m_v
    double rotating_mass_kg = 0.0;  // m_r
    double drag_coeff = 0.0;        // c1, kg/m
    double rolling_coeff = 0.0;     // c2, N
    double gravity = 9.81;          // m/s^2
    double wheel_radius_m = 0.0;    // R_w
    double gearbox_eff = 1.0;       // eta, in (0, 1]
    std::vector<GearEntry> gears{{0.0, 1.0}};

    void validate() const {
        if (!(mass_kg > 0.0)) throw ConfigError("params: vehicle mass must be positive");
        if (rotating_mass_kg < 0.0) throw ConfigError("params: rotating mass must be >= 0");
        if (drag_coeff < 0.0) throw ConfigError("params: drag coefficient must be >= 0");
        if (rolling_coeff < 0.0) throw ConfigError("params: rolling coefficient must be >= 0");
        if (!(wheel_radius_m > 0.0)) throw ConfigError("params: wheel radius must be positive");
        if (!(gearbox_eff > 0.0 && gearbox_eff <= 1.0))
            throw ConfigError("params: gearbox efficiency must be in (0, 1]");
        if (gears.empty()) throw ConfigError("params: gear table must not be empty");
        for (std::size_t i = 0; i < gears.size(); ++i) {
            if (!(gears[i].ratio > 0.0)) throw ConfigError("params: gear ratios must be positive");
            if (i > 0 && !(gears[i].min_speed > gears[i - 1].min_speed))
                throw ConfigError("params: gear speed thresholds must be strictly increasing");
        }
    }

    // Highest row whose threshold the speed has reached; below the first
    // threshold the first gear applies.
    double gear_ratio_at(double v) const {
        double ratio = gears.front().ratio;
        for (const auto& g : gears) {
            if (v < g.min_speed) break;
            ratio = g.ratio;
        }
        return ratio;
    }

    double total_mass() const { return mass_kg + rotating_mass_kg; }
};

// Road angle over travelled distance, piecewise linear between samples and
// clamped to the end values outside them. An empty profile is a flat road.
struct RoadProfile {
    struct Sample {
        double distance = 0.0;  // m along the route
        double alpha = 0.0;     // rad
    };
    std::vector<Sample> samples;

    static RoadProfile flat() { return {}; }

    void validate() const {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (std::abs(samples[i].alpha) >= std::numbers::pi / 2.0)
                throw ConfigError("profile: |road angle| must be below pi/2");
            if (i > 0 && !(samples[i].distance > samples[i - 1].distance))
                throw ConfigError("profile: distances must be strictly increasing");
        }
    }

    double alpha_at(double s) const {
        if (samples.empty()) return 0.0;
        if (s <= samples.front().distance) return samples.front().alpha;
        if (s >= samples.back().distance) return samples.back().alpha;
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (s <= samples[i].distance) {
                const auto& a = samples[i - 1];
                const auto& b = samples[i];
                double f = (s - a.distance) / (b.distance - a.distance);
                return a.alpha + f * (b.alpha - a.alpha);
            }
        }
        return samples.back().alpha;
    }
};

// Per-step force decomposition. Traction and hydraulic braking are both
// non-negative and never active together.
struct ForceBreakdown {
    double traction_n = 0.0;  // F_t
    double braking_n = 0.0;   // F_hydr
    double aero_n = 0.0;      // F_a
    double rolling_n = 0.0;   // F_r
    double grade_n = 0.0;     // F_g
};

struct EngineOperatingPoint {
    double torque_nm = 0.0;    // T_ICE
    double omega_rad_s = 0.0;  // omega_ICE
};

// Forward-simulated trajectory: N force inputs produce N+1 samples of speed
// and position at times i * dt.
struct SpeedTrace {
    double dt = 0.0;
    std::vector<double> v;  // m/s
    std::vector<double> x;  // m
};

struct ForceInput {
    double traction_n = 0.0;
    double braking_n = 0.0;
};

namespace detail {

// Rolling resistance vanishes at standstill so a stopped vehicle does not
// creep backwards under the constant c2 term.
inline double rolling_force(const VehicleParams& p, double v, double alpha) {
    return v > 0.0 ? p.rolling_coeff * std::cos(alpha) : 0.0;
}

inline double aero_force(const VehicleParams& p, double v) { return p.drag_coeff * v * v; }

inline double grade_force(const VehicleParams& p, double alpha) {
    return p.mass_kg * p.gravity * std::sin(alpha);
}

}  // namespace detail

// Forward approach: explicit-Euler integration of the longitudinal dynamics
// with traction/braking inputs. Speed is clamped at zero (no reverse); the
// road angle is looked up at the current position.
inline SpeedTrace forward_simulate(const VehicleParams& params, const RoadProfile& profile,
                                   std::span<const ForceInput> inputs, double v0, double dt) {
    params.validate();
    profile.validate();
    if (!(dt > 0.0)) throw ConfigError("forward_simulate: dt must be positive");
    if (!(v0 >= 0.0) || !std::isfinite(v0)) throw InputError("forward_simulate: v0 must be finite and >= 0");

    SpeedTrace trace;
    trace.dt = dt;
    trace.v.reserve(inputs.size() + 1);
    trace.x.reserve(inputs.size() + 1);
    trace.v.push_back(v0);
    trace.x.push_back(0.0);

    double mass = params.total_mass();
    for (const auto& in : inputs) {
        if (!std::isfinite(in.traction_n) || !std::isfinite(in.braking_n))
            throw InputError("forward_simulate: non-finite force input");
        double v = trace.v.back();
        double x = trace.x.back();
        double alpha = profile.alpha_at(x);
        double accel = (in.traction_n - in.braking_n - detail::rolling_force(params, v, alpha) -
                        detail::aero_force(params, v) - detail::grade_force(params, alpha)) /
                       mass;
        double v_next = v + accel * dt;
        if (v_next < 0.0) v_next = 0.0;
        trace.v.push_back(v_next);
        trace.x.push_back(x + v * dt);
    }
    return trace;
}

// Backward approach: given a sampled speed trajectory, recover the force
// demand. Acceleration comes from central differences (one-sided at the
// ends); positive demand goes to traction, negative demand to the hydraulic
// brake, never both.
inline std::vector<ForceBreakdown> backward_forces(const VehicleParams& params,
                                                   const RoadProfile& profile,
                                                   std::span<const double> speeds, double dt) {
    params.validate();
    profile.validate();
    if (!(dt > 0.0)) throw ConfigError("backward_forces: dt must be positive");
    if (speeds.size() < 2) throw InputError("backward_forces: need at least 2 speed samples");
    for (double v : speeds)
        if (!std::isfinite(v) || v < 0.0)
            throw InputError("backward_forces: speeds must be finite and >= 0");

    std::size_t n = speeds.size();
    std::vector<double> pos(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        pos[i] = pos[i - 1] + 0.5 * (speeds[i - 1] + speeds[i]) * dt;

    double mass = params.total_mass();
    std::vector<ForceBreakdown> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double accel;
        if (i == 0)
            accel = (speeds[1] - speeds[0]) / dt;
        else if (i == n - 1)
            accel = (speeds[n - 1] - speeds[n - 2]) / dt;
        else
            accel = (speeds[i + 1] - speeds[i - 1]) / (2.0 * dt);

        double alpha = profile.alpha_at(pos[i]);
        ForceBreakdown& fb = out[i];
        fb.aero_n = detail::aero_force(params, speeds[i]);
        fb.rolling_n = detail::rolling_force(params, speeds[i], alpha);
        fb.grade_n = detail::grade_force(params, alpha);
        double demand = mass * accel + fb.rolling_n + fb.aero_n + fb.grade_n;
        if (demand >= 0.0) {
            fb.traction_n = demand;
            fb.braking_n = 0.0;
        } else {
            fb.traction_n = 0.0;
            fb.braking_n = -demand;
        }
    }
    return out;
}

// Engine operating point for a traction force at a given speed:
//   torque = F_t * R_w / (eta * gamma),  omega = v * gamma / R_w
// with gamma taken from the gear table at the current speed.
inline EngineOperatingPoint engine_point(double traction_n, double v, const VehicleParams& params) {
    if (!(traction_n >= 0.0)) throw InputError("engine_point: traction must be >= 0");
    if (!(v >= 0.0)) throw InputError("engine_point: speed must be >= 0");
    double gamma = params.gear_ratio_at(v);
    return EngineOperatingPoint{
        traction_n * params.wheel_radius_m / (params.gearbox_eff * gamma),
        v * gamma / params.wheel_radius_m,
    };
}

}  // namespace v2vsim
