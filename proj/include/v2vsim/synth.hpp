// v2vsim/synth.hpp - deterministic random-waypoint trace generator used as a test and demo fixture
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "v2vsim/error.hpp"
#include "v2vsim/trace.hpp"

namespace v2vsim {

struct SynthConfig {
    int vehicle_count = 10;
    int bus_count = -1;  // < 0: every vehicle is a bus
    double duration_s = 100.0;
    double step_s = 1.0;
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 5000.0;
    double max_y = 5000.0;
    double min_speed = 5.0;   // m/s, waypoint leg speed range
    double max_speed = 15.0;  // m/s

    int effective_bus_count() const { return bus_count < 0 ? vehicle_count : bus_count; }

    void validate() const {
        if (vehicle_count <= 0) throw ConfigError("synth: vehicle count must be positive");
        if (duration_s <= 0.0) throw ConfigError("synth: duration must be positive");
        if (step_s <= 0.0) throw ConfigError("synth: step must be positive");
        if (max_x <= min_x || max_y <= min_y) throw ConfigError("synth: empty bounding box");
        if (min_speed < 0.0 || max_speed < min_speed)
            throw ConfigError("synth: need 0 <= min_speed <= max_speed");
        if (effective_bus_count() > vehicle_count)
            throw ConfigError("synth: bus count exceeds vehicle count");
    }
};

namespace detail {

// Platform-independent uniform double in [lo, hi) from the raw generator
// bits; std::uniform_real_distribution is implementation-defined.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace detail

// Random-waypoint walk inside the bounding box: each vehicle heads to a
// uniformly drawn waypoint at a uniformly drawn leg speed, then picks the
// next. Output is a pure function of (config, seed); the displacement
// between consecutive snapshots never exceeds max_speed * step.
inline Timeline synth_trace(const SynthConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);

    struct Walker {
        double x, y;          // current position
        double tx, ty;        // waypoint
        double speed;         // current leg speed
    };

    auto pick_leg = [&](Walker& w) {
        w.tx = detail::uniform(rng, cfg.min_x, cfg.max_x);
        w.ty = detail::uniform(rng, cfg.min_y, cfg.max_y);
        w.speed = detail::uniform(rng, cfg.min_speed, cfg.max_speed);
    };

    int buses = cfg.effective_bus_count();
    int width = 1;
    for (int n = cfg.vehicle_count - 1; n >= 10; n /= 10) ++width;

    std::vector<Walker> walkers(static_cast<std::size_t>(cfg.vehicle_count));
    std::vector<std::string> ids(walkers.size());
    for (std::size_t i = 0; i < walkers.size(); ++i) {
        Walker& w = walkers[i];
        w.x = detail::uniform(rng, cfg.min_x, cfg.max_x);
        w.y = detail::uniform(rng, cfg.min_y, cfg.max_y);
        pick_leg(w);
        std::string num = std::to_string(i);
        num.insert(0, width > static_cast<int>(num.size()) ? width - num.size() : 0, '0');
        ids[i] = (static_cast<int>(i) < buses ? "bus" : "veh") + num;
    }

    auto advance = [&](Walker& w, double dt) {
        double remaining = dt;
        while (remaining > 0.0) {
            double dist = std::hypot(w.tx - w.x, w.ty - w.y);
            double reach = w.speed * remaining;
            if (reach < dist) {
                double f = reach / dist;
                w.x += (w.tx - w.x) * f;
                w.y += (w.ty - w.y) * f;
                return;
            }
            w.x = w.tx;
            w.y = w.ty;
            if (w.speed <= 0.0) {
                pick_leg(w);
                return;  // parked this step; new leg starts next step
            }
            remaining -= dist / w.speed;
            pick_leg(w);
        }
    };

    int snapshot_count = static_cast<int>(std::floor(cfg.duration_s / cfg.step_s + 1e-9)) + 1;

    Timeline timeline;
    timeline.step = cfg.step_s;
    timeline.snapshots.reserve(static_cast<std::size_t>(snapshot_count));
    for (int k = 0; k < snapshot_count; ++k) {
        if (k > 0)
            for (auto& w : walkers) advance(w, cfg.step_s);
        Snapshot snap;
        snap.time = k * cfg.step_s;
        snap.states.reserve(walkers.size());
        for (std::size_t i = 0; i < walkers.size(); ++i) {
            snap.states.push_back(VehicleState{
                ids[i], walkers[i].x, walkers[i].y, walkers[i].speed,
                static_cast<int>(i) < buses ? VehicleClass::bus : VehicleClass::private_car});
        }
        timeline.snapshots.push_back(std::move(snap));
    }
    return timeline;
}

}  // namespace v2vsim
