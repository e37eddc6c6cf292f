// Trace ingestion tests: FCD XML parsing, CSV parsing, class filtering and
// the synthetic trace generator.
#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "v2vsim/fcd.hpp"
#include "v2vsim/synth.hpp"
#include "v2vsim/trace.hpp"

#include "oracles.hpp"

using namespace v2vsim;

namespace {

Timeline parse(const std::string& xml) {
    std::istringstream in(xml);
    return parse_fcd(in);
}

std::string serialize(const Timeline& tl) {
    std::ostringstream out;
    write_fcd(tl, out);
    return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// FCD XML parsing
// ---------------------------------------------------------------------------

TEST_CASE("minimal single-vehicle document") {
    auto tl = parse(R"(<fcd-export>
  <timestep time="0.0">
    <vehicle id="a" x="0" y="0" speed="0"/>
  </timestep>
</fcd-export>)");
    REQUIRE(tl.snapshots.size() == 1);
    REQUIRE(tl.snapshots[0].time == 0.0);
    REQUIRE(tl.snapshots[0].states.size() == 1);
    const auto& s = tl.snapshots[0].states[0];
    CHECK(s.id == "a");
    CHECK(s.x == 0.0);
    CHECK(s.y == 0.0);
    CHECK(s.speed == 0.0);
    CHECK(s.vclass == VehicleClass::private_car);
}

TEST_CASE("vehicle absent from a timestep is absent from that snapshot") {
    auto tl = parse(R"(<fcd-export>
  <timestep time="0"/>
  <timestep time="1">
    <vehicle id="b" x="5" y="6" speed="7"/>
  </timestep>
</fcd-export>)");
    REQUIRE(tl.snapshots.size() == 2);
    CHECK(tl.snapshots[0].states.empty());
    REQUIRE(tl.snapshots[1].states.size() == 1);
    CHECK(tl.snapshots[1].states[0].id == "b");
    CHECK(tl.snapshots[1].find("b") != nullptr);
    CHECK(tl.snapshots[0].find("b") == nullptr);
}

TEST_CASE("snapshot order and count follow the document") {
    auto tl = parse(R"(<fcd-export>
  <timestep time="0"/><timestep time="2"/><timestep time="5"/>
</fcd-export>)");
    REQUIRE(tl.snapshots.size() == 3);
    CHECK(tl.snapshots[0].time == 0.0);
    CHECK(tl.snapshots[1].time == 2.0);
    CHECK(tl.snapshots[2].time == 5.0);
    CHECK(tl.step == 2.5);  // median of gaps 2 and 3
}

TEST_CASE("type attribute drives vehicle classification") {
    auto tl = parse(R"(<fcd-export>
  <timestep time="0">
    <vehicle id="b1" x="0" y="0" speed="1" type="bus_route_7"/>
    <vehicle id="p1" x="1" y="0" speed="2" type="passenger"/>
    <vehicle id="o1" x="2" y="0" speed="3" type="other"/>
    <vehicle id="u1" x="3" y="0" speed="4"/>
  </timestep>
</fcd-export>)");
    const auto& st = tl.snapshots[0].states;
    CHECK(st[0].vclass == VehicleClass::bus);
    CHECK(st[1].vclass == VehicleClass::private_car);
    CHECK(st[2].vclass == VehicleClass::other);
    CHECK(st[3].vclass == VehicleClass::private_car);
}

TEST_CASE("malformed XML reports line and element context") {
    try {
        parse("<fcd-export>\n  <timestep time=\"0\">\n    <vehicle id=\"a\" x=\"0\"");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("missing required vehicle attribute names the element") {
    auto doc = R"(<fcd-export>
  <timestep time="0">
    <vehicle id="a" y="0" speed="0"/>
  </timestep>
</fcd-export>)";
    try {
        parse(doc);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("vehicle") != std::string::npos);
        CHECK(msg.find("'x'") != std::string::npos);
    }
}

TEST_CASE("non-monotone timestep times are rejected") {
    CHECK_THROWS_AS(parse(R"(<fcd-export>
  <timestep time="5"/><timestep time="3"/>
</fcd-export>)"),
                    ParseError);
    CHECK_THROWS_AS(parse(R"(<fcd-export>
  <timestep time="5"/><timestep time="5"/>
</fcd-export>)"),
                    ParseError);
}

TEST_CASE("duplicate vehicle id within a timestep is rejected") {
    CHECK_THROWS_AS(parse(R"(<fcd-export>
  <timestep time="0">
    <vehicle id="a" x="0" y="0" speed="0"/>
    <vehicle id="a" x="1" y="1" speed="1"/>
  </timestep>
</fcd-export>)"),
                    ParseError);
}

TEST_CASE("negative speed is rejected") {
    CHECK_THROWS_AS(parse(R"(<fcd-export>
  <timestep time="0"><vehicle id="a" x="0" y="0" speed="-1"/></timestep>
</fcd-export>)"),
                    ParseError);
}

TEST_CASE("wrong root element is rejected") {
    CHECK_THROWS_AS(parse("<not-fcd><timestep time=\"0\"/></not-fcd>"), ParseError);
}

TEST_CASE("unknown elements are skipped") {
    auto tl = parse(R"(<?xml version="1.0"?>
<!-- exported trace -->
<fcd-export version="1.19">
  <header><note>hi</note></header>
  <timestep time="0">
    <vehicle id="a" x="1" y="2" speed="3" extra="ignored"/>
    <person id="p" x="0" y="0"/>
  </timestep>
</fcd-export>)");
    REQUIRE(tl.snapshots.size() == 1);
    REQUIRE(tl.snapshots[0].states.size() == 1);
    CHECK(tl.snapshots[0].states[0].x == 1.0);
}

TEST_CASE("entities and quoting forms round through ids") {
    auto tl = parse(R"(<fcd-export>
  <timestep time='0'>
    <vehicle id='bus&amp;7 &lt;north&gt;' x='0' y='0' speed='0' type="bus"/>
  </timestep>
</fcd-export>)");
    REQUIRE(tl.snapshots[0].states.size() == 1);
    CHECK(tl.snapshots[0].states[0].id == "bus&7 <north>");
    auto again = parse(serialize(tl));
    CHECK(again == tl);
}

// ---------------------------------------------------------------------------
// Serialization round-trip
// ---------------------------------------------------------------------------

TEST_CASE("write then parse preserves every field") {
    auto tl = parse(R"(<fcd-export>
  <timestep time="0.5">
    <vehicle id="bus1" x="100.25" y="-3.5" speed="13.887" type="bus"/>
    <vehicle id="car1" x="0.1" y="0.30000000000000004" speed="0" type="passenger"/>
  </timestep>
  <timestep time="1.5"/>
  <timestep time="2.5">
    <vehicle id="bus1" x="110" y="-2" speed="9.1" type="bus"/>
  </timestep>
</fcd-export>)");
    auto again = parse(serialize(tl));
    REQUIRE(again.snapshots.size() == tl.snapshots.size());
    CHECK(again == tl);
}

TEST_CASE("synthetic timelines survive the round trip exactly") {
    SynthConfig cfg;
    cfg.vehicle_count = 7;
    cfg.bus_count = 3;
    cfg.duration_s = 20;
    cfg.step_s = 2;
    for (std::uint64_t seed : {1ull, 42ull, 12345ull}) {
        auto tl = synth_trace(cfg, seed);
        CHECK(parse(serialize(tl)) == tl);
    }
}

// ---------------------------------------------------------------------------
// CSV input
// ---------------------------------------------------------------------------

TEST_CASE("CSV trace parses into grouped snapshots") {
    std::istringstream in(
        "time,id,x,y,speed,type\n"
        "0,a,0,0,1,bus\n"
        "0,b,10,0,2,passenger\n"
        "1,a,1,0,1,bus\n");
    auto tl = parse_trace_csv(in);
    REQUIRE(tl.snapshots.size() == 2);
    CHECK(tl.snapshots[0].states.size() == 2);
    CHECK(tl.snapshots[1].states.size() == 1);
    CHECK(tl.snapshots[0].states[0].vclass == VehicleClass::bus);
}

TEST_CASE("CSV trace rejects bad headers and rows") {
    std::istringstream bad_header("time,id,x,y\n0,a,0,0\n");
    CHECK_THROWS_AS(parse_trace_csv(bad_header), ParseError);
    std::istringstream short_row("time,id,x,y,speed,type\n0,a,0,0\n");
    CHECK_THROWS_AS(parse_trace_csv(short_row), ParseError);
    std::istringstream decreasing(
        "time,id,x,y,speed,type\n"
        "1,a,0,0,0,bus\n"
        "0,a,0,0,0,bus\n");
    CHECK_THROWS_AS(parse_trace_csv(decreasing), ParseError);
}

// ---------------------------------------------------------------------------
// Class filtering
// ---------------------------------------------------------------------------

namespace {

Timeline mixed_timeline() {
    return parse(R"(<fcd-export>
  <timestep time="0">
    <vehicle id="b1" x="0" y="0" speed="1" type="bus"/>
    <vehicle id="b2" x="5" y="0" speed="1" type="bus"/>
    <vehicle id="p1" x="1" y="0" speed="2" type="passenger"/>
    <vehicle id="p2" x="2" y="0" speed="2" type="passenger"/>
    <vehicle id="p3" x="3" y="0" speed="2" type="passenger"/>
  </timestep>
</fcd-export>)");
}

}  // namespace

TEST_CASE("filtering to buses keeps only buses") {
    auto tl = filter_class(mixed_timeline(), {VehicleClass::bus});
    REQUIRE(tl.snapshots.size() == 1);
    REQUIRE(tl.snapshots[0].states.size() == 2);
    for (const auto& s : tl.snapshots[0].states) CHECK(s.vclass == VehicleClass::bus);
}

TEST_CASE("filtering with every class is the identity") {
    auto tl = mixed_timeline();
    auto filtered = filter_class(
        tl, {VehicleClass::bus, VehicleClass::private_car, VehicleClass::other});
    CHECK(filtered == tl);
}

TEST_CASE("filtering a class with no members empties snapshots but keeps them") {
    auto tl = parse(R"(<fcd-export>
  <timestep time="0"><vehicle id="p" x="0" y="0" speed="0" type="car"/></timestep>
  <timestep time="1"><vehicle id="p" x="1" y="0" speed="1" type="car"/></timestep>
</fcd-export>)");
    auto filtered = filter_class(tl, {VehicleClass::bus});
    REQUIRE(filtered.snapshots.size() == 2);
    CHECK(filtered.snapshots[0].states.empty());
    CHECK(filtered.snapshots[1].states.empty());
    CHECK(filtered.snapshots[0].time == 0.0);
    CHECK(filtered.snapshots[1].time == 1.0);
}

// ---------------------------------------------------------------------------
// Synthetic generator
// ---------------------------------------------------------------------------

TEST_CASE("single vehicle displacement respects the speed bound") {
    SynthConfig cfg;
    cfg.vehicle_count = 1;
    cfg.bus_count = 0;
    cfg.duration_s = 1;
    cfg.step_s = 1;
    cfg.max_speed = 10;
    auto tl = synth_trace(cfg, 7);
    REQUIRE(tl.snapshots.size() == 2);
    const auto& a = tl.snapshots[0].states.at(0);
    const auto& b = tl.snapshots[1].states.at(0);
    double dist = std::hypot(b.x - a.x, b.y - a.y);
    CHECK(dist <= 10.0 + 1e-9);
}

TEST_CASE("same config and seed give bit-identical timelines") {
    SynthConfig cfg;
    cfg.vehicle_count = 6;
    cfg.duration_s = 30;
    auto a = synth_trace(cfg, 99);
    auto b = synth_trace(cfg, 99);
    CHECK(a == b);
    auto c = synth_trace(cfg, 100);
    CHECK(a != c);
}

TEST_CASE("vehicle count and snapshot count match the request") {
    SynthConfig cfg;
    cfg.vehicle_count = 5;
    cfg.duration_s = 99;
    cfg.step_s = 1;
    auto tl = synth_trace(cfg, 3);
    REQUIRE(tl.snapshots.size() == 100);
    for (const auto& snap : tl.snapshots) CHECK(snap.states.size() == 5);
}

TEST_CASE("generated traces stay in bounds and under the displacement cap") {
    oracle::Rng rng(2024);
    for (int round = 0; round < 10; ++round) {
        SynthConfig cfg;
        cfg.vehicle_count = rng.uniform_int(1, 8);
        cfg.bus_count = rng.uniform_int(0, cfg.vehicle_count);
        cfg.duration_s = rng.uniform_int(5, 40);
        cfg.step_s = 1;
        cfg.max_x = 500;
        cfg.max_y = 400;
        cfg.min_speed = 1;
        cfg.max_speed = rng.uniform(5, 20);
        auto tl = synth_trace(cfg, static_cast<std::uint64_t>(round) * 17 + 1);
        for (std::size_t i = 0; i < tl.snapshots.size(); ++i) {
            for (const auto& s : tl.snapshots[i].states) {
                CHECK(s.x >= cfg.min_x);
                CHECK(s.x <= cfg.max_x);
                CHECK(s.y >= cfg.min_y);
                CHECK(s.y <= cfg.max_y);
                CHECK(s.speed >= 0.0);
                if (i > 0) {
                    const auto* prev = tl.snapshots[i - 1].find(s.id);
                    REQUIRE(prev != nullptr);
                    double dist = std::hypot(s.x - prev->x, s.y - prev->y);
                    CHECK(dist <= cfg.max_speed * cfg.step_s + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("bus count controls the class split") {
    SynthConfig cfg;
    cfg.vehicle_count = 10;
    cfg.bus_count = 4;
    cfg.duration_s = 2;
    auto tl = synth_trace(cfg, 5);
    std::size_t buses = 0, cars = 0;
    for (const auto& s : tl.snapshots[0].states) {
        if (s.vclass == VehicleClass::bus) ++buses;
        if (s.vclass == VehicleClass::private_car) ++cars;
    }
    CHECK(buses == 4);
    CHECK(cars == 6);
}

TEST_CASE("invalid generator settings are rejected") {
    SynthConfig cfg;
    cfg.vehicle_count = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.duration_s = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.step_s = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.min_speed = 9;
    cfg.max_speed = 5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

// ---------------------------------------------------------------------------
// Structural day-scale trace: route fleet plus private background traffic
// ---------------------------------------------------------------------------

TEST_CASE("day-long mixed fleet keeps per-class counts through parse and filter") {
    SynthConfig cfg;
    cfg.vehicle_count = 24;
    cfg.bus_count = 10;
    cfg.duration_s = 86400;
    cfg.step_s = 600;
    auto generated = synth_trace(cfg, 11);
    auto tl = parse(serialize(generated));
    REQUIRE(tl == generated);
    REQUIRE(tl.snapshots.size() == 145);
    CHECK(tl.snapshots.back().time == 86400.0);

    std::size_t buses = 0, cars = 0;
    for (const auto& s : tl.snapshots[0].states)
        (s.vclass == VehicleClass::bus ? buses : cars) += 1;
    CHECK(buses == 10);
    CHECK(cars == 14);

    auto only_buses = filter_class(tl, {VehicleClass::bus});
    for (const auto& snap : only_buses.snapshots) CHECK(snap.states.size() == 10);
}
