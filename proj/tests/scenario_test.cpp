#include "doctest.h"
#include "mesh/scenario.hpp"

using namespace mesh;

namespace {

const char* kPaperScenario = R"(# paper setup
node id=14754480 x=0   y=0  range=100
node id=1592748  x=50  y=0  range=100
node id=52126    x=25  y=40 range=100
radio loss=0 corrupt=0 latency=10
at t=0 node=14754480 serial="Node52126@set_led=6"
run duration=15000 seed=42
)";

}  // namespace

TEST_CASE("parses the paper scenario") {
    auto s = parse_scenario(kPaperScenario);
    REQUIRE(s);
    REQUIRE(s->nodes.size() == 3);
    CHECK(s->nodes[0].name.raw == "Node14754480");
    CHECK(s->nodes[2].range == 100);
    REQUIRE(s->script.size() == 1);
    CHECK(s->script[0].kind == ScriptEvent::Kind::Serial);
    CHECK(s->script[0].line == "Node52126@set_led=6");
    CHECK(s->duration_ms == 15000);
    CHECK(s->seed == 42);
    CHECK(s->link.latency_ms == 10);

    auto world = build_world(*s);
    REQUIRE(world);
    CHECK(world->nodes().size() == 3);
}

TEST_CASE("defaults when directives are omitted") {
    auto s = parse_scenario("node id=1 x=0 y=0 range=10\n");
    REQUIRE(s);
    CHECK(s->link.loss == 0);
    CHECK(s->link.corrupt == 0);
    CHECK(s->link.latency_ms == 10);
    CHECK(s->seed == 42);
    CHECK(s->duration_ms == 60000);
    CHECK(s->config.ttl_default == 8);
}

TEST_CASE("config and traffic directives") {
    auto s = parse_scenario(
        "node id=1 x=0 y=0 range=10\n"
        "node id=2 x=5 y=0 range=10\n"
        "config ttl=2 cycle=500 retention=12\n"
        "traffic node=1 target=2 period=5000 body=\"set_led=3\"\n");
    REQUIRE(s);
    CHECK(s->config.ttl_default == 2);
    CHECK(s->config.cycle_period_ms == 500);
    CHECK(s->config.sended_retention_cycles == 12);
    REQUIRE(s->generators.size() == 1);
    CHECK(s->generators[0].period_ms == 5000);
    CHECK(s->generators[0].body == "set_led=3");
    CHECK(s->generators[0].target.raw == "Node2");
}

TEST_CASE("move, down and up events") {
    auto s = parse_scenario(
        "node id=1 x=0 y=0 range=10\n"
        "at t=100 node=1 down\n"
        "at t=200 node=1 up\n"
        "at t=300 node=1 move x=7 y=9\n");
    REQUIRE(s);
    REQUIRE(s->script.size() == 3);
    CHECK(s->script[0].kind == ScriptEvent::Kind::Down);
    CHECK(s->script[1].kind == ScriptEvent::Kind::Up);
    CHECK(s->script[2].kind == ScriptEvent::Kind::Move);
    CHECK(s->script[2].x == 7);
    CHECK(s->script[2].y == 9);
}

TEST_CASE("duplicate node names are rejected with the line number") {
    auto s = parse_scenario(
        "node id=1 x=0 y=0 range=10\n"
        "node id=1 x=5 y=0 range=10\n");
    REQUIRE_FALSE(s);
    CHECK(s.error().find("line 2") != std::string::npos);
    CHECK(s.error().find("duplicate") != std::string::npos);
}

TEST_CASE("dangling references are rejected") {
    auto s = parse_scenario(
        "node id=1 x=0 y=0 range=10\n"
        "at t=100 node=99 down\n");
    REQUIRE_FALSE(s);
    CHECK(s.error().find("line 2") != std::string::npos);
    CHECK(s.error().find("Node99") != std::string::npos);
}

TEST_CASE("non-numeric fields are rejected") {
    auto s = parse_scenario("node id=1 x=abc y=0 range=10\n");
    REQUIRE_FALSE(s);
    CHECK(s.error().find("line 1") != std::string::npos);
    CHECK(s.error().find("x") != std::string::npos);
}

TEST_CASE("unknown directives are errors") {
    auto s = parse_scenario("teleport node=1\n");
    REQUIRE_FALSE(s);
    CHECK(s.error().find("unknown directive") != std::string::npos);
}

TEST_CASE("comments and blank lines are ignored") {
    auto s = parse_scenario(
        "\n"
        "# a comment\n"
        "   # indented comment\n"
        "node id=1 x=0 y=0 range=10\n");
    REQUIRE(s);
    CHECK(s->nodes.size() == 1);
}
