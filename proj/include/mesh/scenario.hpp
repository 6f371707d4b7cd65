#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "mesh/result.hpp"
#include "mesh/simnet.hpp"

namespace mesh {

// Everything needed to build and run one World, parsed from a
// line-oriented scenario file.
struct Scenario {
    struct NodeSpec {
        NodeName name;
        double x = 0, y = 0, range = 0;
    };

    std::vector<NodeSpec> nodes;
    LinkParams link;
    std::vector<ScriptEvent> script;
    std::vector<TrafficGenerator> generators;
    int64_t duration_ms = 60000;
    uint64_t seed = 42;
    NodeConfig config;
};

// Directives, one per line ('#' lines are comments):
//   node id=<digits> x=<m> y=<m> range=<m>
//   radio loss=<p> corrupt=<p> latency=<ms>
//   at t=<ms> node=<digits> serial="<line>"
//   at t=<ms> node=<digits> move x=<m> y=<m>
//   at t=<ms> node=<digits> down
//   at t=<ms> node=<digits> up
//   traffic node=<digits> target=<digits> period=<ms> body="<text>"
//   config ttl=<n> cycle=<ms> retention=<cycles>
//   run duration=<ms> seed=<n>
Result<Scenario> parse_scenario(std::string_view text);

std::unique_ptr<World> build_world(const Scenario& s);

}  // namespace mesh
