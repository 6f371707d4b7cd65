#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mesh/node.hpp"
#include "mesh/telemetry.hpp"
#include "mesh/wire.hpp"

namespace mesh {

struct LinkParams {
    double loss = 0.0;     // probability an exchange fails outright
    double corrupt = 0.0;  // probability of one-character body corruption
    int latency_ms = 10;   // clock advance per exchange
};

struct ScriptEvent {
    enum class Kind { Serial, Move, Down, Up };
    int64_t at_ms = 0;
    Kind kind = Kind::Serial;
    NodeName node;
    std::string line;  // Serial
    double x = 0, y = 0;  // Move
};

struct TrafficGenerator {
    NodeName node;
    NodeName target;
    int64_t period_ms = 5000;
    std::string body;
    uint64_t fired = 0;
};

// Deterministic uniform draws; std::mt19937 output words only, so the
// stream is identical across standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(static_cast<uint32_t>(seed)) {}

    double next_unit() {
        return static_cast<double>(engine_()) / 4294967296.0;
    }
    uint32_t next_below(uint32_t n) { return n == 0 ? 0 : engine_() % n; }

private:
    std::mt19937 engine_;
};

struct SimNode {
    std::unique_ptr<Node> node;
    double x = 0, y = 0;
    double range = 0;
    bool up = true;
    std::vector<std::string> pending_inbox;
    std::vector<std::string> pending_serial;
};

// Round-based world model standing in for the radio medium.
// Deterministic: identical (scenario, seed) pairs replay identically.
class World {
public:
    World(NodeConfig config, LinkParams link, uint64_t seed);

    void add_node(const NodeName& name, double x, double y, double range);
    void add_script_event(ScriptEvent e);
    void add_generator(TrafficGenerator g);

    // Discoverable peers of `who`: other up nodes within the smaller of
    // the two radii, sorted by name.
    std::vector<NodeName> scan(const NodeName& who) const;

    // One point-to-point attempt: may be lost or corrupted; otherwise the
    // destination handles the request synchronously and its reply is
    // returned. Advances the clock by the link latency.
    std::optional<std::string> exchange(const NodeName& src,
                                        const NodeName& dst,
                                        const std::string& payload);

    // One round: due script events and generator firings, then the listen
    // period, one duty cycle per up node in name order, then the two mode
    // switch delays.
    void step();

    // Steps until the clock reaches duration_ms.
    Metrics run(int64_t duration_ms);

    int64_t clock_ms() const { return clock_; }
    const EventLog& log() const { return log_; }
    Metrics metrics() const;

    SimNode* find(const NodeName& name);
    const SimNode* find(const NodeName& name) const;
    const std::map<NodeName, SimNode>& nodes() const { return nodes_; }

private:
    void apply_event(const ScriptEvent& e);
    std::unique_ptr<Node> make_node(const NodeName& name);
    void ensure_started();

    NodeConfig config_;
    LinkParams link_;
    Rng rng_;
    int64_t clock_ = 0;
    std::map<NodeName, SimNode> nodes_;
    std::vector<ScriptEvent> script_;
    std::size_t next_event_ = 0;
    std::vector<TrafficGenerator> generators_;
    EventLog log_;
    bool started_ = false;
};

}  // namespace mesh
