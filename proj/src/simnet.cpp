#include "mesh/simnet.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace mesh {

namespace {

EventKind to_event_kind(NodeEventKind kind) {
    switch (kind) {
        case NodeEventKind::Originated: return EventKind::Originated;
        case NodeEventKind::Transmitted: return EventKind::Transmitted;
        case NodeEventKind::ReceivedOk: return EventKind::ReceivedOk;
        case NodeEventKind::ReceivedDuplicate:
            return EventKind::ReceivedDuplicate;
        case NodeEventKind::ReceivedBroken: return EventKind::ReceivedBroken;
        case NodeEventKind::ReceivedExpired: return EventKind::ReceivedExpired;
        case NodeEventKind::Delivered: return EventKind::Delivered;
        case NodeEventKind::Forwarded: return EventKind::Forwarded;
        case NodeEventKind::QueueOverflow: return EventKind::QueueOverflow;
        case NodeEventKind::Console: return EventKind::Console;
    }
    return EventKind::Console;
}

bool in_range(const SimNode& a, const SimNode& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double r = std::min(a.range, b.range);
    return dx * dx + dy * dy <= r * r;
}

// Per-node view of the medium handed to Node::run_cycle.
class WorldRadio final : public RadioPort {
public:
    WorldRadio(World& world, NodeName self)
        : world_(world), self_(std::move(self)) {}

    std::vector<NodeName> scan() override { return world_.scan(self_); }
    std::optional<std::string> exchange(const NodeName& dst,
                                        const std::string& payload) override {
        return world_.exchange(self_, dst, payload);
    }

private:
    World& world_;
    NodeName self_;
};

}  // namespace

World::World(NodeConfig config, LinkParams link, uint64_t seed)
    : config_(config), link_(link), rng_(seed) {}

std::unique_ptr<Node> World::make_node(const NodeName& name) {
    auto node = std::make_unique<Node>(name, config_);
    node->on_event = [this, name](const NodeEvent& e) {
        log_.record(EventRecord{clock_, name, to_event_kind(e.kind), e.msg,
                                e.detail});
    };
    return node;
}

void World::add_node(const NodeName& name, double x, double y, double range) {
    if (nodes_.count(name))
        throw std::invalid_argument("duplicate node: " + name.raw);
    SimNode sim;
    sim.node = make_node(name);
    sim.x = x;
    sim.y = y;
    sim.range = range;
    nodes_.emplace(name, std::move(sim));
}

void World::add_script_event(ScriptEvent e) {
    if (!nodes_.count(e.node))
        throw std::invalid_argument("script references unknown node: " +
                                    e.node.raw);
    script_.push_back(std::move(e));
}

void World::add_generator(TrafficGenerator g) {
    if (!nodes_.count(g.node))
        throw std::invalid_argument("generator references unknown node: " +
                                    g.node.raw);
    generators_.push_back(std::move(g));
}

std::vector<NodeName> World::scan(const NodeName& who) const {
    std::vector<NodeName> visible;
    const SimNode* self = find(who);
    if (!self || !self->up) return visible;
    for (const auto& [name, sim] : nodes_) {
        if (name == who || !sim.up) continue;
        if (in_range(*self, sim)) visible.push_back(name);
    }
    return visible;  // map iteration order is already name order
}

std::optional<std::string> World::exchange(const NodeName& src,
                                           const NodeName& dst,
                                           const std::string& payload) {
    clock_ += link_.latency_ms;
    SimNode* s = find(src);
    SimNode* d = find(dst);
    if (!s || !d || !s->up || !d->up || !in_range(*s, *d)) return std::nullopt;
    // The corruption fate of the frame is decided before the loss draw so
    // a frame consumes the same draws whether or not it is dropped.
    const bool corrupted = rng_.next_unit() < link_.corrupt;
    if (rng_.next_unit() < link_.loss) return std::nullopt;

    std::string delivered = payload;
    if (corrupted) {
        // Mutate one body character, keeping the line parseable so the
        // crc check, not the parser, rejects it.
        auto msg = parse(payload);
        if (msg && !msg->body.empty()) {
            std::size_t bars = 0, body_start = 0;
            for (std::size_t i = 0; i < delivered.size(); ++i) {
                if (delivered[i] == '|' && ++bars == 3) {
                    body_start = i + 1;
                    break;
                }
            }
            std::size_t idx =
                body_start + rng_.next_below(
                                 static_cast<uint32_t>(msg->body.size()));
            char replacement;
            do {
                replacement = static_cast<char>(0x20 + rng_.next_below(95));
            } while (replacement == '|' || replacement == delivered[idx]);
            delivered[idx] = replacement;
        }
    }
    return d->node->handle_request(delivered);
}

void World::apply_event(const ScriptEvent& e) {
    SimNode* sim = find(e.node);
    if (!sim) return;
    switch (e.kind) {
        case ScriptEvent::Kind::Serial:
            sim->pending_serial.push_back(e.line);
            break;
        case ScriptEvent::Kind::Move:
            sim->x = e.x;
            sim->y = e.y;
            break;
        case ScriptEvent::Kind::Down:
            sim->up = false;
            sim->pending_inbox.clear();
            log_.record(EventRecord{clock_, e.node, EventKind::NodeDown,
                                    std::nullopt, ""});
            break;
        case ScriptEvent::Kind::Up:
            // Reboot: fresh node, empty queues, sequence counter reset.
            sim->node = make_node(e.node);
            sim->up = true;
            sim->pending_inbox.clear();
            sim->pending_serial.clear();
            log_.record(EventRecord{clock_, e.node, EventKind::NodeUp,
                                    std::nullopt, ""});
            break;
    }
}

void World::ensure_started() {
    if (started_) return;
    started_ = true;
    std::stable_sort(script_.begin(), script_.end(),
                     [](const ScriptEvent& a, const ScriptEvent& b) {
                         return a.at_ms < b.at_ms;
                     });
    for (const auto& [name, sim] : nodes_)
        if (sim.up)
            log_.record(
                EventRecord{clock_, name, EventKind::NodeUp, std::nullopt, ""});
}

void World::step() {
    ensure_started();

    while (next_event_ < script_.size() &&
           script_[next_event_].at_ms <= clock_)
        apply_event(script_[next_event_++]);

    for (TrafficGenerator& g : generators_) {
        while (static_cast<int64_t>(g.fired + 1) * g.period_ms <= clock_) {
            ++g.fired;
            SimNode* sim = find(g.node);
            if (sim && sim->up)
                sim->pending_serial.push_back(g.target.raw + "@" + g.body);
        }
    }

    // Serial input is consumed on arrival, so origination timestamps
    // predate the listen period the command then waits out.
    for (auto& [name, sim] : nodes_) {
        if (!sim.up) continue;
        for (const std::string& line : std::exchange(sim.pending_serial, {}))
            sim.node->handle_serial(line);
    }

    // Listen/AP period passes before anyone transmits.
    clock_ += config_.cycle_period_ms;

    for (auto& [name, sim] : nodes_) {
        if (!sim.up) continue;
        auto inbox = std::exchange(sim.pending_inbox, {});
        WorldRadio radio(*this, name);
        sim.node->run_cycle(radio, inbox, {});
    }

    clock_ += 2 * config_.mode_switch_delay_ms;
}

Metrics World::run(int64_t duration_ms) {
    while (clock_ < duration_ms) step();
    return metrics();
}

Metrics World::metrics() const {
    Metrics m = summarize(log_);
    for (const auto& [name, sim] : nodes_)
        m.queue_high_water[name.raw] = {sim.node->to_send().high_water(),
                                        sim.node->sended().high_water()};
    return m;
}

SimNode* World::find(const NodeName& name) {
    auto it = nodes_.find(name);
    return it == nodes_.end() ? nullptr : &it->second;
}

const SimNode* World::find(const NodeName& name) const {
    auto it = nodes_.find(name);
    return it == nodes_.end() ? nullptr : &it->second;
}

}  // namespace mesh
