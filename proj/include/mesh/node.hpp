#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mesh/store.hpp"
#include "mesh/wire.hpp"

namespace mesh {

struct NodeConfig {
    int ttl_default = kDefaultTtl;
    int32_t sended_retention_cycles = 30;
    std::size_t per_queue_cap = kPerQueueCap;
    std::size_t global_cap = kGlobalCap;
    int broken_retry_limit = 3;  // per neighbor per round
    int cycle_period_ms = 1000;
    int mode_switch_delay_ms = 100;
};

struct LedState {
    bool red = false;
    bool yellow = false;
    bool green = false;
    bool operator==(const LedState&) const = default;
};

// set_led code: bit0 red, bit1 yellow, bit2 green.
LedState led_from_code(int code);

// Abstract radio medium; implemented by the simulator.
class RadioPort {
public:
    virtual ~RadioPort() = default;
    virtual std::vector<NodeName> scan() = 0;
    // nullopt means link failure (no reply came back).
    virtual std::optional<std::string> exchange(const NodeName& dst,
                                                const std::string& payload) = 0;
};

enum class NodeEventKind {
    Originated,
    Transmitted,
    ReceivedOk,
    ReceivedDuplicate,
    ReceivedBroken,
    ReceivedExpired,
    Delivered,
    Forwarded,
    QueueOverflow,
    Console,
};

struct NodeEvent {
    NodeEventKind kind;
    std::optional<MessageId> msg;
    std::string detail;
};

struct CycleReport {
    std::vector<std::string> console;  // lines emitted during this cycle
    std::vector<std::string> replies;  // one ST: line per inbound request
    uint32_t sent = 0;
};

// One mesh node: the store-and-forward duty cycle, inbound request
// handling with the four ST: replies, relay/TTL logic, and the serial
// command interface.
class Node {
public:
    explicit Node(NodeName name, NodeConfig config = {});

    // Decision ladder: parse failure / bad crc -> ST:BROKEN; known id ->
    // ST:DUBPLICATE; ttl <= 0 -> ST:EXPIRED; addressed to me -> execute
    // and retain; otherwise enqueue a relayed copy. Always replies.
    std::string handle_request(const std::string& line);

    // "Node<digits>@<command>" enqueues a message; "this@<command>"
    // executes locally; anything else is a warning.
    void handle_serial(const std::string& line);

    void execute_command(const std::string& cmd);

    // Offers the head of to_send to every scanned neighbor; BROKEN is
    // retried, link failures skip the neighbor. Returns this round's
    // delivery count.
    uint32_t send_round(RadioPort& radio);

    // Migrates the head to sended when it was delivered at least once,
    // then ages the sended queue.
    void finish_round();

    CycleReport run_cycle(RadioPort& radio,
                          const std::vector<std::string>& inbound,
                          const std::vector<std::string>& serial);

    const NodeName& name() const { return name_; }
    const NodeConfig& config() const { return config_; }
    const LedState& led() const { return led_; }
    uint32_t seq() const { return seq_; }
    MessageQueue& to_send() { return to_send_; }
    const MessageQueue& to_send() const { return to_send_; }
    MessageQueue& sended() { return sended_; }
    const MessageQueue& sended() const { return sended_; }
    const std::vector<std::string>& console_log() const { return console_; }

    std::function<void(const NodeEvent&)> on_event;

private:
    void console(std::string line);
    void warn(const std::string& text);
    void emit(NodeEventKind kind, std::optional<MessageId> msg,
              std::string detail);

    NodeName name_;
    NodeConfig config_;
    uint32_t seq_ = 0;
    CapacityPool pool_;
    MessageQueue to_send_;
    MessageQueue sended_;
    LedState led_;
    std::vector<std::string> console_;
};

}  // namespace mesh
