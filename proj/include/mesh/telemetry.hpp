#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mesh/result.hpp"
#include "mesh/wire.hpp"

namespace mesh {

enum class EventKind {
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
    NodeDown,
    NodeUp,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct EventRecord {
    int64_t t_ms = 0;
    NodeName node;
    EventKind kind = EventKind::Console;
    std::optional<MessageId> msg;
    std::string detail;

    bool operator==(const EventRecord&) const = default;
};

// Append-only, time-ordered simulation log.
class EventLog {
public:
    // Throws std::logic_error on time regression.
    void record(EventRecord e);

    const std::vector<EventRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

private:
    std::vector<EventRecord> records_;
};

struct LatencyStats {
    int64_t min_ms = 0;
    double mean_ms = 0;
    int64_t max_ms = 0;
    int64_t p95_ms = 0;
};

struct Metrics {
    double delivery_ratio = 1.0;  // no addressed traffic means nothing owed
    std::size_t originated = 0;   // ids addressed to existing nodes
    std::size_t delivered = 0;    // unique delivered ids
    std::optional<LatencyStats> latency;
    std::size_t duplicates = 0;
    std::size_t transmissions = 0;
    std::map<int, std::size_t> hops;  // 8 - delivered ttl, first deliveries
    // Filled by the simulator from queue state: name -> (to_send, sended).
    std::map<std::string, std::pair<std::size_t, std::size_t>> queue_high_water;
};

Metrics summarize(const EventLog& log);

// One record per line: t=.. node=.. kind=.. [msg=..] detail="..".
void write_log(const EventLog& log, std::ostream& out);
std::string log_to_string(const EventLog& log);
Result<EventLog> read_log(std::istream& in);

std::string format_metrics(const Metrics& m);

}  // namespace mesh
