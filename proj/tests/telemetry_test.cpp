#include <random>
#include <sstream>

#include "doctest.h"
#include "mesh/telemetry.hpp"

using namespace mesh;

namespace {

EventRecord rec(int64_t t, uint32_t node, EventKind kind,
                std::optional<MessageId> msg = std::nullopt,
                std::string detail = "") {
    return EventRecord{t, NodeName::from_number(node), kind, msg,
                       std::move(detail)};
}

}  // namespace

TEST_CASE("record accepts non-decreasing time and rejects regression") {
    EventLog log;
    log.record(rec(0, 1, EventKind::NodeUp));
    log.record(rec(0, 2, EventKind::NodeUp));
    log.record(rec(100, 1, EventKind::Originated, MessageId{1, 1}, "to=Node2"));
    CHECK_THROWS_AS(log.record(rec(50, 1, EventKind::Console)),
                    std::logic_error);
    CHECK(log.size() == 3);
}

TEST_CASE("summarize: single delivery") {
    EventLog log;
    log.record(rec(0, 1, EventKind::NodeUp));
    log.record(rec(0, 2, EventKind::NodeUp));
    log.record(rec(0, 1, EventKind::Originated, MessageId{1, 1}, "to=Node2"));
    log.record(rec(600, 1, EventKind::Transmitted, MessageId{1, 1}, "to=Node2"));
    log.record(rec(1200, 2, EventKind::Delivered, MessageId{1, 1}, "ttl=7"));
    Metrics m = summarize(log);
    CHECK(m.delivery_ratio == doctest::Approx(1.0));
    CHECK(m.originated == 1);
    CHECK(m.delivered == 1);
    REQUIRE(m.latency);
    CHECK(m.latency->min_ms == 1200);
    CHECK(m.latency->mean_ms == doctest::Approx(1200));
    CHECK(m.latency->max_ms == 1200);
    CHECK(m.transmissions == 1);
    CHECK(m.hops.at(1) == 1);
}

TEST_CASE("summarize: later duplicates do not change the first latency") {
    EventLog log;
    log.record(rec(0, 1, EventKind::NodeUp));
    log.record(rec(0, 2, EventKind::NodeUp));
    log.record(rec(0, 1, EventKind::Originated, MessageId{1, 1}, "to=Node2"));
    log.record(rec(1000, 2, EventKind::Delivered, MessageId{1, 1}, "ttl=8"));
    log.record(rec(2000, 2, EventKind::ReceivedDuplicate, MessageId{1, 1}));
    log.record(rec(3000, 2, EventKind::Delivered, MessageId{1, 1}, "ttl=7"));
    Metrics m = summarize(log);
    REQUIRE(m.latency);
    CHECK(m.latency->max_ms == 1000);
    CHECK(m.duplicates == 1);
    CHECK(m.hops.at(0) == 1);
    CHECK(m.hops.count(1) == 0);
}

TEST_CASE("summarize: messages to nonexistent nodes are not owed") {
    EventLog log;
    log.record(rec(0, 1, EventKind::NodeUp));
    log.record(rec(0, 1, EventKind::Originated, MessageId{1, 1}, "to=Node999"));
    Metrics m = summarize(log);
    CHECK(m.originated == 0);
    CHECK(m.delivered == 0);
    CHECK(m.delivery_ratio == doctest::Approx(1.0));
}

TEST_CASE("write/read round-trip preserves every field") {
    EventLog log;
    log.record(rec(0, 1, EventKind::NodeUp));
    log.record(rec(10, 1, EventKind::Console, std::nullopt,
                   "line with \"quotes\" and \\slashes\\ and\nnewline"));
    log.record(rec(10, 2, EventKind::Originated, MessageId{3, 14754480},
                   "to=Node52126"));
    log.record(rec(25, 2, EventKind::QueueOverflow, MessageId{3, 14754480},
                   "to_send per-queue limit"));

    std::string text = log_to_string(log);
    std::istringstream in(text);
    auto back = read_log(in);
    REQUIRE(back);
    REQUIRE(back->size() == log.size());
    for (std::size_t i = 0; i < log.size(); ++i)
        CHECK(back->records()[i] == log.records()[i]);
    CHECK(log_to_string(*back) == text);
}

TEST_CASE("write/read round-trip on randomized logs") {
    std::mt19937 rng(5);
    const EventKind kinds[] = {EventKind::Originated, EventKind::Transmitted,
                               EventKind::Delivered, EventKind::Console,
                               EventKind::ReceivedBroken};
    EventLog log;
    int64_t t = 0;
    for (int i = 0; i < 300; ++i) {
        t += rng() % 50;
        std::optional<MessageId> id;
        if (rng() % 2)
            id = MessageId{static_cast<uint32_t>(rng() % 100),
                           static_cast<uint32_t>(rng() % 100)};
        std::string detail;
        for (unsigned j = 0; j < rng() % 20; ++j)
            detail += static_cast<char>(0x20 + rng() % 95);
        log.record(rec(t, 1 + rng() % 5, kinds[rng() % 5], id, detail));
    }
    std::istringstream in(log_to_string(log));
    auto back = read_log(in);
    REQUIRE(back);
    REQUIRE(back->size() == log.size());
    for (std::size_t i = 0; i < log.size(); ++i)
        CHECK(back->records()[i] == log.records()[i]);
}

TEST_CASE("read_log reports the offending line") {
    std::istringstream in(
        "t=0 node=Node1 kind=node_up detail=\"\"\n"
        "node=Node1 kind=console detail=\"missing t\"\n");
    auto r = read_log(in);
    REQUIRE_FALSE(r);
    CHECK(r.error().find("line 2") != std::string::npos);
}

TEST_CASE("empty log writes an empty file") {
    EventLog log;
    CHECK(log_to_string(log).empty());
    std::istringstream in("");
    auto back = read_log(in);
    REQUIRE(back);
    CHECK(back->size() == 0);
}

TEST_CASE("summarize is a pure function of the log") {
    EventLog log;
    log.record(rec(0, 1, EventKind::NodeUp));
    log.record(rec(0, 1, EventKind::Originated, MessageId{1, 1}, "to=Node1"));
    log.record(rec(500, 1, EventKind::Delivered, MessageId{1, 1}, "ttl=8"));
    Metrics a = summarize(log);
    Metrics b = summarize(log);
    CHECK(format_metrics(a) == format_metrics(b));
}
