#include <random>
#include <string>

#include "doctest.h"
#include "mesh/wire.hpp"

using namespace mesh;

namespace {

// Independent bit-by-bit CRC-32 reference (reflected 0x04C11DB7, init and
// final xor 0xFFFFFFFF). Kept free of the table-driven implementation.
uint32_t crc32_reference(std::string_view bytes) {
    uint32_t crc = 0xFFFFFFFFu;
    for (unsigned char byte : bytes) {
        crc ^= byte;
        for (int bit = 0; bit < 8; ++bit) {
            if (crc & 1u)
                crc = (crc >> 1) ^ 0xEDB88320u;
            else
                crc >>= 1;
        }
    }
    return crc ^ 0xFFFFFFFFu;
}

NodeName node(uint32_t n) { return NodeName::from_number(n); }

Message fixed_message() {
    auto m = new_message(node(1), 1, node(2), "TESTTESTTEST");
    REQUIRE(m);
    Message msg = *m;
    msg.media = node(3);
    return seal(msg);
}

}  // namespace

TEST_CASE("crc32 matches the standard check value") {
    CHECK(crc32_ieee("123456789") == 0xCBF43926u);
    CHECK(crc32_reference("123456789") == 0xCBF43926u);
}

TEST_CASE("crc32 agrees with the bit-by-bit reference on random inputs") {
    std::mt19937 rng(7);
    for (int i = 0; i < 1000; ++i) {
        std::string data(rng() % 64, '\0');
        for (char& c : data) c = static_cast<char>(rng() % 256);
        CAPTURE(i);
        CHECK(crc32_ieee(data) == crc32_reference(data));
    }
}

TEST_CASE("node name parsing") {
    auto ok = NodeName::parse("Node52126");
    REQUIRE(ok);
    CHECK(ok->number == 52126);
    CHECK(ok->raw == "Node52126");
    CHECK(NodeName::from_number(52126) == *ok);

    CHECK_FALSE(NodeName::parse("node52126"));
    CHECK_FALSE(NodeName::parse("Node"));
    CHECK_FALSE(NodeName::parse("Node05"));
    CHECK_FALSE(NodeName::parse("Node12a"));
    CHECK_FALSE(NodeName::parse("Node99999999999"));  // > 10 digits
    CHECK_FALSE(NodeName::parse("Node4294967296"));   // > uint32
    CHECK(NodeName::parse("Node0"));
}

TEST_CASE("message id renders zero-padded and round-trips") {
    MessageId id{1, 2};
    CHECK(id.render() == "01N02");
    auto back = MessageId::parse(id.render());
    REQUIRE(back);
    CHECK(*back == id);

    MessageId big{123, 14754480};
    CHECK(big.render() == "123N14754480");
    CHECK(*MessageId::parse(big.render()) == big);

    CHECK_FALSE(MessageId::parse("0102"));
    CHECK_FALSE(MessageId::parse("xNy"));
}

TEST_CASE("new_message seals with defaults") {
    auto m = new_message(node(14754480), 1, node(52126), "set_led=6");
    REQUIRE(m);
    CHECK(m->from == m->media);
    CHECK(m->ttl == 8);
    CHECK(verify_crc(*m));
    CHECK(render_path(*m) ==
          "Node14754480 -> Node14754480 -> Node52126 (8) set_led=6");

    CHECK_FALSE(new_message(node(1), 1, node(2), "x|y"));
    CHECK_FALSE(new_message(node(1), 1, node(2), "line\nbreak"));
    CHECK_FALSE(new_message(node(1), 1, node(2),
                            "123456789012345678901234567890123"));  // 33 chars

    auto empty = new_message(node(1), 1, node(2), "");
    REQUIRE(empty);
    CHECK(empty->body.empty());
    CHECK(empty->ttl == 8);
    CHECK(empty->media == empty->from);
}

TEST_CASE("serialize emits the paper's line format") {
    Message m = fixed_message();
    char expected_crc[9];
    std::snprintf(expected_crc, sizeof expected_crc, "%08x", m.crc);
    CHECK(serialize(m) == std::string("MSG:01N01|Node1/Node3/Node2|8|"
                                      "TESTTESTTEST|") +
                              expected_crc);

    Message zero = m;
    zero.crc = 0;
    CHECK(serialize(zero).substr(serialize(zero).size() - 8) == "00000000");
}

TEST_CASE("parse accepts the paper's test line without crc verification") {
    auto m = parse("MSG:01N02|Node1/Node3/Node2|8|TESTTESTTEST|0000");
    REQUIRE(m);
    CHECK(m->id == MessageId{1, 2});
    CHECK(m->from.raw == "Node1");
    CHECK(m->media.raw == "Node3");
    CHECK(m->to.raw == "Node2");
    CHECK(m->ttl == 8);
    CHECK(m->body == "TESTTESTTEST");
    CHECK(m->crc == 0);
    // The placeholder checksum is not a valid seal of these fields.
    CHECK_FALSE(verify_crc(*m));
}

TEST_CASE("parse rejects malformed lines") {
    CHECK_FALSE(parse("ST:OK"));
    CHECK_FALSE(parse("MSG:01N02|Node1/Node3|8|x|0000"));       // 2 path names
    CHECK_FALSE(parse("MSG:01N02|Node1/Node3/Node2|q|x|0000")); // bad ttl
    CHECK_FALSE(parse("MSG:01N02|Node1/Node3/Node2|8|x|zz"));   // bad crc
    CHECK_FALSE(parse("MSG:01N02|Node1/Node3/Node2|8|x"));      // 4 segments
    CHECK_FALSE(parse("MSG:01N02|Node1/Node3/Node2|8|x|0|y"));  // 6 segments
    auto err = parse("MSG:01N02|Node1/Node3|8|x|0000");
    CHECK(err.error().find("path segment") != std::string::npos);
}

TEST_CASE("round-trip: parse(serialize(m)) == m on random messages") {
    std::mt19937 rng(11);
    const char charset[] =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 _=.";
    for (int i = 0; i < 200; ++i) {
        std::string body(rng() % 33, ' ');
        for (char& c : body) c = charset[rng() % (sizeof charset - 1)];
        auto m = new_message(node(rng() % 100000), rng() % 1000,
                             node(rng() % 100000), body);
        REQUIRE(m);
        Message msg = *m;
        msg.media = node(rng() % 100000);
        msg.ttl = static_cast<int>(rng() % 9);
        msg = seal(msg);
        auto back = parse(serialize(msg));
        REQUIRE(back);
        CHECK(*back == msg);
        CHECK(serialize(*back) == serialize(msg));
    }
}

TEST_CASE("crc ignores ttl but covers every body character") {
    Message m = fixed_message();
    Message other_ttl = m;
    other_ttl.ttl = 0;
    CHECK(compute_crc(m) == compute_crc(other_ttl));

    // Every single-character substitution must break the seal.
    for (std::size_t i = 0; i < m.body.size(); ++i) {
        for (int c = 0x20; c <= 0x7E; ++c) {
            if (c == '|' || c == m.body[i]) continue;
            Message mutated = m;
            mutated.body[i] = static_cast<char>(c);
            CHECK_FALSE(verify_crc(mutated));
        }
    }
}

TEST_CASE("seal then verify") {
    Message m = fixed_message();
    CHECK(verify_crc(m));
    Message resealed = seal(m);
    CHECK(resealed == m);
}

TEST_CASE("reply status bijection") {
    const ReplyStatus all[] = {ReplyStatus::Ok, ReplyStatus::Broken,
                               ReplyStatus::Expired, ReplyStatus::Dubplicate};
    const char* wire[] = {"ST:OK", "ST:BROKEN", "ST:EXPIRED", "ST:DUBPLICATE"};
    for (int i = 0; i < 4; ++i) {
        CHECK(serialize_reply(all[i]) == wire[i]);
        auto parsed = parse_reply(wire[i]);
        REQUIRE(parsed);
        CHECK(*parsed == all[i]);
    }
    CHECK_FALSE(parse_reply("ST:NOPE"));
    CHECK_FALSE(parse_reply("OK"));
}

TEST_CASE("render_path formatting") {
    Message m = fixed_message();
    m.ttl = 0;
    CHECK(render_path(m) == "Node1 -> Node3 -> Node2 (0) TESTTESTTEST");
}
