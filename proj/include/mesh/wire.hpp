#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "mesh/result.hpp"

namespace mesh {

inline constexpr std::string_view kNodePrefix = "Node";
inline constexpr int kDefaultTtl = 8;
inline constexpr std::size_t kMaxBodyLength = 32;

// Mesh node identifier: "Node" followed by the module's decimal number.
struct NodeName {
    std::string raw;      // full rendering, e.g. "Node52126"
    uint32_t number = 0;  // the decimal part

    static NodeName from_number(uint32_t n);
    static Result<NodeName> parse(std::string_view text);

    bool operator==(const NodeName& other) const { return raw == other.raw; }
    auto operator<=>(const NodeName& other) const { return raw <=> other.raw; }
};

// Per-origin sequence number plus the originating module number.
struct MessageId {
    uint32_t seq = 0;
    uint32_t origin = 0;

    // "01N02": both halves zero-padded to at least two digits.
    std::string render() const;
    static Result<MessageId> parse(std::string_view text);

    bool operator==(const MessageId&) const = default;
};

struct Message {
    MessageId id;
    NodeName from;   // originator
    NodeName media;  // last transmitter
    NodeName to;     // addressee
    int ttl = 0;
    std::string body;
    uint32_t crc = 0;

    bool operator==(const Message&) const = default;
};

enum class ReplyStatus { Ok, Broken, Expired, Dubplicate };

std::string serialize_reply(ReplyStatus s);
Result<ReplyStatus> parse_reply(std::string_view line);

// CRC-32 (IEEE 802.3): reflected 0x04C11DB7, init and final xor 0xFFFFFFFF.
uint32_t crc32_ieee(std::string_view bytes);

// Checksum over from + to + media + id + body; ttl is not covered.
uint32_t compute_crc(const Message& m);
Message seal(Message m);
bool verify_crc(const Message& m);

// True iff body is printable ASCII without '|' and at most 32 chars.
bool valid_body(std::string_view body, std::string* reason = nullptr);

Result<Message> new_message(const NodeName& origin, uint32_t seq,
                            const NodeName& addressee, std::string_view body);

// "MSG:01N02|Node1/Node3/Node2|8|TESTTESTTEST|<8 hex digits>"
std::string serialize(const Message& m);
Result<Message> parse(std::string_view line);

// "Node1 -> Node3 -> Node2 (8) TESTTESTTEST"
std::string render_path(const Message& m);

}  // namespace mesh
