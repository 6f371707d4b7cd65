#include "mesh/wire.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <vector>

namespace mesh {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

bool parse_u32(std::string_view s, uint32_t& out) {
    if (!all_digits(s)) return false;
    uint64_t v = 0;
    for (char c : s) {
        v = v * 10 + static_cast<uint64_t>(c - '0');
        if (v > UINT32_MAX) return false;
    }
    out = static_cast<uint32_t>(v);
    return true;
}

std::string pad2(uint32_t v) {
    std::string s = std::to_string(v);
    if (s.size() < 2) s.insert(s.begin(), '0');
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

const std::array<uint32_t, 256>& crc_table() {
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    return table;
}

}  // namespace

NodeName NodeName::from_number(uint32_t n) {
    NodeName name;
    name.number = n;
    name.raw = std::string(kNodePrefix) + std::to_string(n);
    return name;
}

Result<NodeName> NodeName::parse(std::string_view text) {
    if (text.substr(0, kNodePrefix.size()) != kNodePrefix)
        return Result<NodeName>::err("node name must begin with \"Node\": '" +
                                     std::string(text) + "'");
    std::string_view digits = text.substr(kNodePrefix.size());
    if (digits.empty() || digits.size() > 10 || !all_digits(digits))
        return Result<NodeName>::err("node number must be 1-10 decimal digits: '" +
                                     std::string(text) + "'");
    if (digits.size() > 1 && digits.front() == '0')
        return Result<NodeName>::err("node number must not have leading zeros: '" +
                                     std::string(text) + "'");
    uint32_t n = 0;
    if (!parse_u32(digits, n))
        return Result<NodeName>::err("node number out of range: '" +
                                     std::string(text) + "'");
    NodeName name;
    name.raw = std::string(text);
    name.number = n;
    return Result<NodeName>::ok(std::move(name));
}

std::string MessageId::render() const {
    return pad2(seq) + "N" + pad2(origin);
}

Result<MessageId> MessageId::parse(std::string_view text) {
    std::size_t pos = text.find('N');
    if (pos == std::string_view::npos)
        return Result<MessageId>::err("message id missing 'N' separator: '" +
                                      std::string(text) + "'");
    MessageId id;
    if (!parse_u32(text.substr(0, pos), id.seq) ||
        !parse_u32(text.substr(pos + 1), id.origin))
        return Result<MessageId>::err("message id parts must be decimal: '" +
                                      std::string(text) + "'");
    return Result<MessageId>::ok(id);
}

std::string serialize_reply(ReplyStatus s) {
    switch (s) {
        case ReplyStatus::Ok: return "ST:OK";
        case ReplyStatus::Broken: return "ST:BROKEN";
        case ReplyStatus::Expired: return "ST:EXPIRED";
        case ReplyStatus::Dubplicate: return "ST:DUBPLICATE";
    }
    return "ST:BROKEN";
}

Result<ReplyStatus> parse_reply(std::string_view line) {
    if (line == "ST:OK") return Result<ReplyStatus>::ok(ReplyStatus::Ok);
    if (line == "ST:BROKEN") return Result<ReplyStatus>::ok(ReplyStatus::Broken);
    if (line == "ST:EXPIRED") return Result<ReplyStatus>::ok(ReplyStatus::Expired);
    if (line == "ST:DUBPLICATE")
        return Result<ReplyStatus>::ok(ReplyStatus::Dubplicate);
    return Result<ReplyStatus>::err("unknown reply: '" + std::string(line) + "'");
}

uint32_t crc32_ieee(std::string_view bytes) {
    uint32_t crc = 0xFFFFFFFFu;
    const auto& table = crc_table();
    for (unsigned char c : bytes)
        crc = table[(crc ^ c) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

uint32_t compute_crc(const Message& m) {
    std::string bytes;
    bytes.reserve(m.from.raw.size() + m.to.raw.size() + m.media.raw.size() +
                  m.body.size() + 16);
    bytes += m.from.raw;
    bytes += m.to.raw;
    bytes += m.media.raw;
    bytes += m.id.render();
    bytes += m.body;
    return crc32_ieee(bytes);
}

Message seal(Message m) {
    m.crc = compute_crc(m);
    return m;
}

bool verify_crc(const Message& m) { return m.crc == compute_crc(m); }

bool valid_body(std::string_view body, std::string* reason) {
    if (body.size() > kMaxBodyLength) {
        if (reason) *reason = "body longer than 32 characters";
        return false;
    }
    for (char c : body) {
        if (c == '|') {
            if (reason) *reason = "body contains '|' delimiter";
            return false;
        }
        if (c < 0x20 || c > 0x7E) {
            if (reason) *reason = "body contains non-printable character";
            return false;
        }
    }
    return true;
}

Result<Message> new_message(const NodeName& origin, uint32_t seq,
                            const NodeName& addressee, std::string_view body) {
    std::string reason;
    if (!valid_body(body, &reason)) return Result<Message>::err(reason);
    Message m;
    m.id = MessageId{seq, origin.number};
    m.from = origin;
    m.media = origin;
    m.to = addressee;
    m.ttl = kDefaultTtl;
    m.body = std::string(body);
    return Result<Message>::ok(seal(std::move(m)));
}

std::string serialize(const Message& m) {
    char crc_hex[9];
    std::snprintf(crc_hex, sizeof crc_hex, "%08x", m.crc);
    std::string line = "MSG:";
    line += m.id.render();
    line += '|';
    line += m.from.raw;
    line += '/';
    line += m.media.raw;
    line += '/';
    line += m.to.raw;
    line += '|';
    line += std::to_string(m.ttl);
    line += '|';
    line += m.body;
    line += '|';
    line += crc_hex;
    return line;
}

Result<Message> parse(std::string_view line) {
    if (line.substr(0, 4) != "MSG:")
        return Result<Message>::err("not a MSG line");
    auto parts = split(line.substr(4), '|');
    if (parts.size() != 5)
        return Result<Message>::err("expected 5 '|'-separated segments, got " +
                                    std::to_string(parts.size()));

    auto id = MessageId::parse(parts[0]);
    if (!id) return Result<Message>::err(id.error());

    auto names = split(parts[1], '/');
    if (names.size() != 3)
        return Result<Message>::err("path segment has " +
                                    std::to_string(names.size()) +
                                    " names, expected 3");
    auto from = NodeName::parse(names[0]);
    if (!from) return Result<Message>::err(from.error());
    auto media = NodeName::parse(names[1]);
    if (!media) return Result<Message>::err(media.error());
    auto to = NodeName::parse(names[2]);
    if (!to) return Result<Message>::err(to.error());

    int ttl = 0;
    {
        std::string_view s = parts[2];
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), ttl);
        if (ec != std::errc() || p != s.data() + s.size() || ttl < -128 || ttl > 127)
            return Result<Message>::err("ttl segment is not a valid number: '" +
                                        std::string(s) + "'");
    }

    std::string reason;
    if (!valid_body(parts[3], &reason)) return Result<Message>::err(reason);

    std::string_view crc_s = parts[4];
    if (crc_s.empty() || crc_s.size() > 8)
        return Result<Message>::err("crc segment must be 1-8 hex digits");
    uint32_t crc = 0;
    {
        auto [p, ec] = std::from_chars(crc_s.data(), crc_s.data() + crc_s.size(),
                                       crc, 16);
        if (ec != std::errc() || p != crc_s.data() + crc_s.size())
            return Result<Message>::err("crc segment is not hexadecimal: '" +
                                        std::string(crc_s) + "'");
    }

    Message m;
    m.id = *id;
    m.from = *from;
    m.media = *media;
    m.to = *to;
    m.ttl = ttl;
    m.body = std::string(parts[3]);
    m.crc = crc;
    return Result<Message>::ok(std::move(m));
}

std::string render_path(const Message& m) {
    return m.from.raw + " -> " + m.media.raw + " -> " + m.to.raw + " (" +
           std::to_string(m.ttl) + ") " + m.body;
}

}  // namespace mesh
