#include "mesh/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mesh {

namespace {

constexpr std::pair<EventKind, std::string_view> kKindNames[] = {
    {EventKind::Originated, "originated"},
    {EventKind::Transmitted, "transmitted"},
    {EventKind::ReceivedOk, "received_ok"},
    {EventKind::ReceivedDuplicate, "received_duplicate"},
    {EventKind::ReceivedBroken, "received_broken"},
    {EventKind::ReceivedExpired, "received_expired"},
    {EventKind::Delivered, "delivered"},
    {EventKind::Forwarded, "forwarded"},
    {EventKind::QueueOverflow, "queue_overflow"},
    {EventKind::Console, "console"},
    {EventKind::NodeDown, "node_down"},
    {EventKind::NodeUp, "node_up"},
};

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

// Extracts a key=value token's value from a detail string, if present.
std::optional<std::string> detail_value(std::string_view detail,
                                        std::string_view key) {
    std::string token = std::string(key) + "=";
    std::size_t pos = 0;
    while (pos < detail.size()) {
        std::size_t end = detail.find(' ', pos);
        if (end == std::string_view::npos) end = detail.size();
        std::string_view word = detail.substr(pos, end - pos);
        if (word.substr(0, token.size()) == token)
            return std::string(word.substr(token.size()));
        pos = end + 1;
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(EventKind kind) {
    for (auto [k, name] : kKindNames)
        if (k == kind) return name;
    return "console";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
    for (auto [k, name] : kKindNames)
        if (name == s) return k;
    return std::nullopt;
}

void EventLog::record(EventRecord e) {
    if (!records_.empty() && e.t_ms < records_.back().t_ms)
        throw std::logic_error("event log time regression: " +
                               std::to_string(e.t_ms) + " after " +
                               std::to_string(records_.back().t_ms));
    records_.push_back(std::move(e));
}

Metrics summarize(const EventLog& log) {
    Metrics m;
    std::set<std::string> known_nodes;
    for (const EventRecord& r : log.records()) known_nodes.insert(r.node.raw);

    struct IdStats {
        std::optional<int64_t> originated_at;
        std::optional<int64_t> first_delivered_at;
        std::optional<int> delivered_ttl;
        bool counted = false;  // addressed to an existing node
    };
    std::map<std::string, IdStats> ids;

    for (const EventRecord& r : log.records()) {
        switch (r.kind) {
            case EventKind::Originated: {
                if (!r.msg) break;
                IdStats& s = ids[r.msg->render()];
                if (!s.originated_at) s.originated_at = r.t_ms;
                auto to = detail_value(r.detail, "to");
                if (to && known_nodes.count(*to)) s.counted = true;
                break;
            }
            case EventKind::Delivered: {
                if (!r.msg) break;
                IdStats& s = ids[r.msg->render()];
                if (!s.first_delivered_at) {
                    s.first_delivered_at = r.t_ms;
                    if (auto ttl = detail_value(r.detail, "ttl"))
                        s.delivered_ttl = std::stoi(*ttl);
                }
                break;
            }
            case EventKind::ReceivedDuplicate: ++m.duplicates; break;
            case EventKind::Transmitted: ++m.transmissions; break;
            default: break;
        }
    }

    std::vector<int64_t> latencies;
    for (const auto& [id, s] : ids) {
        if (s.counted) ++m.originated;
        if (s.first_delivered_at) {
            ++m.delivered;
            if (s.originated_at)
                latencies.push_back(*s.first_delivered_at - *s.originated_at);
            if (s.delivered_ttl) ++m.hops[kDefaultTtl - *s.delivered_ttl];
        }
    }
    m.delivery_ratio = m.originated == 0
                           ? 1.0
                           : static_cast<double>(m.delivered) /
                                 static_cast<double>(m.originated);

    if (!latencies.empty()) {
        std::sort(latencies.begin(), latencies.end());
        LatencyStats st;
        st.min_ms = latencies.front();
        st.max_ms = latencies.back();
        double sum = 0;
        for (int64_t v : latencies) sum += static_cast<double>(v);
        st.mean_ms = sum / static_cast<double>(latencies.size());
        std::size_t idx = static_cast<std::size_t>(
            std::ceil(0.95 * static_cast<double>(latencies.size())));
        st.p95_ms = latencies[idx == 0 ? 0 : idx - 1];
        m.latency = st;
    }
    return m;
}

void write_log(const EventLog& log, std::ostream& out) {
    for (const EventRecord& r : log.records()) {
        out << "t=" << r.t_ms << " node=" << r.node.raw
            << " kind=" << to_string(r.kind);
        if (r.msg) out << " msg=" << r.msg->render();
        out << " detail=\"" << escape(r.detail) << "\"\n";
    }
}

std::string log_to_string(const EventLog& log) {
    std::ostringstream out;
    write_log(log, out);
    return out.str();
}

Result<EventLog> read_log(std::istream& in) {
    EventLog log;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        return Result<EventLog>::err("line " + std::to_string(line_no) + ": " +
                                     why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;

        EventRecord rec;
        std::size_t pos = 0;
        bool have_t = false, have_node = false, have_kind = false,
             have_detail = false;
        while (pos < line.size()) {
            std::size_t eq = line.find('=', pos);
            if (eq == std::string::npos) return fail("expected key=value");
            std::string key = line.substr(pos, eq - pos);
            std::string value;
            if (key == "detail") {
                if (eq + 1 >= line.size() || line[eq + 1] != '"')
                    return fail("detail value must be quoted");
                std::size_t i = eq + 2;
                for (; i < line.size() && line[i] != '"'; ++i) {
                    if (line[i] == '\\' && i + 1 < line.size()) {
                        ++i;
                        if (line[i] == 'n') value += '\n';
                        else value += line[i];
                    } else {
                        value += line[i];
                    }
                }
                if (i >= line.size()) return fail("unterminated detail value");
                pos = i + 2;  // past closing quote and separator
                rec.detail = value;
                have_detail = true;
                continue;
            }
            std::size_t end = line.find(' ', eq + 1);
            if (end == std::string::npos) end = line.size();
            value = line.substr(eq + 1, end - eq - 1);
            pos = end + 1;
            if (key == "t") {
                try {
                    rec.t_ms = std::stoll(value);
                } catch (...) {
                    return fail("t is not a number: " + value);
                }
                have_t = true;
            } else if (key == "node") {
                auto name = NodeName::parse(value);
                if (!name) return fail(name.error());
                rec.node = *name;
                have_node = true;
            } else if (key == "kind") {
                auto kind = event_kind_from_string(value);
                if (!kind) return fail("unknown kind: " + value);
                rec.kind = *kind;
                have_kind = true;
            } else if (key == "msg") {
                auto id = MessageId::parse(value);
                if (!id) return fail(id.error());
                rec.msg = *id;
            } else {
                return fail("unknown field: " + key);
            }
        }
        if (!have_t) return fail("missing t field");
        if (!have_node) return fail("missing node field");
        if (!have_kind) return fail("missing kind field");
        if (!have_detail) return fail("missing detail field");
        try {
            log.record(std::move(rec));
        } catch (const std::logic_error& e) {
            return fail(e.what());
        }
    }
    return Result<EventLog>::ok(std::move(log));
}

std::string format_metrics(const Metrics& m) {
    std::ostringstream out;
    out << "delivery_ratio=" << m.delivery_ratio << "\n";
    out << "originated=" << m.originated << "\n";
    out << "delivered=" << m.delivered << "\n";
    if (m.latency) {
        out << "latency_min_ms=" << m.latency->min_ms << "\n";
        out << "latency_mean_ms=" << m.latency->mean_ms << "\n";
        out << "latency_max_ms=" << m.latency->max_ms << "\n";
        out << "latency_p95_ms=" << m.latency->p95_ms << "\n";
    }
    out << "duplicates=" << m.duplicates << "\n";
    out << "transmissions=" << m.transmissions << "\n";
    for (const auto& [hops, count] : m.hops)
        out << "hops_" << hops << "=" << count << "\n";
    for (const auto& [node, hw] : m.queue_high_water)
        out << "high_water_" << node << "=" << hw.first << "/" << hw.second
            << "\n";
    return out.str();
}

}  // namespace mesh
