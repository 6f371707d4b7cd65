#include "mesh/node.hpp"

namespace mesh {

namespace {

std::string led_console_line(const LedState& led) {
    if (!led.red && !led.yellow && !led.green) return "*All OFF";
    std::string names;
    auto append = [&](const char* name) {
        if (!names.empty()) names += " and ";
        names += name;
    };
    if (led.red) append("Red");
    if (led.yellow) append("Yellow");
    if (led.green) append("Green");
    return "*" + names + " ON";
}

std::string overflow_detail(AddResult r, const char* queue) {
    return std::string(queue) + " " +
           (r == AddResult::QueueFull ? "per-queue limit" : "global limit");
}

}  // namespace

LedState led_from_code(int code) {
    LedState led;
    led.red = (code & 1) != 0;
    led.yellow = (code & 2) != 0;
    led.green = (code & 4) != 0;
    return led;
}

Node::Node(NodeName name, NodeConfig config)
    : name_(std::move(name)),
      config_(config),
      pool_{config.global_cap, 0},
      to_send_(&pool_, config.per_queue_cap),
      sended_(&pool_, config.per_queue_cap) {}

void Node::console(std::string line) {
    console_.push_back(line);
    emit(NodeEventKind::Console, std::nullopt, std::move(line));
}

void Node::warn(const std::string& text) { console("![WARN] " + text); }

void Node::emit(NodeEventKind kind, std::optional<MessageId> msg,
                std::string detail) {
    if (on_event) on_event(NodeEvent{kind, msg, std::move(detail)});
}

std::string Node::handle_request(const std::string& line) {
    auto parsed = parse(line);
    if (!parsed) {
        emit(NodeEventKind::ReceivedBroken, std::nullopt, parsed.error());
        return serialize_reply(ReplyStatus::Broken);
    }
    const Message& m = *parsed;
    if (!verify_crc(m)) {
        emit(NodeEventKind::ReceivedBroken, m.id, "crc mismatch");
        return serialize_reply(ReplyStatus::Broken);
    }
    if (sended_.search(m.id) || to_send_.search(m.id)) {
        console(">[DUPLICATE:] " + render_path(m));
        emit(NodeEventKind::ReceivedDuplicate, m.id, "");
        return serialize_reply(ReplyStatus::Dubplicate);
    }
    if (m.ttl <= 0) {
        emit(NodeEventKind::ReceivedExpired, m.id, "");
        return serialize_reply(ReplyStatus::Expired);
    }
    if (m.to == name_) {
        console(">[MyMessage:] " + render_path(m));
        emit(NodeEventKind::ReceivedOk, m.id, "");
        emit(NodeEventKind::Delivered, m.id, "ttl=" + std::to_string(m.ttl));
        execute_command(m.body);
        // Retained only so later copies are recognized as duplicates.
        AddResult r = sended_.add(m, config_.sended_retention_cycles);
        if (r != AddResult::Accepted) {
            warn("queue overflow, processed message not retained");
            emit(NodeEventKind::QueueOverflow, m.id,
                 overflow_detail(r, "sended"));
        }
        return serialize_reply(ReplyStatus::Ok);
    }
    // Relay: decrement ttl, take over as last hop, reseal.
    Message copy = m;
    copy.ttl -= 1;
    copy.media = name_;
    copy = seal(std::move(copy));
    emit(NodeEventKind::ReceivedOk, m.id, "");
    AddResult r = to_send_.add(copy, kNoExpiry);
    if (r != AddResult::Accepted) {
        warn("queue overflow, relay copy dropped");
        emit(NodeEventKind::QueueOverflow, m.id, overflow_detail(r, "to_send"));
    } else {
        emit(NodeEventKind::Forwarded, m.id,
             "ttl=" + std::to_string(copy.ttl));
    }
    return serialize_reply(ReplyStatus::Ok);
}

void Node::handle_serial(const std::string& line) {
    std::size_t at = line.find('@');
    if (at == std::string::npos) {
        warn("invalid serial input: " + line);
        return;
    }
    std::string target = line.substr(0, at);
    std::string command = line.substr(at + 1);
    if (target == "this") {
        execute_command(command);
        return;
    }
    auto addressee = NodeName::parse(target);
    if (!addressee) {
        warn("invalid serial input: " + addressee.error());
        return;
    }
    auto msg = new_message(name_, seq_ + 1, *addressee, command);
    if (!msg) {
        warn("invalid serial input: " + msg.error());
        return;
    }
    ++seq_;
    Message out = *msg;
    out.ttl = config_.ttl_default;  // ttl is not covered by the crc
    AddResult r = to_send_.add(out, kNoExpiry);
    if (r != AddResult::Accepted) {
        warn("queue overflow, message not queued");
        emit(NodeEventKind::QueueOverflow, out.id,
             overflow_detail(r, "to_send"));
        return;
    }
    console("<[Will send:] " + render_path(out));
    emit(NodeEventKind::Originated, out.id, "to=" + addressee->raw);
}

void Node::execute_command(const std::string& cmd) {
    if (cmd == "get_id") {
        console(name_.raw);
        return;
    }
    if (cmd == "get_send" || cmd == "get_sended") {
        const MessageQueue& q = (cmd == "get_send") ? to_send_ : sended_;
        for (const std::string& line : q.show_all()) console(line);
        console("Total: " + std::to_string(q.size()));
        return;
    }
    if (cmd.rfind("set_led=", 0) == 0) {
        std::string arg = cmd.substr(8);
        if (arg.size() != 1 || arg[0] < '0' || arg[0] > '7') {
            warn("set_led argument must be 0..7: " + cmd);
            return;
        }
        led_ = led_from_code(arg[0] - '0');
        console(led_console_line(led_));
        return;
    }
    warn("unknown command: " + cmd);
}

uint32_t Node::send_round(RadioPort& radio) {
    const Message* head = to_send_.select_first();
    if (!head) return 0;
    const std::string payload = serialize(*head);
    for (const NodeName& peer : radio.scan()) {
        if (peer == name_) continue;
        int broken_retries = 0;
        while (true) {
            emit(NodeEventKind::Transmitted, head->id, "to=" + peer.raw);
            auto reply = radio.exchange(peer, payload);
            if (!reply) break;  // link failure, try again next round
            auto status = parse_reply(*reply);
            if (!status) break;
            if (*status == ReplyStatus::Broken) {
                if (++broken_retries > config_.broken_retry_limit) break;
                continue;
            }
            // OK, EXPIRED and DUBPLICATE all mean the bytes arrived.
            ++to_send_.sent;
            break;
        }
    }
    return to_send_.sent;
}

void Node::finish_round() {
    if (to_send_.sent > 0) {
        console(">[To " + std::to_string(to_send_.sent) + " sent]");
        const Message* head = to_send_.select_first();
        if (head) {
            AddResult r = sended_.add(*head, config_.sended_retention_cycles);
            if (r != AddResult::Accepted) {
                warn("queue overflow, sent message not retained");
                emit(NodeEventKind::QueueOverflow, head->id,
                     overflow_detail(r, "sended"));
            }
            to_send_.destroy_first();
        }
        to_send_.sent = 0;
    }
    sended_.timer_tick();
}

CycleReport Node::run_cycle(RadioPort& radio,
                            const std::vector<std::string>& inbound,
                            const std::vector<std::string>& serial) {
    CycleReport report;
    const std::size_t mark = console_.size();
    for (const std::string& line : inbound)
        report.replies.push_back(handle_request(line));
    for (const std::string& line : serial) handle_serial(line);
    report.sent = send_round(radio);
    finish_round();
    report.console.assign(console_.begin() + static_cast<long>(mark),
                          console_.end());
    return report;
}

}  // namespace mesh
