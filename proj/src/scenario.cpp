#include "mesh/scenario.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace mesh {

namespace {

struct Token {
    std::string key;  // empty for bare words like "down"
    std::string value;
};

// Splits a directive line into key=value pairs and bare words; values may
// be double-quoted (with backslash escapes).
Result<std::vector<Token>> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        if (i >= line.size()) break;
        std::size_t word_start = i;
        std::string key, value;
        bool has_key = false;
        while (i < line.size() && line[i] != ' ') {
            if (line[i] == '=' && !has_key) {
                key = std::string(line.substr(word_start, i - word_start));
                has_key = true;
                ++i;
                if (i < line.size() && line[i] == '"') {
                    ++i;
                    while (i < line.size() && line[i] != '"') {
                        if (line[i] == '\\' && i + 1 < line.size()) ++i;
                        value += line[i++];
                    }
                    if (i >= line.size())
                        return Result<std::vector<Token>>::err(
                            "unterminated quoted value");
                    ++i;
                    break;
                }
                word_start = i;
                continue;
            }
            ++i;
        }
        if (has_key) {
            if (value.empty() && word_start < i)
                value = std::string(line.substr(word_start, i - word_start));
            tokens.push_back({std::move(key), std::move(value)});
        } else {
            tokens.push_back(
                {"", std::string(line.substr(word_start, i - word_start))});
        }
    }
    return Result<std::vector<Token>>::ok(std::move(tokens));
}

class DirectiveArgs {
public:
    explicit DirectiveArgs(std::vector<Token> tokens) {
        for (Token& t : tokens) {
            if (t.key.empty())
                flags_.push_back(std::move(t.value));
            else
                kv_[t.key] = std::move(t.value);
        }
    }

    const std::string* get(const std::string& key) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? nullptr : &it->second;
    }
    bool has_flag(const std::string& word) const {
        for (const std::string& f : flags_)
            if (f == word) return true;
        return false;
    }

private:
    std::map<std::string, std::string> kv_;
    std::vector<std::string> flags_;
};

template <typename T>
bool parse_number(const std::string& s, T& out) {
    if constexpr (std::is_floating_point_v<T>) {
        try {
            std::size_t used = 0;
            out = static_cast<T>(std::stod(s, &used));
            return used == s.size();
        } catch (...) {
            return false;
        }
    } else {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && p == s.data() + s.size();
    }
}

}  // namespace

Result<Scenario> parse_scenario(std::string_view text) {
    Scenario scenario;
    std::set<std::string> names;
    // (line number, name) pairs checked after all nodes are known.
    std::vector<std::pair<std::size_t, NodeName>> references;

    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        return Result<Scenario>::err("line " + std::to_string(line_no) + ": " +
                                     why);
    };
    auto numeric = [&](const DirectiveArgs& args, const std::string& key,
                       auto& out) {
        const std::string* v = args.get(key);
        if (!v) return std::string("missing field " + key);
        if (!parse_number(*v, out))
            return std::string("field " + key + " is not numeric: " + *v);
        return std::string();
    };
    auto node_ref = [&](const DirectiveArgs& args, const std::string& key,
                        NodeName& out) {
        const std::string* v = args.get(key);
        if (!v) return std::string("missing field " + key);
        auto name = NodeName::parse(std::string(kNodePrefix) + *v);
        if (!name) return name.error();
        out = *name;
        references.emplace_back(line_no, out);
        return std::string();
    };

    while (std::getline(stream, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        auto tokens = tokenize(std::string_view(line).substr(first));
        if (!tokens) return fail(tokens.error());
        if (tokens->empty() || !(*tokens)[0].key.empty())
            return fail("expected a directive word first");
        std::string directive = (*tokens)[0].value;
        DirectiveArgs args(std::vector<Token>(tokens->begin() + 1,
                                              tokens->end()));

        if (directive == "node") {
            Scenario::NodeSpec spec;
            const std::string* id = args.get("id");
            if (!id) return fail("missing field id");
            auto name = NodeName::parse(std::string(kNodePrefix) + *id);
            if (!name) return fail(name.error());
            spec.name = *name;
            if (!names.insert(spec.name.raw).second)
                return fail("duplicate node name: " + spec.name.raw);
            std::string e;
            if (!(e = numeric(args, "x", spec.x)).empty()) return fail(e);
            if (!(e = numeric(args, "y", spec.y)).empty()) return fail(e);
            if (!(e = numeric(args, "range", spec.range)).empty())
                return fail(e);
            scenario.nodes.push_back(std::move(spec));
        } else if (directive == "radio") {
            std::string e;
            if (args.get("loss") &&
                !(e = numeric(args, "loss", scenario.link.loss)).empty())
                return fail(e);
            if (args.get("corrupt") &&
                !(e = numeric(args, "corrupt", scenario.link.corrupt)).empty())
                return fail(e);
            if (args.get("latency") &&
                !(e = numeric(args, "latency", scenario.link.latency_ms))
                     .empty())
                return fail(e);
            if (scenario.link.loss < 0 || scenario.link.loss > 1 ||
                scenario.link.corrupt < 0 || scenario.link.corrupt > 1 ||
                scenario.link.latency_ms < 0)
                return fail("radio parameters out of range");
        } else if (directive == "at") {
            ScriptEvent ev;
            std::string e;
            if (!(e = numeric(args, "t", ev.at_ms)).empty()) return fail(e);
            if (!(e = node_ref(args, "node", ev.node)).empty()) return fail(e);
            if (const std::string* s = args.get("serial")) {
                ev.kind = ScriptEvent::Kind::Serial;
                ev.line = *s;
            } else if (args.has_flag("move")) {
                ev.kind = ScriptEvent::Kind::Move;
                if (!(e = numeric(args, "x", ev.x)).empty()) return fail(e);
                if (!(e = numeric(args, "y", ev.y)).empty()) return fail(e);
            } else if (args.has_flag("down")) {
                ev.kind = ScriptEvent::Kind::Down;
            } else if (args.has_flag("up")) {
                ev.kind = ScriptEvent::Kind::Up;
            } else {
                return fail("at directive needs serial=, move, down or up");
            }
            scenario.script.push_back(std::move(ev));
        } else if (directive == "traffic") {
            TrafficGenerator g;
            std::string e;
            if (!(e = node_ref(args, "node", g.node)).empty()) return fail(e);
            if (!(e = node_ref(args, "target", g.target)).empty())
                return fail(e);
            if (!(e = numeric(args, "period", g.period_ms)).empty())
                return fail(e);
            if (g.period_ms <= 0) return fail("period must be positive");
            const std::string* body = args.get("body");
            if (!body) return fail("missing field body");
            g.body = *body;
            scenario.generators.push_back(std::move(g));
        } else if (directive == "config") {
            std::string e;
            if (args.get("ttl") &&
                !(e = numeric(args, "ttl", scenario.config.ttl_default))
                     .empty())
                return fail(e);
            if (args.get("cycle") &&
                !(e = numeric(args, "cycle", scenario.config.cycle_period_ms))
                     .empty())
                return fail(e);
            if (args.get("retention") &&
                !(e = numeric(args, "retention",
                              scenario.config.sended_retention_cycles))
                     .empty())
                return fail(e);
        } else if (directive == "run") {
            std::string e;
            if (args.get("duration") &&
                !(e = numeric(args, "duration", scenario.duration_ms)).empty())
                return fail(e);
            if (args.get("seed") &&
                !(e = numeric(args, "seed", scenario.seed)).empty())
                return fail(e);
            if (scenario.duration_ms <= 0)
                return fail("duration must be positive");
        } else {
            return fail("unknown directive: " + directive);
        }
    }

    for (const auto& [ref_line, name] : references) {
        if (!names.count(name.raw))
            return Result<Scenario>::err(
                "line " + std::to_string(ref_line) +
                ": reference to undeclared node " + name.raw);
    }
    return Result<Scenario>::ok(std::move(scenario));
}

std::unique_ptr<World> build_world(const Scenario& s) {
    auto world = std::make_unique<World>(s.config, s.link, s.seed);
    for (const Scenario::NodeSpec& n : s.nodes)
        world->add_node(n.name, n.x, n.y, n.range);
    for (const ScriptEvent& e : s.script) world->add_script_event(e);
    for (const TrafficGenerator& g : s.generators) world->add_generator(g);
    return world;
}

}  // namespace mesh
