#include "mill/render.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "mill/frontend.hpp"

namespace mill {

using json = nlohmann::ordered_json;

std::uint64_t kb_hash(const KnowledgeBase& kb) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char byte : render_kb(kb)) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string side_str(const Conjecture& c, Side side) {
    const Term& t = side == Side::cause ? c.cause : c.effect;
    return BoundValue{t, c.parametric()}.str();
}

namespace {

std::string ids(const std::vector<ObservationId>& support) {
    std::string out;
    for (auto id : support) {
        if (!out.empty()) out += ", ";
        out += std::to_string(id);
    }
    return out;
}

std::string pair_str(const Conjecture& c) { return side_str(c, Side::cause) + " => " + side_str(c, Side::effect); }

std::string em_str(const EmStatus& em) {
    std::string out(to_string(em.kind));
    if (em.counterexample) out += " (counterexample obs " + std::to_string(*em.counterexample) + ")";
    return out;
}

void text_conjecture(std::ostringstream& out, const Conjecture& c, int indent, bool trace) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    out << pad << pair_str(c) << "  [" << to_string(c.method) << " on obs " << ids(c.support)
        << "; EM " << em_str(c.em) << "; score " << c.score << "]\n";
    if (!trace) return;
    if (!c.parametric_pairs.empty()) {
        out << pad << "  varies as:";
        for (const auto& [x, y] : c.parametric_pairs) out << " (" << x << ", " << y << ")";
        out << "\n";
    }
    for (const auto& k : c.corroborations) {
        out << pad << "  corroborated by " << to_string(k.method) << " on obs " << ids(k.support) << "\n";
    }
    for (const auto& p : c.premises) {
        out << pad << "  subtracting known " << p.cause.str() << " => " << p.effect.str() << "\n";
    }
    if (!c.sub_proofs.empty()) out << pad << "  subtracting:\n";
    for (const auto& sub : c.sub_proofs) text_conjecture(out, sub, indent + 4, trace);
}

std::string event_pair(const TraceEvent& e) {
    auto side = [&](const std::optional<Term>& t) {
        return t ? BoundValue{*t, e.parametric}.str() : std::string("?");
    };
    return side(e.cause) + " => " + side(e.effect);
}

json support_json(const std::vector<ObservationId>& support) { return json(support); }

json conjecture_json(const Conjecture& c) {
    json j;
    j["cause"] = side_str(c, Side::cause);
    j["effect"] = side_str(c, Side::effect);
    j["method"] = to_string(c.method);
    j["support"] = support_json(c.support);
    j["sub_proofs"] = json::array();
    for (const auto& sub : c.sub_proofs) j["sub_proofs"].push_back(conjecture_json(sub));
    j["premises"] = json::array();
    for (const auto& p : c.premises) j["premises"].push_back({{"cause", p.cause.str()}, {"effect", p.effect.str()}});
    if (c.parametric()) {
        j["parametric_pairs"] = json::array();
        for (const auto& [x, y] : c.parametric_pairs) j["parametric_pairs"].push_back(json::array({x, y}));
    } else {
        j["parametric_pairs"] = nullptr;
    }
    j["corroborations"] = json::array();
    for (const auto& k : c.corroborations) {
        j["corroborations"].push_back({{"method", to_string(k.method)}, {"support", support_json(k.support)}});
    }
    j["em_status"] = to_string(c.em.kind);
    j["score"] = c.score;
    return j;
}

json event_json(const TraceEvent& e) {
    json j;
    j["event"] = to_string(e.kind);
    j["depth"] = e.depth;
    if (e.method) j["method"] = to_string(*e.method);
    if (e.cause) j["cause"] = BoundValue{*e.cause, e.parametric}.str();
    if (e.effect) j["effect"] = BoundValue{*e.effect, e.parametric}.str();
    if (!e.support.empty()) j["support"] = support_json(e.support);
    if (e.counterexample) j["counterexample"] = *e.counterexample;
    if (e.conflict_cause) {
        j["conflicts_with"] = {{"cause", BoundValue{*e.conflict_cause, e.parametric}.str()},
                               {"effect", BoundValue{*e.conflict_effect, e.parametric}.str()}};
    }
    if (e.goal) {
        j["goal"] = e.goal->str();
        j["goal_side"] = e.goal_side == Side::cause ? "cause" : "effect";
    }
    return j;
}

}  // namespace

std::string render_text(const SolutionSet& s, bool trace) {
    std::ostringstream out;
    if (s.bindings.empty()) {
        out << "no solutions\n";
    } else {
        out << "solutions: " << s.bindings.size() << "\n";
        for (const auto& b : s.bindings) {
            std::string line;
            for (const auto& [name, value] : b) {
                if (!line.empty()) line += ", ";
                line += name + " = " + value.str();
            }
            out << "  " << (line.empty() ? "yes" : line) << "\n";
        }
    }
    if (!s.conjectures.empty()) out << "conjectures:\n";
    for (const auto& c : s.conjectures) text_conjecture(out, c, 2, trace);
    if (!trace) return out.str();

    bool header = false;
    for (const auto& e : s.trace) {
        if (e.kind == TraceEvent::Kind::accepted) continue;
        if (!header) {
            out << "trace:\n";
            header = true;
        }
        out << "  " << to_string(e.kind);
        switch (e.kind) {
            case TraceEvent::Kind::rejected_em:
                out << " " << event_pair(e) << " (" << to_string(*e.method) << " on obs " << ids(e.support)
                    << "): counterexample obs " << *e.counterexample;
                break;
            case TraceEvent::Kind::rejected_conflict:
                out << " " << event_pair(e) << " (" << to_string(*e.method) << " on obs " << ids(e.support)
                    << "): conflicts with " << BoundValue{*e.conflict_cause, e.parametric}.str() << " => "
                    << BoundValue{*e.conflict_effect, e.parametric}.str();
                break;
            default:
                out << " goal " << (e.goal ? e.goal->str() : std::string("?")) << " at depth " << e.depth;
                break;
        }
        out << "\n";
    }
    return out.str();
}

std::string render_structured(const SolutionSet& s, const KnowledgeBase& kb, const EngineConfig& cfg, bool trace) {
    json doc;
    doc["bindings"] = json::array();
    for (const auto& b : s.bindings) {
        json jb = json::object();
        for (const auto& [name, value] : b) jb[name] = value.str();
        doc["bindings"].push_back(std::move(jb));
    }
    doc["conjectures"] = json::array();
    for (const auto& c : s.conjectures) doc["conjectures"].push_back(conjecture_json(c));
    if (trace) {
        doc["trace"] = json::array();
        for (const auto& e : s.trace) doc["trace"].push_back(event_json(e));
    }
    json order = json::array();
    for (auto m : cfg.method_order) order.push_back(to_string(m));
    doc["config"] = {{"em_policy", to_string(cfg.em_policy)},
                     {"method_order", std::move(order)},
                     {"max_depth", cfg.max_depth},
                     {"mode", to_string(cfg.mode)}};
    char hash[32];
    std::snprintf(hash, sizeof hash, "fnv1a64:%016llx", static_cast<unsigned long long>(kb_hash(kb)));
    doc["kb_digest"] = {{"observations", kb.size()}, {"hash", hash}};
    return doc.dump(2) + "\n";
}

}  // namespace mill
