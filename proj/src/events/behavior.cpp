#include "tmtk/events/behavior.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

namespace tmtk::events {

namespace {

using core::ElementRef;
using core::StageRef;
using core::StaticModel;

/// Stages covered by a region; a thimac ref contributes all of its stages.
std::set<StageRef> region_stages(const StaticModel& model, const Event& ev) {
    std::set<StageRef> out;
    for (const ElementRef& r : ev.region) {
        if (!model.valid_id(r.thimac)) continue;
        if (r.is_stage()) {
            out.insert(r.stage_ref());
        } else {
            for (const auto& [kind, st] : model.at(r.thimac).stages) {
                out.insert(StageRef{r.thimac, kind});
            }
        }
    }
    return out;
}

}  // namespace

bool BehaviorGraph::has_edge(const std::string& from, const std::string& to,
                             const std::optional<std::string>& outcome) const {
    for (const BehaviorEdge& e : edges) {
        if (e.from != from || e.to != to) continue;
        if (!e.guard) return true;  // unguarded edges accept any outcome
        if (outcome && *e.guard == *outcome) return true;
    }
    return false;
}

std::vector<Diagnostic> validate_events(const StaticModel& model,
                                        const std::vector<Event>& events) {
    std::vector<Diagnostic> diags;
    std::set<std::string> names;
    for (const Event& ev : events) {
        if (!names.insert(ev.name).second) {
            diags.push_back(Diagnostic{Severity::Error, kRuleDupEvent,
                                       "duplicate event name '" + ev.name + "'", ev.name,
                                       std::nullopt});
        }
        if (ev.region.empty()) {
            diags.push_back(Diagnostic{Severity::Error, kRuleEmptyRegion,
                                       "event '" + ev.name + "' has an empty region", ev.name,
                                       std::nullopt});
            continue;
        }
        bool resolved = true;
        for (const ElementRef& r : ev.region) {
            if (!model.valid_id(r.thimac) || (r.is_stage() && !model.has_stage(r.stage_ref()))) {
                diags.push_back(Diagnostic{Severity::Error, kRuleUnresolvedRef,
                                           "event '" + ev.name +
                                               "' references a missing element",
                                           ev.name, std::nullopt});
                resolved = false;
            }
        }
        if (!resolved) continue;

        // Weak connectivity over the induced fragment. Containment counts:
        // a listed thimac connects to its own stages and to listed children.
        std::set<StageRef> stages = region_stages(model, ev);
        std::set<core::ThimacId> listed;
        for (const ElementRef& r : ev.region) {
            if (!r.is_stage()) listed.insert(r.thimac);
        }
        std::map<std::string, int> comp;  // node key -> component
        auto key_of_stage = [&](StageRef s) { return model.path_of(s); };
        auto key_of_thimac = [&](core::ThimacId t) { return "t:" + model.path_of(t); };
        std::vector<std::string> nodes;
        for (const StageRef& s : stages) nodes.push_back(key_of_stage(s));
        for (core::ThimacId t : listed) nodes.push_back(key_of_thimac(t));
        for (size_t i = 0; i < nodes.size(); ++i) comp[nodes[i]] = static_cast<int>(i);
        std::function<int(const std::string&)> find = [&](const std::string& k) {
            return comp.at(k);
        };
        auto unite = [&](const std::string& a, const std::string& b) {
            int ca = find(a), cb = find(b);
            if (ca == cb) return;
            for (auto& [k, c] : comp) {
                if (c == cb) c = ca;
            }
        };
        for (const auto& f : model.flows) {
            if (stages.count(f.from) && stages.count(f.to)) {
                unite(key_of_stage(f.from), key_of_stage(f.to));
            }
        }
        for (const auto& t : model.triggers) {
            if (stages.count(t.from) && stages.count(t.to)) {
                unite(key_of_stage(t.from), key_of_stage(t.to));
            }
        }
        for (core::ThimacId t : listed) {
            for (const auto& [kind, st] : model.at(t).stages) {
                unite(key_of_thimac(t), key_of_stage(StageRef{t, kind}));
            }
            for (core::ThimacId c : model.at(t).children) {
                if (listed.count(c)) unite(key_of_thimac(t), key_of_thimac(c));
            }
            if (listed.count(model.at(t).parent)) {
                unite(key_of_thimac(t), key_of_thimac(model.at(t).parent));
            }
        }
        std::set<int> comps;
        for (const auto& [k, c] : comp) comps.insert(c);
        if (comps.size() > 1) {
            diags.push_back(Diagnostic{Severity::Warning, kRuleDisconnectedRegion,
                                       "event '" + ev.name + "' spans " +
                                           std::to_string(comps.size()) +
                                           " disconnected fragments",
                                       ev.name, std::nullopt});
        }
    }
    return diags;
}

BehaviorGraph derive_chronology(const StaticModel& model, const std::vector<Event>& events) {
    BehaviorGraph g;
    std::vector<std::set<StageRef>> regions;
    for (const Event& ev : events) {
        g.nodes.push_back(ev.name);
        regions.push_back(region_stages(model, ev));
    }
    for (size_t a = 0; a < events.size(); ++a) {
        for (size_t b = 0; b < events.size(); ++b) {
            if (a == b) continue;
            std::set<std::optional<std::string>> guards;
            for (const auto& f : model.flows) {
                if (regions[a].count(f.from) && regions[b].count(f.to)) {
                    guards.insert(std::nullopt);
                }
            }
            for (const auto& t : model.triggers) {
                if (regions[a].count(t.from) && regions[b].count(t.to)) guards.insert(t.guard);
            }
            for (const auto& guard : guards) {
                g.edges.push_back(BehaviorEdge{events[a].name, events[b].name, guard});
            }
        }
    }
    return g;
}

std::optional<Violation> check_conformance(const BehaviorGraph& behavior,
                                           const std::vector<TraceEntry>& trace) {
    for (size_t i = 1; i < trace.size(); ++i) {
        if (!behavior.has_edge(trace[i - 1].event, trace[i].event, trace[i - 1].guard)) {
            return Violation{i, trace[i - 1].event, trace[i].event};
        }
    }
    return std::nullopt;
}

EventBindResult bind_events(const StaticModel& model, const std::vector<dsl::EventDecl>& decls) {
    EventBindResult res;
    for (const dsl::EventDecl& d : decls) {
        Event ev;
        ev.name = d.name;
        ev.time_label = d.time_label;
        bool ok = true;
        for (const std::string& p : d.region_paths) {
            auto r = core::resolve_path(model, p);
            if (!r.ok()) {
                res.diagnostics.push_back(Diagnostic{Severity::Error, kRuleUnresolvedRef,
                                                     "event '" + d.name + "': " + r.message,
                                                     d.name, d.span});
                ok = false;
                continue;
            }
            ev.region.push_back(r.ref);
        }
        if (ok) res.events.push_back(std::move(ev));
    }
    return res;
}

BehaviorGraph graph_from_decls(const std::vector<dsl::EventDecl>& events,
                               const std::vector<dsl::ChronologyDecl>& chronology,
                               std::vector<Diagnostic>& diagnostics) {
    BehaviorGraph g;
    std::set<std::string> known;
    for (const dsl::EventDecl& e : events) {
        g.nodes.push_back(e.name);
        known.insert(e.name);
    }
    for (const dsl::ChronologyDecl& c : chronology) {
        for (const std::string* end : {&c.from, &c.to}) {
            if (!known.count(*end)) {
                diagnostics.push_back(Diagnostic{Severity::Error, kRuleUnknownEvent,
                                                 "chronology references undeclared event '" +
                                                     *end + "'",
                                                 *end, c.span});
            }
        }
        g.edges.push_back(BehaviorEdge{c.from, c.to, c.guard});
    }
    return g;
}

std::string behavior_to_json(const BehaviorGraph& graph) {
    nlohmann::ordered_json j;
    j["nodes"] = graph.nodes;
    j["edges"] = nlohmann::ordered_json::array();
    for (const BehaviorEdge& e : graph.edges) {
        nlohmann::ordered_json je;
        je["from"] = e.from;
        je["to"] = e.to;
        if (e.guard) je["guard"] = *e.guard;
        j["edges"].push_back(std::move(je));
    }
    return j.dump(2) + "\n";
}

std::string trace_to_json(const std::vector<TraceEntry>& trace) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const TraceEntry& t : trace) {
        nlohmann::ordered_json je;
        je["event"] = t.event;
        if (t.guard) je["guard"] = *t.guard;
        j.push_back(std::move(je));
    }
    return j.dump(2) + "\n";
}

std::optional<BehaviorGraph> behavior_from_json(const std::string& text, std::string& error) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("nodes") || !j.contains("edges")) {
        error = "behavior graph JSON must be an object with nodes and edges";
        return std::nullopt;
    }
    BehaviorGraph g;
    for (const auto& n : j["nodes"]) {
        if (!n.is_string()) {
            error = "behavior node names must be strings";
            return std::nullopt;
        }
        g.nodes.push_back(n.get<std::string>());
    }
    for (const auto& e : j["edges"]) {
        if (!e.is_object() || !e.contains("from") || !e.contains("to")) {
            error = "behavior edges need from/to";
            return std::nullopt;
        }
        BehaviorEdge edge;
        edge.from = e["from"].get<std::string>();
        edge.to = e["to"].get<std::string>();
        if (e.contains("guard")) edge.guard = e["guard"].get<std::string>();
        g.edges.push_back(std::move(edge));
    }
    return g;
}

std::optional<std::vector<TraceEntry>> trace_from_json(const std::string& text,
                                                       std::string& error) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        error = "trace JSON is malformed";
        return std::nullopt;
    }
    // Accept either the bare event list or a full simulator trace object.
    const nlohmann::json* arr = &j;
    if (j.is_object() && j.contains("events")) arr = &j["events"];
    if (!arr->is_array()) {
        error = "trace JSON must be an array of {event, guard}";
        return std::nullopt;
    }
    std::vector<TraceEntry> out;
    for (const auto& e : *arr) {
        if (!e.is_object() || !e.contains("event")) {
            error = "trace entries need an event name";
            return std::nullopt;
        }
        TraceEntry t;
        t.event = e["event"].get<std::string>();
        if (e.contains("guard") && !e["guard"].is_null()) t.guard = e["guard"].get<std::string>();
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace tmtk::events
