#ifndef TMTK_EVENTS_BEHAVIOR_HPP
#define TMTK_EVENTS_BEHAVIOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "tmtk/core/model.hpp"
#include "tmtk/core/path.hpp"
#include "tmtk/diagnostics.hpp"
#include "tmtk/dsl/parser.hpp"

namespace tmtk::events {

/// A region of the static model lifted to the dynamic level. The optional
/// time label is opaque; the model gives no calculus for it.
struct Event {
    std::string name;
    std::vector<core::ElementRef> region;
    std::optional<std::string> time_label;
};

struct BehaviorEdge {
    std::string from;
    std::string to;
    std::optional<std::string> guard;

    bool operator==(const BehaviorEdge&) const = default;
};

/// Chronology of events: which event may succeed which, with guards.
struct BehaviorGraph {
    std::vector<std::string> nodes;
    std::vector<BehaviorEdge> edges;

    bool has_edge(const std::string& from, const std::string& to,
                  const std::optional<std::string>& outcome) const;
};

inline constexpr const char* kRuleEmptyRegion = "EMPTY_REGION";
inline constexpr const char* kRuleUnresolvedRef = "UNRESOLVED_REF";
inline constexpr const char* kRuleDisconnectedRegion = "DISCONNECTED_REGION";
inline constexpr const char* kRuleDupEvent = "DUP_EVENT";
inline constexpr const char* kRuleUnknownEvent = "UNKNOWN_EVENT";

/// Per-event checks: regions resolve and are nonempty (errors); a region whose
/// induced fragment is not weakly connected gets a warning only, since the
/// source material bundles embedded transfer-receive steps into one event.
/// Overlapping regions are permitted.
std::vector<Diagnostic> validate_events(const core::StaticModel& model,
                                        const std::vector<Event>& events);

/// Emits edge A->B iff some flow or trigger of the model leads from a stage in
/// A's region to a stage in B's region (single-edge adjacency, no multi-hop).
/// Trigger guards are copied onto the behavior edge; self-loops are omitted;
/// edges come out ordered by event declaration order.
BehaviorGraph derive_chronology(const core::StaticModel& model, const std::vector<Event>& events);

struct TraceEntry {
    std::string event;
    std::optional<std::string> guard;
};

struct Violation {
    size_t index;  // index of the target event in the trace
    std::string from;
    std::string to;
};

/// A trace conforms when every consecutive pair is a behavior edge whose guard
/// matches the outcome recorded on the source entry (an unguarded edge matches
/// anything). Returns the first violation, or nullopt when the trace is legal.
std::optional<Violation> check_conformance(const BehaviorGraph& behavior,
                                           const std::vector<TraceEntry>& trace);

struct EventBindResult {
    std::vector<Event> events;
    std::vector<Diagnostic> diagnostics;
};

/// Resolves raw DSL event declarations against a model.
EventBindResult bind_events(const core::StaticModel& model,
                            const std::vector<dsl::EventDecl>& decls);

/// Builds a behavior graph straight from chronology declarations (the
/// author-asserted graph); endpoints must be declared events.
BehaviorGraph graph_from_decls(const std::vector<dsl::EventDecl>& events,
                               const std::vector<dsl::ChronologyDecl>& chronology,
                               std::vector<Diagnostic>& diagnostics);

std::string behavior_to_json(const BehaviorGraph& graph);
std::string trace_to_json(const std::vector<TraceEntry>& trace);
std::optional<BehaviorGraph> behavior_from_json(const std::string& text, std::string& error);
std::optional<std::vector<TraceEntry>> trace_from_json(const std::string& text,
                                                       std::string& error);

}  // namespace tmtk::events

#endif
