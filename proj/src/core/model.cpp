#include "tmtk/core/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tmtk/diagnostics.hpp"

namespace tmtk {

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
    std::string out;
    if (!file.empty()) {
        out += file;
        if (d.span) {
            out += ":" + std::to_string(d.span->line) + ":" + std::to_string(d.span->column);
        }
        out += ": ";
    }
    out += d.severity == Severity::Error ? "error[" : "warning[";
    out += d.code + "]: " + d.message;
    if (!d.path.empty()) out += " (at " + d.path + ")";
    return out;
}

}  // namespace tmtk

namespace tmtk::core {

const char* to_string(ThimacKind k) {
    switch (k) {
    case ThimacKind::Plain: return "plain";
    case ThimacKind::Set: return "set";
    case ThimacKind::Individual: return "individual";
    case ThimacKind::Relationship: return "relationship";
    case ThimacKind::Attribute: return "attribute";
    }
    return "plain";
}

const char* to_string(StageKind k) {
    switch (k) {
    case StageKind::Create: return "create";
    case StageKind::Process: return "process";
    case StageKind::Release: return "release";
    case StageKind::Receive: return "receive";
    case StageKind::TransferIn: return "transfer_in";
    case StageKind::TransferOut: return "transfer_out";
    }
    return "process";
}

std::optional<ThimacKind> thimac_kind_from(std::string_view s) {
    if (s == "plain") return ThimacKind::Plain;
    if (s == "set") return ThimacKind::Set;
    if (s == "individual") return ThimacKind::Individual;
    if (s == "relationship") return ThimacKind::Relationship;
    if (s == "attribute") return ThimacKind::Attribute;
    return std::nullopt;
}

std::optional<StageKind> stage_kind_from(std::string_view s) {
    if (s == "create") return StageKind::Create;
    if (s == "process") return StageKind::Process;
    if (s == "release") return StageKind::Release;
    if (s == "receive") return StageKind::Receive;
    if (s == "transfer_in") return StageKind::TransferIn;
    if (s == "transfer_out") return StageKind::TransferOut;
    return std::nullopt;
}

bool StaticModel::has_stage(StageRef ref) const {
    return valid_id(ref.thimac) && at(ref.thimac).has_stage(ref.kind);
}

const Stage* StaticModel::find_stage(StageRef ref) const {
    if (!valid_id(ref.thimac)) return nullptr;
    auto it = at(ref.thimac).stages.find(ref.kind);
    return it == at(ref.thimac).stages.end() ? nullptr : &it->second;
}

ThimacId StaticModel::add_thimac(std::string name, ThimacKind kind, ThimacId parent) {
    Thimac t;
    t.id = static_cast<ThimacId>(thimacs.size());
    t.parent = parent;
    t.name = std::move(name);
    t.kind = kind;
    thimacs.push_back(std::move(t));
    if (parent < 0) {
        roots.push_back(thimacs.back().id);
    } else {
        at(parent).children.push_back(thimacs.back().id);
    }
    return thimacs.back().id;
}

Stage& StaticModel::add_stage(ThimacId owner, StageKind kind, std::optional<KernelSpec> kernel) {
    Stage s;
    s.kind = kind;
    s.kernel = std::move(kernel);
    return at(owner).stages.insert_or_assign(kind, std::move(s)).first->second;
}

void StaticModel::add_flow(StageRef from, StageRef to) { flows.push_back(FlowEdge{from, to}); }

void StaticModel::add_trigger(StageRef from, StageRef to, std::optional<std::string> guard) {
    triggers.push_back(TriggerEdge{from, to, std::move(guard)});
}

std::string StaticModel::path_of(ThimacId id) const {
    if (!valid_id(id)) return "<invalid>";
    std::vector<std::string_view> parts;
    for (ThimacId cur = id; cur >= 0; cur = at(cur).parent) {
        parts.push_back(at(cur).name);
        if (parts.size() > thimacs.size()) break;  // cyclic parent chain; bail out
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!out.empty()) out += '.';
        out += *it;
    }
    return out;
}

std::string StaticModel::path_of(StageRef ref) const {
    return path_of(ref.thimac) + "." + to_string(ref.kind);
}

bool flow_adjacency_allows(StageKind from, StageKind to) {
    for (const auto& [f, t] : flow_adjacency_table()) {
        if (f == from && t == to) return true;
    }
    return false;
}

const std::vector<std::pair<StageKind, StageKind>>& flow_adjacency_table() {
    static const std::vector<std::pair<StageKind, StageKind>> table = {
        {StageKind::TransferIn, StageKind::Receive}, {StageKind::Receive, StageKind::Process},
        {StageKind::Receive, StageKind::Release},    {StageKind::Create, StageKind::Process},
        {StageKind::Create, StageKind::Release},     {StageKind::Process, StageKind::Release},
        {StageKind::Release, StageKind::TransferOut},
    };
    return table;
}

namespace {

bool thimac_equal(const StaticModel& a, ThimacId ia, const StaticModel& b, ThimacId ib) {
    const Thimac& ta = a.at(ia);
    const Thimac& tb = b.at(ib);
    if (ta.name != tb.name || ta.kind != tb.kind || ta.stages != tb.stages) return false;
    if (ta.children.size() != tb.children.size()) return false;
    // Siblings compare as name-keyed maps; duplicate sibling names make the
    // comparison conservative (first occurrence wins both sides).
    std::map<std::string_view, ThimacId> by_name;
    for (ThimacId c : tb.children) by_name.emplace(b.at(c).name, c);
    for (ThimacId c : ta.children) {
        auto it = by_name.find(a.at(c).name);
        if (it == by_name.end()) return false;
        if (!thimac_equal(a, c, b, it->second)) return false;
    }
    return true;
}

// Duplicate edges collapse: repeating a flow adds no new potentiality, and the
// canonical serializer drops repeats.
std::set<std::string> edge_keys(const StaticModel& m) {
    std::set<std::string> keys;
    for (const auto& f : m.flows) keys.insert("f:" + m.path_of(f.from) + "->" + m.path_of(f.to));
    for (const auto& t : m.triggers) {
        keys.insert("t:" + m.path_of(t.from) + "->" + m.path_of(t.to) + "|" +
                    t.guard.value_or(""));
    }
    return keys;
}

}  // namespace

bool structurally_equal(const StaticModel& a, const StaticModel& b) {
    if (a.roots.size() != b.roots.size()) return false;
    std::map<std::string_view, ThimacId> b_roots;
    for (ThimacId r : b.roots) b_roots.emplace(b.at(r).name, r);
    for (ThimacId r : a.roots) {
        auto it = b_roots.find(a.at(r).name);
        if (it == b_roots.end()) return false;
        if (!thimac_equal(a, r, b, it->second)) return false;
    }
    return edge_keys(a) == edge_keys(b);
}

}  // namespace tmtk::core
