#include "tmtk/dot/export.hpp"

#include <algorithm>

namespace tmtk::dot {

namespace {

using core::StageRef;
using core::StaticModel;

std::string node_id(const StaticModel& m, StageRef ref) {
    std::string id = "s_" + std::to_string(ref.thimac) + "_" + core::to_string(ref.kind);
    (void)m;
    return id;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

void write_thimac(std::string& out, const StaticModel& m, core::ThimacId id, int depth) {
    const core::Thimac& t = m.at(id);
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    out += indent + "subgraph cluster_" + std::to_string(id) + " {\n";
    out += indent + "  label=\"" + escape(t.name) + "\";\n";
    for (int k = 0; k < core::kStageKindCount; ++k) {
        auto kind = static_cast<core::StageKind>(k);
        if (!t.has_stage(kind)) continue;
        out += indent + "  " + node_id(m, StageRef{id, kind}) + " [label=\"" + escape(t.name) +
               "." + core::to_string(kind) + "\"];\n";
    }
    std::vector<core::ThimacId> kids = t.children;
    std::sort(kids.begin(), kids.end(),
              [&](core::ThimacId a, core::ThimacId b) { return m.at(a).name < m.at(b).name; });
    for (core::ThimacId c : kids) write_thimac(out, m, c, depth + 1);
    out += indent + "}\n";
}

}  // namespace

std::string export_dot(const StaticModel& model) {
    if (model.empty()) return "digraph tm {}\n";
    std::string out = "digraph tm {\n";
    out += "  rankdir=LR;\n";
    std::vector<core::ThimacId> roots = model.roots;
    std::sort(roots.begin(), roots.end(), [&](core::ThimacId a, core::ThimacId b) {
        return model.at(a).name < model.at(b).name;
    });
    for (core::ThimacId r : roots) write_thimac(out, model, r, 1);
    std::vector<std::string> lines;
    for (const auto& f : model.flows) {
        lines.push_back("  " + node_id(model, f.from) + " -> " + node_id(model, f.to) + ";\n");
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out += l;
    lines.clear();
    for (const auto& tr : model.triggers) {
        std::string line =
            "  " + node_id(model, tr.from) + " -> " + node_id(model, tr.to) + " [style=dashed";
        if (tr.guard) line += ", label=\"" + escape(*tr.guard) + "\"";
        line += "];\n";
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out += l;
    out += "}\n";
    return out;
}

std::string export_behavior_dot(const events::BehaviorGraph& graph) {
    std::string out = "digraph behavior {\n";
    for (const std::string& n : graph.nodes) {
        out += "  \"" + escape(n) + "\";\n";
    }
    for (const events::BehaviorEdge& e : graph.edges) {
        out += "  \"" + escape(e.from) + "\" -> \"" + escape(e.to) + "\"";
        if (e.guard) out += " [label=\"" + escape(*e.guard) + "\"]";
        out += ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace tmtk::dot
