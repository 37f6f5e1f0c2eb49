#include "tmtk/dsl/serializer.hpp"

#include <algorithm>

#include "tmtk/core/validate.hpp"

namespace tmtk::dsl {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\\' || c == '"') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

const char* stage_decl_text(core::StageKind k) {
    switch (k) {
    case core::StageKind::Create: return "create";
    case core::StageKind::Process: return "process";
    case core::StageKind::Release: return "release";
    case core::StageKind::Receive: return "receive";
    case core::StageKind::TransferIn: return "transfer in";
    case core::StageKind::TransferOut: return "transfer out";
    }
    return "process";
}

void write_stage(std::string& out, const std::string& indent, const core::Stage& s) {
    out += indent;
    out += stage_decl_text(s.kind);
    if (s.kernel) {
        out += " kernel = " + s.kernel->name;
        if (!s.kernel->args.empty()) {
            out += "(";
            for (size_t i = 0; i < s.kernel->args.size(); ++i) {
                if (i) out += ", ";
                out += quoted(s.kernel->args[i]);
            }
            out += ")";
        }
    }
    out += ";\n";
}

void write_thimac(std::string& out, const core::StaticModel& m, core::ThimacId id, int depth) {
    const core::Thimac& t = m.at(id);
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    out += indent + "thimac " + t.name;
    if (t.kind != core::ThimacKind::Plain) {
        out += std::string(" kind = ") + core::to_string(t.kind);
    }
    out += " {\n";
    for (int k = 0; k < core::kStageKindCount; ++k) {
        auto it = t.stages.find(static_cast<core::StageKind>(k));
        if (it != t.stages.end()) write_stage(out, indent + "  ", it->second);
    }
    std::vector<core::ThimacId> kids = t.children;
    std::sort(kids.begin(), kids.end(),
              [&](core::ThimacId a, core::ThimacId b) { return m.at(a).name < m.at(b).name; });
    for (core::ThimacId c : kids) write_thimac(out, m, c, depth + 1);
    out += indent + "}\n";
}

bool names_expressible(const core::StaticModel& m, std::string& offender) {
    for (const core::Thimac& t : m.thimacs) {
        if (!is_identifier(t.name)) {
            offender = t.name;
            return false;
        }
    }
    return true;
}

}  // namespace

SerializeResult serialize_tm(const core::StaticModel& model, const std::vector<EventDecl>& events,
                             const std::vector<ChronologyDecl>& chronology) {
    SerializeResult res;
    auto diags = core::validate_static(model);
    if (has_errors(diags)) {
        res.diagnostics.push_back(Diagnostic{Severity::Error, "INVALID_MODEL",
                                             "model has validation errors; not serializable", "",
                                             std::nullopt});
        for (auto& d : diags) res.diagnostics.push_back(std::move(d));
        return res;
    }
    std::string offender;
    if (!names_expressible(model, offender)) {
        res.diagnostics.push_back(Diagnostic{
            Severity::Error, "INVALID_MODEL",
            "thimac name '" + offender + "' is not expressible in the grammar", "", std::nullopt});
        return res;
    }

    std::string out;
    std::vector<core::ThimacId> roots = model.roots;
    std::sort(roots.begin(), roots.end(), [&](core::ThimacId a, core::ThimacId b) {
        return model.at(a).name < model.at(b).name;
    });
    for (core::ThimacId r : roots) write_thimac(out, model, r, 0);

    std::vector<std::pair<std::string, std::string>> flow_lines;
    for (const auto& f : model.flows) {
        flow_lines.emplace_back(model.path_of(f.from), model.path_of(f.to));
    }
    std::sort(flow_lines.begin(), flow_lines.end());
    flow_lines.erase(std::unique(flow_lines.begin(), flow_lines.end()), flow_lines.end());
    for (const auto& [from, to] : flow_lines) out += "flow " + from + " -> " + to + ";\n";

    std::vector<std::string> trig_lines;
    for (const auto& t : model.triggers) {
        std::string line = "trigger " + model.path_of(t.from) + " -> " + model.path_of(t.to);
        if (t.guard) line += " guard = " + quoted(*t.guard);
        line += ";\n";
        trig_lines.push_back(std::move(line));
    }
    std::sort(trig_lines.begin(), trig_lines.end());
    trig_lines.erase(std::unique(trig_lines.begin(), trig_lines.end()), trig_lines.end());
    for (const auto& l : trig_lines) out += l;

    std::vector<EventDecl> evs = events;
    std::sort(evs.begin(), evs.end(),
              [](const EventDecl& a, const EventDecl& b) { return a.name < b.name; });
    for (const EventDecl& e : evs) {
        out += "event " + e.name + " {\n";
        std::vector<std::string> paths = e.region_paths;
        std::sort(paths.begin(), paths.end());
        paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
        out += "  region = [";
        for (size_t i = 0; i < paths.size(); ++i) {
            if (i) out += ", ";
            out += paths[i];
        }
        out += "];\n";
        if (e.time_label) out += "  time = " + quoted(*e.time_label) + ";\n";
        out += "}\n";
    }

    std::vector<std::string> chrono_lines;
    for (const ChronologyDecl& c : chronology) {
        std::string line = "chronology " + c.from + " -> " + c.to;
        if (c.guard) line += " guard = " + quoted(*c.guard);
        line += ";\n";
        chrono_lines.push_back(std::move(line));
    }
    std::sort(chrono_lines.begin(), chrono_lines.end());
    chrono_lines.erase(std::unique(chrono_lines.begin(), chrono_lines.end()), chrono_lines.end());
    for (const auto& l : chrono_lines) out += l;

    res.ok = true;
    res.text = std::move(out);
    return res;
}

}  // namespace tmtk::dsl
