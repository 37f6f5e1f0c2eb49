#include "tmtk/core/path.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tmtk::core {

namespace {

std::vector<std::string_view> split_dotted(std::string_view s) {
    std::vector<std::string_view> parts;
    size_t start = 0;
    while (start <= s.size()) {
        size_t dot = s.find('.', start);
        if (dot == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, dot - start));
        start = dot + 1;
    }
    return parts;
}

// Finds the unique child (or root when parent < 0) with the given name.
// Returns -2 on ambiguity, -1 when absent.
ThimacId lookup_child(const StaticModel& m, ThimacId parent, std::string_view name) {
    const std::vector<ThimacId>& pool = parent < 0 ? m.roots : m.at(parent).children;
    ThimacId found = -1;
    for (ThimacId c : pool) {
        if (m.at(c).name == name) {
            if (found >= 0) return -2;
            found = c;
        }
    }
    return found;
}

}  // namespace

std::string path_of(const StaticModel& model, const ElementRef& ref) {
    return ref.is_stage() ? model.path_of(ref.stage_ref()) : model.path_of(ref.thimac);
}

ResolveResult resolve_path(const StaticModel& model, std::string_view dotted_path) {
    ResolveResult res;
    if (dotted_path.empty()) {
        res.message = "empty path";
        return res;
    }
    auto parts = split_dotted(dotted_path);
    ThimacId cur = -1;
    for (size_t i = 0; i < parts.size(); ++i) {
        std::string_view part = parts[i];
        if (part.empty()) {
            res.message = "empty path segment in '" + std::string(dotted_path) + "'";
            return res;
        }
        // A trailing stage-kind segment refers to a stage of the thimac
        // resolved so far. Stage-kind names are reserved words, so a thimac
        // can never shadow them.
        if (auto sk = stage_kind_from(part)) {
            if (i + 1 != parts.size() || cur < 0) {
                res.message = "stage kind '" + std::string(part) + "' must be the last segment";
                return res;
            }
            if (!model.at(cur).has_stage(*sk)) {
                res.message = "no stage '" + std::string(part) + "' on " + model.path_of(cur);
                return res;
            }
            res.status = ResolveStatus::Ok;
            res.ref = ElementRef{cur, *sk};
            return res;
        }
        ThimacId next = lookup_child(model, cur, part);
        if (next == -2) {
            res.status = ResolveStatus::Ambiguous;
            res.message = "ambiguous name '" + std::string(part) + "' in '" +
                          std::string(dotted_path) + "'";
            return res;
        }
        if (next < 0) {
            res.message = "no element named '" + std::string(part) + "' in '" +
                          std::string(dotted_path) + "'";
            return res;
        }
        cur = next;
    }
    res.status = ResolveStatus::Ok;
    res.ref = ElementRef{cur, std::nullopt};
    return res;
}

SubdiagramResult subdiagram(const StaticModel& model, const std::vector<ElementRef>& refs) {
    SubdiagramResult res;

    // Collect the included thimacs and stages.
    std::set<ThimacId> listed_thimacs;
    std::set<StageRef> stages;
    for (const ElementRef& r : refs) {
        if (!model.valid_id(r.thimac)) {
            res.message = "reference to a missing thimac";
            return res;
        }
        if (r.is_stage()) {
            if (!model.has_stage(r.stage_ref())) {
                res.message = "reference to a missing stage on " + model.path_of(r.thimac);
                return res;
            }
            stages.insert(r.stage_ref());
        } else {
            listed_thimacs.insert(r.thimac);
            for (const auto& [kind, st] : model.at(r.thimac).stages) {
                stages.insert(StageRef{r.thimac, kind});
            }
        }
    }
    std::set<ThimacId> thimacs = listed_thimacs;
    for (const StageRef& s : stages) thimacs.insert(s.thimac);

    // Rebuild the fragment with remapped ids. Parent links survive only when
    // the parent is itself included.
    std::map<ThimacId, ThimacId> remap;
    std::vector<ThimacId> order(thimacs.begin(), thimacs.end());
    std::sort(order.begin(), order.end());
    for (ThimacId id : order) {
        const Thimac& src = model.at(id);
        ThimacId parent = -1;
        for (ThimacId up = src.parent; up >= 0; up = model.at(up).parent) {
            if (thimacs.count(up)) {
                parent = remap.at(up);
                break;
            }
        }
        ThimacId nid = res.fragment.add_thimac(src.name, src.kind, parent);
        remap[id] = nid;
        Thimac& dst = res.fragment.at(nid);
        for (const auto& [kind, st] : src.stages) {
            if (stages.count(StageRef{id, kind})) dst.stages.emplace(kind, st);
        }
    }

    auto included = [&](StageRef ref) { return stages.count(ref) != 0; };
    for (const FlowEdge& f : model.flows) {
        if (included(f.from) && included(f.to)) {
            res.fragment.add_flow(StageRef{remap.at(f.from.thimac), f.from.kind},
                                  StageRef{remap.at(f.to.thimac), f.to.kind});
        }
    }
    for (const TriggerEdge& t : model.triggers) {
        if (included(t.from) && included(t.to)) {
            res.fragment.add_trigger(StageRef{remap.at(t.from.thimac), t.from.kind},
                                     StageRef{remap.at(t.to.thimac), t.to.kind}, t.guard);
        }
    }
    res.ok = true;
    return res;
}

}  // namespace tmtk::core
