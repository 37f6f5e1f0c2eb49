#include "tmtk/core/validate.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace tmtk::core {

namespace {

const std::set<std::string>& outcome_vocabulary() {
    static const std::set<std::string> vocab = {"equal", "not-equal", "next", "EOF"};
    return vocab;
}

void add(std::vector<Diagnostic>& out, Severity sev, const char* code, std::string path,
         std::string message) {
    out.push_back(Diagnostic{sev, code, std::move(message), std::move(path), std::nullopt});
}

// Walks up the parent chain to detect cycles and to know whether the forest is
// usable for path reporting at all.
bool parent_chain_acyclic(const StaticModel& m, ThimacId id) {
    size_t hops = 0;
    for (ThimacId cur = id; cur >= 0; cur = m.at(cur).parent) {
        if (!m.valid_id(cur)) return false;
        if (++hops > m.thimacs.size()) return false;
    }
    return true;
}

}  // namespace

std::vector<Diagnostic> validate_static(const StaticModel& model) {
    std::vector<Diagnostic> diags;

    // Forest shape: every child id resolves, is claimed by one parent only,
    // and parent chains terminate.
    std::vector<int> claims(model.thimacs.size(), 0);
    for (const Thimac& t : model.thimacs) {
        for (ThimacId c : t.children) {
            if (!model.valid_id(c)) {
                add(diags, Severity::Error, kRuleDanglingChild, t.name,
                    "child id " + std::to_string(c) + " does not exist");
                continue;
            }
            claims[static_cast<size_t>(c)]++;
            if (model.at(c).parent != t.id) {
                add(diags, Severity::Error, kRuleChildShared, model.at(c).name,
                    "child/parent links disagree for '" + model.at(c).name + "'");
            }
        }
    }
    for (const Thimac& t : model.thimacs) {
        if (claims[static_cast<size_t>(t.id)] > 1) {
            add(diags, Severity::Error, kRuleChildShared, t.name,
                "thimac '" + t.name + "' is claimed by more than one parent");
        }
        if (!parent_chain_acyclic(model, t.id)) {
            add(diags, Severity::Error, kRuleForestCycle, t.name,
                "containment cycle through '" + t.name + "'");
        }
    }
    if (has_errors(diags)) {
        // Path reporting below assumes an intact forest.
        std::sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
            return std::tie(a.code, a.path, a.message) < std::tie(b.code, b.path, b.message);
        });
        return diags;
    }

    // Per-thimac invariants, visited in a declaration-order-independent way
    // (thimacs sorted by path).
    std::vector<ThimacId> order;
    order.reserve(model.thimacs.size());
    for (const Thimac& t : model.thimacs) order.push_back(t.id);
    std::sort(order.begin(), order.end(), [&](ThimacId a, ThimacId b) {
        return model.path_of(a) < model.path_of(b);
    });

    for (ThimacId id : order) {
        const Thimac& t = model.at(id);
        const std::string path = model.path_of(id);
        if (t.name.empty()) {
            add(diags, Severity::Error, kRuleEmptyName, path, "thimac has an empty name");
        }
        std::set<std::string_view> seen;
        for (ThimacId c : t.children) {
            if (!seen.insert(model.at(c).name).second) {
                add(diags, Severity::Error, kRuleSiblingNameDup, path + "." + model.at(c).name,
                    "duplicate sibling name '" + model.at(c).name + "' under '" + t.name + "'");
            }
        }
        if (t.kind == ThimacKind::Set) {
            bool has_member = std::any_of(t.children.begin(), t.children.end(), [&](ThimacId c) {
                ThimacKind k = model.at(c).kind;
                return k == ThimacKind::Individual || k == ThimacKind::Set;
            });
            if (!has_member) {
                add(diags, Severity::Error, kRuleSetNoMember, path,
                    "set '" + t.name + "' has no individual or subset member");
            }
        }
        if (t.kind == ThimacKind::Attribute) {
            for (ThimacId c : t.children) {
                ThimacKind k = model.at(c).kind;
                if (k == ThimacKind::Set || k == ThimacKind::Relationship) {
                    add(diags, Severity::Error, kRuleAttrBadChild, model.path_of(c),
                        "attribute '" + t.name + "' contains a " +
                            std::string(to_string(k)) + " child");
                }
            }
        }
    }
    {
        // Root-level sibling names must also be unique.
        std::set<std::string_view> seen;
        for (ThimacId r : model.roots) {
            if (!seen.insert(model.at(r).name).second) {
                add(diags, Severity::Error, kRuleSiblingNameDup, model.at(r).name,
                    "duplicate root thimac name '" + model.at(r).name + "'");
            }
        }
    }

    // Edge invariants.
    bool simulated = std::any_of(model.thimacs.begin(), model.thimacs.end(), [](const Thimac& t) {
        return std::any_of(t.stages.begin(), t.stages.end(),
                           [](const auto& kv) { return kv.second.kernel.has_value(); });
    });
    auto endpoint_ok = [&](StageRef ref, const char* what) {
        if (model.has_stage(ref)) return true;
        std::string where =
            model.valid_id(ref.thimac) ? model.path_of(ref) : std::string("<missing thimac>");
        add(diags, Severity::Error, kRuleDanglingStage, where,
            std::string(what) + " endpoint references a missing stage");
        return false;
    };
    for (const FlowEdge& f : model.flows) {
        bool ok = endpoint_ok(f.from, "flow");
        ok = endpoint_ok(f.to, "flow") && ok;
        if (!ok) continue;
        const std::string edge = model.path_of(f.from) + " -> " + model.path_of(f.to);
        if (f.from.thimac == f.to.thimac) {
            if (!flow_adjacency_allows(f.from.kind, f.to.kind)) {
                add(diags, Severity::Error, kRuleFlowAdjacency, edge,
                    "flow " + std::string(to_string(f.from.kind)) + " -> " +
                        to_string(f.to.kind) + " is not a legal intra-thimac step");
            }
        } else if (f.from.kind != StageKind::TransferOut || f.to.kind != StageKind::TransferIn) {
            add(diags, Severity::Error, kRuleFlowBoundary, edge,
                "inter-thimac flows must connect transfer_out to transfer_in");
        }
    }
    for (const TriggerEdge& tr : model.triggers) {
        bool ok = endpoint_ok(tr.from, "trigger");
        ok = endpoint_ok(tr.to, "trigger") && ok;
        if (!ok) continue;
        const std::string edge = model.path_of(tr.from) + " -> " + model.path_of(tr.to);
        if (tr.from == tr.to) {
            add(diags, Severity::Error, kRuleTriggerSelf, edge,
                "trigger connects a stage to itself");
        }
        if (simulated && tr.guard && !outcome_vocabulary().count(*tr.guard)) {
            add(diags, Severity::Warning, kRuleGuardVocab, edge,
                "guard '" + *tr.guard + "' is not a kernel outcome label");
        }
    }

    std::sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.code, a.path, a.message) < std::tie(b.code, b.path, b.message);
    });
    return diags;
}

}  // namespace tmtk::core
