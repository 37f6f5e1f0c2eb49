#include "tmtk/er/translate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tmtk::er {

namespace {

using core::StageKind;
using core::StageRef;
using core::StaticModel;
using core::ThimacId;
using core::ThimacKind;

void add_create(StaticModel& m, ThimacId id) { m.add_stage(id, StageKind::Create); }

/// Gives the entity individual an outbound boundary (create -> release ->
/// transfer_out) the first time it participates in a relationship.
StageRef ensure_outbound(StaticModel& m, ThimacId individual) {
    if (!m.at(individual).has_stage(StageKind::Release)) {
        m.add_stage(individual, StageKind::Release);
        m.add_flow(StageRef{individual, StageKind::Create},
                   StageRef{individual, StageKind::Release});
    }
    if (!m.at(individual).has_stage(StageKind::TransferOut)) {
        m.add_stage(individual, StageKind::TransferOut);
        m.add_flow(StageRef{individual, StageKind::Release},
                   StageRef{individual, StageKind::TransferOut});
    }
    return StageRef{individual, StageKind::TransferOut};
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string pluralize(std::string_view entity_name) {
    if (!entity_name.empty() && (entity_name.back() == 'S' || entity_name.back() == 's')) {
        return std::string(entity_name);
    }
    return std::string(entity_name) + "S";
}

core::StaticModel translate_er(const ERSchema& schema) {
    StaticModel m;
    std::set<std::string> many_entities;
    for (const auto* bucket : {&schema.relationships, &schema.roles}) {
        for (const RelationshipType& rel : *bucket) {
            for (const Endpoint& ep : rel.endpoints) {
                if (ep.cardinality == Cardinality::Many) many_entities.insert(ep.entity);
            }
        }
    }

    // R1 + R2: entity sets with their individuals, attributes and subsets.
    std::map<std::string, ThimacId> individual_of;
    for (const EntityType& ent : schema.entities) {
        ThimacId set_id = m.add_thimac(pluralize(ent.name), ThimacKind::Set);
        add_create(m, set_id);
        ThimacId indiv = m.add_thimac(ent.name, ThimacKind::Individual, set_id);
        add_create(m, indiv);
        individual_of[ent.name] = indiv;
        for (const Attribute& a : ent.attributes) {
            ThimacId attr = m.add_thimac(a.name, ThimacKind::Attribute, indiv);
            add_create(m, attr);
        }
        if (many_entities.count(ent.name)) {
            ThimacId sub = m.add_thimac("Sub" + pluralize(ent.name), ThimacKind::Set, set_id);
            add_create(m, sub);
            ThimacId member = m.add_thimac(ent.name, ThimacKind::Individual, sub);
            add_create(m, member);
        }
    }

    // R3 + R4: one relationship thimac per declared relationship, then per
    // declared role.
    auto emit_relationship = [&](const RelationshipType& rel) {
        ThimacId rid = m.add_thimac(rel.name, ThimacKind::Relationship);
        add_create(m, rid);
        int ones = 0, manys = 0;
        for (const Endpoint& ep : rel.endpoints) {
            (ep.cardinality == Cardinality::One ? ones : manys)++;
        }
        const bool one_to_many = ones == 1 && manys == 1;
        std::set<std::string> used;
        for (const Endpoint& ep : rel.endpoints) {
            std::string pname = ep.cardinality == Cardinality::One
                                    ? ep.entity
                                    : "Sub" + pluralize(ep.entity);
            if (!used.insert(pname).second) pname += "_2";
            ThimacKind pkind = ep.cardinality == Cardinality::One ? ThimacKind::Individual
                                                                  : ThimacKind::Set;
            ThimacId part = m.add_thimac(pname, pkind, rid);
            if (pkind == ThimacKind::Set) {
                ThimacId member = m.add_thimac(ep.entity, ThimacKind::Individual, part);
                add_create(m, member);
            }
            m.add_stage(part, StageKind::TransferIn);
            m.add_stage(part, StageKind::Receive);
            m.add_flow(StageRef{part, StageKind::TransferIn}, StageRef{part, StageKind::Receive});
            if (one_to_many && ep.cardinality == Cardinality::One) {
                ThimacId uniq = m.add_thimac("uniqueness", ThimacKind::Attribute, part);
                add_create(m, uniq);
            }
            auto it = individual_of.find(ep.entity);
            if (it != individual_of.end()) {
                StageRef out = ensure_outbound(m, it->second);
                m.add_flow(out, StageRef{part, StageKind::TransferIn});
            }
        }
    };
    for (const RelationshipType& rel : schema.relationships) emit_relationship(rel);
    for (const RelationshipType& role : schema.roles) emit_relationship(role);
    return m;
}

core::StaticModel fd_to_tm(const FD& fd) {
    StaticModel m;
    ThimacId root =
        m.add_thimac("FD:" + join(fd.lhs, ",") + "→" + join(fd.rhs, ","),
                     ThimacKind::Relationship);
    add_create(m, root);

    std::vector<std::string> attrs = fd.lhs;
    attrs.insert(attrs.end(), fd.rhs.begin(), fd.rhs.end());
    std::sort(attrs.begin(), attrs.end());

    ThimacId compare = -1;
    for (const char* tname : {"Tuple1", "Tuple2"}) {
        ThimacId tup = m.add_thimac(tname, ThimacKind::Individual, root);
        add_create(m, tup);
        for (const std::string& a : attrs) {
            ThimacId attr = m.add_thimac(a, ThimacKind::Attribute, tup);
            add_create(m, attr);
        }
        ensure_outbound(m, tup);
    }
    compare = m.add_thimac("Compare", ThimacKind::Plain, root);
    m.add_stage(compare, StageKind::TransferIn);
    m.add_stage(compare, StageKind::Receive);
    m.add_stage(compare, StageKind::Process, core::KernelSpec{"compare_eq", fd.lhs});
    m.add_flow(StageRef{compare, StageKind::TransferIn}, StageRef{compare, StageKind::Receive});
    m.add_flow(StageRef{compare, StageKind::Receive}, StageRef{compare, StageKind::Process});

    ThimacId assert_t = m.add_thimac("Assert", ThimacKind::Plain, root);
    m.add_stage(assert_t, StageKind::Process, core::KernelSpec{"assert_eq", fd.rhs});

    for (const core::Thimac& t : m.thimacs) {
        if (t.name == "Tuple1" || t.name == "Tuple2") {
            m.add_flow(StageRef{t.id, StageKind::TransferOut},
                       StageRef{compare, StageKind::TransferIn});
        }
    }
    m.add_trigger(StageRef{compare, StageKind::Process},
                  StageRef{assert_t, StageKind::Process}, std::string("equal"));
    return m;
}

}  // namespace tmtk::er
