#ifndef TMTK_CORE_MODEL_HPP
#define TMTK_CORE_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmtk::core {

/// Notational kind of a thimac. `Plain` is the default; the others mirror the
/// ER-facing vocabulary (entity set, individual member, relationship box,
/// attribute subthimac).
enum class ThimacKind { Plain, Set, Individual, Relationship, Attribute };

/// The five generic actions, with transfer split into its two boundary ports.
enum class StageKind { Create, Process, Release, Receive, TransferIn, TransferOut };

inline constexpr int kStageKindCount = 6;

const char* to_string(ThimacKind k);
const char* to_string(StageKind k);  // path form: "transfer_in" / "transfer_out"
std::optional<ThimacKind> thimac_kind_from(std::string_view s);
std::optional<StageKind> stage_kind_from(std::string_view s);

using ThimacId = int;  // index into StaticModel::thimacs

/// Simulator kernel attached to a process/create stage: a name plus string
/// arguments (field names or an error code).
struct KernelSpec {
    std::string name;
    std::vector<std::string> args;

    bool operator==(const KernelSpec&) const = default;
};

struct Stage {
    StageKind kind = StageKind::Process;
    std::optional<KernelSpec> kernel;

    bool operator==(const Stage&) const = default;
};

struct Thimac {
    ThimacId id = -1;
    ThimacId parent = -1;  // -1 for roots
    std::string name;
    ThimacKind kind = ThimacKind::Plain;
    std::vector<ThimacId> children;
    std::map<StageKind, Stage> stages;  // at most one stage per kind by construction

    bool has_stage(StageKind k) const { return stages.count(k) != 0; }
};

struct StageRef {
    ThimacId thimac = -1;
    StageKind kind = StageKind::Process;

    auto operator<=>(const StageRef&) const = default;
};

struct FlowEdge {
    StageRef from;
    StageRef to;
};

struct TriggerEdge {
    StageRef from;
    StageRef to;
    std::optional<std::string> guard;
};

/// A static TM description: a forest of thimacs plus flow (solid) and trigger
/// (dashed) edges between stages. Values are immutable once built; every
/// operation on them is a pure function.
struct StaticModel {
    std::vector<Thimac> thimacs;
    std::vector<ThimacId> roots;
    std::vector<FlowEdge> flows;
    std::vector<TriggerEdge> triggers;

    bool valid_id(ThimacId id) const { return id >= 0 && id < static_cast<int>(thimacs.size()); }
    const Thimac& at(ThimacId id) const { return thimacs[static_cast<size_t>(id)]; }
    Thimac& at(ThimacId id) { return thimacs[static_cast<size_t>(id)]; }

    bool has_stage(StageRef ref) const;
    const Stage* find_stage(StageRef ref) const;

    /// Builder helpers; the parser and translators use these.
    ThimacId add_thimac(std::string name, ThimacKind kind = ThimacKind::Plain,
                        ThimacId parent = -1);
    Stage& add_stage(ThimacId owner, StageKind kind, std::optional<KernelSpec> kernel = {});
    void add_flow(StageRef from, StageRef to);
    void add_trigger(StageRef from, StageRef to, std::optional<std::string> guard = {});

    /// Dotted path of a thimac ("A.B.C") or stage ("A.B.process").
    std::string path_of(ThimacId id) const;
    std::string path_of(StageRef ref) const;

    bool empty() const { return thimacs.empty() && flows.empty() && triggers.empty(); }
};

/// Legal intra-thimac flow pairs. Inter-thimac flows are restricted to
/// transfer_out -> transfer_in and are not part of this table.
bool flow_adjacency_allows(StageKind from, StageKind to);
const std::vector<std::pair<StageKind, StageKind>>& flow_adjacency_table();

/// Structural equality: compares the forest by name/kind/stages with sibling
/// order ignored (sibling names are unique in valid models), and edges as
/// path-keyed multisets. Ids and declaration order do not participate.
bool structurally_equal(const StaticModel& a, const StaticModel& b);

}  // namespace tmtk::core

#endif
