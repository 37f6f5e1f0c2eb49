#ifndef TMTK_CORE_PATH_HPP
#define TMTK_CORE_PATH_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmtk/core/model.hpp"

namespace tmtk::core {

/// Reference to a thimac or to one of its stages.
struct ElementRef {
    ThimacId thimac = -1;
    std::optional<StageKind> stage;  // nullopt = the thimac itself

    bool is_stage() const { return stage.has_value(); }
    StageRef stage_ref() const { return StageRef{thimac, *stage}; }
    auto operator<=>(const ElementRef&) const = default;
};

enum class ResolveStatus { Ok, NotFound, Ambiguous };

struct ResolveResult {
    ResolveStatus status = ResolveStatus::NotFound;
    ElementRef ref;
    std::string message;

    bool ok() const { return status == ResolveStatus::Ok; }
};

/// Resolves `Name.Name...[.stageKind]` root-downward by thimac names.
ResolveResult resolve_path(const StaticModel& model, std::string_view dotted_path);

struct SubdiagramResult {
    bool ok = false;
    StaticModel fragment;
    std::string message;  // set when a ref does not resolve
};

/// Induced fragment: the listed elements plus every flow/trigger edge with both
/// endpoints included. A thimac ref brings the thimac and all of its stages;
/// children must be listed separately. The fragment keeps parent/child links
/// between included thimacs and re-derives roots.
SubdiagramResult subdiagram(const StaticModel& model, const std::vector<ElementRef>& refs);

std::string path_of(const StaticModel& model, const ElementRef& ref);

}  // namespace tmtk::core

#endif
