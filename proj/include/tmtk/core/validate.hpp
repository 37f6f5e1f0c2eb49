#ifndef TMTK_CORE_VALIDATE_HPP
#define TMTK_CORE_VALIDATE_HPP

#include <vector>

#include "tmtk/core/model.hpp"
#include "tmtk/diagnostics.hpp"

namespace tmtk::core {

// Rule codes emitted by validate_static.
inline constexpr const char* kRuleFlowAdjacency = "FLOW_ADJACENCY";
inline constexpr const char* kRuleFlowBoundary = "FLOW_BOUNDARY";
inline constexpr const char* kRuleTriggerSelf = "TRIGGER_SELF";
inline constexpr const char* kRuleSetNoMember = "SET_NO_MEMBER";
inline constexpr const char* kRuleAttrBadChild = "ATTR_BAD_CHILD";
inline constexpr const char* kRuleSiblingNameDup = "SIBLING_NAME_DUP";
inline constexpr const char* kRuleEmptyName = "EMPTY_NAME";
inline constexpr const char* kRuleDanglingChild = "DANGLING_CHILD";
inline constexpr const char* kRuleChildShared = "CHILD_SHARED";
inline constexpr const char* kRuleForestCycle = "FOREST_CYCLE";
inline constexpr const char* kRuleDanglingStage = "DANGLING_STAGE";
inline constexpr const char* kRuleGuardVocab = "GUARD_VOCAB";

/// Checks every well-formedness invariant of a static model and returns the
/// accumulated findings. Empty result means the model is clean. A thimac
/// without a create stage is fine (create may be left implicit).
std::vector<Diagnostic> validate_static(const StaticModel& model);

}  // namespace tmtk::core

#endif
