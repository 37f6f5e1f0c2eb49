#ifndef TMTK_DOT_EXPORT_HPP
#define TMTK_DOT_EXPORT_HPP

#include <string>

#include "tmtk/core/model.hpp"
#include "tmtk/events/behavior.hpp"

namespace tmtk::dot {

/// DOT digraph: one node per stage labeled "Thimac.stage", thimacs as nested
/// clusters, solid edges for flows, dashed edges for triggers (guard as edge
/// label). Node ordering is deterministic.
std::string export_dot(const core::StaticModel& model);

/// Second digraph for a behavior graph (event chronology).
std::string export_behavior_dot(const events::BehaviorGraph& graph);

}  // namespace tmtk::dot

#endif
