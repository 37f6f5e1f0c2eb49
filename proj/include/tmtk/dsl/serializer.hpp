#ifndef TMTK_DSL_SERIALIZER_HPP
#define TMTK_DSL_SERIALIZER_HPP

#include <string>
#include <vector>

#include "tmtk/core/model.hpp"
#include "tmtk/diagnostics.hpp"
#include "tmtk/dsl/parser.hpp"

namespace tmtk::dsl {

struct SerializeResult {
    bool ok = false;
    std::string text;
    std::vector<Diagnostic> diagnostics;
};

/// Canonical form: declarations sorted by (kind, path), 2-space indentation,
/// one statement per line. Output reparses to a structurally equal model and
/// re-serialization is byte-idempotent. Fails (INVALID_MODEL) when the model
/// has validation errors or contains a name the grammar cannot express.
SerializeResult serialize_tm(const core::StaticModel& model,
                             const std::vector<EventDecl>& events = {},
                             const std::vector<ChronologyDecl>& chronology = {});

}  // namespace tmtk::dsl

#endif
