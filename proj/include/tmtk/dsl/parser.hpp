#ifndef TMTK_DSL_PARSER_HPP
#define TMTK_DSL_PARSER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tmtk/core/model.hpp"
#include "tmtk/diagnostics.hpp"

namespace tmtk::dsl {

/// Raw event declaration as written; region paths are resolved later by the
/// event engine against the host model.
struct EventDecl {
    std::string name;
    std::vector<std::string> region_paths;
    std::optional<std::string> time_label;
    SourceSpan span;
};

struct ChronologyDecl {
    std::string from;
    std::string to;
    std::optional<std::string> guard;
    SourceSpan span;
};

struct ParseResult {
    core::StaticModel model;
    std::vector<EventDecl> events;
    std::vector<ChronologyDecl> chronology;
    std::vector<Diagnostic> diagnostics;
    /// Element path -> source span, for locatable downstream diagnostics.
    /// Edges use the key "<from> -> <to>".
    std::unordered_map<std::string, SourceSpan> locations;

    bool ok() const { return !has_errors(diagnostics); }
};

/// Parses `.tm` text. Recovers at `;` and `}` so multiple errors are reported
/// in one pass.
ParseResult parse_tm(std::string_view text);

bool is_identifier(std::string_view s);

}  // namespace tmtk::dsl

#endif
