#ifndef TMTK_DIAGNOSTICS_HPP
#define TMTK_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <vector>

namespace tmtk {

enum class Severity { Error, Warning };

/// Half-open source region, 1-based line/column.
struct SourceSpan {
    int line = 0;
    int column = 0;
    int end_line = 0;
    int end_column = 0;
};

/// A validation or parse finding. Diagnostics are accumulated, never thrown.
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::string path;  // dotted element path when the finding is model-level
    std::optional<SourceSpan> span;
};

bool has_errors(const std::vector<Diagnostic>& diags);

/// "file:line:col: error[CODE]: message" (file/span parts omitted when absent).
std::string format_diagnostic(const Diagnostic& d, const std::string& file = "");

}  // namespace tmtk

#endif
