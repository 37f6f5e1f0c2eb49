#ifndef TMTK_ER_SCHEMA_HPP
#define TMTK_ER_SCHEMA_HPP

#include <string>
#include <string_view>
#include <vector>

#include "tmtk/diagnostics.hpp"

namespace tmtk::er {

/// Functional dependency lhs -> rhs over attribute names. Sides are kept
/// sorted and unique; lhs and rhs never intersect.
struct FD {
    std::vector<std::string> lhs;
    std::vector<std::string> rhs;

    bool operator==(const FD&) const = default;
};

struct Attribute {
    std::string name;
    bool is_key = false;
};

struct EntityType {
    std::string name;
    std::vector<Attribute> attributes;
    std::vector<FD> fds;

    std::vector<std::string> key_attributes() const;
};

enum class Cardinality { One, Many };

struct Endpoint {
    std::string entity;
    Cardinality cardinality = Cardinality::One;
};

/// Binary relationship (or role) between two declared entities.
struct RelationshipType {
    std::string name;
    std::vector<Endpoint> endpoints;
};

struct ERSchema {
    std::vector<EntityType> entities;
    std::vector<RelationshipType> relationships;
    /// Role declarations are an `.ers` extension; they translate exactly like
    /// relationships and count toward the top-thimac total.
    std::vector<RelationshipType> roles;

    const EntityType* find_entity(std::string_view name) const;
};

struct ErParseResult {
    ERSchema schema;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return !has_errors(diagnostics); }
};

/// Parses the line-oriented `.ers` format:
///   entity NAME { attr NAME [key]; ... fd A,B->C; }
///   rel NAME (ENTITY:one|many, ENTITY:one|many);
///   role NAME (ENTITY:one|many, ENTITY:one|many);
/// with `#` comments.
ErParseResult parse_er(std::string_view text);

struct FdParseResult {
    bool ok = false;
    FD fd;
    std::string error_code;  // SYNTAX_ERROR | EMPTY_SIDE | OVERLAP
    std::string message;
};

/// Parses `A,B->C,D`; the arrow may be ASCII "->" or U+2192. Attribute names
/// are trimmed.
FdParseResult parse_fd_expr(std::string_view text);

}  // namespace tmtk::er

#endif
