#include "tmtk/er/schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace tmtk::er {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(s.substr(start)));
            break;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool plain_name(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

// Relationship names additionally admit digits-first and '-' so that labels
// like "1-n" can be written.
bool rel_name(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
}

struct Cursor {
    std::string_view text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    void skip_ws() {
        while (!eof()) {
            if (peek() == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(peek()))) {
                advance();
            } else {
                break;
            }
        }
    }
    SourceSpan here() const { return SourceSpan{line, col, line, col}; }

    std::string read_word() {
        skip_ws();
        size_t start = pos;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '-')) {
            advance();
        }
        return std::string(text.substr(start, pos - start));
    }
    bool consume(char c) {
        skip_ws();
        if (!eof() && peek() == c) {
            advance();
            return true;
        }
        return false;
    }
    /// Reads up to (not including) any of the stop characters.
    std::string read_until(std::string_view stops) {
        size_t start = pos;
        while (!eof() && stops.find(peek()) == std::string_view::npos) advance();
        return std::string(text.substr(start, pos - start));
    }
};

}  // namespace

std::vector<std::string> EntityType::key_attributes() const {
    std::vector<std::string> out;
    for (const Attribute& a : attributes) {
        if (a.is_key) out.push_back(a.name);
    }
    return out;
}

const EntityType* ERSchema::find_entity(std::string_view name) const {
    for (const EntityType& e : entities) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

FdParseResult parse_fd_expr(std::string_view text) {
    FdParseResult res;
    size_t arrow = text.find("->");
    size_t arrow_len = 2;
    if (arrow == std::string_view::npos) {
        arrow = text.find("→");
        arrow_len = 3;
    }
    if (arrow == std::string_view::npos) {
        res.error_code = "SYNTAX_ERROR";
        res.message = "missing '->' in FD expression";
        return res;
    }
    FD fd;
    for (auto& a : split_list(text.substr(0, arrow), ',')) {
        if (!a.empty()) fd.lhs.push_back(std::move(a));
    }
    for (auto& a : split_list(text.substr(arrow + arrow_len), ',')) {
        if (!a.empty()) fd.rhs.push_back(std::move(a));
    }
    sort_unique(fd.lhs);
    sort_unique(fd.rhs);
    if (fd.lhs.empty() || fd.rhs.empty()) {
        res.error_code = "EMPTY_SIDE";
        res.message = "both FD sides need at least one attribute";
        return res;
    }
    std::vector<std::string> common;
    std::set_intersection(fd.lhs.begin(), fd.lhs.end(), fd.rhs.begin(), fd.rhs.end(),
                          std::back_inserter(common));
    if (!common.empty()) {
        res.error_code = "OVERLAP";
        res.message = "attribute '" + common.front() + "' appears on both FD sides";
        return res;
    }
    res.ok = true;
    res.fd = std::move(fd);
    return res;
}

ErParseResult parse_er(std::string_view text) {
    ErParseResult res;
    Cursor c{text};
    auto fail = [&](SourceSpan span, std::string code, std::string message) {
        res.diagnostics.push_back(
            Diagnostic{Severity::Error, std::move(code), std::move(message), "", span});
    };
    auto skip_statement = [&]() {
        while (!c.eof() && c.peek() != ';' && c.peek() != '}') c.advance();
        if (!c.eof()) c.advance();
    };

    while (true) {
        c.skip_ws();
        if (c.eof()) break;
        SourceSpan span = c.here();
        std::string word = c.read_word();
        if (word == "entity") {
            EntityType ent;
            c.skip_ws();
            SourceSpan name_span = c.here();
            ent.name = c.read_word();
            if (!plain_name(ent.name)) {
                fail(name_span, "PARSE", "expected an entity name");
                skip_statement();
                continue;
            }
            if (!c.consume('{')) {
                fail(c.here(), "PARSE", "expected '{' after entity name");
                continue;
            }
            while (true) {
                c.skip_ws();
                if (c.eof()) {
                    fail(c.here(), "PARSE", "unterminated entity block");
                    break;
                }
                if (c.consume('}')) break;
                SourceSpan stmt_span = c.here();
                std::string kw = c.read_word();
                if (kw == "attr") {
                    Attribute a;
                    a.name = c.read_word();
                    if (!plain_name(a.name)) {
                        fail(stmt_span, "PARSE", "expected an attribute name");
                        skip_statement();
                        continue;
                    }
                    c.skip_ws();
                    std::string tail = trim(c.read_until(";}"));
                    if (tail == "key") {
                        a.is_key = true;
                    } else if (!tail.empty()) {
                        fail(stmt_span, "PARSE", "unexpected text after attribute: '" + tail + "'");
                    }
                    if (!c.consume(';')) fail(c.here(), "PARSE", "expected ';'");
                    if (std::any_of(ent.attributes.begin(), ent.attributes.end(),
                                    [&](const Attribute& x) { return x.name == a.name; })) {
                        fail(stmt_span, "DUP_ATTR",
                             "duplicate attribute '" + a.name + "' in entity '" + ent.name + "'");
                    } else {
                        ent.attributes.push_back(std::move(a));
                    }
                } else if (kw == "fd") {
                    c.skip_ws();
                    std::string expr = trim(c.read_until(";}"));
                    if (!c.consume(';')) fail(c.here(), "PARSE", "expected ';'");
                    auto fd = parse_fd_expr(expr);
                    if (!fd.ok) {
                        fail(stmt_span, fd.error_code, fd.message + " in '" + expr + "'");
                        continue;
                    }
                    auto known = [&](const std::string& a) {
                        return std::any_of(ent.attributes.begin(), ent.attributes.end(),
                                           [&](const Attribute& x) { return x.name == a; });
                    };
                    bool all_known = true;
                    for (const auto& side : {fd.fd.lhs, fd.fd.rhs}) {
                        for (const auto& a : side) {
                            if (!known(a)) {
                                fail(stmt_span, "FD_UNKNOWN_ATTR",
                                     "FD attribute '" + a + "' is not declared in entity '" +
                                         ent.name + "'");
                                all_known = false;
                            }
                        }
                    }
                    if (all_known) ent.fds.push_back(std::move(fd.fd));
                } else {
                    fail(stmt_span, "PARSE", "expected 'attr' or 'fd', got '" + kw + "'");
                    skip_statement();
                }
            }
            if (ent.attributes.empty()) {
                fail(span, "NO_ATTRIBUTES", "entity '" + ent.name + "' declares no attributes");
            }
            if (std::any_of(res.schema.entities.begin(), res.schema.entities.end(),
                            [&](const EntityType& e) { return e.name == ent.name; })) {
                fail(span, "DUP_ENTITY", "duplicate entity '" + ent.name + "'");
            } else {
                res.schema.entities.push_back(std::move(ent));
            }
        } else if (word == "rel" || word == "role") {
            RelationshipType rel;
            c.skip_ws();
            SourceSpan name_span = c.here();
            rel.name = c.read_word();
            if (!rel_name(rel.name)) {
                fail(name_span, "PARSE", "expected a relationship name");
                skip_statement();
                continue;
            }
            if (!c.consume('(')) {
                fail(c.here(), "PARSE", "expected '(' after relationship name");
                skip_statement();
                continue;
            }
            std::string inside = c.read_until(")");
            if (!c.consume(')')) {
                fail(c.here(), "PARSE", "expected ')'");
                continue;
            }
            if (!c.consume(';')) fail(c.here(), "PARSE", "expected ';'");
            bool bad = false;
            for (const std::string& part : split_list(inside, ',')) {
                auto pieces = split_list(part, ':');
                if (pieces.size() != 2 || pieces[0].empty()) {
                    fail(name_span, "PARSE", "endpoint must be ENTITY:one|many, got '" + part + "'");
                    bad = true;
                    continue;
                }
                Endpoint ep;
                ep.entity = pieces[0];
                if (pieces[1] == "one") {
                    ep.cardinality = Cardinality::One;
                } else if (pieces[1] == "many") {
                    ep.cardinality = Cardinality::Many;
                } else {
                    fail(name_span, "PARSE", "cardinality must be one|many, got '" + pieces[1] + "'");
                    bad = true;
                    continue;
                }
                rel.endpoints.push_back(std::move(ep));
            }
            if (bad) continue;
            if (rel.endpoints.size() != 2) {
                fail(name_span, "UNSUPPORTED_ARITY",
                     "relationship '" + rel.name + "' must be binary, got " +
                         std::to_string(rel.endpoints.size()) + " endpoints");
                continue;
            }
            if (word == "rel") {
                res.schema.relationships.push_back(std::move(rel));
            } else {
                res.schema.roles.push_back(std::move(rel));
            }
        } else {
            fail(span, "PARSE", "expected 'entity', 'rel' or 'role', got '" + word + "'");
            if (word.empty()) c.advance();
            skip_statement();
        }
    }

    // Endpoint resolution happens after the whole file is read so forward
    // references work.
    for (const auto* bucket : {&res.schema.relationships, &res.schema.roles}) {
        for (const RelationshipType& r : *bucket) {
            for (const Endpoint& ep : r.endpoints) {
                if (!res.schema.find_entity(ep.entity)) {
                    res.diagnostics.push_back(Diagnostic{
                        Severity::Error, "UNKNOWN_ENTITY",
                        "relationship '" + r.name + "' references undeclared entity '" +
                            ep.entity + "'",
                        r.name, std::nullopt});
                }
            }
        }
    }
    return res;
}

}  // namespace tmtk::er
