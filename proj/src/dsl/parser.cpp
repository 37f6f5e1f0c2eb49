#include "tmtk/dsl/parser.hpp"

#include <cctype>
#include <set>

#include "tmtk/core/path.hpp"

namespace tmtk::dsl {

namespace {

enum class Tok {
    Ident,
    Keyword,
    String,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semicolon,
    Comma,
    Equals,
    Dot,
    Arrow,
    End,
    Bad,
};

struct Token {
    Tok tok = Tok::End;
    std::string text;
    SourceSpan span;
};

const std::set<std::string_view>& keywords() {
    static const std::set<std::string_view> kw = {
        "thimac",     "kind",      "plain",   "set",    "individual", "relationship",
        "attribute",  "create",    "process", "release", "receive",   "transfer",
        "in",         "out",       "kernel",  "flow",    "trigger",   "guard",
        "event",      "region",    "time",    "chronology", "transfer_in", "transfer_out",
    };
    return kw;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_trivia();
        Token t;
        t.span = here();
        if (pos_ >= text_.size()) {
            t.tok = Tok::End;
            return t;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                advance();
            }
            t.text = std::string(text_.substr(start, pos_ - start));
            t.tok = keywords().count(t.text) ? Tok::Keyword : Tok::Ident;
        } else if (c == '"') {
            advance();
            std::string value;
            bool closed = false;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (d == '\\' && pos_ + 1 < text_.size()) {
                    advance();
                    value += text_[pos_];
                    advance();
                    continue;
                }
                if (d == '"') {
                    advance();
                    closed = true;
                    break;
                }
                if (d == '\n') break;
                value += d;
                advance();
            }
            t.tok = closed ? Tok::String : Tok::Bad;
            t.text = closed ? value : "unterminated string";
        } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance();
            advance();
            t.tok = Tok::Arrow;
        } else {
            advance();
            switch (c) {
            case '{': t.tok = Tok::LBrace; break;
            case '}': t.tok = Tok::RBrace; break;
            case '(': t.tok = Tok::LParen; break;
            case ')': t.tok = Tok::RParen; break;
            case '[': t.tok = Tok::LBracket; break;
            case ']': t.tok = Tok::RBracket; break;
            case ';': t.tok = Tok::Semicolon; break;
            case ',': t.tok = Tok::Comma; break;
            case '=': t.tok = Tok::Equals; break;
            case '.': t.tok = Tok::Dot; break;
            default:
                t.tok = Tok::Bad;
                t.text = std::string("unexpected character '") + c + "'";
            }
        }
        t.span.end_line = line_;
        t.span.end_column = col_;
        return t;
    }

private:
    SourceSpan here() const { return SourceSpan{line_, col_, line_, col_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct RawEdge {
    bool is_trigger = false;
    std::string from;
    std::string to;
    std::optional<std::string> guard;
    SourceSpan span;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { bump(); }

    ParseResult run() {
        while (cur_.tok != Tok::End) {
            parse_decl(-1);
        }
        resolve_edges();
        return std::move(result_);
    }

private:
    void bump() {
        cur_ = lexer_.next();
        if (cur_.tok == Tok::Bad) {
            error(cur_.text.empty() ? "bad token" : cur_.text);
            cur_.text.clear();
        }
    }

    bool at_keyword(std::string_view kw) const {
        return cur_.tok == Tok::Keyword && cur_.text == kw;
    }

    void error(std::string message) {
        result_.diagnostics.push_back(
            Diagnostic{Severity::Error, "PARSE", std::move(message), "", cur_.span});
    }

    void error_at(SourceSpan span, std::string code, std::string message) {
        result_.diagnostics.push_back(
            Diagnostic{Severity::Error, std::move(code), std::move(message), "", span});
    }

    /// Skips to the next ';' (consumed) or to a '}' (left for the caller).
    void recover() {
        while (cur_.tok != Tok::End && cur_.tok != Tok::Semicolon && cur_.tok != Tok::RBrace) {
            bump();
        }
        if (cur_.tok == Tok::Semicolon) bump();
    }

    bool expect(Tok t, const char* what) {
        if (cur_.tok == t) {
            bump();
            return true;
        }
        error(std::string("expected ") + what);
        return false;
    }

    std::optional<std::string> expect_ident(const char* what) {
        if (cur_.tok == Tok::Ident) {
            std::string s = cur_.text;
            bump();
            return s;
        }
        error(std::string("expected ") + what);
        return std::nullopt;
    }

    std::optional<std::string> expect_string(const char* what) {
        if (cur_.tok == Tok::String) {
            std::string s = cur_.text;
            bump();
            return s;
        }
        error(std::string("expected ") + what);
        return std::nullopt;
    }

    // PATH := segment ("." segment)*; stage-kind keywords may only close the
    // path. Returns the dotted text.
    std::optional<std::string> parse_path() {
        std::string path;
        bool want_more = true;
        while (want_more) {
            if (!path.empty()) path += '.';
            if (cur_.tok == Tok::Ident) {
                path += cur_.text;
                bump();
            } else if (cur_.tok == Tok::Keyword && core::stage_kind_from(cur_.text)) {
                path += cur_.text;
                bump();
                return path;  // stage kind closes the path
            } else {
                error("expected a path segment");
                return std::nullopt;
            }
            if (cur_.tok == Tok::Dot) {
                bump();
            } else {
                want_more = false;
            }
        }
        return path;
    }

    void parse_decl(core::ThimacId parent) {
        if (at_keyword("thimac")) {
            parse_thimac(parent);
        } else if (at_keyword("flow") || at_keyword("trigger")) {
            parse_edge();
        } else if (at_keyword("event")) {
            parse_event();
        } else if (at_keyword("chronology")) {
            parse_chronology();
        } else {
            error("expected a declaration (thimac, flow, trigger, event, chronology)");
            if (cur_.tok == Tok::RBrace || cur_.tok == Tok::End) return;
            bump();
            recover();
        }
    }

    void parse_thimac(core::ThimacId parent) {
        SourceSpan span = cur_.span;
        bump();  // thimac
        auto name = expect_ident("a thimac name");
        if (!name) {
            recover();
            return;
        }
        core::ThimacKind kind = core::ThimacKind::Plain;
        if (at_keyword("kind")) {
            bump();
            if (!expect(Tok::Equals, "'='")) {
                recover();
                return;
            }
            if (cur_.tok == Tok::Keyword) {
                if (auto k = core::thimac_kind_from(cur_.text)) {
                    kind = *k;
                    bump();
                } else {
                    error("expected a thimac kind");
                    recover();
                    return;
                }
            } else {
                error("expected a thimac kind");
                recover();
                return;
            }
        }
        core::ThimacId id = result_.model.add_thimac(*name, kind, parent);
        result_.locations[result_.model.path_of(id)] = span;
        if (!expect(Tok::LBrace, "'{'")) {
            recover();
            return;
        }
        while (cur_.tok != Tok::RBrace && cur_.tok != Tok::End) {
            if (at_keyword("thimac")) {
                parse_thimac(id);
            } else if (is_stage_start()) {
                parse_stage(id);
            } else {
                error("expected a stage or nested thimac");
                bump();
                recover();
            }
        }
        expect(Tok::RBrace, "'}'");
    }

    bool is_stage_start() const {
        if (cur_.tok != Tok::Keyword) return false;
        return cur_.text == "create" || cur_.text == "process" || cur_.text == "release" ||
               cur_.text == "receive" || cur_.text == "transfer";
    }

    void parse_stage(core::ThimacId owner) {
        SourceSpan span = cur_.span;
        core::StageKind kind;
        if (cur_.text == "transfer") {
            bump();
            if (at_keyword("in")) {
                kind = core::StageKind::TransferIn;
                bump();
            } else if (at_keyword("out")) {
                kind = core::StageKind::TransferOut;
                bump();
            } else {
                error("expected 'in' or 'out' after 'transfer'");
                recover();
                return;
            }
        } else {
            kind = *core::stage_kind_from(cur_.text);
            bump();
        }
        std::optional<core::KernelSpec> kernel;
        if (at_keyword("kernel")) {
            bump();
            if (!expect(Tok::Equals, "'='")) {
                recover();
                return;
            }
            core::KernelSpec spec;
            if (auto kname = expect_ident("a kernel name")) {
                spec.name = *kname;
            } else {
                recover();
                return;
            }
            if (cur_.tok == Tok::LParen) {
                bump();
                while (true) {
                    if (auto arg = expect_string("a kernel argument string")) {
                        spec.args.push_back(*arg);
                    } else {
                        recover();
                        return;
                    }
                    if (cur_.tok == Tok::Comma) {
                        bump();
                        continue;
                    }
                    break;
                }
                if (!expect(Tok::RParen, "')'")) {
                    recover();
                    return;
                }
            }
            kernel = std::move(spec);
        }
        if (result_.model.at(owner).has_stage(kind)) {
            error_at(span, "DUP_STAGE",
                     "thimac '" + result_.model.at(owner).name + "' already declares stage '" +
                         core::to_string(kind) + "'");
        } else {
            result_.model.add_stage(owner, kind, std::move(kernel));
            result_.locations[result_.model.path_of(core::StageRef{owner, kind})] = span;
        }
        if (!expect(Tok::Semicolon, "';'")) recover();
    }

    void parse_edge() {
        RawEdge edge;
        edge.is_trigger = cur_.text == "trigger";
        edge.span = cur_.span;
        bump();
        auto from = parse_path();
        if (!from) {
            recover();
            return;
        }
        if (!expect(Tok::Arrow, "'->'")) {
            recover();
            return;
        }
        auto to = parse_path();
        if (!to) {
            recover();
            return;
        }
        edge.from = *from;
        edge.to = *to;
        if (edge.is_trigger && at_keyword("guard")) {
            bump();
            if (!expect(Tok::Equals, "'='")) {
                recover();
                return;
            }
            auto g = expect_string("a guard label");
            if (!g) {
                recover();
                return;
            }
            edge.guard = *g;
        }
        if (!expect(Tok::Semicolon, "';'")) {
            recover();
            return;
        }
        raw_edges_.push_back(std::move(edge));
    }

    void parse_event() {
        EventDecl decl;
        decl.span = cur_.span;
        bump();  // event
        auto name = expect_ident("an event name");
        if (!name) {
            recover();
            return;
        }
        decl.name = *name;
        if (!expect(Tok::LBrace, "'{'")) {
            recover();
            return;
        }
        if (!at_keyword("region")) {
            error("expected 'region'");
            recover();
            return;
        }
        bump();
        if (!expect(Tok::Equals, "'='") || !expect(Tok::LBracket, "'['")) {
            recover();
            return;
        }
        while (true) {
            auto p = parse_path();
            if (!p) {
                recover();
                return;
            }
            decl.region_paths.push_back(*p);
            if (cur_.tok == Tok::Comma) {
                bump();
                continue;
            }
            break;
        }
        if (!expect(Tok::RBracket, "']'") || !expect(Tok::Semicolon, "';'")) {
            recover();
            return;
        }
        if (at_keyword("time")) {
            bump();
            if (!expect(Tok::Equals, "'='")) {
                recover();
                return;
            }
            auto t = expect_string("a time label");
            if (!t) {
                recover();
                return;
            }
            decl.time_label = *t;
            if (!expect(Tok::Semicolon, "';'")) {
                recover();
                return;
            }
        }
        if (!expect(Tok::RBrace, "'}'")) {
            recover();
            return;
        }
        result_.locations["event " + decl.name] = decl.span;
        result_.events.push_back(std::move(decl));
    }

    void parse_chronology() {
        ChronologyDecl decl;
        decl.span = cur_.span;
        bump();
        auto from = expect_ident("an event name");
        if (!from) {
            recover();
            return;
        }
        if (!expect(Tok::Arrow, "'->'")) {
            recover();
            return;
        }
        auto to = expect_ident("an event name");
        if (!to) {
            recover();
            return;
        }
        decl.from = *from;
        decl.to = *to;
        if (at_keyword("guard")) {
            bump();
            if (!expect(Tok::Equals, "'='")) {
                recover();
                return;
            }
            auto g = expect_string("a guard label");
            if (!g) {
                recover();
                return;
            }
            decl.guard = *g;
        }
        if (!expect(Tok::Semicolon, "';'")) {
            recover();
            return;
        }
        result_.chronology.push_back(std::move(decl));
    }

    // Flows/triggers are resolved after the whole forest is known, so edges
    // may reference thimacs declared later in the file.
    void resolve_edges() {
        for (const RawEdge& e : raw_edges_) {
            auto from = core::resolve_path(result_.model, e.from);
            auto to = core::resolve_path(result_.model, e.to);
            bool ok = true;
            if (!from.ok() || !from.ref.is_stage()) {
                error_at(e.span, "UNRESOLVED_PATH",
                         "'" + e.from + "' does not name a stage" +
                             (from.message.empty() ? "" : ": " + from.message));
                ok = false;
            }
            if (!to.ok() || !to.ref.is_stage()) {
                error_at(e.span, "UNRESOLVED_PATH",
                         "'" + e.to + "' does not name a stage" +
                             (to.message.empty() ? "" : ": " + to.message));
                ok = false;
            }
            if (!ok) continue;
            if (e.is_trigger) {
                result_.model.add_trigger(from.ref.stage_ref(), to.ref.stage_ref(), e.guard);
            } else {
                result_.model.add_flow(from.ref.stage_ref(), to.ref.stage_ref());
            }
            result_.locations[result_.model.path_of(from.ref.stage_ref()) + " -> " +
                              result_.model.path_of(to.ref.stage_ref())] = e.span;
        }
    }

    Lexer lexer_;
    Token cur_;
    ParseResult result_;
    std::vector<RawEdge> raw_edges_;
};

}  // namespace

ParseResult parse_tm(std::string_view text) { return Parser(text).run(); }

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return !keywords().count(s);
}

}  // namespace tmtk::dsl
