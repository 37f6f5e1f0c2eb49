// tmtk command-line front end: parse/validate .tm models, translate .ers
// schemas, derive behavior graphs, run token-flow simulations, check FDs and
// export DOT. Exit codes: 0 success, 1 model/constraint violation, 2 usage
// error, 3 runtime or I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmtk/core/validate.hpp"
#include "tmtk/dot/export.hpp"
#include "tmtk/dsl/parser.hpp"
#include "tmtk/dsl/serializer.hpp"
#include "tmtk/er/translate.hpp"
#include "tmtk/events/behavior.hpp"
#include "tmtk/sim/engine.hpp"
#include "tmtk/sim/operations.hpp"
#include "tmtk/sim/store.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

struct IoError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError{"cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError{"cannot write '" + path + "'"};
    out << text;
}

void print_diagnostics(const std::vector<tmtk::Diagnostic>& diags, const std::string& file,
                       const tmtk::dsl::ParseResult* locations = nullptr) {
    for (tmtk::Diagnostic d : diags) {
        if (!d.span && locations && !d.path.empty()) {
            auto it = locations->locations.find(d.path);
            if (it != locations->locations.end()) d.span = it->second;
        }
        std::cerr << tmtk::format_diagnostic(d, file) << "\n";
    }
}

/// Parses a .tm file and runs the static validator; returns nullopt (after
/// printing diagnostics) when anything is an error.
std::optional<tmtk::dsl::ParseResult> load_model(const std::string& path, int& exit_code) {
    std::string text = read_file(path);
    auto parsed = tmtk::dsl::parse_tm(text);
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics, path);
        exit_code = kViolation;
        return std::nullopt;
    }
    auto diags = tmtk::core::validate_static(parsed.model);
    print_diagnostics(diags, path, &parsed);
    if (tmtk::has_errors(diags)) {
        exit_code = kViolation;
        return std::nullopt;
    }
    return parsed;
}

nlohmann::ordered_json thimac_to_json(const tmtk::core::StaticModel& m, tmtk::core::ThimacId id) {
    const auto& t = m.at(id);
    nlohmann::ordered_json j;
    j["name"] = t.name;
    j["kind"] = tmtk::core::to_string(t.kind);
    j["stages"] = nlohmann::ordered_json::array();
    for (const auto& [kind, st] : t.stages) {
        nlohmann::ordered_json js;
        js["kind"] = tmtk::core::to_string(kind);
        if (st.kernel) {
            js["kernel"] = st.kernel->name;
            js["args"] = st.kernel->args;
        }
        j["stages"].push_back(std::move(js));
    }
    j["children"] = nlohmann::ordered_json::array();
    for (auto c : t.children) j["children"].push_back(thimac_to_json(m, c));
    return j;
}

nlohmann::ordered_json model_to_json(const tmtk::dsl::ParseResult& parsed) {
    const auto& m = parsed.model;
    nlohmann::ordered_json j;
    j["thimacs"] = nlohmann::ordered_json::array();
    for (auto r : m.roots) j["thimacs"].push_back(thimac_to_json(m, r));
    j["flows"] = nlohmann::ordered_json::array();
    for (const auto& f : m.flows) {
        j["flows"].push_back({{"from", m.path_of(f.from)}, {"to", m.path_of(f.to)}});
    }
    j["triggers"] = nlohmann::ordered_json::array();
    for (const auto& tr : m.triggers) {
        nlohmann::ordered_json je{{"from", m.path_of(tr.from)}, {"to", m.path_of(tr.to)}};
        if (tr.guard) je["guard"] = *tr.guard;
        j["triggers"].push_back(std::move(je));
    }
    j["events"] = nlohmann::ordered_json::array();
    for (const auto& e : parsed.events) {
        nlohmann::ordered_json je{{"name", e.name}, {"region", e.region_paths}};
        if (e.time_label) je["time"] = *e.time_label;
        j["events"].push_back(std::move(je));
    }
    j["chronology"] = nlohmann::ordered_json::array();
    for (const auto& c : parsed.chronology) {
        nlohmann::ordered_json je{{"from", c.from}, {"to", c.to}};
        if (c.guard) je["guard"] = *c.guard;
        j["chronology"].push_back(std::move(je));
    }
    return j;
}

int cmd_parse(const std::string& file, bool as_json, const std::string& out) {
    int code = kOk;
    auto parsed = load_model(file, code);
    if (!parsed) return code;
    if (as_json) {
        write_output(out, model_to_json(*parsed).dump(2) + "\n");
        return kOk;
    }
    auto ser = tmtk::dsl::serialize_tm(parsed->model, parsed->events, parsed->chronology);
    if (!ser.ok) {
        print_diagnostics(ser.diagnostics, file);
        return kViolation;
    }
    write_output(out, ser.text);
    return kOk;
}

int cmd_validate(const std::string& file) {
    std::string text = read_file(file);
    auto parsed = tmtk::dsl::parse_tm(text);
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics, file);
        return kViolation;
    }
    auto diags = tmtk::core::validate_static(parsed.model);
    auto bound = tmtk::events::bind_events(parsed.model, parsed.events);
    for (auto& d : bound.diagnostics) diags.push_back(d);
    if (!tmtk::has_errors(diags)) {
        auto ev_diags = tmtk::events::validate_events(parsed.model, bound.events);
        for (auto& d : ev_diags) diags.push_back(d);
    }
    print_diagnostics(diags, file, &parsed);
    if (tmtk::has_errors(diags)) return kViolation;
    std::cout << "ok: " << parsed.model.thimacs.size() << " thimacs, "
              << parsed.model.flows.size() << " flows, " << parsed.model.triggers.size()
              << " triggers, " << parsed.events.size() << " events\n";
    return kOk;
}

int cmd_translate_er(const std::string& file, const std::string& out) {
    std::string text = read_file(file);
    auto parsed = tmtk::er::parse_er(text);
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics, file);
        return kViolation;
    }
    auto model = tmtk::er::translate_er(parsed.schema);
    auto ser = tmtk::dsl::serialize_tm(model);
    if (!ser.ok) {
        print_diagnostics(ser.diagnostics, file);
        return kViolation;
    }
    write_output(out, ser.text);
    return kOk;
}

int cmd_events(const std::string& file) {
    int code = kOk;
    auto parsed = load_model(file, code);
    if (!parsed) return code;
    auto bound = tmtk::events::bind_events(parsed->model, parsed->events);
    auto diags = bound.diagnostics;
    auto ev_diags = tmtk::events::validate_events(parsed->model, bound.events);
    for (auto& d : ev_diags) diags.push_back(d);
    print_diagnostics(diags, file, &*parsed);
    if (tmtk::has_errors(diags)) return kViolation;
    for (const auto& ev : bound.events) {
        std::cout << ev.name << ": " << ev.region.size() << " element(s)";
        if (ev.time_label) std::cout << ", time=\"" << *ev.time_label << "\"";
        std::cout << "\n";
    }
    return kOk;
}

int cmd_behavior(const std::string& file, const std::string& out, bool declared) {
    int code = kOk;
    auto parsed = load_model(file, code);
    if (!parsed) return code;
    auto bound = tmtk::events::bind_events(parsed->model, parsed->events);
    auto diags = bound.diagnostics;
    auto ev_diags = tmtk::events::validate_events(parsed->model, bound.events);
    for (auto& d : ev_diags) diags.push_back(d);
    tmtk::events::BehaviorGraph graph;
    if (declared) {
        graph = tmtk::events::graph_from_decls(parsed->events, parsed->chronology, diags);
    } else {
        graph = tmtk::events::derive_chronology(parsed->model, bound.events);
    }
    print_diagnostics(diags, file, &*parsed);
    if (tmtk::has_errors(diags)) return kViolation;
    write_output(out, tmtk::events::behavior_to_json(graph));
    return kOk;
}

int cmd_simulate(const std::string& model_file, const std::string& store_file,
                 const std::string& request_file, const std::string& events_file,
                 const std::string& trace_out, const std::string& store_out, int budget) {
    int code = kOk;
    auto parsed = load_model(model_file, code);
    if (!parsed) return code;

    std::vector<tmtk::dsl::EventDecl> event_decls = parsed->events;
    if (!events_file.empty()) {
        auto ev_parsed = tmtk::dsl::parse_tm(read_file(events_file));
        if (!ev_parsed.ok()) {
            print_diagnostics(ev_parsed.diagnostics, events_file);
            return kViolation;
        }
        event_decls = ev_parsed.events;
    }
    auto bound = tmtk::events::bind_events(parsed->model, event_decls);
    if (tmtk::has_errors(bound.diagnostics)) {
        print_diagnostics(bound.diagnostics, model_file, &*parsed);
        return kViolation;
    }

    auto loaded = tmtk::sim::load_store(read_file(store_file));
    if (!loaded.ok) {
        std::cerr << "error[" << loaded.error.code << "]: " << loaded.error.message << "\n";
        return kViolation;
    }
    auto jreq = nlohmann::json::parse(read_file(request_file), nullptr, false);
    if (jreq.is_discarded() || !jreq.is_object()) {
        std::cerr << "error[BAD_REQUEST]: request must be a JSON object of strings\n";
        return kViolation;
    }
    tmtk::sim::Record request;
    for (const auto& [k, v] : jreq.items()) {
        if (!v.is_string()) {
            std::cerr << "error[BAD_REQUEST]: request field '" << k << "' must be a string\n";
            return kViolation;
        }
        request[k] = v.get<std::string>();
    }

    tmtk::sim::RunConfig config;
    config.step_budget = budget;
    auto result = tmtk::sim::run(parsed->model, loaded.store, request, bound.events, config);

    std::string trace_json =
        result.error ? tmtk::sim::trace_to_json(result.trace, result.error->kind,
                                                result.error->message)
                     : tmtk::sim::trace_to_json(result.trace);
    write_output(trace_out, trace_json);
    if (!store_out.empty()) write_output(store_out, tmtk::sim::dump_store(result.store));

    if (result.error) {
        std::cerr << "error[" << result.error->kind << "/" << result.error->code
                  << "]: " << result.error->message << "\n";
        if (result.error->kind == "EmittedError" || result.error->kind == "StoreError") {
            return kViolation;
        }
        return kRuntime;  // Stuck, KernelArity, NonTermination, Config
    }
    return kOk;
}

int cmd_check_fd(const std::string& relation_file, const std::string& fd_expr) {
    auto fd = tmtk::er::parse_fd_expr(fd_expr);
    if (!fd.ok) {
        std::cerr << "error[" << fd.error_code << "]: " << fd.message << "\n";
        return kUsage;
    }
    std::string text = read_file(relation_file);
    std::vector<tmtk::sim::Record> records;
    auto loaded = tmtk::sim::load_store(text);
    if (loaded.ok && loaded.store.relations.size() == 1) {
        records = loaded.store.relations.begin()->second.records;
    } else {
        auto j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded() || !j.is_array()) {
            std::cerr << "error[BAD_RELATION]: expected a store with one relation or a JSON "
                         "array of records\n";
            return kViolation;
        }
        for (const auto& jrec : j) {
            tmtk::sim::Record rec;
            for (const auto& [k, v] : jrec.items()) rec[k] = v.get<std::string>();
            records.push_back(std::move(rec));
        }
    }
    auto res = tmtk::sim::check_fd(records, fd.fd);
    if (!res.input_ok) {
        std::cerr << "error: " << res.error << "\n";
        return kViolation;
    }
    if (res.holds()) {
        std::cout << "holds\n";
        return kOk;
    }
    for (const auto& v : res.violations) {
        std::cout << "(" << v.first << "," << v.second << ")\n";
    }
    return kViolation;
}

int cmd_export_dot(const std::string& model_file, const std::string& behavior_file,
                   const std::string& out) {
    int code = kOk;
    auto parsed = load_model(model_file, code);
    if (!parsed) return code;
    std::string text = tmtk::dot::export_dot(parsed->model);
    if (!behavior_file.empty()) {
        std::string err;
        auto graph = tmtk::events::behavior_from_json(read_file(behavior_file), err);
        if (!graph) {
            std::cerr << "error[BAD_BEHAVIOR]: " << err << "\n";
            return kViolation;
        }
        text += tmtk::dot::export_behavior_dot(*graph);
    }
    write_output(out, text);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thinging-machine modeling toolkit"};
    app.require_subcommand(1);

    std::string file, out, store_file, request_file, events_file;
    std::string trace_out = "-";
    std::string store_out, fd_expr, behavior_file;
    bool as_json = false;
    bool declared = false;
    int budget = 10000;

    auto* parse = app.add_subcommand("parse", "Parse a .tm file and print its canonical form");
    parse->add_option("file", file, "input .tm file")->required();
    parse->add_flag("--json", as_json, "print the model as JSON instead");
    parse->add_option("-o,--output", out, "output path (default stdout)");

    auto* validate = app.add_subcommand("validate", "Validate a .tm file");
    validate->add_option("file", file, "input .tm file")->required();

    auto* translate = app.add_subcommand("translate-er", "Translate an .ers schema to a .tm model");
    translate->add_option("schema", file, "input .ers file")->required();
    translate->add_option("-o,--output", out, "output path (default stdout)");

    auto* events_cmd = app.add_subcommand("events", "List and check the events of a .tm file");
    events_cmd->add_option("file", file, "input .tm file")->required();

    auto* behavior = app.add_subcommand("behavior", "Derive the behavior graph as JSON");
    behavior->add_option("file", file, "input .tm file")->required();
    behavior->add_flag("--declared", declared,
                       "use the file's chronology declarations instead of deriving");
    behavior->add_option("-o,--output", out, "output path (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "Run a request through a model");
    simulate->add_option("model", file, "input .tm file")->required();
    simulate->add_option("--store", store_file, "store JSON file")->required();
    simulate->add_option("--request", request_file, "request JSON file")->required();
    simulate->add_option("--events", events_file, "separate .tm file with event declarations");
    simulate->add_option("--trace-out", trace_out, "trace output path ('-' for stdout)");
    simulate->add_option("--store-out", store_out, "updated store output path");
    simulate->add_option("--step-budget", budget, "halt after this many steps");

    auto* check = app.add_subcommand("check-fd", "Check a functional dependency over a relation");
    check->add_option("relation", file, "relation JSON file")->required();
    check->add_option("--fd", fd_expr, "dependency, e.g. \"A,B->C\"")->required();

    auto* exportd = app.add_subcommand("export-dot", "Render a model as a DOT digraph");
    exportd->add_option("model", file, "input .tm file")->required();
    exportd->add_option("--behavior", behavior_file, "behavior graph JSON to append");
    exportd->add_option("-o,--output", out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (parse->parsed()) return cmd_parse(file, as_json, out);
        if (validate->parsed()) return cmd_validate(file);
        if (translate->parsed()) return cmd_translate_er(file, out);
        if (events_cmd->parsed()) return cmd_events(file);
        if (behavior->parsed()) return cmd_behavior(file, out, declared);
        if (simulate->parsed()) {
            return cmd_simulate(file, store_file, request_file, events_file, trace_out, store_out,
                                budget);
        }
        if (check->parsed()) return cmd_check_fd(file, fd_expr);
        if (exportd->parsed()) return cmd_export_dot(file, behavior_file, out);
    } catch (const IoError& e) {
        std::cerr << "error[IO]: " << e.message << "\n";
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
