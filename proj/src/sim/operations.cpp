#include "tmtk/sim/operations.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "tmtk/dsl/parser.hpp"
#include "tmtk/er/translate.hpp"

namespace tmtk::sim {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string quoted_list(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ", ";
        out += quoted(fields[i]);
    }
    return out;
}

struct PreparedModel {
    core::StaticModel model;
    std::vector<events::Event> events;
};

PreparedModel prepare_model(const std::string& text) {
    auto parsed = dsl::parse_tm(text);
    if (!parsed.ok()) {
        std::string what = "internal model failed to parse";
        for (const auto& d : parsed.diagnostics) what += "; " + d.message;
        throw std::logic_error(what);
    }
    auto bound = events::bind_events(parsed.model, parsed.events);
    if (has_errors(bound.diagnostics)) throw std::logic_error("internal model events invalid");
    return PreparedModel{std::move(parsed.model), std::move(bound.events)};
}

}  // namespace

std::string store_thimac_name(const std::string& relation) {
    std::string name = relation;
    for (char& c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
    }
    if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) name = "Rel_" + name;
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    static const std::set<std::string> taken = {
        "Insert",  "Update",     "KeyExtract",  "Scan",     "RecordKey", "KeyCheck",
        "NotEqual", "Equal",     "Duplicate",   "Continue", "NewRecord", "DeptExtract",
        "DeptInsert", "MatchExtract", "RecordMatch", "MatchCheck", "ValueExtract",
        "Rewrite", "Done",
    };
    if (taken.count(name)) name = "Store" + name;
    return name;
}

std::string insert_address_model_text() {
    return R"(# Insert an address for a customer. The request carries ID and Address;
# the customers file is scanned record by record for the given ID.
thimac Insert { transfer in; receive; release; transfer out; }
thimac IdExtract { transfer in; receive; process kernel = extract("ID"); release; transfer out; }
thimac AddrExtract { transfer in; receive; process kernel = extract("Address"); release; transfer out; }
thimac NewRecord { transfer in; receive; process kernel = construct("Address", "ID"); release; transfer out; }
thimac Customers { create; release; transfer out; }
thimac FileScan { transfer in; receive; process kernel = iterate; release; transfer out; }
thimac RecordId { transfer in; receive; process kernel = extract("ID"); release; transfer out; }
thimac IdCheck { transfer in; receive; process kernel = compare_eq; }
thimac NotEqual { process; }
thimac Equal { process; }
thimac EndOfFile { process; }
thimac Rebuild { transfer in; receive; process kernel = construct("Address", "ID"); release; transfer out; }
thimac FileUpdate { transfer in; receive; process kernel = replace_record; create; }
thimac FileAppend { transfer in; receive; process kernel = append_record; create; }

flow Insert.transfer_in -> Insert.receive;
flow Insert.receive -> Insert.release;
flow Insert.release -> Insert.transfer_out;
flow Insert.transfer_out -> IdExtract.transfer_in;
flow Insert.transfer_out -> AddrExtract.transfer_in;
flow Insert.transfer_out -> NewRecord.transfer_in;
flow IdExtract.transfer_in -> IdExtract.receive;
flow IdExtract.receive -> IdExtract.process;
flow IdExtract.process -> IdExtract.release;
flow IdExtract.release -> IdExtract.transfer_out;
flow IdExtract.transfer_out -> IdCheck.transfer_in;
flow Customers.create -> Customers.release;
flow Customers.release -> Customers.transfer_out;
flow Customers.transfer_out -> FileScan.transfer_in;
flow FileScan.transfer_in -> FileScan.receive;
flow FileScan.receive -> FileScan.process;
flow FileScan.process -> FileScan.release;
flow FileScan.release -> FileScan.transfer_out;
flow FileScan.transfer_out -> RecordId.transfer_in;
flow FileScan.transfer_out -> Rebuild.transfer_in;
flow RecordId.transfer_in -> RecordId.receive;
flow RecordId.receive -> RecordId.process;
flow RecordId.process -> RecordId.release;
flow RecordId.release -> RecordId.transfer_out;
flow RecordId.transfer_out -> IdCheck.transfer_in;
flow IdCheck.transfer_in -> IdCheck.receive;
flow IdCheck.receive -> IdCheck.process;
flow AddrExtract.transfer_in -> AddrExtract.receive;
flow AddrExtract.receive -> AddrExtract.process;
flow AddrExtract.process -> AddrExtract.release;
flow AddrExtract.release -> AddrExtract.transfer_out;
flow AddrExtract.transfer_out -> Rebuild.transfer_in;
flow Rebuild.transfer_in -> Rebuild.receive;
flow Rebuild.receive -> Rebuild.process;
flow Rebuild.process -> Rebuild.release;
flow Rebuild.release -> Rebuild.transfer_out;
flow Rebuild.transfer_out -> FileUpdate.transfer_in;
flow FileUpdate.transfer_in -> FileUpdate.receive;
flow FileUpdate.receive -> FileUpdate.process;
flow NewRecord.transfer_in -> NewRecord.receive;
flow NewRecord.receive -> NewRecord.process;
flow NewRecord.process -> NewRecord.release;
flow NewRecord.release -> NewRecord.transfer_out;
flow NewRecord.transfer_out -> FileAppend.transfer_in;
flow FileAppend.transfer_in -> FileAppend.receive;
flow FileAppend.receive -> FileAppend.process;

trigger IdExtract.process -> FileScan.process;
trigger IdCheck.process -> NotEqual.process guard = "not-equal";
trigger IdCheck.process -> Equal.process guard = "equal";
trigger IdCheck.process -> EndOfFile.process guard = "EOF";
trigger FileScan.process -> EndOfFile.process guard = "EOF";
trigger NotEqual.process -> FileScan.process;
trigger Equal.process -> AddrExtract.process;
trigger AddrExtract.process -> Rebuild.process;
trigger Rebuild.process -> FileUpdate.process;
trigger FileUpdate.process -> FileUpdate.create;
trigger EndOfFile.process -> NewRecord.process;
trigger NewRecord.process -> FileAppend.process;
trigger FileAppend.process -> FileAppend.create;

event E1 { region = [Insert]; }
event E2 { region = [IdExtract]; }
event E3 { region = [Customers, FileScan]; }
event E4 { region = [RecordId, IdCheck.process]; }
event E5 { region = [NotEqual]; }
event E6 { region = [Equal]; }
event E7 { region = [AddrExtract.process]; }
event E8 { region = [Rebuild.process]; }
event E9 { region = [FileUpdate]; }
event E10 { region = [EndOfFile]; }
event E11 { region = [NewRecord.process]; }
event E12 { region = [FileAppend]; }
)";
}

std::string ri_insert_model_text(const std::string& relation, const std::string& key_attr,
                                 const std::vector<std::string>& record_fields) {
    const std::string store = store_thimac_name(relation);
    const std::string key = quoted(key_attr);
    std::string text;
    text += "# Insert a record with referential integrity: the key is compared against\n";
    text += "# every record in " + relation + " before the new record joins its partition.\n";
    text += "thimac Insert { transfer in; receive; release; transfer out; }\n";
    text += "thimac KeyExtract { transfer in; receive; process kernel = extract(" + key +
            "); release; transfer out; }\n";
    text += "thimac " + store + " { create; release; transfer out; }\n";
    text += "thimac Scan { transfer in; receive; process kernel = iterate; release; transfer out; }\n";
    text += "thimac RecordKey { transfer in; receive; process kernel = extract(" + key +
            "); release; transfer out; }\n";
    text += "thimac KeyCheck { transfer in; receive; process kernel = compare_eq; }\n";
    text += "thimac Duplicate { process kernel = emit_error(\"DUPLICATE_KEY\"); }\n";
    text += "thimac NotEqual { process; }\n";
    text += "thimac Continue { process; }\n";
    text += "thimac NewRecord { transfer in; receive; process kernel = construct(" +
            quoted_list(record_fields) + "); release; transfer out; }\n";
    text += "thimac DeptExtract { transfer in; receive; process kernel = extract(" +
            quoted(record_fields.empty() ? "" : record_fields.back()) +
            "); release; transfer out; }\n";
    text += "thimac DeptInsert { transfer in; receive; process kernel = append_record; create; }\n";

    text += R"(
flow Insert.transfer_in -> Insert.receive;
flow Insert.receive -> Insert.release;
flow Insert.release -> Insert.transfer_out;
flow Insert.transfer_out -> KeyExtract.transfer_in;
flow Insert.transfer_out -> NewRecord.transfer_in;
flow Insert.transfer_out -> DeptExtract.transfer_in;
flow KeyExtract.transfer_in -> KeyExtract.receive;
flow KeyExtract.receive -> KeyExtract.process;
flow KeyExtract.process -> KeyExtract.release;
flow KeyExtract.release -> KeyExtract.transfer_out;
flow KeyExtract.transfer_out -> KeyCheck.transfer_in;
)";
    text += "flow " + store + ".create -> " + store + ".release;\n";
    text += "flow " + store + ".release -> " + store + ".transfer_out;\n";
    text += "flow " + store + ".transfer_out -> Scan.transfer_in;\n";
    text += R"(flow Scan.transfer_in -> Scan.receive;
flow Scan.receive -> Scan.process;
flow Scan.process -> Scan.release;
flow Scan.release -> Scan.transfer_out;
flow Scan.transfer_out -> RecordKey.transfer_in;
flow RecordKey.transfer_in -> RecordKey.receive;
flow RecordKey.receive -> RecordKey.process;
flow RecordKey.process -> RecordKey.release;
flow RecordKey.release -> RecordKey.transfer_out;
flow RecordKey.transfer_out -> KeyCheck.transfer_in;
flow KeyCheck.transfer_in -> KeyCheck.receive;
flow KeyCheck.receive -> KeyCheck.process;
flow NewRecord.transfer_in -> NewRecord.receive;
flow NewRecord.receive -> NewRecord.process;
flow NewRecord.process -> NewRecord.release;
flow NewRecord.release -> NewRecord.transfer_out;
flow NewRecord.transfer_out -> DeptInsert.transfer_in;
flow DeptExtract.transfer_in -> DeptExtract.receive;
flow DeptExtract.receive -> DeptExtract.process;
flow DeptExtract.process -> DeptExtract.release;
flow DeptExtract.release -> DeptExtract.transfer_out;
flow DeptExtract.transfer_out -> DeptInsert.transfer_in;
flow DeptInsert.transfer_in -> DeptInsert.receive;
flow DeptInsert.receive -> DeptInsert.process;

trigger Insert.receive -> KeyExtract.process;
trigger KeyExtract.process -> Scan.process;
)";
    text += "trigger KeyExtract.process -> " + store + ".release guard = \"next\";\n";
    text += R"(trigger RecordKey.process -> KeyCheck.process;
trigger KeyCheck.process -> Duplicate.process guard = "equal";
trigger KeyCheck.process -> NotEqual.process guard = "not-equal";
trigger Scan.process -> Continue.process guard = "EOF";
trigger NotEqual.process -> Scan.process;
trigger Continue.process -> NewRecord.process;
trigger NewRecord.process -> DeptExtract.process;
trigger DeptInsert.process -> DeptInsert.create;

event E1 { region = [Insert]; }
event E2 { region = [KeyExtract.process]; }
)";
    text += "event E3 { region = [" + store + ", Scan.transfer_in, Scan.receive]; }\n";
    text += R"(event E4 { region = [Scan.process, Scan.release, Scan.transfer_out]; }
event E5 { region = [RecordKey]; }
event E6 { region = [KeyCheck.process]; }
event E7 { region = [Duplicate]; }
event E8 { region = [NotEqual]; }
event E9 { region = [Continue]; }
event E10 { region = [NewRecord.process]; }
event E11 { region = [DeptExtract.process, DeptExtract.release, DeptExtract.transfer_out]; }
event E12 { region = [DeptInsert.transfer_in, DeptInsert.receive]; }
event E13 { region = [DeptInsert.process]; }
event E14 { region = [DeptInsert.create]; }
)";
    return text;
}

std::string fd_update_model_text(const std::string& relation, const std::string& match_attr,
                                 const std::string& set_attr) {
    const std::string store = store_thimac_name(relation);
    const std::string match = quoted(match_attr);
    const std::string value = quoted(set_attr);
    std::string text;
    text += "# Update " + set_attr + " for every tuple whose " + match_attr +
            " equals the given value; the dependency " + match_attr + " -> " + set_attr +
            " keeps holding.\n";
    text += "thimac Update { transfer in; receive; release; transfer out; }\n";
    text += "thimac MatchExtract { transfer in; receive; process kernel = extract(" + match +
            "); release; transfer out; }\n";
    text += "thimac " + store + " { create; release; transfer out; }\n";
    text += "thimac Scan { transfer in; receive; process kernel = iterate; release; transfer out; }\n";
    text += "thimac RecordMatch { transfer in; receive; process kernel = extract(" + match +
            "); release; transfer out; }\n";
    text += "thimac MatchCheck { transfer in; receive; process kernel = compare_eq; }\n";
    text += "thimac NotEqual { process; }\n";
    text += "thimac Equal { process; }\n";
    text += "thimac ValueExtract { transfer in; receive; process kernel = extract(" + value +
            "); release; transfer out; }\n";
    text += "thimac Rewrite { transfer in; receive; process kernel = replace_record; create; }\n";
    text += "thimac Done { create; }\n";

    text += R"(
flow Update.transfer_in -> Update.receive;
flow Update.receive -> Update.release;
flow Update.release -> Update.transfer_out;
flow Update.transfer_out -> MatchExtract.transfer_in;
flow Update.transfer_out -> ValueExtract.transfer_in;
flow MatchExtract.transfer_in -> MatchExtract.receive;
flow MatchExtract.receive -> MatchExtract.process;
flow MatchExtract.process -> MatchExtract.release;
flow MatchExtract.release -> MatchExtract.transfer_out;
flow MatchExtract.transfer_out -> MatchCheck.transfer_in;
)";
    text += "flow " + store + ".create -> " + store + ".release;\n";
    text += "flow " + store + ".release -> " + store + ".transfer_out;\n";
    text += "flow " + store + ".transfer_out -> Scan.transfer_in;\n";
    text += R"(flow Scan.transfer_in -> Scan.receive;
flow Scan.receive -> Scan.process;
flow Scan.process -> Scan.release;
flow Scan.release -> Scan.transfer_out;
flow Scan.transfer_out -> RecordMatch.transfer_in;
flow RecordMatch.transfer_in -> RecordMatch.receive;
flow RecordMatch.receive -> RecordMatch.process;
flow RecordMatch.process -> RecordMatch.release;
flow RecordMatch.release -> RecordMatch.transfer_out;
flow RecordMatch.transfer_out -> MatchCheck.transfer_in;
flow MatchCheck.transfer_in -> MatchCheck.receive;
flow MatchCheck.receive -> MatchCheck.process;
flow ValueExtract.transfer_in -> ValueExtract.receive;
flow ValueExtract.receive -> ValueExtract.process;
flow ValueExtract.process -> ValueExtract.release;
flow ValueExtract.release -> ValueExtract.transfer_out;
flow ValueExtract.transfer_out -> Rewrite.transfer_in;
flow Rewrite.transfer_in -> Rewrite.receive;
flow Rewrite.receive -> Rewrite.process;

trigger Update.receive -> MatchExtract.process;
trigger MatchExtract.process -> Scan.process;
)";
    text += "trigger MatchExtract.process -> " + store + ".release guard = \"next\";\n";
    text += R"(trigger RecordMatch.process -> MatchCheck.process;
trigger MatchCheck.process -> Equal.process guard = "equal";
trigger MatchCheck.process -> NotEqual.process guard = "not-equal";
trigger NotEqual.process -> Scan.process;
trigger Equal.process -> ValueExtract.process;
trigger Rewrite.process -> Rewrite.create;
trigger Rewrite.process -> Scan.process;
trigger Scan.process -> Done.create guard = "EOF";

event U1 { region = [Update]; }
event U2 { region = [MatchExtract.process]; }
)";
    text += "event U3 { region = [" + store + ", Scan.transfer_in, Scan.receive]; }\n";
    text += R"(event U4 { region = [Scan.process, Scan.release, Scan.transfer_out]; }
event U5 { region = [RecordMatch]; }
event U6 { region = [MatchCheck.process]; }
event U7 { region = [NotEqual]; }
event U8 { region = [Equal]; }
event U9 { region = [ValueExtract.process, ValueExtract.release, ValueExtract.transfer_out]; }
event U10 { region = [Rewrite]; }
event U11 { region = [Done]; }
)";
    return text;
}

InsertResult insert_with_ri(const Store& store, const er::ERSchema& schema,
                            const std::string& relation, const Record& record,
                            const std::string& partition_value) {
    InsertResult res;
    res.store = store;
    auto rel_it = store.relations.find(relation);
    if (rel_it == store.relations.end()) {
        res.error = RIError{"UNKNOWN_RELATION", "no relation '" + relation + "' in the store"};
        return res;
    }
    const Relation& rel = rel_it->second;
    if (rel.key.size() != 1) {
        res.error = RIError{"UNSUPPORTED_KEY",
                            "the key-scan model needs a single-attribute key; relation '" +
                                relation + "' declares " + std::to_string(rel.key.size())};
        return res;
    }
    if (!rel.partition_by) {
        res.error = RIError{"UNKNOWN_PARTITION",
                            "relation '" + relation + "' declares no partition attribute"};
        return res;
    }
    if (partition_value.empty()) {
        res.error = RIError{"UNKNOWN_PARTITION", "empty partition value"};
        return res;
    }
    const std::string& key_attr = rel.key.front();
    if (!record.count(key_attr)) {
        res.error =
            RIError{"MISSING_KEY", "record lacks the key attribute '" + key_attr + "'"};
        return res;
    }
    // Cross-check the declared entity key when the schema names this relation.
    for (const er::EntityType& ent : schema.entities) {
        if (lower(ent.name) != lower(relation) && lower(er::pluralize(ent.name)) != lower(relation)) {
            continue;
        }
        auto declared = ent.key_attributes();
        if (!declared.empty() && (declared.size() != 1 || declared.front() != key_attr)) {
            res.error = RIError{"KEY_MISMATCH",
                                "schema key for '" + ent.name + "' disagrees with the store"};
            return res;
        }
        break;
    }

    Record request = record;
    request[*rel.partition_by] = partition_value;
    std::vector<std::string> fields;
    for (const auto& [k, v] : request) fields.push_back(k);

    PreparedModel prepared =
        prepare_model(ri_insert_model_text(relation, key_attr, fields));
    RunResult run_res = run(prepared.model, store, request, prepared.events, RunConfig{});
    res.store = std::move(run_res.store);
    res.trace = std::move(run_res.trace);
    if (run_res.error) {
        if (run_res.error->kind == "EmittedError") {
            res.error = RIError{run_res.error->code, run_res.error->message};
        } else {
            res.error = RIError{run_res.error->code.empty() ? run_res.error->kind
                                                            : run_res.error->code,
                                run_res.error->message};
        }
        res.store = store;  // a failed insert leaves the database untouched
    }
    return res;
}

CheckFdResult check_fd(const std::vector<Record>& relation, const er::FD& fd) {
    CheckFdResult res;
    for (const auto& side : {fd.lhs, fd.rhs}) {
        for (const std::string& attr : side) {
            for (size_t i = 0; i < relation.size(); ++i) {
                if (!relation[i].count(attr)) {
                    res.error = "UNKNOWN_ATTRIBUTE: '" + attr + "' missing from record " +
                                std::to_string(i);
                    return res;
                }
            }
        }
    }
    res.input_ok = true;
    auto agree = [&](const Record& a, const Record& b, const std::vector<std::string>& attrs) {
        for (const std::string& attr : attrs) {
            if (a.at(attr) != b.at(attr)) return false;
        }
        return true;
    };
    for (size_t i = 0; i < relation.size(); ++i) {
        for (size_t j = i + 1; j < relation.size(); ++j) {
            if (agree(relation[i], relation[j], fd.lhs) &&
                !agree(relation[i], relation[j], fd.rhs)) {
                res.violations.push_back(FdViolation{i, j});
            }
        }
    }
    return res;
}

UpdateResult update_with_fd(const Store& store, const std::string& relation, const er::FD& fd,
                            const std::string& match_attr, const std::string& match_value,
                            const std::string& set_attr, const std::string& new_value) {
    UpdateResult res;
    res.store = store;
    auto rel_it = store.relations.find(relation);
    if (rel_it == store.relations.end()) {
        res.input_error = "UNKNOWN_RELATION";
        return res;
    }
    if (!std::count(fd.lhs.begin(), fd.lhs.end(), match_attr) ||
        !std::count(fd.rhs.begin(), fd.rhs.end(), set_attr)) {
        res.input_error = "FD_MISMATCH";
        return res;
    }
    for (const Record& rec : rel_it->second.records) {
        if (!rec.count(match_attr) || !rec.count(set_attr)) {
            res.input_error = "UNKNOWN_ATTRIBUTE";
            return res;
        }
    }

    Record request;
    request[match_attr] = match_value;
    request[set_attr] = new_value;
    PreparedModel prepared =
        prepare_model(fd_update_model_text(relation, match_attr, set_attr));
    RunResult run_res = run(prepared.model, store, request, prepared.events, RunConfig{});
    res.store = std::move(run_res.store);
    res.trace = std::move(run_res.trace);
    res.error = std::move(run_res.error);
    if (res.error) res.store = store;
    return res;
}

}  // namespace tmtk::sim
