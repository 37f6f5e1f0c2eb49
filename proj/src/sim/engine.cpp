#include "tmtk/sim/engine.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <variant>

#include <json.hpp>

namespace tmtk::sim {

namespace {

using core::StageKind;
using core::StageRef;
using core::StaticModel;

struct RequestPayload {
    Record fields;
};
struct FieldValuePayload {
    std::string name;
    std::string value;
};
struct RecordPayload {
    Record fields;
};
struct FilePayload {
    std::string relation;
};
struct OutcomePayload {
    std::string label;
};

using Payload =
    std::variant<RequestPayload, FieldValuePayload, RecordPayload, FilePayload, OutcomePayload>;

std::string summarize(const Record& r) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : r) {
        if (!first) out += ",";
        out += k + "=" + v;
        first = false;
    }
    return out + "}";
}

std::string summarize(const Payload& p) {
    if (const auto* rq = std::get_if<RequestPayload>(&p)) return "Request" + summarize(rq->fields);
    if (const auto* fv = std::get_if<FieldValuePayload>(&p)) {
        return "Field " + fv->name + "=" + fv->value;
    }
    if (const auto* rc = std::get_if<RecordPayload>(&p)) return "Record" + summarize(rc->fields);
    if (const auto* f = std::get_if<FilePayload>(&p)) return "File " + f->relation;
    return "Outcome " + std::get<OutcomePayload>(p).label;
}

bool is_map_payload(const Payload& p) {
    return std::holds_alternative<RequestPayload>(p) || std::holds_alternative<RecordPayload>(p);
}

const Record& map_fields(const Payload& p) {
    if (const auto* rq = std::get_if<RequestPayload>(&p)) return rq->fields;
    return std::get<RecordPayload>(p).fields;
}

struct Tok {
    long inject = 0;  // injection order of the originating thing
    long moved = 0;   // global movement counter; copies get fresh values
    Payload payload;
};

struct StageState {
    std::vector<Tok> mailbox;  // arrival order
    int pulses = 0;
    bool dirty = false;  // a token arrived since the last kernel firing
};

enum class KernelKind {
    Extract,
    CompareEq,
    Iterate,
    Construct,
    ReplaceRecord,
    AppendRecord,
    AssertEq,
    EmitError,
};

std::optional<KernelKind> kernel_kind_from(const std::string& name) {
    if (name == "extract") return KernelKind::Extract;
    if (name == "compare_eq") return KernelKind::CompareEq;
    if (name == "iterate") return KernelKind::Iterate;
    if (name == "construct") return KernelKind::Construct;
    if (name == "replace_record") return KernelKind::ReplaceRecord;
    if (name == "append_record") return KernelKind::AppendRecord;
    if (name == "assert_eq") return KernelKind::AssertEq;
    if (name == "emit_error") return KernelKind::EmitError;
    return std::nullopt;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

struct StageInfo {
    StageRef ref;
    StageKind kind;
    std::optional<KernelKind> kernel;
    std::vector<std::string> kernel_args;
    std::vector<StageRef> out_flows;  // declaration order
    std::vector<const core::TriggerEdge*> out_triggers;
    bool gated = false;  // has incoming trigger edges
    size_t order = 0;    // canonical tie-break index
    std::string path;
};

class Engine {
public:
    Engine(const StaticModel& model, const Store& store, const Record& request,
           const std::vector<events::Event>& events, const RunConfig& config)
        : model_(model), events_(events), config_(config), result_{store, {}, std::nullopt} {
        request_ = request;
    }

    RunResult execute() {
        if (!prepare()) {
            project_events();
            return std::move(result_);
        }
        int steps = 0;
        while (!result_.error) {
            if (steps >= config_.step_budget) {
                fail("NonTermination", "STEP_BUDGET",
                     "step budget of " + std::to_string(config_.step_budget) + " exceeded");
                break;
            }
            StageRef next{-1, StageKind::Process};
            bool have = false;
            while (!work_.empty()) {
                StageRef candidate = work_.back();
                work_.pop_back();
                if (ready(candidate)) {
                    next = candidate;
                    have = true;
                    break;
                }
            }
            if (!have) {
                have = scan(next);
            }
            if (!have) break;  // quiescent: no stage enabled
            fire(next);
            ++steps;
        }
        project_events();
        return std::move(result_);
    }

private:
    void fail(std::string kind, std::string code, std::string message) {
        if (!result_.error) result_.error = RunError{std::move(kind), std::move(code),
                                                     std::move(message)};
    }

    bool prepare() {
        // Static tables.
        size_t order = 0;
        for (const core::Thimac& t : model_.thimacs) {
            for (const auto& [kind, st] : t.stages) {
                StageInfo info;
                info.ref = StageRef{t.id, kind};
                info.kind = kind;
                info.order = order++;
                info.path = model_.path_of(info.ref);
                if (st.kernel) {
                    info.kernel = kernel_kind_from(st.kernel->name);
                    if (!info.kernel) {
                        fail("Config", "UNKNOWN_KERNEL",
                             "unknown kernel '" + st.kernel->name + "' on " + info.path);
                        return false;
                    }
                    info.kernel_args = st.kernel->args;
                }
                infos_.emplace(info.ref, std::move(info));
            }
        }
        for (const auto& f : model_.flows) {
            auto it = infos_.find(f.from);
            if (it != infos_.end()) it->second.out_flows.push_back(f.to);
        }
        for (const auto& tr : model_.triggers) {
            auto it = infos_.find(tr.from);
            if (it != infos_.end()) it->second.out_triggers.push_back(&tr);
            auto jt = infos_.find(tr.to);
            if (jt != infos_.end()) jt->second.gated = true;
        }
        for (auto& [ref, info] : infos_) {
            if (info.kernel == KernelKind::Iterate) iterate_stages_.push_back(ref);
        }

        if (auto err = validate_store(result_.store)) {
            fail("StoreError", err->code, err->message);
            return false;
        }

        // Entry point for the request.
        StageRef entry{-1, StageKind::TransferIn};
        if (!config_.entry_path.empty()) {
            auto r = core::resolve_path(model_, config_.entry_path);
            if (!r.ok() || !r.ref.is_stage()) {
                fail("Config", "BAD_ENTRY", "entry '" + config_.entry_path + "' is not a stage");
                return false;
            }
            entry = r.ref.stage_ref();
        } else {
            int found = 0;
            for (core::ThimacId root : model_.roots) {
                if (model_.at(root).has_stage(StageKind::TransferIn)) {
                    entry = StageRef{root, StageKind::TransferIn};
                    ++found;
                }
            }
            if (found != 1) {
                fail("Config", "BAD_ENTRY",
                     found == 0 ? "no root-level transfer_in to receive the request"
                                : "several root-level transfer_in stages; name one in the config");
                return false;
            }
        }

        // Seed store files first, then the request, so the request (popped
        // last-in-first-out) advances first and also carries the smallest
        // injection number.
        long inject = 0;
        deliver(entry, Tok{inject++, ++moves_, RequestPayload{request_}});
        for (core::ThimacId root : model_.roots) {
            const core::Thimac& t = model_.at(root);
            for (const auto& [rel_name, rel] : result_.store.relations) {
                if (!iequals(t.name, rel_name)) continue;
                StageKind seed_kind;
                if (t.has_stage(StageKind::Create)) {
                    seed_kind = StageKind::Create;
                } else if (t.has_stage(StageKind::Release)) {
                    seed_kind = StageKind::Release;
                } else if (t.has_stage(StageKind::TransferOut)) {
                    seed_kind = StageKind::TransferOut;
                } else {
                    continue;
                }
                deliver(StageRef{root, seed_kind}, Tok{inject++, ++moves_, FilePayload{rel_name}});
            }
        }
        // The request target must be on top of the stack.
        std::reverse(work_.begin(), work_.end());
        return true;
    }

    StageState& state(StageRef ref) { return states_[ref]; }

    void deliver(StageRef target, Tok tok) {
        StageState& st = states_[target];
        st.mailbox.push_back(std::move(tok));
        st.dirty = true;
        work_.push_back(target);
    }

    void pulse(const core::TriggerEdge& edge, const std::string& outcome) {
        const StageInfo& target = infos_.at(edge.to);
        if (target.kernel) {
            states_[edge.to].pulses += 1;
            work_.push_back(edge.to);
        } else {
            // A pulse into a plain stage materializes as the outcome thing.
            deliver(edge.to, Tok{outcome_inject_, ++moves_,
                                 OutcomePayload{outcome.empty() ? "-" : outcome}});
        }
    }

    bool is_passthrough(const StageInfo& info) const { return !info.kernel.has_value(); }

    // ---- kernel input selection -------------------------------------------

    int newest_map_index(const StageState& st) const {
        for (int i = static_cast<int>(st.mailbox.size()) - 1; i >= 0; --i) {
            if (is_map_payload(st.mailbox[static_cast<size_t>(i)].payload)) return i;
        }
        return -1;
    }

    int newest_field_index(const StageState& st, const std::string& name) const {
        for (int i = static_cast<int>(st.mailbox.size()) - 1; i >= 0; --i) {
            const auto* fv =
                std::get_if<FieldValuePayload>(&st.mailbox[static_cast<size_t>(i)].payload);
            if (fv && fv->name == name) return i;
        }
        return -1;
    }

    std::vector<int> field_value_indices(const StageState& st) const {
        std::vector<int> out;
        for (size_t i = 0; i < st.mailbox.size(); ++i) {
            if (std::holds_alternative<FieldValuePayload>(st.mailbox[i].payload)) {
                out.push_back(static_cast<int>(i));
            }
        }
        return out;
    }

    int oldest_index(const StageState& st, auto pred) const {
        for (size_t i = 0; i < st.mailbox.size(); ++i) {
            if (pred(st.mailbox[i].payload)) return static_cast<int>(i);
        }
        return -1;
    }

    bool signature_ok(const StageInfo& info, const StageState& st) const {
        switch (*info.kernel) {
        case KernelKind::Extract:
            return newest_map_index(st) >= 0;
        case KernelKind::CompareEq:
            return field_value_indices(st).size() >= 2;
        case KernelKind::Iterate:
            return oldest_index(st, [](const Payload& p) {
                       return std::holds_alternative<FilePayload>(p);
                   }) >= 0;
        case KernelKind::Construct: {
            int base = newest_map_index(st);
            for (const std::string& f : info.kernel_args) {
                if (newest_field_index(st, f) >= 0) continue;
                if (base >= 0 &&
                    map_fields(st.mailbox[static_cast<size_t>(base)].payload).count(f)) {
                    continue;
                }
                return false;
            }
            return true;
        }
        case KernelKind::ReplaceRecord:
            return newest_map_index(st) >= 0 || !field_value_indices(st).empty();
        case KernelKind::AppendRecord:
            return oldest_index(st, [](const Payload& p) {
                       return std::holds_alternative<RecordPayload>(p);
                   }) >= 0;
        case KernelKind::AssertEq: {
            int count = 0;
            for (const Tok& t : st.mailbox) {
                if (is_map_payload(t.payload)) ++count;
            }
            return count >= 2;
        }
        case KernelKind::EmitError:
            return true;
        }
        return false;
    }

    bool ready(StageRef ref) {
        auto it = infos_.find(ref);
        if (it == infos_.end()) return false;
        const StageInfo& info = it->second;
        StageState& st = states_[ref];
        if (is_passthrough(info)) return !st.mailbox.empty();
        if (info.gated) return st.pulses > 0 && signature_ok(info, st);
        return st.dirty && signature_ok(info, st);
    }

    bool scan(StageRef& out) {
        bool have = false;
        std::tuple<long, long, size_t> best;
        for (auto& [ref, st] : states_) {
            if (!ready(ref)) continue;
            const StageInfo& info = infos_.at(ref);
            std::tuple<long, long, size_t> key{std::numeric_limits<long>::max(),
                                               std::numeric_limits<long>::max(), info.order};
            for (const Tok& t : st.mailbox) {
                key = std::min(key, std::tuple<long, long, size_t>{t.inject, t.moved, info.order});
            }
            if (!have || key < best) {
                best = key;
                out = ref;
                have = true;
            }
        }
        return have;
    }

    void log_step(const StageInfo& info, const std::string& outcome, const std::string& token,
                  bool embedded = false) {
        TraceStep step;
        step.index = static_cast<int>(result_.trace.steps.size());
        step.stage = info.path;
        step.outcome = outcome.empty() ? "-" : outcome;
        step.token = token;
        step.embedded = embedded;
        result_.trace.steps.push_back(std::move(step));
    }

    void route_outputs(const StageInfo& info, long inject, const std::optional<Payload>& output,
                       const std::string& outcome) {
        // Flow deliveries first, trigger pulses after; both are pushed in
        // reverse so the first-declared edge is processed first.
        std::vector<StageRef> pushed;
        if (output) {
            for (const StageRef& to : info.out_flows) {
                pushed.push_back(to);
            }
            for (auto it = pushed.rbegin(); it != pushed.rend(); ++it) {
                deliver(*it, Tok{inject, ++moves_, *output});
            }
        }
        std::vector<const core::TriggerEdge*> firing;
        for (const core::TriggerEdge* tr : info.out_triggers) {
            if (!tr->guard || *tr->guard == outcome) firing.push_back(tr);
        }
        for (auto it = firing.rbegin(); it != firing.rend(); ++it) {
            outcome_inject_ = inject;
            pulse(**it, outcome);
        }
    }

    void fire_passthrough(const StageInfo& info) {
        StageState& st = states_[info.ref];
        Tok tok = std::move(st.mailbox.front());
        st.mailbox.erase(st.mailbox.begin());

        std::string outcome;
        if (const auto* oc = std::get_if<OutcomePayload>(&tok.payload)) outcome = oc->label;
        log_step(info, outcome, summarize(tok.payload));

        if (info.kind == StageKind::Process && info.out_flows.empty() &&
            info.out_triggers.empty()) {
            fail("Stuck", "NO_ROUTE",
                 "token at " + info.path + " with no kernel and no outgoing flow");
            return;
        }
        route_outputs(info, tok.inject, tok.payload, outcome);
    }

    // Relation/cursor context of the single iterate stage; replace_record and
    // append_record act through it.
    bool iterate_context(std::string& relation, size_t& cursor, const StageInfo& who) {
        if (iterate_stages_.size() != 1) {
            fail("KernelArity", "ITERATE_CONTEXT",
                 info_name(who) + " needs exactly one iterate stage in the model");
            return false;
        }
        StageRef it_ref = iterate_stages_.front();
        const StageState& st = states_[it_ref];
        int file = oldest_index(st, [](const Payload& p) {
            return std::holds_alternative<FilePayload>(p);
        });
        if (file < 0) {
            fail("KernelArity", "ITERATE_CONTEXT", "no file token at the iterate stage");
            return false;
        }
        relation = std::get<FilePayload>(st.mailbox[static_cast<size_t>(file)].payload).relation;
        cursor = cursors_[it_ref];
        return true;
    }

    std::string info_name(const StageInfo& info) const { return info.path; }

    void fire_kernel(const StageInfo& info) {
        StageState& st = states_[info.ref];
        if (info.gated && st.pulses > 0) st.pulses -= 1;
        st.dirty = false;

        std::optional<Payload> output;
        std::string outcome;
        long inject = std::numeric_limits<long>::max();
        std::vector<int> consumed;
        auto use = [&](int idx, bool consume_it) {
            inject = std::min(inject, st.mailbox[static_cast<size_t>(idx)].inject);
            if (consume_it) consumed.push_back(idx);
        };

        switch (*info.kernel) {
        case KernelKind::Extract: {
            int src = newest_map_index(st);
            const Record& fields = map_fields(st.mailbox[static_cast<size_t>(src)].payload);
            const std::string& field = info.kernel_args.empty() ? "" : info.kernel_args.front();
            auto it = fields.find(field);
            if (it == fields.end()) {
                fail("KernelArity", "MISSING_FIELD",
                     "extract(" + field + ") at " + info.path + " got " +
                         summarize(st.mailbox[static_cast<size_t>(src)].payload));
                return;
            }
            use(src, false);  // the source thing stays available for later extraction
            output = FieldValuePayload{field, it->second};
            log_step(info, outcome, summarize(*output));
            // The field's arrival was embedded in its carrier.
            log_step(info, "-", "embedded transfer-receive " + field, true);
            break;
        }
        case KernelKind::CompareEq: {
            auto fvs = field_value_indices(st);
            int ref_idx = fvs[0];   // the first-arrived value is the sticky reference
            int probe_idx = fvs[1];
            const auto& ref = std::get<FieldValuePayload>(
                st.mailbox[static_cast<size_t>(ref_idx)].payload);
            const auto& probe = std::get<FieldValuePayload>(
                st.mailbox[static_cast<size_t>(probe_idx)].payload);
            outcome = ref.value == probe.value ? "equal" : "not-equal";
            use(ref_idx, false);
            use(probe_idx, true);
            log_step(info, outcome, ref.value + " ~ " + probe.value);
            break;
        }
        case KernelKind::Iterate: {
            int file = oldest_index(st, [](const Payload& p) {
                return std::holds_alternative<FilePayload>(p);
            });
            const std::string rel_name =
                std::get<FilePayload>(st.mailbox[static_cast<size_t>(file)].payload).relation;
            auto rel_it = result_.store.relations.find(rel_name);
            if (rel_it == result_.store.relations.end()) {
                fail("StoreError", "UNKNOWN_RELATION", "no relation '" + rel_name + "'");
                return;
            }
            use(file, false);
            size_t& cursor = cursors_[info.ref];
            if (cursor < rel_it->second.records.size()) {
                output = RecordPayload{rel_it->second.records[cursor]};
                ++cursor;
                outcome = "next";
                log_step(info, outcome, summarize(*output));
            } else {
                outcome = "EOF";
                log_step(info, outcome, "File " + rel_name);
            }
            break;
        }
        case KernelKind::Construct: {
            Record built;
            int base = newest_map_index(st);
            for (const std::string& f : info.kernel_args) {
                int fv = newest_field_index(st, f);
                if (fv >= 0) {
                    built[f] =
                        std::get<FieldValuePayload>(st.mailbox[static_cast<size_t>(fv)].payload)
                            .value;
                    use(fv, true);
                } else {
                    built[f] = map_fields(st.mailbox[static_cast<size_t>(base)].payload).at(f);
                }
            }
            if (base >= 0) {
                bool is_record =
                    std::holds_alternative<RecordPayload>(st.mailbox[static_cast<size_t>(base)]
                                                              .payload);
                use(base, is_record);  // a base record is used up; a request stays
            }
            output = RecordPayload{std::move(built)};
            log_step(info, outcome, summarize(*output));
            break;
        }
        case KernelKind::ReplaceRecord: {
            std::string rel_name;
            size_t cursor = 0;
            if (!iterate_context(rel_name, cursor, info)) return;
            if (cursor == 0) {
                fail("KernelArity", "NO_CURRENT_RECORD",
                     "replace_record at " + info.path + " before any record was retrieved");
                return;
            }
            Relation& rel = result_.store.relations.at(rel_name);
            Record next = rel.records[cursor - 1];
            int base = newest_map_index(st);
            if (base >= 0 && std::holds_alternative<RecordPayload>(
                                 st.mailbox[static_cast<size_t>(base)].payload)) {
                next = map_fields(st.mailbox[static_cast<size_t>(base)].payload);
                use(base, true);
            }
            for (int fv : field_value_indices(st)) {
                const auto& f =
                    std::get<FieldValuePayload>(st.mailbox[static_cast<size_t>(fv)].payload);
                next[f.name] = f.value;
                use(fv, true);
            }
            rel.records[cursor - 1] = std::move(next);
            if (auto err = validate_store(result_.store)) {
                fail("StoreError", err->code, err->message);
                return;
            }
            log_step(info, outcome, "replaced record " + std::to_string(cursor - 1) + " in " +
                                        rel_name);
            break;
        }
        case KernelKind::AppendRecord: {
            int rec = oldest_index(st, [](const Payload& p) {
                return std::holds_alternative<RecordPayload>(p);
            });
            std::string rel_name = config_.relation;
            size_t cursor = 0;
            if (iterate_stages_.size() == 1) {
                if (!iterate_context(rel_name, cursor, info)) return;
            } else if (rel_name.empty() && result_.store.relations.size() == 1) {
                rel_name = result_.store.relations.begin()->first;
            }
            auto rel_it = result_.store.relations.find(rel_name);
            if (rel_it == result_.store.relations.end()) {
                fail("StoreError", "UNKNOWN_RELATION",
                     "append_record cannot resolve a target relation");
                return;
            }
            use(rec, true);
            rel_it->second.records.push_back(
                map_fields(st.mailbox[static_cast<size_t>(rec)].payload));
            if (auto err = validate_store(result_.store)) {
                fail("StoreError", err->code, err->message);
                return;
            }
            log_step(info, outcome, "appended to " + rel_name);
            break;
        }
        case KernelKind::AssertEq: {
            std::vector<int> maps;
            for (size_t i = 0; i < st.mailbox.size(); ++i) {
                if (is_map_payload(st.mailbox[i].payload)) maps.push_back(static_cast<int>(i));
            }
            const Record& a = map_fields(st.mailbox[static_cast<size_t>(maps[0])].payload);
            const Record& b = map_fields(st.mailbox[static_cast<size_t>(maps[1])].payload);
            bool equal = true;
            for (const std::string& f : info.kernel_args) {
                auto ia = a.find(f);
                auto ib = b.find(f);
                if (ia == a.end() || ib == b.end() || ia->second != ib->second) equal = false;
            }
            outcome = equal ? "equal" : "not-equal";
            use(maps[0], false);
            use(maps[1], true);
            log_step(info, outcome, "assert over " + std::to_string(info.kernel_args.size()) +
                                        " attribute(s)");
            break;
        }
        case KernelKind::EmitError: {
            std::string code = info.kernel_args.empty() ? "ERROR" : info.kernel_args.front();
            log_step(info, code, "error emitted");
            fail("EmittedError", code, "model raised " + code + " at " + info.path);
            return;
        }
        }

        // Drop consumed tokens (largest index first).
        std::sort(consumed.rbegin(), consumed.rend());
        for (int idx : consumed) st.mailbox.erase(st.mailbox.begin() + idx);

        if (inject == std::numeric_limits<long>::max()) inject = outcome_inject_;
        route_outputs(info, inject, output, outcome);
    }

    void fire(StageRef ref) {
        const StageInfo& info = infos_.at(ref);
        if (is_passthrough(info)) {
            fire_passthrough(info);
        } else {
            fire_kernel(info);
        }
    }

    // ---- event projection ---------------------------------------------------

    void project_events() {
        if (events_.empty() || result_.trace.steps.empty()) return;
        // stage path -> first declared event covering it
        std::map<std::string, size_t> owner;
        for (size_t e = 0; e < events_.size(); ++e) {
            for (const core::ElementRef& r : events_[e].region) {
                if (!model_.valid_id(r.thimac)) continue;
                if (r.is_stage()) {
                    owner.emplace(model_.path_of(r.stage_ref()), e);
                } else {
                    for (const auto& [kind, stg] : model_.at(r.thimac).stages) {
                        owner.emplace(model_.path_of(StageRef{r.thimac, kind}), e);
                    }
                }
            }
        }
        int current = -1;
        for (const TraceStep& step : result_.trace.steps) {
            auto it = owner.find(step.stage);
            if (it == owner.end()) continue;  // outside every region
            int ev = static_cast<int>(it->second);
            if (ev != current) {
                result_.trace.projected_events.push_back(
                    events::TraceEntry{events_[static_cast<size_t>(ev)].name, std::nullopt});
                current = ev;
            }
            if (step.outcome != "-" && !step.embedded) {
                result_.trace.projected_events.back().guard = step.outcome;
            }
        }
    }

    const StaticModel& model_;
    const std::vector<events::Event>& events_;
    RunConfig config_;
    RunResult result_;
    Record request_;

    std::map<StageRef, StageInfo> infos_;
    std::map<StageRef, StageState> states_;
    std::map<StageRef, size_t> cursors_;
    std::vector<StageRef> iterate_stages_;
    std::vector<StageRef> work_;
    long moves_ = 0;
    long outcome_inject_ = 0;
};

}  // namespace

RunResult run(const StaticModel& model, const Store& store, const Record& request,
              const std::vector<events::Event>& events, const RunConfig& config) {
    return Engine(model, store, request, events, config).execute();
}

std::string trace_to_json(const Trace& trace) { return trace_to_json(trace, "", ""); }

std::string trace_to_json(const Trace& trace, const std::string& error_kind,
                          const std::string& error_message) {
    nlohmann::ordered_json j;
    j["steps"] = nlohmann::ordered_json::array();
    for (const TraceStep& s : trace.steps) {
        nlohmann::ordered_json js;
        js["i"] = s.index;
        js["stage"] = s.stage;
        js["outcome"] = s.outcome;
        js["token"] = s.token;
        if (s.embedded) js["embedded"] = true;
        j["steps"].push_back(std::move(js));
    }
    j["events"] = nlohmann::ordered_json::array();
    for (const events::TraceEntry& e : trace.projected_events) {
        nlohmann::ordered_json je;
        je["event"] = e.event;
        if (e.guard) je["guard"] = *e.guard;
        j["events"].push_back(std::move(je));
    }
    if (!error_kind.empty()) {
        j["error"] = {{"kind", error_kind}, {"message", error_message}};
    }
    return j.dump(2) + "\n";
}

}  // namespace tmtk::sim
