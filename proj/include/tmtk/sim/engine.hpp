#ifndef TMTK_SIM_ENGINE_HPP
#define TMTK_SIM_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "tmtk/core/model.hpp"
#include "tmtk/events/behavior.hpp"
#include "tmtk/sim/store.hpp"

namespace tmtk::sim {

struct TraceStep {
    int index = 0;
    std::string stage;    // dotted stage path
    std::string outcome;  // kernel outcome label, or "-"
    std::string token;    // short token summary
    bool embedded = false;
};

struct Trace {
    std::vector<TraceStep> steps;
    std::vector<events::TraceEntry> projected_events;
};

std::string trace_to_json(const Trace& trace);
std::string trace_to_json(const Trace& trace, const std::string& error_kind,
                          const std::string& error_message);

struct RunError {
    std::string kind;  // Stuck | KernelArity | NonTermination | EmittedError | StoreError | Config
    std::string code;  // machine-readable detail (e.g. DUPLICATE_KEY)
    std::string message;
};

struct RunConfig {
    /// Entry stage for the request; empty means the unique transfer_in on a
    /// root thimac.
    std::string entry_path;
    /// Target relation for append_record when the model has no iterate stage;
    /// empty falls back to the store's single relation.
    std::string relation;
    int step_budget = 10000;
};

struct RunResult {
    Store store;
    Trace trace;
    std::optional<RunError> error;

    bool ok() const { return !error.has_value(); }
};

/// Deterministic small-step token-flow execution.
///
/// Scheduling: one stage fires per step. Fired stages push their delivery
/// targets onto a work stack so a token runs depth-first along flow edges;
/// when the stack drains, the enabled stage holding the earliest-injected
/// token fires next. Process/create stages with kernels fire their kernel;
/// a stage with incoming trigger edges is pulse-gated and fires only when a
/// pulse has arrived and its inputs are present. Pulses into kernel-less
/// stages materialize as outcome tokens. File tokens for store relations are
/// seeded at the root thimac whose name matches the relation name
/// (case-insensitive).
RunResult run(const core::StaticModel& model, const Store& store, const Record& request,
              const std::vector<events::Event>& events, const RunConfig& config = {});

}  // namespace tmtk::sim

#endif
