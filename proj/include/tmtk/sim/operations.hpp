#ifndef TMTK_SIM_OPERATIONS_HPP
#define TMTK_SIM_OPERATIONS_HPP

#include <optional>
#include <string>
#include <vector>

#include "tmtk/er/schema.hpp"
#include "tmtk/sim/engine.hpp"
#include "tmtk/sim/store.hpp"

namespace tmtk::sim {

struct RIError {
    std::string code;  // DUPLICATE_KEY | UNKNOWN_PARTITION | ...
    std::string message;
};

struct InsertResult {
    Store store;
    Trace trace;
    std::optional<RIError> error;

    bool ok() const { return !error.has_value(); }
};

/// Inserts a record as a token run over the key-scan model: every existing
/// record's key is compared against the new one; a match raises
/// DUPLICATE_KEY and the trace ends at the error event; otherwise the record
/// joins the named partition. The scan covers the whole relation, not just
/// the target partition.
InsertResult insert_with_ri(const Store& store, const er::ERSchema& schema,
                            const std::string& relation, const Record& record,
                            const std::string& partition_value);

struct FdViolation {
    size_t first = 0;
    size_t second = 0;

    bool operator==(const FdViolation&) const = default;
};

struct CheckFdResult {
    bool input_ok = false;
    std::string error;  // UNKNOWN_ATTRIBUTE detail when !input_ok
    std::vector<FdViolation> violations;

    bool holds() const { return input_ok && violations.empty(); }
};

/// The two-tuple constraint, checked directly: every unordered record pair
/// agreeing on all lhs attributes must agree on all rhs attributes.
CheckFdResult check_fd(const std::vector<Record>& relation, const er::FD& fd);

struct UpdateResult {
    Store store;
    Trace trace;
    std::optional<RunError> error;
    std::string input_error;  // UNKNOWN_RELATION | UNKNOWN_ATTRIBUTE | FD_MISMATCH

    bool ok() const { return input_error.empty() && !error.has_value(); }
};

/// FD-preserving update as a token run: scan the relation, and for every tuple
/// whose match_attr equals match_value replace set_attr by new_value. All
/// other tuples are untouched. match_attr must come from the FD's lhs and
/// set_attr from its rhs.
UpdateResult update_with_fd(const Store& store, const std::string& relation, const er::FD& fd,
                            const std::string& match_attr, const std::string& match_value,
                            const std::string& set_attr, const std::string& new_value);

/// `.tm` sources for the three operation models; insert_with_ri and
/// update_with_fd run these, and the fixed insert-address text doubles as a
/// corpus fixture.
std::string insert_address_model_text();
std::string ri_insert_model_text(const std::string& relation, const std::string& key_attr,
                                 const std::vector<std::string>& record_fields);
std::string fd_update_model_text(const std::string& relation, const std::string& match_attr,
                                 const std::string& set_attr);

/// Thimac name used for a store relation inside generated models.
std::string store_thimac_name(const std::string& relation);

}  // namespace tmtk::sim

#endif
