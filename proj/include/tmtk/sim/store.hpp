#ifndef TMTK_SIM_STORE_HPP
#define TMTK_SIM_STORE_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmtk::sim {

/// Flat tuple; values are strings throughout (the models never need typed
/// arithmetic). std::map keeps dumps canonical.
using Record = std::map<std::string, std::string>;

struct Relation {
    std::vector<std::string> key;              // key attribute names
    std::optional<std::string> partition_by;   // partition attribute, if any
    std::vector<Record> records;               // cursor order = insertion order
};

/// Immutable snapshot of the database; runs return a fresh snapshot.
struct Store {
    std::map<std::string, Relation> relations;
};

struct StoreError {
    std::string code;  // MALFORMED_STORE | DUPLICATE_KEY | PARTITION_INCOHERENT
    std::string message;
};

/// Key uniqueness plus partition coherence (every record carries a nonempty
/// partition value when the relation is partitioned).
std::optional<StoreError> validate_store(const Store& store);

struct LoadResult {
    bool ok = false;
    Store store;
    StoreError error;
};

/// JSON round-trip:
///   {"customers": {"key": ["ID"], "partition_by": "Dept", "records": [{...}]}}
/// Loading enforces the store invariants; dumping canonicalizes key order.
LoadResult load_store(std::string_view json_text);
std::string dump_store(const Store& store);

/// Distinct partition values in record order.
std::vector<std::string> partition_values(const Relation& rel);

std::string key_of(const Relation& rel, const Record& rec);

}  // namespace tmtk::sim

#endif
