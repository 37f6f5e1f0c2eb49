#include "tmtk/sim/store.hpp"

#include <set>

#include <json.hpp>

namespace tmtk::sim {

std::string key_of(const Relation& rel, const Record& rec) {
    std::string out;
    for (const std::string& k : rel.key) {
        auto it = rec.find(k);
        out += (it == rec.end() ? std::string("\x01missing") : it->second);
        out += '\x1f';
    }
    return out;
}

std::optional<StoreError> validate_store(const Store& store) {
    for (const auto& [name, rel] : store.relations) {
        std::set<std::string> seen;
        for (size_t i = 0; i < rel.records.size(); ++i) {
            const Record& rec = rel.records[i];
            if (!rel.key.empty()) {
                for (const std::string& k : rel.key) {
                    if (!rec.count(k)) {
                        return StoreError{"MALFORMED_STORE",
                                          "relation '" + name + "' record " + std::to_string(i) +
                                              " lacks key attribute '" + k + "'"};
                    }
                }
                if (!seen.insert(key_of(rel, rec)).second) {
                    return StoreError{"DUPLICATE_KEY",
                                      "relation '" + name + "' has duplicate key at record " +
                                          std::to_string(i)};
                }
            }
            if (rel.partition_by) {
                auto it = rec.find(*rel.partition_by);
                if (it == rec.end() || it->second.empty()) {
                    return StoreError{"PARTITION_INCOHERENT",
                                      "relation '" + name + "' record " + std::to_string(i) +
                                          " has no partition value for '" + *rel.partition_by +
                                          "'"};
                }
            }
        }
    }
    return std::nullopt;
}

LoadResult load_store(std::string_view json_text) {
    LoadResult res;
    auto j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        res.error = {"MALFORMED_STORE", "store JSON must be an object of relations"};
        return res;
    }
    for (const auto& [name, jrel] : j.items()) {
        if (!jrel.is_object() || !jrel.contains("records") || !jrel["records"].is_array()) {
            res.error = {"MALFORMED_STORE",
                         "relation '" + name + "' needs a records array"};
            return res;
        }
        Relation rel;
        if (jrel.contains("key")) {
            for (const auto& k : jrel["key"]) {
                if (!k.is_string()) {
                    res.error = {"MALFORMED_STORE",
                                 "relation '" + name + "' key must be strings"};
                    return res;
                }
                rel.key.push_back(k.get<std::string>());
            }
        }
        if (jrel.contains("partition_by") && !jrel["partition_by"].is_null()) {
            if (!jrel["partition_by"].is_string()) {
                res.error = {"MALFORMED_STORE",
                             "relation '" + name + "' partition_by must be a string"};
                return res;
            }
            rel.partition_by = jrel["partition_by"].get<std::string>();
        }
        for (const auto& jrec : jrel["records"]) {
            if (!jrec.is_object()) {
                res.error = {"MALFORMED_STORE",
                             "relation '" + name + "' records must be objects"};
                return res;
            }
            Record rec;
            for (const auto& [field, value] : jrec.items()) {
                if (!value.is_string()) {
                    res.error = {"MALFORMED_STORE",
                                 "relation '" + name + "' field '" + field +
                                     "' must be a string"};
                    return res;
                }
                rec[field] = value.get<std::string>();
            }
            rel.records.push_back(std::move(rec));
        }
        res.store.relations.emplace(name, std::move(rel));
    }
    if (auto err = validate_store(res.store)) {
        res.error = *err;
        return res;
    }
    res.ok = true;
    return res;
}

std::string dump_store(const Store& store) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [name, rel] : store.relations) {
        nlohmann::ordered_json jrel;
        jrel["key"] = rel.key;
        if (rel.partition_by) jrel["partition_by"] = *rel.partition_by;
        jrel["records"] = nlohmann::ordered_json::array();
        for (const Record& rec : rel.records) {
            nlohmann::ordered_json jrec = nlohmann::ordered_json::object();
            for (const auto& [field, value] : rec) jrec[field] = value;
            jrel["records"].push_back(std::move(jrec));
        }
        j[name] = std::move(jrel);
    }
    return j.dump(2) + "\n";
}

std::vector<std::string> partition_values(const Relation& rel) {
    std::vector<std::string> out;
    if (!rel.partition_by) return out;
    std::set<std::string> seen;
    for (const Record& rec : rel.records) {
        auto it = rec.find(*rel.partition_by);
        if (it != rec.end() && seen.insert(it->second).second) out.push_back(it->second);
    }
    return out;
}

}  // namespace tmtk::sim
