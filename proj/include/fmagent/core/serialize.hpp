#ifndef FMAGENT_CORE_SERIALIZE_HPP
#define FMAGENT_CORE_SERIALIZE_HPP

#include <stdexcept>

#include <json.hpp>

#include <fmagent/core/candidate.hpp>
#include <fmagent/core/genome.hpp>

namespace fmagent {

    using json = nlohmann::json;

    /// Malformed document: missing field, wrong type, broken invariant.
    class SchemaError : public std::invalid_argument {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Documents:
    //   genome    {"kind": "real_vector", "values": [..], "bounds": [[lo, hi], ..]}
    //             {"kind": "text", "text": ".."}
    //   candidate {"id", "genome", "parent_ids", "island_id", "generation",
    //              "provenance", "created_seq"}
    //   report    {"correct", "effectiveness", "judge_score", "combined",
    //              "eval_seconds", "failure", "warning"}; NaN and absent
    //              optionals are null.

    json bounds_to_json(const Bounds& b);
    Bounds bounds_from_json(const json& j);

    json to_json(const Genome& g);
    Genome genome_from_json(const json& j);

    json to_json(const Candidate& c);
    Candidate candidate_from_json(const json& j);

    json to_json(const FitnessReport& r);
    FitnessReport report_from_json(const json& j);

    CandidateId id_from_json(const json& j);

    /// Typed field access that throws SchemaError with the field name.
    const json& require(const json& j, const char* key);

    template <typename T>
    T field(const json& j, const char* key)
    {
        const json& v = require(j, key);
        try {
            return v.get<T>();
        }
        catch (const json::exception&) {
            throw SchemaError(std::string("field '") + key + "' has the wrong type");
        }
    }

    template <typename T>
    T field_or(const json& j, const char* key, T fallback)
    {
        if (!j.is_object() || !j.contains(key) || j.at(key).is_null())
            return fallback;
        return field<T>(j, key);
    }

} // namespace fmagent

#endif
