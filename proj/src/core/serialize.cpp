#include <fmagent/core/serialize.hpp>

#include <cmath>

namespace fmagent {

    namespace {

        json optional_number(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

        double number_or_nan(const json& j, const char* key)
        {
            if (!j.contains(key) || j.at(key).is_null())
                return std::numeric_limits<double>::quiet_NaN();
            return field<double>(j, key);
        }

        template <typename T>
        json optional_json(const std::optional<T>& v)
        {
            return v ? json(*v) : json(nullptr);
        }

    } // namespace

    const json& require(const json& j, const char* key)
    {
        if (!j.is_object())
            throw SchemaError(std::string("expected an object holding '") + key + "'");
        auto it = j.find(key);
        if (it == j.end())
            throw SchemaError(std::string("missing field '") + key + "'");
        return *it;
    }

    json bounds_to_json(const Bounds& b)
    {
        json out = json::array();
        for (Eigen::Index i = 0; i < b.size(); ++i)
            out.push_back({b.lower[i], b.upper[i]});
        return out;
    }

    Bounds bounds_from_json(const json& j)
    {
        if (!j.is_array())
            throw SchemaError("bounds must be an array of [lower, upper] pairs");
        Bounds b{Eigen::VectorXd(j.size()), Eigen::VectorXd(j.size())};
        for (std::size_t i = 0; i < j.size(); ++i) {
            const json& pair = j[i];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
                throw SchemaError("bounds entry " + std::to_string(i) + " is not a [lower, upper] pair");
            b.lower[i] = pair[0].get<double>();
            b.upper[i] = pair[1].get<double>();
        }
        return b;
    }

    json to_json(const Genome& g)
    {
        if (!g.is_real())
            return {{"kind", "text"}, {"text", g.text()}};
        return {{"kind", "real_vector"}, {"values", std::vector<double>(g.values().begin(), g.values().end())}, {"bounds", bounds_to_json(g.bounds())}};
    }

    Genome genome_from_json(const json& j)
    {
        const std::string kind = field<std::string>(j, "kind");
        if (kind == "text")
            return Genome::text(field<std::string>(j, "text"));
        if (kind != "real_vector")
            throw SchemaError("unknown genome kind '" + kind + "'");
        const auto values = field<std::vector<double>>(j, "values");
        Bounds bounds = bounds_from_json(require(j, "bounds"));
        if (bounds.size() != static_cast<Eigen::Index>(values.size()))
            throw SchemaError("genome has " + std::to_string(values.size()) + " values but " + std::to_string(bounds.size()) + " bounds");
        return Genome::real(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())), std::move(bounds));
    }

    CandidateId id_from_json(const json& j)
    {
        if (!j.is_string())
            throw SchemaError("candidate id must be a string");
        auto id = CandidateId::parse(j.get<std::string>());
        if (!id)
            throw SchemaError("malformed candidate id '" + j.get<std::string>() + "'");
        return *id;
    }

    json to_json(const Candidate& c)
    {
        json parents = json::array();
        for (const auto& p : c.parent_ids)
            parents.push_back(p.str());
        return {{"id", c.id.str()},
                {"genome", to_json(c.genome)},
                {"parent_ids", parents},
                {"island_id", c.island_id},
                {"generation", c.generation},
                {"provenance", c.provenance},
                {"created_seq", c.created_seq}};
    }

    Candidate candidate_from_json(const json& j)
    {
        Candidate c;
        c.id = id_from_json(require(j, "id"));
        c.genome = genome_from_json(require(j, "genome"));
        for (const json& p : field_or<json>(j, "parent_ids", json::array()))
            c.parent_ids.push_back(id_from_json(p));
        c.island_id = field_or<int>(j, "island_id", kUnassignedIsland);
        c.generation = field_or<std::uint64_t>(j, "generation", 0);
        c.provenance = field_or<std::string>(j, "provenance", "");
        c.created_seq = field_or<std::uint64_t>(j, "created_seq", 0);
        return c;
    }

    json to_json(const FitnessReport& r)
    {
        return {{"correct", r.correct},
                {"effectiveness", optional_number(r.effectiveness)},
                {"judge_score", optional_json(r.judge_score)},
                {"combined", r.combined},
                {"eval_seconds", r.eval_seconds},
                {"failure", optional_json(r.failure)},
                {"warning", optional_json(r.warning)}};
    }

    FitnessReport report_from_json(const json& j)
    {
        FitnessReport r;
        r.correct = field<bool>(j, "correct");
        r.effectiveness = number_or_nan(j, "effectiveness");
        if (j.contains("judge_score") && !j.at("judge_score").is_null())
            r.judge_score = field<double>(j, "judge_score");
        r.combined = field<double>(j, "combined");
        r.eval_seconds = field_or<double>(j, "eval_seconds", 0.0);
        if (j.contains("failure") && !j.at("failure").is_null())
            r.failure = field<std::string>(j, "failure");
        if (j.contains("warning") && !j.at("warning").is_null())
            r.warning = field<std::string>(j, "warning");
        return r;
    }

} // namespace fmagent
