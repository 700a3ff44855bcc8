#include <fmagent/pipeline/intervention.hpp>

#include <algorithm>
#include <cmath>

namespace fmagent {

    std::string_view to_string(InterventionKind k)
    {
        switch (k) {
        case InterventionKind::pause: return "pause";
        case InterventionKind::resume: return "resume";
        case InterventionKind::param_override: return "param_override";
        case InterventionKind::guidance: return "guidance";
        case InterventionKind::seed_candidate: return "seed_candidate";
        }
        return "pause";
    }

    InterventionKind parse_intervention_kind(std::string_view text)
    {
        for (auto k : {InterventionKind::pause, InterventionKind::resume, InterventionKind::param_override, InterventionKind::guidance, InterventionKind::seed_candidate})
            if (to_string(k) == text)
                return k;
        throw SchemaError("unknown intervention kind '" + std::string(text) + "'");
    }

    json to_json(const Intervention& i) { return {{"id", i.id}, {"kind", to_string(i.kind)}, {"payload", i.payload}}; }

    void apply_override(RuntimeParams& params, const std::string& path, double value, std::size_t elite_capacity)
    {
        RuntimeParams next = params;
        if (path == "tau_min")
            next.sampler.tau_min = value;
        else if (path == "tau_max")
            next.sampler.tau_max = value;
        else if (path == "epsilon_max")
            next.sampler.epsilon_max = value;
        else if (path == "p_elite")
            next.sampler.p_elite = value;
        else if (path == "migration.interval" || path == "migration.count") {
            if (value != std::floor(value) || std::abs(value) > 1e9)
                throw std::invalid_argument(path + " must be an integer");
            (path == "migration.interval" ? next.migration.interval : next.migration.count) = static_cast<int>(value);
        }
        else
            throw std::invalid_argument("path '" + path + "' cannot be overridden");
        next.sampler.validate();
        next.migration.validate(elite_capacity);
        params = next;
    }

    Intervention intervention_from_json(const json& j)
    {
        if (!j.is_object())
            throw SchemaError("intervention must be an object");
        Intervention iv;
        iv.id = field_or<std::string>(j, "id", "");
        iv.kind = parse_intervention_kind(field<std::string>(j, "kind"));
        iv.payload = field_or<json>(j, "payload", json::object());
        if (!iv.payload.is_object())
            throw SchemaError("intervention payload must be an object");

        switch (iv.kind) {
        case InterventionKind::pause:
        case InterventionKind::resume: break;
        case InterventionKind::param_override: {
            const std::string path = field<std::string>(iv.payload, "path");
            if (std::find(kOverridablePaths.begin(), kOverridablePaths.end(), path) == kOverridablePaths.end())
                throw SchemaError("path '" + path + "' is not overridable");
            const double value = field<double>(iv.payload, "value");
            // Range check against a permissive baseline; cross-field checks happen at the boundary.
            RuntimeParams probe;
            probe.sampler.tau_min = 1e-300;
            probe.sampler.tau_max = 1e300;
            try {
                apply_override(probe, path, value, static_cast<std::size_t>(1e9));
            }
            catch (const std::invalid_argument& e) {
                throw SchemaError(e.what());
            }
            break;
        }
        case InterventionKind::guidance:
            field<std::string>(iv.payload, "text");
            break;
        case InterventionKind::seed_candidate: {
            const Genome g = genome_from_json(require(iv.payload, "genome"));
            if (auto problem = g.validate())
                throw SchemaError("seed genome is invalid: " + *problem);
            if (field_or<int>(iv.payload, "island", 0) < 0)
                throw SchemaError("island must be non-negative");
            break;
        }
        }
        return iv;
    }

} // namespace fmagent
