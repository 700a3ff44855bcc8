#ifndef FMAGENT_PIPELINE_INTERVENTION_HPP
#define FMAGENT_PIPELINE_INTERVENTION_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <fmagent/core/serialize.hpp>
#include <fmagent/pipeline/run_config.hpp>

namespace fmagent {

    enum class InterventionKind { pause, resume, param_override, guidance, seed_candidate };

    std::string_view to_string(InterventionKind k);
    InterventionKind parse_intervention_kind(std::string_view text);

    inline constexpr std::array<std::string_view, 6> kOverridablePaths{"tau_min", "tau_max", "epsilon_max", "p_elite", "migration.interval", "migration.count"};

    /// Operator action applied at a generation boundary.
    ///
    /// Payloads: param_override {"path", "value"}; guidance {"text"};
    /// seed_candidate {"genome", "island" (default 0)}; pause and resume
    /// take none.
    struct Intervention {
        std::string id; ///< idempotency key; generated when empty
        InterventionKind kind = InterventionKind::pause;
        json payload = json::object();
    };

    json to_json(const Intervention& i);

    /// Checks kind, override path whitelist, value ranges and document
    /// shapes. Throws SchemaError.
    Intervention intervention_from_json(const json& j);

    /// Applies a param_override to `params`. Throws std::invalid_argument if
    /// the result breaks an invariant (for example tau_min > tau_max).
    void apply_override(RuntimeParams& params, const std::string& path, double value, std::size_t elite_capacity);

    struct InterventionAck {
        std::string intervention_id;
        bool accepted = true;
        std::uint64_t applies_at_generation = 0;
        bool duplicate = false;
    };

    class RunFinished : public std::logic_error {
    public:
        RunFinished() : std::logic_error("run has finished") {}
    };

} // namespace fmagent

#endif
