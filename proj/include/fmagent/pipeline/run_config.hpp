#ifndef FMAGENT_PIPELINE_RUN_CONFIG_HPP
#define FMAGENT_PIPELINE_RUN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <fmagent/core/serialize.hpp>
#include <fmagent/evaluation/evaluator.hpp>
#include <fmagent/generation/generator.hpp>
#include <fmagent/islands/islands.hpp>
#include <fmagent/sampling/sampling.hpp>

namespace fmagent {

    struct PipelineConfig {
        int gen_workers = 4;
        int eval_workers = 8;
        int queue_capacity = 64;
        int max_retries = 3;

        void validate() const;
    };

    /// Test-only failure injection, drawn per attempt from the attempt's stream.
    struct FaultConfig {
        double eval_failure = 0.0; ///< attempt fails before evaluating
        double ack_loss = 0.0;     ///< result is staged, then the attempt is reported lost and re-run
    };

    /// The parameters interventions may change while a run is live.
    struct RuntimeParams {
        SamplerConfig sampler;
        MigrationPolicy migration;
        std::optional<std::string> guidance;
    };

    json to_json(const RuntimeParams& p);
    RuntimeParams runtime_params_from_json(const json& j);

    struct RunConfig {
        std::string run_id; ///< generated when empty
        std::uint64_t seed = 42;
        EvaluatorSpec evaluator;
        int islands = 4;
        std::uint64_t generations = 50;
        std::optional<double> wall_clock_seconds;
        std::optional<double> target_combined;

        std::size_t cold_start_size = 0; ///< 0 means 10 per island
        bool cold_start_clustering = true;
        std::vector<GeneratorSpec> cold_start_generators{GeneratorSpec::reseed_spec()};
        std::vector<GeneratorSpec> generators{GeneratorSpec::gaussian(), GeneratorSpec::blend()};

        int offspring_per_island = 8;
        std::size_t population_cap = 50;
        std::size_t elite_capacity = 10;
        RuntimeParams params;
        PipelineConfig pipeline;
        FaultConfig faults;
        std::uint64_t snapshot_interval = 100;

        std::size_t cold_start_count() const { return cold_start_size ? cold_start_size : static_cast<std::size_t>(10 * islands); }

        /// Throws std::invalid_argument on any broken invariant.
        void validate() const;
    };

    json to_json(const RunConfig& c);

    /// Missing fields take the defaults above. Throws SchemaError.
    RunConfig run_config_from_json(const json& j);

} // namespace fmagent

#endif
