#include <fmagent/pipeline/run_config.hpp>

namespace fmagent {

    void PipelineConfig::validate() const
    {
        if (gen_workers < 1 || eval_workers < 1)
            throw std::invalid_argument("worker counts must be positive");
        if (queue_capacity < 1)
            throw std::invalid_argument("queue capacity must be positive");
        if (max_retries < 0)
            throw std::invalid_argument("max_retries must be non-negative");
    }

    json to_json(const RuntimeParams& p)
    {
        const SamplerConfig& s = p.sampler;
        return {{"sampler",
                 {{"strategy", to_string(s.strategy)},
                  {"k", s.k},
                  {"tau_min", s.tau_min},
                  {"tau_max", s.tau_max},
                  {"epsilon_max", s.epsilon_max},
                  {"p_elite", s.p_elite},
                  {"clusters", s.clusters}}},
                {"migration", {{"topology", "ring"}, {"interval", p.migration.interval}, {"count", p.migration.count}}},
                {"guidance", p.guidance ? json(*p.guidance) : json(nullptr)}};
    }

    RuntimeParams runtime_params_from_json(const json& j)
    {
        RuntimeParams p;
        const json s = field_or<json>(j, "sampler", json::object());
        try {
            p.sampler.strategy = parse_strategy(field_or<std::string>(s, "strategy", "adaptive"));
        }
        catch (const std::invalid_argument& e) {
            throw SchemaError(e.what());
        }
        p.sampler.k = field_or<int>(s, "k", p.sampler.k);
        p.sampler.tau_min = field_or<double>(s, "tau_min", p.sampler.tau_min);
        p.sampler.tau_max = field_or<double>(s, "tau_max", p.sampler.tau_max);
        p.sampler.epsilon_max = field_or<double>(s, "epsilon_max", p.sampler.epsilon_max);
        p.sampler.p_elite = field_or<double>(s, "p_elite", p.sampler.p_elite);
        p.sampler.clusters = field_or<int>(s, "clusters", p.sampler.clusters);
        const json m = field_or<json>(j, "migration", json::object());
        if (field_or<std::string>(m, "topology", "ring") != "ring")
            throw SchemaError("only the ring migration topology is supported");
        p.migration.interval = field_or<int>(m, "interval", p.migration.interval);
        p.migration.count = field_or<int>(m, "count", p.migration.count);
        if (j.contains("guidance") && !j.at("guidance").is_null())
            p.guidance = field<std::string>(j, "guidance");
        return p;
    }

    void RunConfig::validate() const
    {
        if (islands < 1)
            throw std::invalid_argument("islands must be positive");
        if (cold_start_count() < static_cast<std::size_t>(islands))
            throw std::invalid_argument("cold start size must be at least the island count");
        if (offspring_per_island < 0)
            throw std::invalid_argument("offspring_per_island must be non-negative");
        if (population_cap < 1 || elite_capacity < 1)
            throw std::invalid_argument("population cap and elite capacity must be positive");
        if (generators.empty() && offspring_per_island > 0)
            throw std::invalid_argument("at least one generator is required");
        if (wall_clock_seconds && !(*wall_clock_seconds > 0.0))
            throw std::invalid_argument("wall-clock budget must be positive");
        if (snapshot_interval < 1)
            throw std::invalid_argument("snapshot interval must be positive");
        if (!(faults.eval_failure >= 0.0 && faults.eval_failure <= 1.0 && faults.ack_loss >= 0.0 && faults.ack_loss <= 1.0))
            throw std::invalid_argument("fault probabilities must lie in [0, 1]");
        for (const auto& g : generators)
            g.validate();
        for (const auto& g : cold_start_generators)
            g.validate();
        evaluator.validate();
        params.sampler.validate();
        params.migration.validate(elite_capacity);
        pipeline.validate();
    }

    json to_json(const RunConfig& c)
    {
        json gens = json::array();
        for (const auto& g : c.generators)
            gens.push_back(to_json(g));
        json cold = json::array();
        for (const auto& g : c.cold_start_generators)
            cold.push_back(to_json(g));
        json p = to_json(c.params);
        return {{"run_id", c.run_id},
                {"seed", c.seed},
                {"evaluator", to_json(c.evaluator)},
                {"islands", c.islands},
                {"generations", c.generations},
                {"wall_clock_seconds", c.wall_clock_seconds ? json(*c.wall_clock_seconds) : json(nullptr)},
                {"target_combined", c.target_combined ? json(*c.target_combined) : json(nullptr)},
                {"cold_start_size", c.cold_start_count()},
                {"cold_start_clustering", c.cold_start_clustering},
                {"cold_start_generators", cold},
                {"generators", gens},
                {"offspring_per_island", c.offspring_per_island},
                {"population_cap", c.population_cap},
                {"elite_capacity", c.elite_capacity},
                {"sampler", p["sampler"]},
                {"migration", p["migration"]},
                {"guidance", p["guidance"]},
                {"pipeline",
                 {{"gen_workers", c.pipeline.gen_workers},
                  {"eval_workers", c.pipeline.eval_workers},
                  {"queue_capacity", c.pipeline.queue_capacity},
                  {"max_retries", c.pipeline.max_retries}}},
                {"faults", {{"eval_failure", c.faults.eval_failure}, {"ack_loss", c.faults.ack_loss}}},
                {"snapshot_interval", c.snapshot_interval}};
    }

    RunConfig run_config_from_json(const json& j)
    {
        if (!j.is_object())
            throw SchemaError("run config must be an object");
        RunConfig c;
        c.run_id = field_or<std::string>(j, "run_id", "");
        c.seed = field_or<std::uint64_t>(j, "seed", c.seed);
        json ev = field_or<json>(j, "evaluator", json::object());
        if (j.contains("workload") && !ev.contains("workload"))
            ev["workload"] = j.at("workload");
        if (j.contains("dimension") && !ev.contains("dimension"))
            ev["dimension"] = j.at("dimension");
        c.evaluator = evaluator_spec_from_json(ev);
        c.islands = field_or<int>(j, "islands", c.islands);
        c.generations = field_or<std::uint64_t>(j, "generations", c.generations);
        if (j.contains("wall_clock_seconds") && !j.at("wall_clock_seconds").is_null())
            c.wall_clock_seconds = field<double>(j, "wall_clock_seconds");
        if (j.contains("target_combined") && !j.at("target_combined").is_null())
            c.target_combined = field<double>(j, "target_combined");
        c.cold_start_size = field_or<std::size_t>(j, "cold_start_size", 0);
        c.cold_start_clustering = field_or<bool>(j, "cold_start_clustering", true);
        if (j.contains("cold_start_generators")) {
            c.cold_start_generators.clear();
            for (const json& g : field<json>(j, "cold_start_generators"))
                c.cold_start_generators.push_back(generator_spec_from_json(g));
        }
        if (j.contains("generators")) {
            c.generators.clear();
            for (const json& g : field<json>(j, "generators"))
                c.generators.push_back(generator_spec_from_json(g));
        }
        c.offspring_per_island = field_or<int>(j, "offspring_per_island", c.offspring_per_island);
        c.population_cap = field_or<std::size_t>(j, "population_cap", c.population_cap);
        c.elite_capacity = field_or<std::size_t>(j, "elite_capacity", c.elite_capacity);
        c.params = runtime_params_from_json(j);
        const json pl = field_or<json>(j, "pipeline", json::object());
        c.pipeline.gen_workers = field_or<int>(pl, "gen_workers", c.pipeline.gen_workers);
        c.pipeline.eval_workers = field_or<int>(pl, "eval_workers", c.pipeline.eval_workers);
        c.pipeline.queue_capacity = field_or<int>(pl, "queue_capacity", c.pipeline.queue_capacity);
        c.pipeline.max_retries = field_or<int>(pl, "max_retries", c.pipeline.max_retries);
        const json f = field_or<json>(j, "faults", json::object());
        c.faults.eval_failure = field_or<double>(f, "eval_failure", 0.0);
        c.faults.ack_loss = field_or<double>(f, "ack_loss", 0.0);
        c.snapshot_interval = field_or<std::uint64_t>(j, "snapshot_interval", c.snapshot_interval);
        try {
            c.validate();
        }
        catch (const SchemaError&) {
            throw;
        }
        catch (const std::invalid_argument& e) {
            throw SchemaError(e.what());
        }
        return c;
    }

} // namespace fmagent
