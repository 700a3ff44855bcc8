#ifndef FMAGENT_PIPELINE_ENGINE_HPP
#define FMAGENT_PIPELINE_ENGINE_HPP

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <fmagent/core/population_db.hpp>
#include <fmagent/islands/islands.hpp>
#include <fmagent/pipeline/events.hpp>
#include <fmagent/pipeline/intervention.hpp>
#include <fmagent/pipeline/run_config.hpp>
#include <fmagent/pipeline/snapshot.hpp>

namespace fmagent {

    enum class RunState { created, running, paused, finished, stopped, failed };

    std::string_view to_string(RunState s);

    /// Offspring id of slot `slot` of island `island` in generation `gen`.
    CandidateId offspring_id(std::uint64_t seed, int island, std::uint64_t gen, int slot);

    /// Stream for parent selection and operator choice of one slot.
    std::uint64_t selection_seed(std::uint64_t seed, int island, std::uint64_t gen, int slot);

    /// Stream of one generation or evaluation attempt (attempt counts from 1).
    std::uint64_t attempt_seed(std::uint64_t seed, const CandidateId& id, int attempt);

    /// Seed handed to cold_start_generate.
    std::uint64_t cold_start_seed(std::uint64_t seed);

    struct GenerationSummary {
        int island = 0;
        std::uint64_t generation = 0;
        std::optional<double> best;
        std::optional<double> mean;
        double diversity = 0.0;
        std::size_t generated = 0;
        std::size_t evaluated = 0;
        std::size_t correct = 0;
        std::size_t failed = 0;
    };

    json to_json(const GenerationSummary& s);

    /// Counters over every task the pipeline ran.
    struct PipelineStats {
        std::size_t gen_tasks = 0;
        std::size_t gen_failed = 0;
        std::size_t gen_attempts = 0;
        std::size_t eval_tasks = 0;
        std::size_t eval_completed = 0;
        std::size_t eval_abandoned = 0;
        std::size_t eval_attempts = 0;
        std::size_t injected_failures = 0;
        std::size_t lost_acks = 0;
        std::size_t duplicate_results = 0; ///< staged results dropped by the id key
    };

    json to_json(const PipelineStats& s);

    struct RunResult {
        RunState state = RunState::created;
        std::string reason;
        std::uint64_t generations = 0;          ///< last completed generation
        std::optional<Record> best;
        std::vector<double> best_trace;         ///< overall best combined after each generation, from 0
        std::vector<GenerationSummary> summaries;
        PipelineStats stats;
    };

    struct IslandStatus {
        int id = 0;
        std::uint64_t generation = 0;
        double diversity = 0.0;
        std::size_t members = 0;
    };

    struct RunStatus {
        std::string run_id;
        RunState state = RunState::created;
        std::uint64_t generation = 0;
        std::optional<double> best_combined;
        std::vector<IslandStatus> islands;
    };

    json to_json(const RunStatus& s);

    /// One evolution run: cold start, lockstep generations across islands
    /// with generation and evaluation on two worker pools, migration,
    /// interventions at generation boundaries, events and snapshots.
    ///
    /// All effects are committed by the driver thread at the generation
    /// boundary in (island, slot) order, so the event sequence and database
    /// do not depend on worker counts or scheduling.
    class Run {
    public:
        /// `dir` receives events.jsonl and snapshots when given.
        explicit Run(RunConfig config, std::optional<std::filesystem::path> dir = std::nullopt);
        ~Run();

        Run(const Run&) = delete;
        Run& operator=(const Run&) = delete;

        const std::string& id() const { return _config.run_id; }
        const RunConfig& config() const { return _config; }

        /// Runs to completion on the calling thread.
        RunResult execute();

        /// Runs on a background thread; `wait` joins it.
        void start();
        RunResult wait();

        /// Ends the run at the next generation boundary (also wakes a pause).
        void request_stop();

        /// Queues an intervention for the next not-yet-started generation.
        /// Throws RunFinished once the run is over and SchemaError for
        /// payloads that do not fit this run (island range, genome bounds).
        InterventionAck submit(Intervention intervention);

        RunStatus status() const;

        /// Candidates and reports of one island. Throws std::out_of_range.
        json population(int island) const;

        const EventLog& events() const { return *_events; }
        const PopulationDB& db() const { return _db; }
        json snapshot() const;
        std::optional<std::filesystem::path> directory() const { return _dir; }

    private:
        struct Slot;
        struct Staging;
        struct Pending {
            Intervention intervention;
            std::uint64_t applies_at = 0;
        };
        struct Pools;

        RunResult _run();
        void _cold_start();
        void _run_generation(std::uint64_t gen);
        void _process_slots(std::vector<Slot>& slots, std::uint64_t gen);
        void _migrate(std::uint64_t gen);
        void _complete_generation(std::uint64_t gen, const std::vector<GenerationSummary>& partial);
        bool _boundary(std::uint64_t gen);
        void _apply(const Pending& p);
        std::optional<std::string> _stop_reason(std::uint64_t gen) const;
        void _write_snapshot(const std::string& name, const std::string& state);
        void _publish_status(RunState state);
        std::vector<IslandSummary> _island_summaries() const;
        double _overall_best() const;
        void _commit_report(const Candidate& c, const FitnessReport& r);

        RunConfig _config;
        std::optional<std::filesystem::path> _dir;
        std::unique_ptr<EventLog> _events;
        PopulationDB _db;
        Bounds _bounds;
        std::vector<IslandState> _islands;
        RuntimeParams _params;
        PipelineStats _stats;
        RunResult _result;
        std::unique_ptr<Pools> _pools;
        std::chrono::steady_clock::time_point _started;

        mutable std::mutex _control;
        std::condition_variable _control_cv;
        std::deque<Pending> _pending;
        std::map<std::string, InterventionAck> _seen;
        std::uint64_t _next_generation = 1;
        bool _done = false;
        bool _paused = false;
        std::atomic<bool> _stop{false};

        mutable std::mutex _status_mutex;
        RunStatus _status;
        RuntimeParams _status_params;

        std::thread _thread;
        bool _executed = false;
    };

    /// Runs a configuration to completion with no output directory.
    RunResult run_pipeline(const RunConfig& config);

} // namespace fmagent

#endif
