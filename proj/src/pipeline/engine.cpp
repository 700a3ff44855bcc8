#include <fmagent/pipeline/engine.hpp>

#include <fmagent/pipeline/worker_pool.hpp>

#include <algorithm>
#include <cstdio>
#include <random>

namespace fmagent {

    std::string_view to_string(RunState s)
    {
        switch (s) {
        case RunState::created: return "created";
        case RunState::running: return "running";
        case RunState::paused: return "paused";
        case RunState::finished: return "finished";
        case RunState::stopped: return "stopped";
        case RunState::failed: return "failed";
        }
        return "created";
    }

    CandidateId offspring_id(std::uint64_t seed, int island, std::uint64_t gen, int slot)
    {
        return CandidateId::derive(seed, "offspring", static_cast<std::uint64_t>(island), gen, static_cast<std::uint64_t>(slot));
    }

    std::uint64_t selection_seed(std::uint64_t seed, int island, std::uint64_t gen, int slot)
    {
        return derive_seed(seed, {fnv1a("select"), static_cast<std::uint64_t>(island), gen, static_cast<std::uint64_t>(slot)});
    }

    std::uint64_t attempt_seed(std::uint64_t seed, const CandidateId& id, int attempt)
    {
        return derive_seed(seed, {id.hi, id.lo, static_cast<std::uint64_t>(attempt)});
    }

    std::uint64_t cold_start_seed(std::uint64_t seed) { return derive_seed(seed, {fnv1a("cold_start")}); }

    namespace {

        json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

        std::uint64_t fault_seed(std::uint64_t seed, const CandidateId& id, int attempt)
        {
            return derive_seed(seed, {fnv1a("fault"), id.hi, id.lo, static_cast<std::uint64_t>(attempt)});
        }

        std::string random_run_id()
        {
            std::random_device rd;
            Rng rng((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
            return CandidateId::random(rng).str().substr(0, 16);
        }

    } // namespace

    json to_json(const GenerationSummary& s)
    {
        return {{"island", s.island},
                {"generation", s.generation},
                {"best", optional_number(s.best)},
                {"mean", optional_number(s.mean)},
                {"diversity", s.diversity},
                {"counts", {{"generated", s.generated}, {"evaluated", s.evaluated}, {"correct", s.correct}, {"failed", s.failed}}}};
    }

    json to_json(const PipelineStats& s)
    {
        return {{"gen_tasks", s.gen_tasks},
                {"gen_failed", s.gen_failed},
                {"gen_attempts", s.gen_attempts},
                {"eval_tasks", s.eval_tasks},
                {"eval_completed", s.eval_completed},
                {"eval_abandoned", s.eval_abandoned},
                {"eval_attempts", s.eval_attempts},
                {"injected_failures", s.injected_failures},
                {"lost_acks", s.lost_acks},
                {"duplicate_results", s.duplicate_results}};
    }

    json to_json(const RunStatus& s)
    {
        json islands = json::array();
        for (const auto& i : s.islands)
            islands.push_back({{"id", i.id}, {"generation", i.generation}, {"diversity", i.diversity}, {"members", i.members}});
        return {{"run_id", s.run_id}, {"state", to_string(s.state)}, {"generation", s.generation}, {"best_combined", optional_number(s.best_combined)}, {"islands", islands}};
    }

    // One unit of pipeline work: a candidate to produce (unless pre-set) and evaluate.
    struct Run::Slot {
        int island = 0;
        int slot = 0;
        CandidateId id;
        GeneratorSpec spec;
        std::vector<Candidate> parents;
        std::optional<Genome> genome;
        std::string gen_error;
        int gen_attempts = 0;
        std::optional<FitnessReport> report;
        std::string eval_error;
        int eval_attempts = 0;
    };

    struct Run::Staging {
        std::mutex mutex;
        std::condition_variable done_cv;
        std::size_t remaining = 0;
        PipelineStats stats;

        void stage(Slot& s, FitnessReport r)
        {
            std::lock_guard lock(mutex);
            if (s.report)
                ++stats.duplicate_results;
            else
                s.report = std::move(r);
        }

        void finish(const std::function<void(PipelineStats&)>& tally)
        {
            std::lock_guard lock(mutex);
            tally(stats);
            if (--remaining == 0)
                done_cv.notify_all();
        }
    };

    struct Run::Pools {
        WorkerPool generate;
        WorkerPool evaluate;

        explicit Pools(const PipelineConfig& c)
            : generate("generate", static_cast<std::size_t>(c.gen_workers), static_cast<std::size_t>(c.queue_capacity)),
              evaluate("evaluate", static_cast<std::size_t>(c.eval_workers), static_cast<std::size_t>(c.queue_capacity))
        {
        }
    };

    Run::Run(RunConfig config, std::optional<std::filesystem::path> dir) : _config(std::move(config)), _dir(std::move(dir)), _db(_config.elite_capacity)
    {
        _config.validate();
        if (_config.run_id.empty())
            _config.run_id = random_run_id();
        _bounds = workload_bounds(_config.evaluator);
        _params = _config.params;
        _events = std::make_unique<EventLog>(_config.run_id, _dir ? std::optional(*_dir / "events.jsonl") : std::nullopt);
        for (int i = 0; i < _config.islands; ++i)
            _islands.push_back(IslandState{i, 0, {}, {}, 0.0});
        _status.run_id = _config.run_id;
        _status_params = _params;
    }

    Run::~Run()
    {
        request_stop();
        if (_thread.joinable())
            _thread.join();
    }

    RunResult Run::execute()
    {
        {
            std::lock_guard lock(_control);
            if (_executed)
                throw std::logic_error("run already executed");
            _executed = true;
        }
        return _run();
    }

    void Run::start()
    {
        {
            std::lock_guard lock(_control);
            if (_executed)
                throw std::logic_error("run already executed");
            _executed = true;
        }
        _publish_status(RunState::running);
        _thread = std::thread([this] { _run(); });
    }

    RunResult Run::wait()
    {
        if (_thread.joinable())
            _thread.join();
        return _result;
    }

    void Run::request_stop()
    {
        std::lock_guard lock(_control);
        _stop = true;
        _control_cv.notify_all();
    }

    InterventionAck Run::submit(Intervention iv)
    {
        std::lock_guard lock(_control);
        if (_done)
            throw RunFinished();
        if (iv.id.empty())
            iv.id = random_run_id();
        if (auto it = _seen.find(iv.id); it != _seen.end()) {
            InterventionAck ack = it->second;
            ack.duplicate = true;
            return ack;
        }
        if (iv.kind == InterventionKind::seed_candidate) {
            const int island = field_or<int>(iv.payload, "island", 0);
            if (island < 0 || island >= _config.islands)
                throw SchemaError("island " + std::to_string(island) + " does not exist");
            const Genome g = genome_from_json(require(iv.payload, "genome"));
            if (!g.is_real() || !(g.bounds() == _bounds))
                throw SchemaError("seed genome does not match the workload bounds");
            if (auto problem = g.validate())
                throw SchemaError("seed genome is invalid: " + *problem);
        }
        InterventionAck ack{iv.id, true, _next_generation, false};
        _seen.emplace(iv.id, ack);
        _pending.push_back({std::move(iv), ack.applies_at_generation});
        _control_cv.notify_all();
        return ack;
    }

    RunStatus Run::status() const
    {
        std::lock_guard lock(_status_mutex);
        return _status;
    }

    json Run::population(int island) const
    {
        if (island < 0 || island >= _config.islands)
            throw std::out_of_range("island " + std::to_string(island) + " does not exist");
        json out = json::array();
        for (const Record& r : _db.island_records(island))
            out.push_back({{"candidate", to_json(r.candidate)}, {"report", r.report ? to_json(*r.report) : json(nullptr)}});
        return {{"island", island}, {"candidates", out}};
    }

    json Run::snapshot() const
    {
        RunStatus st;
        RuntimeParams params;
        {
            std::lock_guard lock(_status_mutex);
            st = _status;
            params = _status_params;
        }
        std::vector<IslandSummary> islands;
        for (const auto& i : st.islands)
            islands.push_back({i.id, i.generation, i.diversity});
        return build_snapshot(_config.run_id, _events->last_seq(), std::string(to_string(st.state)), params, _db, islands, _config.population_cap);
    }

    std::vector<IslandSummary> Run::_island_summaries() const
    {
        std::vector<IslandSummary> out;
        for (const auto& i : _islands)
            out.push_back({i.id, i.generation, i.diversity});
        return out;
    }

    double Run::_overall_best() const
    {
        auto b = _db.best();
        return b ? b->report->combined : kSentinelFitness;
    }

    void Run::_publish_status(RunState state)
    {
        RunStatus st;
        st.run_id = _config.run_id;
        st.state = state;
        st.generation = _islands.empty() ? 0 : _islands.front().generation;
        if (auto b = _db.best())
            st.best_combined = b->report->combined;
        for (const auto& i : _islands)
            st.islands.push_back({i.id, i.generation, i.diversity, i.members.size()});
        std::lock_guard lock(_status_mutex);
        _status = std::move(st);
        _status_params = _params;
    }

    void Run::_write_snapshot(const std::string& name, const std::string& state)
    {
        if (!_dir)
            return;
        write_snapshot(*_dir / name, build_snapshot(_config.run_id, _events->last_seq(), state, _params, _db, _island_summaries(), _config.population_cap));
    }

    void Run::_commit_report(const Candidate& c, const FitnessReport& r)
    {
        _db.try_record_fitness(c.id, r);
        _events->append(EventType::candidate_evaluated, {{"candidate_id", c.id.str()}, {"island", c.island_id}, {"report", to_json(r)}});
    }

    void Run::_process_slots(std::vector<Slot>& slots, std::uint64_t gen)
    {
        if (slots.empty())
            return;
        Staging st;
        st.remaining = slots.size();
        const int attempts = 1 + _config.pipeline.max_retries;
        const std::uint64_t seed = _config.seed;
        const EvaluatorSpec& evaluator = _config.evaluator;
        const FaultConfig faults = _config.faults;
        const Bounds& bounds = _bounds;
        WorkerPool& eval_pool = _pools->evaluate;

        auto eval_task = [&, attempts, seed](Slot& s) {
            int used = 0;
            bool delivered = false;
            std::size_t injected = 0, lost = 0;
            try {
                for (int attempt = 1; attempt <= attempts; ++attempt) {
                    ++used;
                    Rng fault(fault_seed(seed, s.id, attempt));
                    if (faults.eval_failure > 0.0 && fault.uniform() < faults.eval_failure) {
                        ++injected;
                        s.eval_error = "injected evaluation failure";
                        continue;
                    }
                    st.stage(s, evaluate(evaluator, *s.genome));
                    if (faults.ack_loss > 0.0 && fault.uniform() < faults.ack_loss) {
                        ++lost;
                        continue;
                    }
                    delivered = true;
                    break;
                }
            }
            catch (const std::exception& e) {
                s.eval_error = e.what();
            }
            s.eval_attempts = used;
            st.finish([&](PipelineStats& p) {
                ++p.eval_tasks;
                p.eval_attempts += static_cast<std::size_t>(used);
                p.injected_failures += injected;
                p.lost_acks += lost;
                if (s.report)
                    ++p.eval_completed;
                else
                    ++p.eval_abandoned;
            });
            (void)delivered;
        };

        auto gen_task = [&, attempts, seed](Slot& s) {
            bool generated = s.genome.has_value();
            if (!generated) {
                std::vector<const Candidate*> parents;
                for (const Candidate& p : s.parents)
                    parents.push_back(&p);
                for (int attempt = 1; attempt <= attempts && !generated; ++attempt) {
                    ++s.gen_attempts;
                    Rng rng(attempt_seed(seed, s.id, attempt));
                    try {
                        s.genome = propose(s.spec, parents, bounds, rng);
                        generated = true;
                    }
                    catch (const GenerationFailure& e) {
                        s.gen_error = e.what();
                    }
                    catch (const std::exception& e) {
                        // Arity or bounds errors do not improve on retry.
                        s.gen_error = e.what();
                        break;
                    }
                }
                {
                    std::lock_guard lock(st.mutex);
                    ++st.stats.gen_tasks;
                    st.stats.gen_attempts += static_cast<std::size_t>(s.gen_attempts);
                    if (!generated)
                        ++st.stats.gen_failed;
                }
            }
            if (!generated) {
                st.finish([](PipelineStats&) {});
                return;
            }
            try {
                eval_pool.submit([&eval_task, &s] { eval_task(s); });
            }
            catch (const std::exception& e) {
                s.eval_error = e.what();
                st.finish([](PipelineStats& p) { ++p.eval_abandoned; });
            }
        };

        for (Slot& s : slots) {
            try {
                _pools->generate.submit([&gen_task, &s] { gen_task(s); });
            }
            catch (const std::exception& e) {
                s.gen_error = e.what();
                st.finish([](PipelineStats& p) { ++p.gen_failed; });
            }
        }
        {
            std::unique_lock lock(st.mutex);
            st.done_cv.wait(lock, [&] { return st.remaining == 0; });
        }
        (void)gen;

        PipelineStats& t = _stats;
        const PipelineStats& d = st.stats;
        t.gen_tasks += d.gen_tasks;
        t.gen_failed += d.gen_failed;
        t.gen_attempts += d.gen_attempts;
        t.eval_tasks += d.eval_tasks;
        t.eval_completed += d.eval_completed;
        t.eval_abandoned += d.eval_abandoned;
        t.eval_attempts += d.eval_attempts;
        t.injected_failures += d.injected_failures;
        t.lost_acks += d.lost_acks;
        t.duplicate_results += d.duplicate_results;
    }

    namespace {

        struct Tally {
            std::size_t generated = 0, evaluated = 0, correct = 0, failed = 0;
        };

    } // namespace

    void Run::_cold_start()
    {
        std::vector<Candidate> pool = cold_start_generate(_config.cold_start_generators, _config.cold_start_count(), _bounds, cold_start_seed(_config.seed));

        std::vector<int> island_of(pool.size(), 0);
        if (_config.islands > 1 && _config.cold_start_clustering) {
            std::vector<const Genome*> genomes;
            for (const Candidate& c : pool)
                genomes.push_back(&c.genome);
            const auto groups = cold_start_partition(genomes, _config.islands, derive_seed(_config.seed, {fnv1a("partition")}));
            for (std::size_t g = 0; g < groups.size(); ++g)
                for (std::size_t i : groups[g])
                    island_of[i] = static_cast<int>(g);
        }
        else {
            for (std::size_t i = 0; i < pool.size(); ++i)
                island_of[i] = static_cast<int>(i % static_cast<std::size_t>(_config.islands));
        }

        std::vector<Slot> slots(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            pool[i].island_id = island_of[i];
            slots[i].island = island_of[i];
            slots[i].slot = static_cast<int>(i);
            slots[i].id = pool[i].id;
            slots[i].genome = pool[i].genome;
        }
        _process_slots(slots, 0);

        std::vector<Tally> tally(_islands.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            Candidate& c = pool[i];
            Tally& t = tally[static_cast<std::size_t>(c.island_id)];
            _db.insert_candidate(c);
            c.created_seq = _db.get(c.id)->candidate.created_seq;
            _events->append(EventType::candidate_generated, {{"candidate", to_json(c)}, {"generator", c.provenance}, {"guidance", nullptr}});
            ++t.generated;
            if (slots[i].report) {
                _commit_report(c, *slots[i].report);
                ++t.evaluated;
                t.correct += slots[i].report->correct ? 1 : 0;
            }
            else {
                ++t.failed;
                _events->append(EventType::task_failed,
                                {{"candidate_id", c.id.str()}, {"island", c.island_id}, {"generation", 0}, {"stage", "evaluate"}, {"attempts", slots[i].eval_attempts}, {"reason", slots[i].eval_error}});
            }
        }

        std::vector<GenerationSummary> partial;
        for (std::size_t i = 0; i < _islands.size(); ++i)
            partial.push_back({static_cast<int>(i), 0, std::nullopt, std::nullopt, 0.0, tally[i].generated, tally[i].evaluated, tally[i].correct, tally[i].failed});
        _complete_generation(0, partial);
    }

    void Run::_run_generation(std::uint64_t gen)
    {
        const int offspring = _config.offspring_per_island;
        std::vector<Slot> slots;
        slots.reserve(_islands.size() * static_cast<std::size_t>(std::max(offspring, 0)));
        for (IslandState& island : _islands) {
            const SamplingPool pool = sampling_pool(island, _db);
            for (int k = 0; k < offspring; ++k) {
                Slot s;
                s.island = island.id;
                s.slot = k;
                s.id = offspring_id(_config.seed, island.id, gen, k);
                Rng rng(selection_seed(_config.seed, island.id, gen, k));
                if (pool.entries.empty()) {
                    s.spec = GeneratorSpec::reseed_spec();
                }
                else {
                    s.spec = _config.generators[rng.index(_config.generators.size())];
                    const int arity = s.spec.arity();
                    if (arity > 0)
                        for (const CandidateId& pid : select_parents(pool, _params.sampler, arity, rng))
                            s.parents.push_back(_db.get(pid)->candidate);
                }
                if (_params.guidance)
                    s.spec.guidance = _params.guidance;
                slots.push_back(std::move(s));
            }
        }

        _process_slots(slots, gen);

        std::vector<Tally> tally(_islands.size());
        for (Slot& s : slots) {
            Tally& t = tally[static_cast<std::size_t>(s.island)];
            if (!s.genome) {
                ++t.failed;
                _events->append(EventType::task_failed,
                                {{"candidate_id", s.id.str()}, {"island", s.island}, {"generation", gen}, {"stage", "generate"}, {"attempts", s.gen_attempts}, {"reason", s.gen_error}});
                continue;
            }
            Candidate c;
            c.id = s.id;
            c.genome = std::move(*s.genome);
            for (const Candidate& p : s.parents)
                c.parent_ids.push_back(p.id);
            c.island_id = s.island;
            c.generation = gen;
            c.provenance = s.spec.name;
            try {
                if (!_db.insert_candidate(c))
                    throw std::logic_error("duplicate candidate id " + c.id.str());
            }
            catch (const std::exception& e) {
                ++t.failed;
                _events->append(EventType::task_failed,
                                {{"candidate_id", s.id.str()}, {"island", s.island}, {"generation", gen}, {"stage", "insert"}, {"attempts", s.gen_attempts}, {"reason", e.what()}});
                continue;
            }
            c.created_seq = _db.get(c.id)->candidate.created_seq;
            _events->append(EventType::candidate_generated, {{"candidate", to_json(c)}, {"generator", s.spec.name}, {"guidance", s.spec.guidance ? json(*s.spec.guidance) : json(nullptr)}});
            ++t.generated;
            if (s.report) {
                _commit_report(c, *s.report);
                ++t.evaluated;
                t.correct += s.report->correct ? 1 : 0;
            }
            else {
                ++t.failed;
                _events->append(EventType::task_failed,
                                {{"candidate_id", s.id.str()}, {"island", s.island}, {"generation", gen}, {"stage", "evaluate"}, {"attempts", s.eval_attempts}, {"reason", s.eval_error}});
            }
        }

        if (migration_due(gen, _params.migration))
            _migrate(gen);

        std::vector<GenerationSummary> partial;
        for (std::size_t i = 0; i < _islands.size(); ++i)
            partial.push_back({static_cast<int>(i), gen, std::nullopt, std::nullopt, 0.0, tally[i].generated, tally[i].evaluated, tally[i].correct, tally[i].failed});
        _complete_generation(gen, partial);
    }

    void Run::_migrate(std::uint64_t gen)
    {
        std::vector<ElitePool> elites;
        for (const IslandState& island : _islands)
            elites.push_back(_db.elite(island.id));
        const std::vector<MigrationMove> moves = plan_migration(elites, _params.migration.count);

        json pairs = json::array();
        for (std::size_t k = 0; k < moves.size(); ++k) {
            const MigrationMove& m = moves[k];
            const Record src = *_db.get(m.source);
            Candidate c;
            c.id = CandidateId::derive(_config.seed, "migration", gen, static_cast<std::uint64_t>(m.from), k);
            c.genome = src.candidate.genome;
            c.parent_ids = {m.source};
            c.island_id = m.to;
            c.generation = gen;
            c.provenance = "migration";
            _db.insert_candidate(c);
            c.created_seq = _db.get(c.id)->candidate.created_seq;
            _events->append(EventType::candidate_generated, {{"candidate", to_json(c)}, {"generator", "migration"}, {"guidance", nullptr}});
            _commit_report(c, *src.report);
            pairs.push_back({{"source", m.source.str()}, {"copy", c.id.str()}, {"from", m.from}, {"to", m.to}});
        }
        _events->append(EventType::migration, {{"generation", gen}, {"topology", "ring"}, {"count", _params.migration.count}, {"moves", pairs}});
    }

    void Run::_complete_generation(std::uint64_t gen, const std::vector<GenerationSummary>& partial)
    {
        for (std::size_t i = 0; i < _islands.size(); ++i) {
            IslandState& island = _islands[i];
            refresh_island(island, _db, _params.sampler.clusters, _config.population_cap, derive_seed(_config.seed, {fnv1a("cluster"), i, gen}));
            island.generation = gen;

            GenerationSummary s = partial[i];
            s.diversity = island.diversity;
            const ElitePool elite = _db.elite(island.id);
            if (!elite.empty())
                s.best = elite.best().combined;
            if (!island.members.empty()) {
                double sum = 0.0;
                for (const CandidateId& id : island.members)
                    sum += _db.get(id)->report->combined;
                s.mean = sum / static_cast<double>(island.members.size());
            }
            _events->append(EventType::generation_completed, to_json(s));
            _result.summaries.push_back(s);
        }
        _result.best_trace.push_back(_overall_best());
        _result.generations = gen;
        _publish_status(_paused ? RunState::paused : RunState::running);
        if (gen > 0 && gen % _config.snapshot_interval == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot-%06llu.json", static_cast<unsigned long long>(gen));
            _write_snapshot(name, "running");
        }
    }

    std::optional<std::string> Run::_stop_reason(std::uint64_t gen) const
    {
        if (gen > _config.generations)
            return "max_generations";
        if (_stop)
            return "stop_requested";
        if (_config.wall_clock_seconds && std::chrono::duration<double>(std::chrono::steady_clock::now() - _started).count() >= *_config.wall_clock_seconds)
            return "wall_clock";
        if (_config.target_combined && _overall_best() >= *_config.target_combined)
            return "target_reached";
        return std::nullopt;
    }

    bool Run::_boundary(std::uint64_t gen)
    {
        if (auto reason = _stop_reason(gen)) {
            _result.reason = *reason;
            return false;
        }
        std::unique_lock lock(_control);
        for (;;) {
            while (!_pending.empty()) {
                Pending p = std::move(_pending.front());
                _pending.pop_front();
                lock.unlock();
                _apply(p);
                lock.lock();
            }
            if (_paused && !_stop) {
                lock.unlock();
                _publish_status(RunState::paused);
                lock.lock();
                _control_cv.wait(lock, [&] { return !_pending.empty() || _stop.load(); });
                continue;
            }
            break;
        }
        if (_stop) {
            _result.reason = "stop_requested";
            return false;
        }
        _next_generation = gen + 1;
        lock.unlock();
        _publish_status(RunState::running);
        return true;
    }

    void Run::_apply(const Pending& p)
    {
        const Intervention& iv = p.intervention;
        json ev{{"intervention_id", iv.id}, {"kind", to_string(iv.kind)}, {"payload", iv.payload}, {"applies_at_generation", p.applies_at}};
        bool applied = true;
        std::string reason;
        switch (iv.kind) {
        case InterventionKind::pause: _paused = true; break;
        case InterventionKind::resume: _paused = false; break;
        case InterventionKind::param_override:
            try {
                apply_override(_params, iv.payload.at("path").get<std::string>(), iv.payload.at("value").get<double>(), _config.elite_capacity);
            }
            catch (const std::exception& e) {
                applied = false;
                reason = e.what();
            }
            break;
        case InterventionKind::guidance: _params.guidance = iv.payload.at("text").get<std::string>(); break;
        case InterventionKind::seed_candidate: break;
        }
        ev["applied"] = applied;
        ev["reason"] = applied ? json(nullptr) : json(reason);
        ev["params"] = to_json(_params);
        ev["paused"] = _paused;
        _events->append(EventType::intervention_applied, ev);

        if (iv.kind == InterventionKind::seed_candidate) {
            Candidate c;
            c.id = CandidateId::derive(_config.seed, "intervention", fnv1a(iv.id));
            c.genome = genome_from_json(iv.payload.at("genome"));
            c.island_id = field_or<int>(iv.payload, "island", 0);
            c.generation = p.applies_at;
            c.provenance = "seed_candidate";
            if (!_db.insert_candidate(c))
                return;
            c.created_seq = _db.get(c.id)->candidate.created_seq;
            _events->append(EventType::candidate_generated, {{"candidate", to_json(c)}, {"generator", "seed_candidate"}, {"guidance", nullptr}});
            _commit_report(c, evaluate(_config.evaluator, c.genome));
            // Make the seed sampleable now; diversity stays as last reported.
            IslandState& island = _islands[static_cast<std::size_t>(c.island_id)];
            const double diversity = island.diversity;
            refresh_island(island, _db, _params.sampler.clusters, _config.population_cap, derive_seed(_config.seed, {fnv1a("cluster"), static_cast<std::uint64_t>(c.island_id), p.applies_at, fnv1a(iv.id)}));
            island.diversity = diversity;
        }
        _publish_status(_paused ? RunState::paused : RunState::running);
    }

    RunResult Run::_run()
    {
        _started = std::chrono::steady_clock::now();
        _publish_status(RunState::running);
        RunState final_state = RunState::finished;
        try {
            _events->append(EventType::run_started, {{"config", to_json(_config)}, {"bounds", bounds_to_json(_bounds)}});
            _pools = std::make_unique<Pools>(_config.pipeline);
            _cold_start();
            for (std::uint64_t gen = 1; _boundary(gen); ++gen)
                _run_generation(gen);
            if (_result.reason == "stop_requested")
                final_state = RunState::stopped;
        }
        catch (const std::exception& e) {
            final_state = RunState::failed;
            _result.reason = e.what();
        }
        if (_pools) {
            _pools->generate.shutdown();
            _pools->evaluate.shutdown();
        }

        json dropped = json::array();
        {
            std::lock_guard lock(_control);
            _done = true;
            for (const Pending& p : _pending)
                dropped.push_back(p.intervention.id);
            _pending.clear();
        }
        _result.state = final_state;
        _result.stats = _stats;
        _result.best = _db.best();
        json best = nullptr;
        if (_result.best)
            best = {{"id", _result.best->candidate.id.str()}, {"combined", _result.best->report->combined}};
        _events->append(EventType::run_finished,
                        {{"state", to_string(final_state)}, {"reason", _result.reason}, {"generations", _result.generations}, {"best", best}, {"stats", to_json(_stats)}, {"dropped_interventions", dropped}});
        _publish_status(final_state);
        try {
            _write_snapshot("snapshot.json", std::string(to_string(final_state)));
        }
        catch (const std::exception& e) {
            if (final_state != RunState::failed)
                _result.reason += std::string(_result.reason.empty() ? "" : "; ") + "snapshot write failed: " + e.what();
        }
        _events->close();
        return _result;
    }

    RunResult run_pipeline(const RunConfig& config)
    {
        Run run(config);
        return run.execute();
    }

} // namespace fmagent
