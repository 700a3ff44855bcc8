#include <fmagent/service/replay.hpp>

#include <fmagent/islands/islands.hpp>
#include <fmagent/pipeline/run_config.hpp>
#include <fmagent/pipeline/snapshot.hpp>

#include <algorithm>
#include <map>

namespace fmagent {

    namespace {

        void check_elites(const PopulationDB& db, std::vector<std::string>& problems)
        {
            for (int island : db.islands()) {
                std::vector<Record> correct = db.island_records(island);
                std::erase_if(correct, [](const Record& r) { return !r.report || !r.report->correct; });
                std::sort(correct.begin(), correct.end(), [](const Record& a, const Record& b) {
                    return ranks_before(a.report->combined, a.candidate.created_seq, b.report->combined, b.candidate.created_seq);
                });
                const ElitePool pool = db.elite(island);
                const auto& entries = pool.entries();
                const std::size_t expect = std::min(correct.size(), db.elite_capacity());
                bool ok = entries.size() == expect;
                for (std::size_t i = 0; ok && i < expect; ++i)
                    ok = entries[i].id == correct[i].candidate.id;
                if (!ok)
                    problems.push_back("elite pool of island " + std::to_string(island) + " is not the top of its correct candidates");
            }
            if (db.fitness_applications() != db.evaluated_count())
                problems.push_back("fitness applied " + std::to_string(db.fitness_applications()) + " times for " + std::to_string(db.evaluated_count()) + " candidates");
        }

    } // namespace

    std::vector<Event> prefix(const std::vector<Event>& events, std::uint64_t last_seq)
    {
        std::vector<Event> out;
        for (const Event& e : events)
            if (e.seq <= last_seq)
                out.push_back(e);
        return out;
    }

    ReplayResult replay_events(const std::vector<Event>& events)
    {
        check_gapless(events);
        if (events.empty() || events.front().type != EventType::run_started)
            throw CorruptLog("event log does not begin with run_started");

        const Event& first = events.front();
        const json& config = require(first.payload, "config");
        const int n_islands = field<int>(config, "islands");
        const auto cap = field<std::size_t>(config, "population_cap");
        const auto elite_capacity = field<std::size_t>(config, "elite_capacity");
        RuntimeParams params = runtime_params_from_json(config);
        bool paused = false;
        std::string state = "running";

        ReplayResult out;
        out.db = std::make_unique<PopulationDB>(elite_capacity);
        PopulationDB& db = *out.db;
        std::vector<IslandSummary> islands;
        for (int i = 0; i < n_islands; ++i)
            islands.push_back({i, 0, 0.0});

        for (const Event& e : events) {
            if (e.run_id != first.run_id)
                throw CorruptLog("event " + std::to_string(e.seq) + " belongs to run " + e.run_id);
            const json& p = e.payload;
            try {
                switch (e.type) {
                case EventType::run_started: break;
                case EventType::candidate_generated: {
                    const Candidate c = candidate_from_json(require(p, "candidate"));
                    for (const CandidateId& parent : c.parent_ids)
                        if (!db.contains(parent))
                            throw CorruptLog("candidate " + c.id.str() + " names unknown parent " + parent.str());
                    if (!db.insert_candidate(c))
                        throw CorruptLog("candidate " + c.id.str() + " generated twice");
                    if (db.get(c.id)->candidate.created_seq != c.created_seq)
                        throw CorruptLog("candidate " + c.id.str() + " has created_seq " + std::to_string(c.created_seq) + " but replays as " + std::to_string(db.get(c.id)->candidate.created_seq));
                    break;
                }
                case EventType::candidate_evaluated:
                    db.record_fitness(id_from_json(require(p, "candidate_id")), report_from_json(require(p, "report")));
                    break;
                case EventType::generation_completed: {
                    const int island = field<int>(p, "island");
                    if (island < 0 || island >= n_islands)
                        throw CorruptLog("generation_completed for unknown island " + std::to_string(island));
                    islands[static_cast<std::size_t>(island)].generation = field<std::uint64_t>(p, "generation");
                    islands[static_cast<std::size_t>(island)].diversity = field<double>(p, "diversity");
                    break;
                }
                case EventType::intervention_applied:
                    params = runtime_params_from_json(require(p, "params"));
                    paused = field_or<bool>(p, "paused", false);
                    break;
                case EventType::migration:
                    for (const json& m : field<json>(p, "moves"))
                        for (const char* key : {"source", "copy"})
                            if (!db.contains(id_from_json(require(m, key))))
                                throw CorruptLog(std::string("migration names unknown ") + key + " candidate");
                    break;
                case EventType::task_failed: break;
                case EventType::run_finished: state = field<std::string>(p, "state"); break;
                }
            }
            catch (const CorruptLog&) {
                throw;
            }
            catch (const std::exception& ex) {
                throw CorruptLog("event " + std::to_string(e.seq) + " (" + std::string(to_string(e.type)) + "): " + ex.what());
            }
        }
        if (state == "running" && paused)
            state = "paused";

        out.last_seq = events.back().seq;
        out.snapshot = build_snapshot(first.run_id, out.last_seq, state, params, db, islands, cap);
        out.best = db.best();
        check_elites(db, out.problems);
        return out;
    }

    ReplayResult replay_log(const std::filesystem::path& path) { return replay_events(read_event_log(path)); }

} // namespace fmagent
