#ifndef FMAGENT_CORE_POPULATION_DB_HPP
#define FMAGENT_CORE_POPULATION_DB_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <fmagent/core/candidate.hpp>
#include <fmagent/core/elite_pool.hpp>

namespace fmagent {

    class UnknownCandidate : public std::out_of_range {
    public:
        explicit UnknownCandidate(const CandidateId& id) : std::out_of_range("unknown candidate " + id.str()) {}
    };

    class AlreadyEvaluated : public std::logic_error {
    public:
        explicit AlreadyEvaluated(const CandidateId& id) : std::logic_error("candidate " + id.str() + " already has a fitness record") {}
    };

    struct Record {
        Candidate candidate;
        std::optional<FitnessReport> report; ///< empty while pending
    };

    /// Append-only store of every candidate of a run, indexed by island, with
    /// one elite pool per island. All operations are linearizable.
    class PopulationDB {
    public:
        explicit PopulationDB(std::size_t elite_capacity = 10);

        /// Inserts `c` and assigns its created_seq. Returns false (and changes
        /// nothing) if the id is already present. Throws InvalidGenome.
        bool insert_candidate(Candidate c);

        /// Stores the report of a pending candidate and offers it to the
        /// candidate's island elite pool. Throws UnknownCandidate or
        /// AlreadyEvaluated.
        void record_fitness(const CandidateId& id, FitnessReport report);

        /// Idempotent variant for at-least-once delivery: returns false when a
        /// report is already stored. Still throws UnknownCandidate.
        bool try_record_fitness(const CandidateId& id, FitnessReport report);

        std::optional<Record> get(const CandidateId& id) const;
        bool contains(const CandidateId& id) const;
        std::size_t size() const;
        std::size_t evaluated_count() const;

        /// Number of report writes ever applied; equals evaluated_count() unless
        /// a dedup bug slipped through.
        std::size_t fitness_applications() const;

        std::vector<CandidateId> island_members(int island) const;
        std::vector<int> islands() const;
        ElitePool elite(int island) const;
        std::size_t elite_capacity() const { return _elite_capacity; }

        /// All records ordered by created_seq.
        std::vector<Record> records() const;
        std::vector<Record> island_records(int island) const;

        /// Best correct candidate overall by (combined desc, created_seq asc).
        std::optional<Record> best() const;

    private:
        void _apply_report(Record& rec, FitnessReport report);

        mutable std::shared_mutex _mutex;
        std::size_t _elite_capacity;
        std::unordered_map<CandidateId, Record> _records;
        std::vector<CandidateId> _order;
        std::map<int, std::vector<CandidateId>> _island_index;
        std::map<int, ElitePool> _elites;
        std::uint64_t _next_seq = 1;
        std::size_t _evaluated = 0;
        std::size_t _applications = 0;
    };

} // namespace fmagent

#endif
