#ifndef FMAGENT_ISLANDS_ISLANDS_HPP
#define FMAGENT_ISLANDS_ISLANDS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <fmagent/core/population_db.hpp>
#include <fmagent/sampling/sampling.hpp>

namespace fmagent {

    /// Ring migration every `interval` generations, `count` elites per island.
    struct MigrationPolicy {
        int interval = 10;
        int count = 2;

        void validate(std::size_t elite_capacity) const;
    };

    /// generation > 0 and generation divisible by the interval.
    bool migration_due(std::uint64_t generation, const MigrationPolicy& policy);

    struct IslandState {
        int id = 0;
        std::uint64_t generation = 0;
        std::vector<CandidateId> members; ///< live population, best first
        ClusterAssignment clusters;
        double diversity = 0.0;
    };

    class TooFewCandidates : public std::invalid_argument {
    public:
        TooFewCandidates() : std::invalid_argument("cold start needs at least one candidate per island") {}
    };

    /// Clusters the pool into `n_islands` groups (island j = cluster j).
    /// Empty clusters are backfilled with the member of the largest cluster
    /// farthest from that cluster's centre. Returns indices into `genomes`.
    std::vector<std::vector<std::size_t>> cold_start_partition(const std::vector<const Genome*>& genomes, int n_islands, std::uint64_t seed);

    struct MigrationMove {
        CandidateId source;
        int from = 0;
        int to = 0;
    };

    /// Island i sends its top `count` elites to island (i + 1) mod n.
    /// `elites[i]` is island i's pool. A single island yields no moves.
    std::vector<MigrationMove> plan_migration(const std::vector<ElitePool>& elites, int count);

    /// Correct evaluated members of an island ranked by (combined desc,
    /// created_seq asc), truncated to `cap`.
    std::vector<CandidateId> live_members(const PopulationDB& db, int island, std::size_t cap);

    /// Recomputes members, clusters, and diversity from the database.
    void refresh_island(IslandState& island, const PopulationDB& db, int clusters, std::size_t cap, std::uint64_t seed);

    /// The sampler's view of an island.
    SamplingPool sampling_pool(const IslandState& island, const PopulationDB& db);

} // namespace fmagent

#endif
