#include <fmagent/islands/islands.hpp>

#include <algorithm>
#include <cmath>

namespace fmagent {

    void MigrationPolicy::validate(std::size_t elite_capacity) const
    {
        if (interval < 1)
            throw std::invalid_argument("migration interval must be positive");
        if (count < 1)
            throw std::invalid_argument("migration count must be positive");
        if (static_cast<std::size_t>(count) > elite_capacity)
            throw std::invalid_argument("migration count exceeds elite capacity");
    }

    bool migration_due(std::uint64_t generation, const MigrationPolicy& policy)
    {
        return generation > 0 && policy.interval > 0 && generation % static_cast<std::uint64_t>(policy.interval) == 0;
    }

    std::vector<std::vector<std::size_t>> cold_start_partition(const std::vector<const Genome*>& genomes, int n_islands, std::uint64_t seed)
    {
        if (n_islands < 1)
            throw std::invalid_argument("cold_start_partition: need at least one island");
        if (genomes.size() < static_cast<std::size_t>(n_islands))
            throw TooFewCandidates();

        std::vector<CandidateId> ids(genomes.size());
        const ClusterAssignment ca = cluster_genomes(ids, genomes, n_islands, seed, true);
        std::vector<std::vector<std::size_t>> groups = ca.groups();
        groups.resize(static_cast<std::size_t>(n_islands));

        auto distance_to_centre = [&](std::size_t cluster, std::size_t i) {
            if (!ca.centroids.empty())
                return (normalized_coordinates(*genomes[i]) - ca.centroids[cluster]).norm();
            return genome_distance(*genomes[i], *genomes[ca.medoids[cluster]]);
        };

        for (std::size_t empty = 0; empty < groups.size(); ++empty) {
            if (!groups[empty].empty())
                continue;
            std::size_t largest = 0;
            for (std::size_t c = 1; c < groups.size(); ++c)
                if (groups[c].size() > groups[largest].size())
                    largest = c;
            auto& donor = groups[largest];
            std::size_t pick = 0;
            double far = -1.0;
            for (std::size_t k = 0; k < donor.size(); ++k) {
                const double d = largest < static_cast<std::size_t>(ca.clusters()) ? distance_to_centre(largest, donor[k]) : 0.0;
                if (d > far) {
                    far = d;
                    pick = k;
                }
            }
            groups[empty].push_back(donor[pick]);
            donor.erase(donor.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        return groups;
    }

    std::vector<MigrationMove> plan_migration(const std::vector<ElitePool>& elites, int count)
    {
        std::vector<MigrationMove> moves;
        const int n = static_cast<int>(elites.size());
        if (n < 2 || count < 1)
            return moves;
        for (int i = 0; i < n; ++i) {
            const auto& entries = elites[i].entries();
            const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(count), entries.size());
            for (std::size_t k = 0; k < m; ++k)
                moves.push_back({entries[k].id, i, (i + 1) % n});
        }
        return moves;
    }

    std::vector<CandidateId> live_members(const PopulationDB& db, int island, std::size_t cap)
    {
        std::vector<Record> recs = db.island_records(island);
        std::erase_if(recs, [](const Record& r) { return !r.report || !r.report->correct; });
        std::stable_sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) {
            return ranks_before(a.report->combined, a.candidate.created_seq, b.report->combined, b.candidate.created_seq);
        });
        if (recs.size() > cap)
            recs.resize(cap);
        std::vector<CandidateId> ids;
        ids.reserve(recs.size());
        for (const Record& r : recs)
            ids.push_back(r.candidate.id);
        return ids;
    }

    void refresh_island(IslandState& island, const PopulationDB& db, int clusters, std::size_t cap, std::uint64_t seed)
    {
        island.members = live_members(db, island.id, cap);
        std::vector<Record> recs;
        std::vector<const Genome*> genomes;
        recs.reserve(island.members.size());
        for (const CandidateId& id : island.members)
            recs.push_back(*db.get(id));
        for (const Record& r : recs)
            genomes.push_back(&r.candidate.genome);
        island.clusters = cluster_genomes(island.members, genomes, clusters, seed);
        island.diversity = genomes.empty() ? 0.0 : compute_diversity(genomes);
    }

    SamplingPool sampling_pool(const IslandState& island, const PopulationDB& db)
    {
        SamplingPool pool;
        pool.diversity = island.diversity;
        for (std::size_t i = 0; i < island.members.size(); ++i) {
            const auto rec = db.get(island.members[i]);
            pool.entries.push_back({rec->candidate.id, rec->report->combined, rec->candidate.created_seq, i < island.clusters.labels.size() ? island.clusters.labels[i] : 0});
        }
        const ElitePool elite_pool = db.elite(island.id);
        for (const EliteEntry& e : elite_pool.entries())
            pool.elites.push_back(e.id);
        return pool;
    }

} // namespace fmagent
