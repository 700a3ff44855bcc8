#ifndef FMAGENT_PIPELINE_SNAPSHOT_HPP
#define FMAGENT_PIPELINE_SNAPSHOT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <fmagent/core/population_db.hpp>
#include <fmagent/core/serialize.hpp>
#include <fmagent/pipeline/run_config.hpp>

namespace fmagent {

    /// Per-island values a snapshot takes from the run rather than the DB.
    struct IslandSummary {
        int id = 0;
        std::uint64_t generation = 0;
        double diversity = 0.0;
    };

    /// Full state document:
    ///   {"run_id", "last_seq", "state", "params",
    ///    "records": [{"candidate", "report"}] by created_seq,
    ///    "islands": [{"id", "generation", "members", "elite", "diversity"}]}
    /// Members are the live population recomputed from the DB.
    json build_snapshot(const std::string& run_id, std::uint64_t last_seq, const std::string& state, const RuntimeParams& params, const PopulationDB& db,
                        const std::vector<IslandSummary>& islands, std::size_t population_cap);

    /// Canonical text form (stable key order, exact doubles).
    std::string snapshot_text(const json& snapshot);

    void write_snapshot(const std::filesystem::path& path, const json& snapshot);
    json read_snapshot(const std::filesystem::path& path);

} // namespace fmagent

#endif
