#ifndef FMAGENT_SERVICE_REPLAY_HPP
#define FMAGENT_SERVICE_REPLAY_HPP

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <fmagent/core/population_db.hpp>
#include <fmagent/pipeline/events.hpp>

namespace fmagent {

    struct ReplayResult {
        json snapshot;
        std::unique_ptr<PopulationDB> db;
        std::uint64_t last_seq = 0;
        std::optional<Record> best;
        std::vector<std::string> problems; ///< invariant violations found while folding
    };

    /// Folds an event sequence into the snapshot the run would have written
    /// after its last event. Throws CorruptLog on a seq gap, an unknown
    /// candidate, a double fitness record, or a created_seq mismatch.
    ReplayResult replay_events(const std::vector<Event>& events);

    ReplayResult replay_log(const std::filesystem::path& path);

    /// Events with seq <= last_seq.
    std::vector<Event> prefix(const std::vector<Event>& events, std::uint64_t last_seq);

} // namespace fmagent

#endif
