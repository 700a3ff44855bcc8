#ifndef FMAGENT_CORE_ELITE_POOL_HPP
#define FMAGENT_CORE_ELITE_POOL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <fmagent/common/ids.hpp>

namespace fmagent {

    struct EliteEntry {
        CandidateId id;
        double combined = 0.0;
        std::uint64_t created_seq = 0;
    };

    /// True when `a` ranks ahead of `b`: higher combined fitness, then older.
    inline bool ranks_before(double a_combined, std::uint64_t a_seq, double b_combined, std::uint64_t b_seq)
    {
        if (a_combined != b_combined)
            return a_combined > b_combined;
        return a_seq < b_seq;
    }

    /// Fixed-capacity archive of the best candidates of one island, kept
    /// sorted by (combined desc, created_seq asc).
    class ElitePool {
    public:
        explicit ElitePool(std::size_t capacity = 10);

        /// Offers a candidate; returns whether the pool changed.
        bool update(const CandidateId& id, double combined, std::uint64_t created_seq);

        std::size_t capacity() const { return _capacity; }
        std::size_t size() const { return _entries.size(); }
        bool empty() const { return _entries.empty(); }
        bool full() const { return _entries.size() >= _capacity; }
        bool contains(const CandidateId& id) const;

        const std::vector<EliteEntry>& entries() const { return _entries; }
        const EliteEntry& best() const { return _entries.front(); }

    private:
        std::size_t _capacity;
        std::vector<EliteEntry> _entries;
    };

} // namespace fmagent

#endif
