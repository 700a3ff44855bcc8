#include <fmagent/core/candidate.hpp>
#include <fmagent/core/elite_pool.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmagent {

    ElitePool::ElitePool(std::size_t capacity) : _capacity(capacity)
    {
        if (capacity == 0)
            throw std::invalid_argument("elite pool capacity must be positive");
        _entries.reserve(capacity + 1);
    }

    bool ElitePool::contains(const CandidateId& id) const
    {
        return std::any_of(_entries.begin(), _entries.end(), [&](const EliteEntry& e) { return e.id == id; });
    }

    bool ElitePool::update(const CandidateId& id, double combined, std::uint64_t created_seq)
    {
        if (combined == kSentinelFitness || std::isnan(combined) || contains(id))
            return false;
        if (full()) {
            const EliteEntry& worst = _entries.back();
            if (!ranks_before(combined, created_seq, worst.combined, worst.created_seq))
                return false;
        }
        auto pos = std::find_if(_entries.begin(), _entries.end(), [&](const EliteEntry& e) {
            return ranks_before(combined, created_seq, e.combined, e.created_seq);
        });
        _entries.insert(pos, EliteEntry{id, combined, created_seq});
        if (_entries.size() > _capacity)
            _entries.pop_back();
        return true;
    }

} // namespace fmagent
