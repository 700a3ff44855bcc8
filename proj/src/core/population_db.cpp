#include <fmagent/core/population_db.hpp>

#include <mutex>

namespace fmagent {

    PopulationDB::PopulationDB(std::size_t elite_capacity) : _elite_capacity(elite_capacity)
    {
        if (elite_capacity == 0)
            throw std::invalid_argument("elite capacity must be positive");
    }

    bool PopulationDB::insert_candidate(Candidate c)
    {
        if (auto err = c.genome.validate())
            throw InvalidGenome("candidate " + c.id.str() + " rejected: " + *err);

        std::unique_lock lock(_mutex);
        if (_records.count(c.id))
            return false;
        for (const auto& parent : c.parent_ids)
            if (!_records.count(parent))
                throw UnknownCandidate(parent);

        c.created_seq = _next_seq++;
        const CandidateId id = c.id;
        const int island = c.island_id;
        _records.emplace(id, Record{std::move(c), std::nullopt});
        _order.push_back(id);
        _island_index[island].push_back(id);
        if (!_elites.count(island))
            _elites.emplace(island, ElitePool(_elite_capacity));
        return true;
    }

    void PopulationDB::_apply_report(Record& rec, FitnessReport report)
    {
        if (!report.correct)
            report.combined = kSentinelFitness;
        rec.report = std::move(report);
        ++_evaluated;
        ++_applications;
        if (rec.report->correct)
            _elites.at(rec.candidate.island_id).update(rec.candidate.id, rec.report->combined, rec.candidate.created_seq);
    }

    void PopulationDB::record_fitness(const CandidateId& id, FitnessReport report)
    {
        std::unique_lock lock(_mutex);
        auto it = _records.find(id);
        if (it == _records.end())
            throw UnknownCandidate(id);
        if (it->second.report)
            throw AlreadyEvaluated(id);
        _apply_report(it->second, std::move(report));
    }

    bool PopulationDB::try_record_fitness(const CandidateId& id, FitnessReport report)
    {
        std::unique_lock lock(_mutex);
        auto it = _records.find(id);
        if (it == _records.end())
            throw UnknownCandidate(id);
        if (it->second.report)
            return false;
        _apply_report(it->second, std::move(report));
        return true;
    }

    std::optional<Record> PopulationDB::get(const CandidateId& id) const
    {
        std::shared_lock lock(_mutex);
        auto it = _records.find(id);
        if (it == _records.end())
            return std::nullopt;
        return it->second;
    }

    bool PopulationDB::contains(const CandidateId& id) const
    {
        std::shared_lock lock(_mutex);
        return _records.count(id) > 0;
    }

    std::size_t PopulationDB::size() const
    {
        std::shared_lock lock(_mutex);
        return _records.size();
    }

    std::size_t PopulationDB::evaluated_count() const
    {
        std::shared_lock lock(_mutex);
        return _evaluated;
    }

    std::size_t PopulationDB::fitness_applications() const
    {
        std::shared_lock lock(_mutex);
        return _applications;
    }

    std::vector<CandidateId> PopulationDB::island_members(int island) const
    {
        std::shared_lock lock(_mutex);
        auto it = _island_index.find(island);
        return it == _island_index.end() ? std::vector<CandidateId>{} : it->second;
    }

    std::vector<int> PopulationDB::islands() const
    {
        std::shared_lock lock(_mutex);
        std::vector<int> out;
        for (const auto& [island, _] : _island_index)
            out.push_back(island);
        return out;
    }

    ElitePool PopulationDB::elite(int island) const
    {
        std::shared_lock lock(_mutex);
        auto it = _elites.find(island);
        return it == _elites.end() ? ElitePool(_elite_capacity) : it->second;
    }

    std::vector<Record> PopulationDB::records() const
    {
        std::shared_lock lock(_mutex);
        std::vector<Record> out;
        out.reserve(_order.size());
        for (const auto& id : _order)
            out.push_back(_records.at(id));
        return out;
    }

    std::vector<Record> PopulationDB::island_records(int island) const
    {
        std::shared_lock lock(_mutex);
        std::vector<Record> out;
        auto it = _island_index.find(island);
        if (it == _island_index.end())
            return out;
        out.reserve(it->second.size());
        for (const auto& id : it->second)
            out.push_back(_records.at(id));
        return out;
    }

    std::optional<Record> PopulationDB::best() const
    {
        std::shared_lock lock(_mutex);
        const Record* best = nullptr;
        for (const auto& id : _order) {
            const Record& r = _records.at(id);
            if (!r.report || !r.report->correct)
                continue;
            if (!best || ranks_before(r.report->combined, r.candidate.created_seq, best->report->combined, best->candidate.created_seq))
                best = &r;
        }
        if (!best)
            return std::nullopt;
        return *best;
    }

} // namespace fmagent
