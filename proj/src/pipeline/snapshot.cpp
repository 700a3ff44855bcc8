#include <fmagent/pipeline/snapshot.hpp>

#include <fmagent/islands/islands.hpp>

#include <fstream>
#include <sstream>

namespace fmagent {

    json build_snapshot(const std::string& run_id, std::uint64_t last_seq, const std::string& state, const RuntimeParams& params, const PopulationDB& db,
                        const std::vector<IslandSummary>& islands, std::size_t population_cap)
    {
        json records = json::array();
        for (const Record& r : db.records())
            records.push_back({{"candidate", to_json(r.candidate)}, {"report", r.report ? to_json(*r.report) : json(nullptr)}});

        json isl = json::array();
        for (const IslandSummary& s : islands) {
            json members = json::array();
            for (const CandidateId& id : live_members(db, s.id, population_cap))
                members.push_back(id.str());
            json elite = json::array();
            const ElitePool elite_pool = db.elite(s.id);
            for (const EliteEntry& e : elite_pool.entries())
                elite.push_back(e.id.str());
            isl.push_back({{"id", s.id}, {"generation", s.generation}, {"members", members}, {"elite", elite}, {"diversity", s.diversity}});
        }
        return {{"run_id", run_id}, {"last_seq", last_seq}, {"state", state}, {"params", to_json(params)}, {"records", records}, {"islands", isl}};
    }

    std::string snapshot_text(const json& snapshot) { return snapshot.dump(1) + "\n"; }

    void write_snapshot(const std::filesystem::path& path, const json& snapshot)
    {
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
        const std::filesystem::path tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write snapshot " + tmp.string());
            out << snapshot_text(snapshot);
        }
        std::filesystem::rename(tmp, path);
    }

    json read_snapshot(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot read snapshot " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return json::parse(buf.str());
    }

} // namespace fmagent
