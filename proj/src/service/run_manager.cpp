#include <fmagent/service/run_manager.hpp>

#include <random>

namespace fmagent {

    RunManager::RunManager(std::filesystem::path data_dir) : _data_dir(std::move(data_dir)) { std::filesystem::create_directories(_data_dir / "runs"); }

    RunManager::~RunManager() { stop_all(); }

    std::shared_ptr<Run> RunManager::create(RunConfig config)
    {
        std::lock_guard lock(_mutex);
        if (config.run_id.empty()) {
            std::random_device rd;
            Rng rng((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
            do
                config.run_id = CandidateId::random(rng).str().substr(0, 16);
            while (_runs.contains(config.run_id));
        }
        if (_runs.contains(config.run_id))
            throw SchemaError("run id '" + config.run_id + "' already exists");
        const std::string id = config.run_id;
        auto run = std::make_shared<Run>(std::move(config), _data_dir / "runs" / id);
        _runs.emplace(id, run);
        run->start();
        return run;
    }

    std::shared_ptr<Run> RunManager::find(const std::string& run_id) const
    {
        std::lock_guard lock(_mutex);
        auto it = _runs.find(run_id);
        return it == _runs.end() ? nullptr : it->second;
    }

    std::vector<std::string> RunManager::run_ids() const
    {
        std::lock_guard lock(_mutex);
        std::vector<std::string> out;
        for (const auto& [id, run] : _runs)
            out.push_back(id);
        return out;
    }

    void RunManager::stop_all()
    {
        std::map<std::string, std::shared_ptr<Run>> runs;
        {
            std::lock_guard lock(_mutex);
            runs = _runs;
        }
        for (auto& [id, run] : runs)
            run->request_stop();
        for (auto& [id, run] : runs)
            run->wait();
    }

} // namespace fmagent
