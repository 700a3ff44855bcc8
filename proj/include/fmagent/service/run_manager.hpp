#ifndef FMAGENT_SERVICE_RUN_MANAGER_HPP
#define FMAGENT_SERVICE_RUN_MANAGER_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <fmagent/pipeline/engine.hpp>

namespace fmagent {

    /// Owns the live runs of a service process. Each run writes to
    /// <data_dir>/runs/<run_id>/.
    class RunManager {
    public:
        explicit RunManager(std::filesystem::path data_dir);
        ~RunManager();

        /// Starts a run on its own thread. Throws SchemaError if the run id
        /// is already taken.
        std::shared_ptr<Run> create(RunConfig config);

        std::shared_ptr<Run> find(const std::string& run_id) const;
        std::vector<std::string> run_ids() const;

        /// Requests every run to stop and joins them.
        void stop_all();

        const std::filesystem::path& data_dir() const { return _data_dir; }

    private:
        std::filesystem::path _data_dir;
        mutable std::mutex _mutex;
        std::map<std::string, std::shared_ptr<Run>> _runs;
    };

} // namespace fmagent

#endif
