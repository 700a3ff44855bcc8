#ifndef FMAGENT_TESTS_SUPPORT_HPP
#define FMAGENT_TESTS_SUPPORT_HPP

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fmagent/common/rng.hpp>
#include <fmagent/core/candidate.hpp>

namespace fmagent::testing {

    /// Fresh directory under the system temp dir, removed on destruction.
    class TempDir {
    public:
        explicit TempDir(const std::string& tag)
        {
            static std::atomic<int> counter{0};
            _path = std::filesystem::temp_directory_path() / ("fmagent-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
            std::filesystem::remove_all(_path);
            std::filesystem::create_directories(_path);
        }
        ~TempDir()
        {
            std::error_code ec;
            std::filesystem::remove_all(_path, ec);
        }
        const std::filesystem::path& path() const { return _path; }

    private:
        std::filesystem::path _path;
    };

    inline std::string slurp(const std::filesystem::path& p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    inline Candidate real_candidate(const CandidateId& id, Eigen::VectorXd values, const Bounds& bounds, int island = 0)
    {
        Candidate c;
        c.id = id;
        c.genome = Genome::real(std::move(values), bounds);
        c.island_id = island;
        c.provenance = "test";
        return c;
    }

    inline FitnessReport ok_report(double effectiveness) { return FitnessReport::success(effectiveness, std::nullopt, {}, 0.0); }

} // namespace fmagent::testing

#endif
