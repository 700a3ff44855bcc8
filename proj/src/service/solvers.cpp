#include <fmagent/service/solvers.hpp>

#include <fmagent/workloads/hermite.hpp>
#include <fmagent/workloads/packing.hpp>
#include <fmagent/workloads/pointset.hpp>

#include <chrono>
#include <cmath>

namespace fmagent {

    namespace {

        template <typename Derived>
        json rows(const Eigen::MatrixBase<Derived>& m)
        {
            json out = json::array();
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                out.push_back({m(i, 0), m(i, 1)});
            return out;
        }

    } // namespace

    json solve_document(const std::string& problem, std::uint64_t seed)
    {
        const auto t0 = std::chrono::steady_clock::now();
        json doc{{"problem", problem}, {"seed", seed}};

        if (problem == "packing") {
            const auto sol = workloads::solve_packing(static_cast<std::uint32_t>(seed), workloads::kDefaultPackingRestarts);
            const auto check = workloads::validate_packing(sol.centers, sol.radii, 1e-9);
            doc["solution"] = {{"centers", rows(sol.centers)}, {"radii", std::vector<double>(sol.radii.begin(), sol.radii.end())}, {"jitter_seed", sol.seed}};
            doc["score"] = sol.sum_radii;
            doc["valid"] = check.valid;
        }
        else if (problem == "points") {
            workloads::RatioRefineOptions refine;
            refine.seed = seed;
            const auto sol = workloads::multi_start_ratio_solve({}, refine);
            json starts = json::array();
            for (const auto& s : sol.starts)
                starts.push_back({{"name", s.name}, {"success", s.success}, {"ratio_sq", s.ratio_sq}, {"kkt_residual", s.kkt_residual}, {"iterations", s.iterations}});
            doc["solution"] = {{"points", rows(sol.points)}, {"start", sol.start}, {"starts", starts}, {"improving_rounds", sol.improving_rounds}};
            doc["score"] = sol.ratio_sq;
            doc["valid"] = std::isfinite(sol.ratio_sq);
        }
        else if (problem == "hermite") {
            const auto res = workloads::de_search(seed);
            doc["solution"] = {{"c0", res.coeffs.c0}, {"c1", res.coeffs.c1}, {"c2", res.coeffs.c2}, {"c3", res.coeffs.c3()}, {"iterations", res.de.iterations}, {"evaluations", res.de.evaluations}};
            doc["score"] = res.objective;
            doc["valid"] = res.objective < workloads::kHermitePenalty;
        }
        else {
            throw std::invalid_argument("unknown problem '" + problem + "' (expected packing, points or hermite)");
        }
        doc["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return doc;
    }

} // namespace fmagent
