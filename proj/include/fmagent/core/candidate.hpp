#ifndef FMAGENT_CORE_CANDIDATE_HPP
#define FMAGENT_CORE_CANDIDATE_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <fmagent/common/ids.hpp>
#include <fmagent/core/genome.hpp>

namespace fmagent {

    inline constexpr int kUnassignedIsland = -1;

    struct Candidate {
        CandidateId id;
        Genome genome;
        std::vector<CandidateId> parent_ids;
        int island_id = kUnassignedIsland;
        std::uint64_t generation = 0;
        std::string provenance;
        std::uint64_t created_seq = 0; ///< assigned by PopulationDB on insert
    };

    /// Ordering key for fitness ties: the most negative finite double.
    inline constexpr double kSentinelFitness = std::numeric_limits<double>::lowest();

    struct FitnessWeights {
        double effectiveness = 1.0;
        double judge = 0.0;
    };

    struct FitnessReport {
        bool correct = false;
        double effectiveness = std::numeric_limits<double>::quiet_NaN();
        std::optional<double> judge_score;
        double combined = kSentinelFitness;
        double eval_seconds = 0.0;
        std::optional<std::string> failure;
        std::optional<std::string> warning;

        static FitnessReport success(double effectiveness, std::optional<double> judge, const FitnessWeights& w, double seconds)
        {
            FitnessReport r;
            r.correct = true;
            r.effectiveness = effectiveness;
            r.judge_score = judge;
            r.combined = w.effectiveness * effectiveness + w.judge * judge.value_or(0.0);
            r.eval_seconds = seconds;
            return r;
        }

        static FitnessReport failed(std::string reason, double seconds = 0.0)
        {
            FitnessReport r;
            r.failure = std::move(reason);
            r.eval_seconds = seconds;
            return r;
        }
    };

} // namespace fmagent

#endif
