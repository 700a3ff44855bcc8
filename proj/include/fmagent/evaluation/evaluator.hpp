#ifndef FMAGENT_EVALUATION_EVALUATOR_HPP
#define FMAGENT_EVALUATION_EVALUATOR_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <fmagent/core/candidate.hpp>
#include <fmagent/core/serialize.hpp>

namespace fmagent {

    enum class Workload { packing, pointset, hermite, sphere, rastrigin, custom };

    std::string_view to_string(Workload w);
    Workload parse_workload(std::string_view text);

    /// Raw outcome of a workload on one genome, before weighting.
    struct WorkloadScore {
        bool correct = false;
        double effectiveness = 0.0;
        std::optional<std::string> failure;
    };

    using WorkloadFn = std::function<WorkloadScore(const Genome&)>;

    /// Judge hook: a deterministic hash-based mock, an HTTP endpoint
    /// (POST {"genome", "effectiveness"} -> {"score"}), or a callable.
    struct JudgeHook {
        enum class Kind { mock, http, custom } kind = Kind::mock;
        std::string endpoint;
        double timeout_seconds = 30.0;
        std::function<double(const Genome&, double)> fn;
    };

    struct EvaluatorSpec {
        Workload workload = Workload::sphere;
        int dimension = 10; ///< sphere and rastrigin only
        double timeout_seconds = 120.0;
        FitnessWeights weights;
        std::optional<JudgeHook> judge;
        WorkloadFn custom; ///< required for Workload::custom
        std::optional<Bounds> custom_bounds;

        void validate() const;
    };

    json to_json(const EvaluatorSpec& s);
    EvaluatorSpec evaluator_spec_from_json(const json& j);

    /// Search domain of a workload:
    ///   sphere, rastrigin  dimension values in [-5.12, 5.12]
    ///   packing            26 (x, y) centers in [0.001, 0.999]
    ///   pointset           16 (x, y) points in [-3, 3]
    ///   hermite            (c0, c1, c2) in [-5, 5] x [-1, 1] x [-0.1, 0.1]
    Bounds workload_bounds(const EvaluatorSpec& spec);

    /// Scores a genome without timeout or weighting. Effectiveness is the
    /// workload value with higher better: packing radii sum; negated ratio
    /// squared; negated uncertainty objective; negated sphere/rastrigin.
    WorkloadScore score_workload(const EvaluatorSpec& spec, const Genome& genome);

    struct JudgeResult {
        double score = 0.0;
        std::optional<std::string> warning;
    };

    /// Score clamped to [0, 1]; any failure yields 0 and a warning.
    JudgeResult judge_score(const JudgeHook& hook, const Genome& genome, double effectiveness);

    /// Total: never throws. Invalid genomes, workload exceptions and
    /// timeouts produce incorrect reports carrying a failure reason.
    FitnessReport evaluate(const EvaluatorSpec& spec, const Genome& genome);

} // namespace fmagent

#endif
