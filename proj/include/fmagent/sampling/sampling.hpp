#ifndef FMAGENT_SAMPLING_SAMPLING_HPP
#define FMAGENT_SAMPLING_SAMPLING_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmagent/common/ids.hpp>
#include <fmagent/common/rng.hpp>
#include <fmagent/core/genome.hpp>

namespace fmagent {

    /// Real-vector values rescaled to [0, 1] per dimension (0 where the
    /// bound range is empty).
    Eigen::VectorXd normalized_coordinates(const Genome& g);

    /// Normalized distance in [0, 1]. Real vectors: Euclidean distance of the
    /// bound-normalized coordinates divided by sqrt(dim). Text: one minus the
    /// Jaccard similarity of whitespace-token multisets.
    double genome_distance(const Genome& a, const Genome& b);

    /// Mean pairwise genome_distance; 0 for a singleton. Throws on empty input.
    double compute_diversity(const std::vector<const Genome*>& population);

    struct ClusterAssignment {
        std::vector<CandidateId> ids;
        std::vector<int> labels;                    ///< parallel to ids, in [0, clusters())
        std::vector<Eigen::VectorXd> centroids;     ///< normalized coordinates (real genomes)
        std::vector<std::size_t> medoids;           ///< indices into ids (text genomes)

        int clusters() const { return static_cast<int>(std::max(centroids.size(), medoids.size())); }
        std::vector<std::vector<std::size_t>> groups() const;
        int cluster_of(const CandidateId& id) const; ///< -1 if absent
    };

    /// K-means on normalized coordinates (real genomes) or K-medoids under
    /// genome_distance (text). Farthest-point seeding from a seeded first
    /// center, at most 50 refinement rounds, K clamped to the population
    /// size. With `keep_empty` false, empty clusters are dropped and labels
    /// compacted.
    ClusterAssignment cluster_genomes(const std::vector<CandidateId>& ids, const std::vector<const Genome*>& genomes, int k, std::uint64_t seed, bool keep_empty = false);

    enum class SamplingStrategy { adaptive, random, top_k };

    std::string_view to_string(SamplingStrategy s);
    SamplingStrategy parse_strategy(std::string_view text);

    struct SamplerConfig {
        SamplingStrategy strategy = SamplingStrategy::adaptive;
        int k = 3;
        double tau_min = 0.05;
        double tau_max = 0.5;
        double epsilon_max = 0.5;
        double p_elite = 0.2;
        int clusters = 5;

        /// Throws std::invalid_argument on a broken invariant.
        void validate() const;
    };

    /// What the sampler sees of an island: correct evaluated candidates only.
    struct SamplingPool {
        struct Entry {
            CandidateId id;
            double combined = 0.0;
            std::uint64_t created_seq = 0;
            int cluster = 0;
        };
        std::vector<Entry> entries;
        std::vector<CandidateId> elites; ///< subset of entry ids
        double diversity = 0.0;
    };

    class NoEligibleParent : public std::runtime_error {
    public:
        NoEligibleParent() : std::runtime_error("island has no evaluated correct candidate") {}
    };

    /// tau = tau_min + (tau_max - tau_min) * D
    double sampling_temperature(const SamplerConfig& config, double diversity);

    /// Softmax weights of min-max normalized values at temperature tau:
    /// exp((u - 1) / tau). Equal values give uniform weights; tau <= 0 gives
    /// the uniform distribution over the maxima.
    std::vector<double> normalized_softmax(const std::vector<double>& values, double tau);

    /// Marginal probability that one parent draw returns each entry.
    std::vector<double> selection_probabilities(const SamplingPool& pool, const SamplerConfig& config);

    /// Draws `n_parents` (1 or 2) ids independently per the configured
    /// strategy. Throws NoEligibleParent on an empty pool.
    std::vector<CandidateId> select_parents(const SamplingPool& pool, const SamplerConfig& config, int n_parents, Rng& rng);

} // namespace fmagent

#endif
