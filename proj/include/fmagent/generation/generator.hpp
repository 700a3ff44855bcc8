#ifndef FMAGENT_GENERATION_GENERATOR_HPP
#define FMAGENT_GENERATION_GENERATOR_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fmagent/common/rng.hpp>
#include <fmagent/core/candidate.hpp>
#include <fmagent/core/serialize.hpp>

namespace fmagent {

    enum class GeneratorKind { gaussian_mutation, blend_crossover, reseed, mock_llm, external };

    std::string_view to_string(GeneratorKind k);
    GeneratorKind parse_generator_kind(std::string_view text);

    using ParamValue = std::variant<double, std::string>;

    /// A configured variation operator.
    ///
    /// Recognized params: sigma_frac (gaussian_mutation, mock_llm; default
    /// 0.05), point (gaussian_mutation; nonzero mutates a single coordinate),
    /// alpha (blend_crossover; default 0.5), endpoint, model, timeout_seconds
    /// (default 30), max_retries (external).
    struct GeneratorSpec {
        std::string name;
        GeneratorKind kind = GeneratorKind::reseed;
        std::map<std::string, ParamValue> params;
        std::optional<std::string> guidance;

        double number(const std::string& key, double fallback) const;
        std::string text(const std::string& key, const std::string& fallback = {}) const;

        /// Parent count the kind consumes (0, 1 or 2).
        int arity() const;

        /// Throws std::invalid_argument on missing or out-of-range params.
        void validate() const;

        static GeneratorSpec gaussian(double sigma_frac = 0.05, std::string name = "gaussian_mutation");
        static GeneratorSpec point_mutation(double sigma_frac = 0.05, std::string name = "point_mutation");
        static GeneratorSpec blend(double alpha = 0.5, std::string name = "blend_crossover");
        static GeneratorSpec reseed_spec(std::string name = "reseed");
        static GeneratorSpec mock(std::string name = "mock_llm");
        static GeneratorSpec external(std::string endpoint, double timeout_seconds = 30.0, std::string name = "external");
    };

    json to_json(const GeneratorSpec& s);
    GeneratorSpec generator_spec_from_json(const json& j);

    /// Recoverable failure of one proposal (the pipeline retries it).
    class GenerationFailure : public std::runtime_error {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Produces a child genome inside `bounds`. Throws std::invalid_argument
    /// on an arity or bounds mismatch and GenerationFailure for external
    /// errors. mock_llm ignores `rng` whenever it has a parent.
    Genome propose(const GeneratorSpec& spec, const std::vector<const Candidate*>& parents, const Bounds& bounds, Rng& rng);

    /// Initial pool of `n` candidates from the specs taken round-robin. Ids
    /// are derived from (seed, index); every candidate has generation 0 and
    /// an unassigned island. A failed proposal is replaced by a uniform draw
    /// with provenance "reseed".
    std::vector<Candidate> cold_start_generate(const std::vector<GeneratorSpec>& specs, std::size_t n, const Bounds& bounds, std::uint64_t seed);

    namespace detail {
        /// POSTs the external generator request and parses {"values": [..]}.
        Eigen::VectorXd external_propose(const GeneratorSpec& spec, const std::vector<const Candidate*>& parents, const Bounds& bounds);

        /// Splits "http://host:port/path" into ("http://host:port", "/path").
        std::pair<std::string, std::string> split_endpoint(const std::string& endpoint);
    } // namespace detail

} // namespace fmagent

#endif
