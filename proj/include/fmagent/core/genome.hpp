#ifndef FMAGENT_CORE_GENOME_HPP
#define FMAGENT_CORE_GENOME_HPP

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>

namespace fmagent {

    enum class GenomeKind { real_vector, text };

    /// Per-dimension inclusive box.
    struct Bounds {
        Eigen::VectorXd lower;
        Eigen::VectorXd upper;

        Bounds() = default;
        Bounds(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {}

        static Bounds uniform(Eigen::Index dim, double lo, double hi)
        {
            return {Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi)};
        }

        Eigen::Index size() const { return lower.size(); }
        Eigen::VectorXd range() const { return upper - lower; }
        Eigen::VectorXd clamp(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

        friend bool operator==(const Bounds& a, const Bounds& b)
        {
            return a.lower.size() == b.lower.size() && a.lower == b.lower && a.upper == b.upper;
        }
    };

    /// A candidate solution payload: a bounded real vector or opaque text.
    ///
    /// Construction does not validate; `validate()` reports the first broken
    /// invariant so that callers can decide between rejecting (database) and
    /// scoring as incorrect (evaluator).
    class Genome {
    public:
        Genome() = default;

        static Genome real(Eigen::VectorXd values, Bounds bounds)
        {
            Genome g;
            g._kind = GenomeKind::real_vector;
            g._values = std::move(values);
            g._bounds = std::move(bounds);
            return g;
        }

        static Genome text(std::string body)
        {
            Genome g;
            g._kind = GenomeKind::text;
            g._text = std::move(body);
            return g;
        }

        GenomeKind kind() const { return _kind; }
        bool is_real() const { return _kind == GenomeKind::real_vector; }
        const Eigen::VectorXd& values() const { return _values; }
        const Bounds& bounds() const { return _bounds; }
        const std::string& text() const { return _text; }
        Eigen::Index size() const { return _values.size(); }

        std::optional<std::string> validate() const;

        friend bool operator==(const Genome& a, const Genome& b);

    private:
        GenomeKind _kind = GenomeKind::real_vector;
        Eigen::VectorXd _values;
        Bounds _bounds;
        std::string _text;
    };

    class InvalidGenome : public std::invalid_argument {
    public:
        using std::invalid_argument::invalid_argument;
    };

} // namespace fmagent

#endif
