#ifndef FMAGENT_WORKLOADS_TEMPORAL_HPP
#define FMAGENT_WORKLOADS_TEMPORAL_HPP

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>

namespace fmagent::workloads {

    // Recency-weighted aggregates over an ordered series x_1..x_n with weights
    // w_i = (1 - alpha)^(n - i): the newest record has weight 1. All sums are
    // accumulated newest-to-oldest so the weight is a running product.

    inline constexpr double kDefaultDecay = 0.3;

    namespace detail {
        inline void check_decay(double alpha)
        {
            if (!(alpha > 0.0 && alpha < 1.0))
                throw std::invalid_argument("decay must lie in (0, 1)");
        }
    } // namespace detail

    template <typename Scalar>
    Scalar ewma(std::span<const Scalar> x, Scalar alpha = Scalar(kDefaultDecay))
    {
        if (x.empty())
            throw std::invalid_argument("ewma of an empty series");
        detail::check_decay(alpha);
        const Scalar keep = Scalar(1) - alpha;
        Scalar w = 1, num = 0, den = 0;
        for (auto it = x.rbegin(); it != x.rend(); ++it) {
            num += w * *it;
            den += w;
            w *= keep;
        }
        return num / den;
    }

    template <typename Scalar>
    Scalar ewvol(std::span<const Scalar> x, Scalar alpha = Scalar(kDefaultDecay))
    {
        const Scalar mean = ewma(x, alpha);
        const Scalar keep = Scalar(1) - alpha;
        Scalar w = 1, num = 0, den = 0;
        for (auto it = x.rbegin(); it != x.rend(); ++it) {
            const Scalar d = *it - mean;
            num += w * d * d;
            den += w;
            w *= keep;
        }
        return std::sqrt(num / den);
    }

    /// Category-to-risk table with a fallback for categories never observed.
    struct RiskMap {
        std::map<std::string, double> rates;
        double default_rate = 0.0;

        double operator()(const std::string& category) const
        {
            auto it = rates.find(category);
            return it == rates.end() ? default_rate : it->second;
        }
    };

    inline double risk_score(std::span<const std::string> c, const RiskMap& risk, double alpha = kDefaultDecay)
    {
        if (c.empty())
            throw std::invalid_argument("risk_score of an empty series");
        detail::check_decay(alpha);
        double w = 1, num = 0, den = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            num += w * risk(*it);
            den += w;
            w *= 1.0 - alpha;
        }
        return num / den;
    }

    /// Weighted count of category switches; the switch into record i carries w_i.
    inline double ew_changes(std::span<const std::string> c, double alpha = kDefaultDecay)
    {
        if (c.empty())
            throw std::invalid_argument("ew_changes of an empty series");
        detail::check_decay(alpha);
        double w = 1, total = 0;
        for (std::size_t k = c.size(); k-- > 1;) {
            if (c[k] != c[k - 1])
                total += w;
            w *= 1.0 - alpha;
        }
        return total;
    }

} // namespace fmagent::workloads

#endif
