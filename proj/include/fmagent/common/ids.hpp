#ifndef FMAGENT_COMMON_IDS_HPP
#define FMAGENT_COMMON_IDS_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <fmagent/common/rng.hpp>

namespace fmagent {

    /// 128-bit candidate identifier, rendered as 32 lowercase hex digits.
    struct CandidateId {
        std::uint64_t hi = 0;
        std::uint64_t lo = 0;

        static CandidateId random(Rng& rng) { return {rng.next_u64(), rng.next_u64()}; }

        /// Deterministic id for a (seed, tag, a, b, c) tuple.
        static CandidateId derive(std::uint64_t seed, std::string_view tag, std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0)
        {
            const std::uint64_t t = fnv1a(tag);
            return {derive_seed(seed, {t, a, b, c, 1}), derive_seed(seed, {t, a, b, c, 2})};
        }

        bool is_nil() const { return hi == 0 && lo == 0; }

        std::string str() const;
        static std::optional<CandidateId> parse(std::string_view text);

        /// Folds the id into a 64-bit word (for seeding and hashing).
        std::uint64_t fold() const { return hi ^ (lo * 0x9e3779b97f4a7c15ULL); }

        friend auto operator<=>(const CandidateId&, const CandidateId&) = default;
    };

} // namespace fmagent

template <>
struct std::hash<fmagent::CandidateId> {
    std::size_t operator()(const fmagent::CandidateId& id) const noexcept { return static_cast<std::size_t>(id.fold()); }
};

#endif
