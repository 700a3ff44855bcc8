#ifndef FMAGENT_SERVICE_SOLVERS_HPP
#define FMAGENT_SERVICE_SOLVERS_HPP

#include <cstdint>
#include <string>

#include <fmagent/core/serialize.hpp>

namespace fmagent {

    /// Runs a standalone solver ("packing", "points" or "hermite") and returns
    /// {"problem", "seed", "solution", "score", "valid", "elapsed_seconds"}.
    /// Throws std::invalid_argument for an unknown problem.
    json solve_document(const std::string& problem, std::uint64_t seed);

} // namespace fmagent

#endif
