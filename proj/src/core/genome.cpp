#include <fmagent/core/genome.hpp>

#include <cmath>

namespace fmagent {

    std::optional<std::string> Genome::validate() const
    {
        if (_kind == GenomeKind::text) {
            if (_text.empty())
                return "text genome is empty";
            return std::nullopt;
        }
        if (_values.size() != _bounds.lower.size() || _values.size() != _bounds.upper.size())
            return "genome has " + std::to_string(_values.size()) + " values but " + std::to_string(_bounds.lower.size()) + " bounds";
        for (Eigen::Index i = 0; i < _values.size(); ++i) {
            const double v = _values[i];
            if (!std::isfinite(v))
                return "non-finite value at index " + std::to_string(i);
            if (!(_bounds.lower[i] <= _bounds.upper[i]))
                return "inverted bounds at index " + std::to_string(i);
            if (v < _bounds.lower[i] || v > _bounds.upper[i])
                return "value at index " + std::to_string(i) + " outside its bounds";
        }
        return std::nullopt;
    }

    bool operator==(const Genome& a, const Genome& b)
    {
        if (a._kind != b._kind)
            return false;
        if (a._kind == GenomeKind::text)
            return a._text == b._text;
        return a._values.size() == b._values.size() && a._values == b._values && a._bounds == b._bounds;
    }

} // namespace fmagent
