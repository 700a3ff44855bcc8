#include <fmagent/common/ids.hpp>

namespace fmagent {

    namespace {
        constexpr char kHex[] = "0123456789abcdef";

        int hex_value(char c)
        {
            if (c >= '0' && c <= '9')
                return c - '0';
            if (c >= 'a' && c <= 'f')
                return c - 'a' + 10;
            if (c >= 'A' && c <= 'F')
                return c - 'A' + 10;
            return -1;
        }
    } // namespace

    std::string CandidateId::str() const
    {
        std::string out(32, '0');
        for (int i = 0; i < 16; ++i) {
            out[15 - i] = kHex[(hi >> (4 * i)) & 0xf];
            out[31 - i] = kHex[(lo >> (4 * i)) & 0xf];
        }
        return out;
    }

    std::optional<CandidateId> CandidateId::parse(std::string_view text)
    {
        if (text.size() != 32)
            return std::nullopt;
        CandidateId id;
        for (int i = 0; i < 32; ++i) {
            const int v = hex_value(text[i]);
            if (v < 0)
                return std::nullopt;
            std::uint64_t& word = i < 16 ? id.hi : id.lo;
            word = (word << 4) | static_cast<std::uint64_t>(v);
        }
        return id;
    }

} // namespace fmagent
