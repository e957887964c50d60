#include "tnoma/ae/variant.hpp"

#include <stdexcept>

namespace tnoma::ae {

AeVariant ae_variant(int id) {
    switch (id) {
        case 1: return {1, {1, 1, 1}, {1, 1, 1, 1}, 11};
        case 2: return {2, {2, 4, 2}, {1, 1, 1, 1}, 11};
        case 3: return {3, {2, 4, 2}, {1, 1, 2, 2}, 11};
        case 4: return {4, {1, 1, 1}, {2, 4, 4, 2}, 11};
        case 5: return {5, {2, 4, 2}, {2, 4, 4, 2}, 11};
        case 6: return {6, {1, 1, 1}, {1, 2, 8, 4}, 11};
        case 7: return {7, {1, 1, 1}, {2, 16, 128, 16}, 11};
        case 8: return {8, {2, 4, 2}, {2, 16, 128, 16}, 11};
        case 9: return {9, {2, 4, 2}, {4, 32, 128, 16}, 11};
        default: throw std::invalid_argument("ae_variant: id must be 1..9");
    }
}

} // namespace tnoma::ae
