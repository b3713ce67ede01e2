#include "rng.hpp"

#include <numeric>

namespace cavkit {

std::vector<std::size_t> Rng::sample_indices(std::size_t pop, std::size_t n) {
    std::vector<std::size_t> idx(pop);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n && i + 1 < pop; ++i) {
        std::size_t j = i + static_cast<std::size_t>(next_below(pop - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    return idx;
}

}  // namespace cavkit
