#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qwb/poly.hpp"

namespace qwb {

// All monomials over k real variables with total degree <= d, graded
// lexicographic: ascending degree, then earlier variables carry higher
// exponents first. Position lookup is O(1).
class MonomialBasis {
  public:
    MonomialBasis() = default;
    MonomialBasis(int k, int d);

    int k() const { return k_; }
    int max_degree() const { return d_; }
    int size() const { return static_cast<int>(list_.size()); }
    const Exponents& operator[](int i) const { return list_[i]; }
    const std::vector<Exponents>& monomials() const { return list_; }

    // Index of a monomial, or -1 when outside the basis.
    int lookup(const Exponents& e) const;

    // Index of the product of members i and j, looked up in `target`
    // (typically a higher-degree basis over the same variables).
    int product_index(int i, int j, const MonomialBasis& target) const;

  private:
    struct ExpHash {
        std::size_t operator()(const Exponents& e) const {
            std::size_t h = 1469598103934665603ULL;
            for (std::uint8_t v : e) {
                h ^= v;
                h *= 1099511628211ULL;
            }
            return h;
        }
    };

    int k_ = 0;
    int d_ = 0;
    std::vector<Exponents> list_;
    std::unordered_map<Exponents, int, ExpHash> index_;
};

// C(k + d, d), the size of the basis above.
long long binomial(int top, int bottom);

} // namespace qwb
