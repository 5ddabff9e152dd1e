#include "qwb/basis.hpp"

namespace qwb {

namespace {

// Appends, in lexicographic-descending order, every way of spending
// `left` total degree on variables [pos, k).
void enumerate(int k, int pos, int left, Exponents& cur, std::vector<Exponents>& out) {
    if (pos == k - 1) {
        cur[pos] = static_cast<std::uint8_t>(left);
        out.push_back(cur);
        cur[pos] = 0;
        return;
    }
    for (int e = left; e >= 0; --e) {
        cur[pos] = static_cast<std::uint8_t>(e);
        enumerate(k, pos + 1, left - e, cur, out);
    }
    cur[pos] = 0;
}

} // namespace

MonomialBasis::MonomialBasis(int k, int d) : k_(k), d_(d) {
    if (k < 1) fail(ErrorCode::InvalidArgument, "basis needs k >= 1 variables");
    if (d < 0) fail(ErrorCode::InvalidArgument, "basis needs degree d >= 0");

    list_.reserve(static_cast<std::size_t>(binomial(k + d, d)));
    Exponents cur(k, 0);
    for (int g = 0; g <= d; ++g) enumerate(k, 0, g, cur, list_);

    index_.reserve(list_.size() * 2);
    for (int i = 0; i < size(); ++i) index_.emplace(list_[i], i);
}

int MonomialBasis::lookup(const Exponents& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? -1 : it->second;
}

int MonomialBasis::product_index(int i, int j, const MonomialBasis& target) const {
    Exponents prod = list_[i];
    const Exponents& other = list_[j];
    for (int v = 0; v < k_; ++v) prod[v] = static_cast<std::uint8_t>(prod[v] + other[v]);
    return target.lookup(prod);
}

long long binomial(int top, int bottom) {
    if (bottom < 0 || bottom > top) return 0;
    bottom = std::min(bottom, top - bottom);
    long long r = 1;
    for (int i = 1; i <= bottom; ++i) r = r * (top - bottom + i) / i;
    return r;
}

} // namespace qwb
