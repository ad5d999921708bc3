#include "waveica/combinatorics.hpp"

namespace waveica {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out))
        throw overflow_error("combinatorics: 64-bit overflow in exact count");
    return out;
}

}  // namespace

std::int64_t falling_factorial(std::int64_t n, std::int64_t p) {
    if (n < 0 || p < 0) throw std::invalid_argument("falling_factorial: negative argument");
    if (p > n) return 0;
    std::int64_t v = 1;
    for (std::int64_t i = 0; i < p; ++i) v = checked_mul(v, n - i);
    return v;
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0) throw std::invalid_argument("binomial: negative argument");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t v = 1;
    for (std::int64_t i = 1; i <= k; ++i) v = checked_mul(v, n - k + i) / i;
    return v;
}

std::int64_t count_matching(std::int64_t n, std::int64_t m, std::int64_t b) {
    if (!(0 <= b && b <= m && m <= n))
        throw std::invalid_argument("count_matching: need 0 <= b <= m <= n");
    std::int64_t v = falling_factorial(n, m);
    v = checked_mul(v, falling_factorial(m, b));
    v = checked_mul(v, falling_factorial(n - m, m - b));
    v = checked_mul(v, binomial(m, b));
    return v;
}

std::vector<SetPartition> set_partitions(int m) {
    if (m < 1 || m > 8) throw std::invalid_argument("set_partitions: m must be in 1..8");
    std::vector<SetPartition> out;
    // restricted-growth strings: s[0] = 0, s[i] <= 1 + max(s[0..i-1])
    std::vector<int> s(m, 0);
    std::vector<int> maxv(m, 0);  // maxv[i] = max(s[0..i])
    while (true) {
        int nblocks = maxv[m - 1] + 1;
        SetPartition p;
        p.blocks.assign(nblocks, {});
        for (int i = 0; i < m; ++i) p.blocks[s[i]].push_back(i);
        p.mobius_weight = 1;
        for (const auto& block : p.blocks) {
            int sz = static_cast<int>(block.size());
            std::int64_t w = (sz % 2 == 0) ? -1 : 1;
            for (int f = 2; f < sz; ++f) w *= f;
            p.mobius_weight *= w;
        }
        out.push_back(std::move(p));
        // next string in lexicographic order
        int i = m - 1;
        while (i > 0 && s[i] == maxv[i - 1] + 1) --i;
        if (i == 0) break;
        ++s[i];
        maxv[i] = std::max(maxv[i - 1], s[i]);
        for (int r = i + 1; r < m; ++r) {
            s[r] = 0;
            maxv[r] = maxv[r - 1];
        }
        // i itself may have changed maxv upstream already handled
    }
    return out;
}

}  // namespace waveica
