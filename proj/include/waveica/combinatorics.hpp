#ifndef WAVEICA_COMBINATORICS_HPP
#define WAVEICA_COMBINATORICS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace waveica {

struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A_n^p = n!/(n-p)! as an exact 64-bit integer; p > n gives 0 (empty index set).
std::int64_t falling_factorial(std::int64_t n, std::int64_t p);

std::int64_t binomial(std::int64_t n, std::int64_t k);

// Number of ordered pairs (i1, i2) in I_n^m x I_n^m with |i1 ∩ i2| = b,
// by the closed form A_n^m A_m^b A_{n-m}^{m-b} C_m^b.
std::int64_t count_matching(std::int64_t n, std::int64_t m, std::int64_t b);

// Partition of {0..m-1} with its Mobius weight prod_B (-1)^{|B|-1}(|B|-1)!.
struct SetPartition {
    std::vector<std::vector<int>> blocks;
    std::int64_t mobius_weight;
};

// All set partitions of {0..m-1}, enumerated by restricted-growth strings
// in lexicographic order; count = Bell(m). Supports m = 1..8.
std::vector<SetPartition> set_partitions(int m);

}  // namespace waveica

#endif
