#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace primelab {

using IntegerMatrix = std::vector<std::vector<std::int64_t>>;

// Rank over Q, by Gaussian elimination in exact rational arithmetic.
std::size_t rational_rank(const IntegerMatrix& rows);

// Whether v lies in the Q-span of rows. The empty span contains only 0.
bool in_rational_span(const IntegerMatrix& rows, std::span<const std::int64_t> v);

// Rank over Z/pZ of the rows reduced mod p; p must be prime.
std::size_t rank_mod_p(IntegerMatrix rows, std::uint64_t p);

}  // namespace primelab
