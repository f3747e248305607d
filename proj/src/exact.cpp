#include "primelab/exact.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <utility>

namespace primelab {

namespace {

using Rational = boost::multiprecision::cpp_rational;

std::int64_t mod_pow(std::int64_t base, std::uint64_t exp, std::int64_t m) {
    __int128 result = 1, b = ((base % m) + m) % m;
    while (exp) {
        if (exp & 1) result = result * b % m;
        b = b * b % m;
        exp >>= 1;
    }
    return static_cast<std::int64_t>(result);
}

}  // namespace

std::size_t rational_rank(const IntegerMatrix& rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    std::vector<std::vector<Rational>> m;
    m.reserve(rows.size());
    for (const auto& r : rows) m.emplace_back(r.begin(), r.end());

    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            const Rational f = m[r][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

bool in_rational_span(const IntegerMatrix& rows, std::span<const std::int64_t> v) {
    if (rows.empty()) return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
    IntegerMatrix extended = rows;
    extended.emplace_back(v.begin(), v.end());
    return rational_rank(extended) == rational_rank(rows);
}

std::size_t rank_mod_p(IntegerMatrix rows, std::uint64_t p) {
    if (rows.empty()) return 0;
    const auto m = static_cast<std::int64_t>(p);
    const std::size_t cols = rows.front().size();
    for (auto& r : rows)
        for (auto& x : r) x = ((x % m) + m) % m;

    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        const std::int64_t inv = mod_pow(rows[rank][c], p - 2, m);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            const std::int64_t f = static_cast<std::int64_t>(__int128(rows[r][c]) * inv % m);
            for (std::size_t j = c; j < cols; ++j)
                rows[r][j] = static_cast<std::int64_t>(
                    ((rows[r][j] - __int128(f) * rows[rank][j]) % m + m) % m);
        }
        ++rank;
    }
    return rank;
}

}  // namespace primelab
