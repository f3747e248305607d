#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "primelab/tuple.hpp"

namespace primelab {

// Largest sieve limit accepted by default (uint32 spf table, ~400 MB).
inline constexpr std::uint64_t kDefaultSieveCeiling = 100'000'000;

// Smallest-prime-factor table over [1, limit]. Immutable once built; all
// queries are const and may be issued concurrently.
class FactorSieve {
public:
    // Linear sieve. Throws DomainError if limit < 2, BudgetError if limit > ceiling.
    explicit FactorSieve(std::uint64_t limit,
                         std::uint64_t ceiling = kDefaultSieveCeiling);

    std::uint64_t limit() const { return limit_; }

    std::uint64_t smallest_prime_factor(std::uint64_t n) const;
    bool is_prime(std::uint64_t n) const;

    // All primes <= limit, ascending.
    const std::vector<std::uint32_t>& primes() const { return primes_; }
    // pi(x) for 0 <= x <= limit.
    std::uint64_t prime_count(std::uint64_t x) const;

    int mobius(std::uint64_t n) const;
    std::uint64_t divisor_count(std::uint64_t n) const;
    std::uint64_t totient(std::uint64_t n) const;

    // (prime, exponent) pairs with ascending primes.
    std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) const;
    // All divisors, ascending.
    std::vector<std::uint64_t> divisors(std::uint64_t n) const;
    // Squarefree divisors with their Moebius sign, ascending by divisor.
    std::vector<std::pair<std::uint64_t, int>> squarefree_divisors(std::uint64_t n) const;

private:
    void check_range(std::uint64_t n) const;

    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

FactorSieve build_sieve(std::uint64_t limit);

// Plain Eratosthenes, independent of FactorSieve; used for Euler products.
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

// 2-adic valuation; n must be positive.
unsigned two_adic_valuation(std::uint64_t n);

// x^k by repeated multiplication (fixed evaluation order).
double int_pow(double x, unsigned k);

enum class MangoldtSupport { PrimePowers, PrimesOnly };

// Lambda(n) (support = PrimePowers) or Lambda'(n) (PrimesOnly). Natural log.
double von_mangoldt(const FactorSieve& sieve, std::uint64_t n,
                    MangoldtSupport support = MangoldtSupport::PrimePowers);

// Lambda_k(n) = sum_{d | n} mu(d) log(n/d)^k.
double generalized_von_mangoldt(const FactorSieve& sieve, std::uint64_t n, unsigned k);

struct TruncationParams {
    unsigned k = 1;
    double R = 1.0;

    // Throws DomainError unless k >= 1 and R >= 1.
    void validate() const;
};

// mu(d) log(R/d)^k: the contribution of one divisor d <= R.
double truncation_term(int mobius_d, std::uint64_t d, const TruncationParams& params);

// Lambda_{k,R}(n) = sum_{d | n, d <= R} mu(d) log(R/d)^k, summed over
// squarefree d in ascending order.
double truncated_von_mangoldt(const FactorSieve& sieve, std::uint64_t n,
                              const TruncationParams& params);

// Lambda_{k,R}(F(n))^2 for N <= n < 2N with F(n) = prod(n + h_i), by sieving
// over squarefree d <= R and the CRT roots of F mod d. For every n the terms
// are accumulated in ascending order of d. The sieve must cover R.
std::vector<double> batch_polynomial_weights(const FactorSieve& sieve, std::uint64_t N,
                                             const PrimeTuple& tuple,
                                             const TruncationParams& params);

// Worker threads for batch kernels: PRIMELAB_THREADS if set, else hardware.
unsigned worker_count();

}  // namespace primelab
