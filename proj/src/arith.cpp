#include "primelab/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <tuple>

#include "primelab/error.hpp"

namespace primelab {

FactorSieve::FactorSieve(std::uint64_t limit, std::uint64_t ceiling) : limit_(limit) {
    if (limit < 2) throw DomainError("build_sieve: limit must be >= 2");
    if (limit > ceiling)
        throw BudgetError("build_sieve: limit " + std::to_string(limit) +
                          " exceeds sieve ceiling " + std::to_string(ceiling));
    if (limit >= (std::uint64_t{1} << 32))
        throw BudgetError("build_sieve: limit must fit in 32 bits");

    // Linear sieve: every composite is struck exactly once, by its spf.
    spf_.assign(limit + 1, 0);
    primes_.reserve(static_cast<std::size_t>(1.3 * limit / std::log(double(limit))) + 16);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes_.push_back(static_cast<std::uint32_t>(i));
        }
        const std::uint32_t si = spf_[i];
        for (std::uint32_t p : primes_) {
            if (p > si || std::uint64_t{p} * i > limit) break;
            spf_[std::uint64_t{p} * i] = p;
        }
    }
}

FactorSieve build_sieve(std::uint64_t limit) { return FactorSieve(limit); }

void FactorSieve::check_range(std::uint64_t n) const {
    if (n < 1 || n > limit_)
        throw DomainError("FactorSieve: argument " + std::to_string(n) +
                          " outside [1, " + std::to_string(limit_) + "]");
}

std::uint64_t FactorSieve::smallest_prime_factor(std::uint64_t n) const {
    check_range(n);
    return spf_[n];
}

bool FactorSieve::is_prime(std::uint64_t n) const {
    check_range(n);
    return n >= 2 && spf_[n] == n;
}

std::uint64_t FactorSieve::prime_count(std::uint64_t x) const {
    if (x > limit_) throw DomainError("prime_count: argument beyond sieve limit");
    return static_cast<std::uint64_t>(
        std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

std::vector<std::pair<std::uint64_t, unsigned>> FactorSieve::factorize(std::uint64_t n) const {
    check_range(n);
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    while (n > 1) {
        const std::uint64_t p = spf_[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

int FactorSieve::mobius(std::uint64_t n) const {
    int sign = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

std::uint64_t FactorSieve::divisor_count(std::uint64_t n) const {
    std::uint64_t tau = 1;
    for (auto [p, e] : factorize(n)) tau *= e + 1;
    return tau;
}

std::uint64_t FactorSieve::totient(std::uint64_t n) const {
    std::uint64_t phi = n;
    for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

std::vector<std::uint64_t> FactorSieve::divisors(std::uint64_t n) const {
    std::vector<std::uint64_t> divs{1};
    for (auto [p, e] : factorize(n)) {
        const std::size_t base = divs.size();
        std::uint64_t pk = 1;
        for (unsigned j = 1; j <= e; ++j) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::vector<std::pair<std::uint64_t, int>> FactorSieve::squarefree_divisors(std::uint64_t n) const {
    std::vector<std::pair<std::uint64_t, int>> divs{{1, 1}};
    for (auto [p, e] : factorize(n)) {
        const std::size_t base = divs.size();
        for (std::size_t i = 0; i < base; ++i) divs.emplace_back(divs[i].first * p, -divs[i].second);
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

unsigned two_adic_valuation(std::uint64_t n) {
    if (n == 0) throw DomainError("two_adic_valuation: n must be positive");
    return static_cast<unsigned>(std::countr_zero(n));
}

double int_pow(double x, unsigned k) {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r *= x;
    return r;
}

double von_mangoldt(const FactorSieve& sieve, std::uint64_t n, MangoldtSupport support) {
    if (n == 1) {
        sieve.smallest_prime_factor(1);  // range check only
        return 0.0;
    }
    const std::uint64_t p = sieve.smallest_prime_factor(n);
    if (support == MangoldtSupport::PrimesOnly) return p == n ? std::log(double(n)) : 0.0;
    std::uint64_t m = n;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(double(p)) : 0.0;
}

double generalized_von_mangoldt(const FactorSieve& sieve, std::uint64_t n, unsigned k) {
    if (k < 1) throw DomainError("generalized_von_mangoldt: k must be >= 1");
    double sum = 0.0;
    for (auto [d, mu] : sieve.squarefree_divisors(n))
        sum += mu * int_pow(std::log(double(n) / double(d)), k);
    return sum;
}

void TruncationParams::validate() const {
    if (k < 1) throw DomainError("TruncationParams: k must be >= 1");
    if (!(R >= 1.0)) throw DomainError("TruncationParams: R must be >= 1");
}

double truncation_term(int mobius_d, std::uint64_t d, const TruncationParams& params) {
    return mobius_d * int_pow(std::log(params.R / double(d)), params.k);
}

double truncated_von_mangoldt(const FactorSieve& sieve, std::uint64_t n,
                              const TruncationParams& params) {
    params.validate();
    double sum = 0.0;
    for (auto [d, mu] : sieve.squarefree_divisors(n)) {
        if (double(d) > params.R) break;
        sum += truncation_term(mu, d, params);
    }
    return sum;
}

namespace {

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    const auto mm = static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(((old_s % mm) + mm) % mm);
}

struct DivisorRoots {
    std::uint64_t d;
    double term;
    std::vector<std::uint64_t> roots;
};

}  // namespace

std::vector<double> batch_polynomial_weights(const FactorSieve& sieve, std::uint64_t N,
                                             const PrimeTuple& tuple,
                                             const TruncationParams& params) {
    params.validate();
    if (params.R > double(N))
        throw DomainError("batch_polynomial_weights: truncation R exceeds range start N");
    if (tuple.max_offset() > static_cast<std::int64_t>(N))
        throw DomainError("batch_polynomial_weights: tuple offsets must be <= N");
    const auto rmax = static_cast<std::uint64_t>(std::floor(params.R));
    if (rmax > sieve.limit()) throw DomainError("batch_polynomial_weights: sieve does not cover R");

    // Roots of F mod d for every squarefree d <= R, built from d/spf(d) by CRT.
    std::vector<std::vector<std::uint64_t>> roots_of(rmax + 1);
    roots_of[1] = {0};
    std::vector<DivisorRoots> plan;
    plan.push_back({1, truncation_term(1, 1, params), {0}});
    for (std::uint64_t d = 2; d <= rmax; ++d) {
        const int mu = sieve.mobius(d);
        if (mu == 0) continue;
        const std::uint64_t p = sieve.smallest_prime_factor(d);
        const std::uint64_t m = d / p;
        const auto prime_roots = tuple.roots_mod(p);
        const std::uint64_t m_inv = inverse_mod(m % p, p);
        std::vector<std::uint64_t> combined;
        combined.reserve(roots_of[m].size() * prime_roots.size());
        for (std::uint64_t r : roots_of[m]) {
            for (std::uint64_t a : prime_roots) {
                const std::uint64_t t = ((a + p - r % p) % p) * m_inv % p;
                combined.push_back(r + m * t);
            }
        }
        roots_of[d] = combined;
        plan.push_back({d, truncation_term(mu, d, params), std::move(combined)});
    }

    std::vector<double> values(N, 0.0);
    const std::uint64_t end = 2 * N;
    auto run_segment = [&](std::uint64_t lo, std::uint64_t hi) {
        for (const auto& entry : plan) {
            const std::uint64_t d = entry.d;
            for (std::uint64_t r : entry.roots) {
                std::uint64_t n = lo + (r + d - lo % d) % d;
                for (; n < hi; n += d) values[n - N] += entry.term;
            }
        }
        for (std::uint64_t n = lo; n < hi; ++n) values[n - N] *= values[n - N];
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(), N / 4096 + 1));
    if (workers == 1) {
        run_segment(N, end);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (N + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = N + w * chunk;
            const std::uint64_t hi = std::min(end, lo + chunk);
            if (lo < hi) pool.emplace_back(run_segment, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    return values;
}

unsigned worker_count() {
    if (const char* env = std::getenv("PRIMELAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace primelab
