#include <cmath>
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "primelab/arith.hpp"
#include "primelab/error.hpp"

using namespace primelab;

namespace {

const FactorSieve& sieve_1e5() {
    static const FactorSieve s(100'000);
    return s;
}

bool close(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// F(n) mod d without forming F(n).
bool divides_product(std::uint64_t d, std::uint64_t n, const PrimeTuple& tuple) {
    std::uint64_t r = 1 % d;
    for (auto h : tuple.offsets()) r = r * ((n + static_cast<std::uint64_t>(h)) % d) % d;
    return r == 0;
}

}  // namespace

TEST_CASE("small sieve table") {
    const FactorSieve s(10);
    const std::uint64_t expect[] = {0, 0, 2, 3, 2, 5, 2, 7, 2, 3, 2};
    for (std::uint64_t n = 2; n <= 10; ++n) CHECK(s.smallest_prime_factor(n) == expect[n]);
    CHECK(FactorSieve(2).smallest_prime_factor(2) == 2);
}

TEST_CASE("sieve agrees with trial division") {
    const auto& s = sieve_1e5();
    for (std::uint64_t n = 2; n <= 20'000; ++n) {
        REQUIRE(s.smallest_prime_factor(n) == oracle::smallest_factor(n));
        REQUIRE(s.is_prime(n) == oracle::is_prime(n));
    }
    for (std::uint32_t p : s.primes()) REQUIRE(s.smallest_prime_factor(p) == p);
}

TEST_CASE("prime count to one million") {
    const FactorSieve s(1'000'000);
    CHECK(s.prime_count(1'000'000) == 78498);
    CHECK(s.primes().size() == 78498);
    CHECK(primes_up_to(1'000'000).size() == 78498);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> pick(2, 1'000'000);
    for (int i = 0; i < 2000; ++i) {
        const auto n = pick(rng);
        REQUIRE(s.is_prime(n) == oracle::is_prime(n));
    }
}

TEST_CASE("sieve limits") {
    CHECK_THROWS_AS(FactorSieve(1), DomainError);
    CHECK_THROWS_AS(build_sieve(0), DomainError);
    CHECK_THROWS_AS(FactorSieve(1000, 999), BudgetError);
    CHECK_THROWS_AS(sieve_1e5().mobius(100'001), DomainError);
    CHECK_THROWS_AS(sieve_1e5().mobius(0), DomainError);
    CHECK_THROWS_AS(von_mangoldt(sieve_1e5(), 100'001), DomainError);
}

TEST_CASE("multiplicative functions against brute force") {
    const auto& s = sieve_1e5();
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        REQUIRE(s.mobius(n) == oracle::mobius(n));
        REQUIRE(s.totient(n) == oracle::totient(n));
        REQUIRE(s.divisor_count(n) == oracle::divisors(n).size());
        REQUIRE(s.divisors(n) == oracle::divisors(n));
    }
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        std::uint64_t prod = 1;
        for (auto [p, e] : s.factorize(n))
            for (unsigned i = 0; i < e; ++i) prod *= p;
        REQUIRE(prod == n);
        for (auto [d, mu] : s.squarefree_divisors(n)) {
            REQUIRE(n % d == 0);
            REQUIRE(mu == oracle::mobius(d));
        }
    }
}

TEST_CASE("two-adic valuation and integer powers") {
    CHECK(two_adic_valuation(1) == 0);
    CHECK(two_adic_valuation(12) == 2);
    CHECK(two_adic_valuation(std::uint64_t{1} << 40) == 40);
    CHECK_THROWS_AS(two_adic_valuation(0), DomainError);
    CHECK(int_pow(3.0, 0) == 1.0);
    CHECK(int_pow(1.5, 3) == 1.5 * 1.5 * 1.5);
}

TEST_CASE("von Mangoldt values") {
    const auto& s = sieve_1e5();
    CHECK(von_mangoldt(s, 8) == doctest::Approx(std::log(2.0)));
    CHECK(von_mangoldt(s, 8, MangoldtSupport::PrimesOnly) == 0.0);
    CHECK(von_mangoldt(s, 6) == 0.0);
    CHECK(von_mangoldt(s, 6, MangoldtSupport::PrimesOnly) == 0.0);
    CHECK(von_mangoldt(s, 1) == 0.0);
    for (std::uint64_t n = 1; n <= 5000; ++n) REQUIRE(close(von_mangoldt(s, n), oracle::mangoldt(n)));
}

TEST_CASE("generalized von Mangoldt") {
    const auto& s = sieve_1e5();
    CHECK(close(generalized_von_mangoldt(s, 7, 1), std::log(7.0)));
    CHECK(close(generalized_von_mangoldt(s, 6, 2), 2 * std::log(2.0) * std::log(3.0)));
    CHECK(std::abs(generalized_von_mangoldt(s, 30, 2)) < 1e-12);
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        REQUIRE(close(generalized_von_mangoldt(s, n, 1), von_mangoldt(s, n), 1e-12));
        for (unsigned k = 2; k <= 3; ++k)
            REQUIRE(std::abs(generalized_von_mangoldt(s, n, k) - oracle::mangoldt_k(n, k)) < 1e-8);
    }
}

TEST_CASE("convolution identity for Lambda_k") {
    const auto& s = sieve_1e5();
    for (unsigned k = 2; k <= 3; ++k)
        for (std::uint64_t n = 1; n <= 10'000; ++n) {
            double conv = 0.0;
            for (auto d : s.divisors(n))
                conv += von_mangoldt(s, d) * generalized_von_mangoldt(s, n / d, k - 1);
            const double rhs = std::log(double(n)) * generalized_von_mangoldt(s, n, k - 1) + conv;
            REQUIRE(std::abs(generalized_von_mangoldt(s, n, k) - rhs) <=
                    1e-9 * (1.0 + std::pow(std::log(double(n)), k)));
        }
}

TEST_CASE("Lambda_k vanishes beyond k prime factors") {
    const auto& s = sieve_1e5();
    for (std::uint64_t n = 2; n <= 100'000; ++n) {
        const auto omega = s.factorize(n).size();
        for (unsigned k = 1; k <= 3; ++k) {
            if (omega <= k) continue;
            const double scale = std::pow(std::log(double(n)), k) * double(1u << omega);
            REQUIRE(std::abs(generalized_von_mangoldt(s, n, k)) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("truncated von Mangoldt") {
    const auto& s = sieve_1e5();
    for (unsigned k = 1; k <= 3; ++k)
        CHECK(close(truncated_von_mangoldt(s, 1, {k, 17.5}), std::pow(std::log(17.5), k)));
    CHECK(close(truncated_von_mangoldt(s, 101, {1, 50.0}), std::log(50.0)));
    CHECK(close(truncated_von_mangoldt(s, 6, {1, 4.0}), std::log(4.0) - std::log(2.0) - std::log(4.0 / 3.0)));
    CHECK(close(truncated_von_mangoldt(s, 6, {1, 4.0}), std::log(1.5)));
    CHECK_THROWS_AS(truncated_von_mangoldt(s, 6, {0, 4.0}), DomainError);
    CHECK_THROWS_AS(truncated_von_mangoldt(s, 6, {1, 0.5}), DomainError);
    for (std::uint64_t n = 1; n <= 3000; ++n)
        REQUIRE(close(truncated_von_mangoldt(s, n, {2, 30.0}), oracle::truncated(n, 2, 30.0), 1e-10));
}

TEST_CASE("majorant property of the Goldston-Yildirim weights") {
    const auto& s = sieve_1e5();
    const std::uint64_t top = 100'000;
    for (double R : {2.0, 10.0, 57.3, 316.0, 1000.0}) {
        std::vector<double> acc(top + 1, 0.0);
        for (std::uint64_t d = 1; double(d) <= R; ++d) {
            const int mu = s.mobius(d);
            if (mu == 0) continue;
            const double lambda = mu * std::log(R / double(d)) / std::log(R);
            for (std::uint64_t n = d; n <= top; n += d) acc[n] += lambda;
        }
        for (std::uint64_t n = static_cast<std::uint64_t>(R) + 1; n <= top; ++n)
            REQUIRE(acc[n] * acc[n] >= (s.is_prime(n) ? 1.0 - 1e-12 : 0.0));
    }
}

TEST_CASE("batch weights: small worked example") {
    const auto& s = sieve_1e5();
    const auto w = batch_polynomial_weights(s, 3, PrimeTuple{0}, {1, 2.0});
    REQUIRE(w.size() == 3);
    const double l2 = std::log(2.0) * std::log(2.0);
    for (double v : w) CHECK(close(v, l2));

    const auto zero = batch_polynomial_weights(s, 50, PrimeTuple{0, 2}, {2, 1.0});
    for (double v : zero) CHECK(v == 0.0);
    CHECK_THROWS_AS(batch_polynomial_weights(s, 10, PrimeTuple{0}, {1, 11.0}), DomainError);
    CHECK_THROWS_AS(batch_polynomial_weights(s, 10, PrimeTuple{0, 11}, {1, 3.0}), DomainError);
}

TEST_CASE("batch weights equal per-n evaluation on random instances") {
    const auto& s = sieve_1e5();
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto size = std::uniform_int_distribution<int>(1, 4)(rng);
        std::vector<std::int64_t> offs;
        while (static_cast<int>(offs.size()) < size) {
            const auto h = std::uniform_int_distribution<std::int64_t>(0, 40)(rng);
            if (std::find(offs.begin(), offs.end(), h) == offs.end()) offs.push_back(h);
        }
        const PrimeTuple tuple(offs);
        const TruncationParams params{std::uniform_int_distribution<unsigned>(1, 5)(rng),
                                      std::uniform_real_distribution<double>(1.0, 80.0)(rng)};
        const auto N = std::uniform_int_distribution<std::uint64_t>(80, 2500)(rng);
        const auto w = batch_polynomial_weights(s, N, tuple, params);
        REQUIRE(w.size() == N);
        for (std::uint64_t n = N; n < 2 * N; ++n) {
            double v = 0.0;
            for (std::uint64_t d = 1; double(d) <= params.R; ++d) {
                const int mu = oracle::mobius(d);
                if (mu != 0 && divides_product(d, n, tuple)) v += truncation_term(mu, d, params);
            }
            REQUIRE(w[n - N] == v * v);
        }
    }
}

TEST_CASE("batch weights do not depend on the thread count") {
    const auto& s = sieve_1e5();
    const PrimeTuple tuple{0, 2, 6};
    setenv("PRIMELAB_THREADS", "1", 1);
    const auto one = batch_polynomial_weights(s, 20'000, tuple, {4, 12.0});
    setenv("PRIMELAB_THREADS", "3", 1);
    const auto three = batch_polynomial_weights(s, 20'000, tuple, {4, 12.0});
    unsetenv("PRIMELAB_THREADS");
    CHECK(one == three);
}
