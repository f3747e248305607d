#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "primelab/bilinear.hpp"
#include "primelab/digits.hpp"
#include "primelab/error.hpp"

using namespace primelab;
using namespace primelab::bilinear;

namespace {

const FactorSieve& sieve() {
    static const FactorSieve s(1 << 17);
    return s;
}

Complex thue_morse(std::uint64_t n) { return double(digits::digit_sign(n)); }

Complex e(double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); }

}  // namespace

TEST_CASE("dyadic ranges") {
    const DyadicRange r(4);
    CHECK(r.lo() == 8);
    CHECK(r.hi() == 16);
    CHECK(r.size() == 8);
    CHECK(r.contains(8));
    CHECK_FALSE(r.contains(16));
    CHECK(DyadicRange(1).size() == 1);
    CHECK_THROWS_AS(DyadicRange(0), DomainError);
}

TEST_CASE("Vaughan identity pointwise") {
    const auto& s = sieve();
    const auto one = vaughan_identity_check(s, 1, 5.0);
    CHECK(one.small_small == 0.0);
    CHECK(one.large_large == 0.0);
    CHECK(one.small_n == 0.0);
    CHECK(one.divisor_log == 0.0);

    const auto five = vaughan_identity_check(s, 5, 10.0);
    CHECK(five.small_n == doctest::Approx(std::log(5.0)));
    CHECK(five.divisor_log == doctest::Approx(-five.small_small));
    CHECK(five.total() == doctest::Approx(std::log(5.0)));

    for (std::uint64_t n = 1; n <= 100'000; ++n) {
        const double U = std::cbrt(double(n));
        const auto t = vaughan_identity_check(s, n, U);
        REQUIRE(std::abs(t.total() - von_mangoldt(s, n)) <= 1e-9 * std::max(1.0, std::log(double(n))));
    }
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const auto n = std::uniform_int_distribution<std::uint64_t>(1, 100'000)(rng);
        const double U = std::uniform_real_distribution<double>(1.0, 400.0)(rng);
        REQUIRE(std::abs(vaughan_identity_check(s, n, U).total() - oracle::mangoldt(n)) < 1e-9 * 12);
    }
}

TEST_CASE("Vaughan split of the Chebyshev sum") {
    const auto& s = sieve();
    double psi = 0.0;
    for (std::uint64_t n = 1; n <= 1000; ++n) psi += oracle::mangoldt(n);
    const auto split = vaughan_split(s, [](std::uint64_t) { return Complex(1.0); }, 1000);
    CHECK(split.total.real() == doctest::Approx(psi).epsilon(1e-12));
    CHECK(split.total.real() == doctest::Approx(996.6).epsilon(1e-3));
    CHECK(std::abs(split.sum() - split.total) < 1e-8 * psi);
    CHECK(split.U == doctest::Approx(10.0));

    const auto zero = vaughan_split(s, [](std::uint64_t) { return Complex(0.0); }, 1000);
    CHECK(zero.S1 == 0.0);
    CHECK(zero.S2 == 0.0);
    CHECK(zero.S3 == 0.0);
    CHECK(zero.S4 == 0.0);
}

TEST_CASE("Vaughan split pieces match their definitions") {
    const auto& s = sieve();
    const std::uint64_t X = 3000;
    const double U = 13.5;
    auto f = [](std::uint64_t n) { return e(double(n) * std::numbers::sqrt2); };
    const auto split = vaughan_split(s, f, X, U);

    Complex S1 = 0.0, S2 = 0.0, S3 = 0.0, S4 = 0.0;
    for (std::uint64_t n = 1; n <= X; ++n) {
        double ss = 0.0, ll = 0.0;
        for (auto b : oracle::divisors(n))
            for (auto c : oracle::divisors(n / b)) {
                const double term = oracle::mangoldt(b) * oracle::mobius(c);
                if (b < U && c < U) ss += term;
                if (b >= U && c >= U) ll += term;
            }
        S1 -= ss * f(n);
        S2 += ll * f(n);
        if (n < U) S3 += oracle::mangoldt(n) * f(n);
        for (auto c : oracle::divisors(n))
            if (c < U) S4 += oracle::mobius(c) * std::log(double(n) / double(c)) * f(n);
    }
    CHECK(std::abs(split.S1 - S1) < 1e-8 * X);
    CHECK(std::abs(split.S2 - S2) < 1e-8 * X);
    CHECK(std::abs(split.S3 - S3) < 1e-10 * X);
    CHECK(std::abs(split.S4 - S4) < 1e-8 * X);
}

TEST_CASE("Vaughan split with digit signs matches the correlation") {
    const auto& s = sieve();
    const std::uint64_t X = 1 << 16;
    const auto split = vaughan_split(s, thue_morse, X);
    CHECK(split.total.real() == doctest::Approx(double(X) * digits::prime_digit_correlation(s, X)).epsilon(1e-12));
    CHECK(std::abs(split.sum() - split.total) < 1e-6 * double(X));
    CHECK_THROWS_AS(vaughan_split(s, [](std::uint64_t) { return Complex(2.0); }, 100), DomainError);
    CHECK_THROWS_AS(vaughan_split(s, thue_morse, (1 << 17) + 1), DomainError);
}

TEST_CASE("Type I sums") {
    const auto one = [](std::uint64_t) { return Complex(1.0); };
    CHECK(type_i_sum(one, DyadicRange(3), DyadicRange(5)) == 4.0 * 16.0);
    auto chooser = [](std::uint64_t m) { return IntegerInterval{16, 16 + m}; };
    CHECK(type_i_sum(one, DyadicRange(3), DyadicRange(5), chooser) == 4.0 + 5 + 6 + 7);
    CHECK_THROWS_AS(type_i_sum(one, DyadicRange(3), DyadicRange(5), [](std::uint64_t) {
                        return IntegerInterval{10, 20};
                    }),
                    DomainError);

    const auto alternating = [](std::uint64_t n) { return Complex(n % 2 ? -1.0 : 1.0); };
    CHECK(type_i_sum(alternating, DyadicRange(1), DyadicRange(10)) <= 2.0);
    // Odd m only: every inner sum over a full dyadic block cancels.
    for (unsigned mu = 1; mu <= 6; ++mu) {
        double odd_total = 0.0;
        const DyadicRange M(mu), Nr(9);
        for (std::uint64_t m = M.lo(); m < M.hi(); m += 1) {
            if (m % 2 == 0) continue;
            Complex inner = 0.0;
            for (std::uint64_t n = Nr.lo(); n < Nr.hi(); ++n) inner += alternating(m * n);
            odd_total += std::abs(inner);
        }
        CHECK(odd_total <= double(M.size()));
    }

    const double X = std::pow(2.0, 20);
    const double value = type_i_sum(thue_morse, DyadicRange(1), DyadicRange(20));
    CHECK(value <= std::pow(X, 19.0 / 20.0) * std::pow(X, 0.02));
}

TEST_CASE("Type II sums") {
    const auto one = [](std::uint64_t) { return Complex(1.0); };
    const DyadicRange M(5), Nr(7);
    const std::vector<Complex> a(M.size(), 1.0), b(Nr.size(), 1.0);
    CHECK(type_ii_sum(one, a, b, M, Nr) == Complex(16.0 * 64.0));
    CHECK_THROWS_AS(type_ii_sum(one, std::vector<Complex>(M.size(), 2.0), b, M, Nr), DomainError);
    CHECK_THROWS_AS(type_ii_sum(one, b, b, M, Nr), DomainError);

    // Rank-one witness: f(mn) = g(m) g(n) for g(n) = n^{i tau}.
    const double tau = 3.7;
    auto g = [tau](std::uint64_t n) { return std::polar(1.0, tau * std::log(double(n))); };
    std::vector<Complex> ga(M.size()), gb(Nr.size());
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] = std::conj(g(M.lo() + i));
    for (std::size_t j = 0; j < gb.size(); ++j) gb[j] = std::conj(g(Nr.lo() + j));
    const auto witness = type_ii_sum(g, ga, gb, M, Nr);
    CHECK(std::abs(witness - Complex(double(M.size() * Nr.size()))) < 1e-9 * double(M.size() * Nr.size()));

    // Additive character of small modulus: no cancellation to speak of.
    auto third = [](std::uint64_t n) { return e(double(n % 3) / 3.0); };
    std::vector<Complex> ta(M.size()), tb(Nr.size());
    for (std::size_t i = 0; i < ta.size(); ++i) ta[i] = std::conj(third(M.lo() + i));
    for (std::size_t j = 0; j < tb.size(); ++j) tb[j] = std::conj(third(Nr.lo() + j));
    CHECK(std::abs(type_ii_sum(third, ta, tb, M, Nr)) >= 0.1 * double(M.size() * Nr.size()));

    // Digit signs against random signs.
    std::mt19937_64 rng(0);
    const DyadicRange D(10);
    std::vector<Complex> ra(D.size()), rb(D.size());
    for (auto& z : ra) z = rng() & 1 ? 1.0 : -1.0;
    for (auto& z : rb) z = rng() & 1 ? 1.0 : -1.0;
    CHECK(std::abs(type_ii_sum(thue_morse, ra, rb, D, D)) <= 0.05 * double(D.size() * D.size()));
}

TEST_CASE("van der Corput inequality") {
    for (std::uint64_t N : {1u, 7u, 50u}) {
        const std::vector<Complex> a(N, 1.0);
        const auto sides = vdc_check(a, N);
        double closed = 0.0;
        for (std::int64_t h = -static_cast<std::int64_t>(N); h <= static_cast<std::int64_t>(N); ++h)
            closed += (1.0 - std::abs(double(h)) / N) * (double(N) - std::abs(double(h)));
        CHECK(sides.lhs == doctest::Approx(double(N * N)));
        CHECK(sides.rhs == doctest::Approx(2.0 * closed));
        CHECK(sides.lhs <= sides.rhs);
    }
    std::vector<Complex> spike(20, 0.0);
    spike[0] = 1.0;
    const auto sp = vdc_check(spike, 5);
    CHECK(sp.lhs == 1.0);
    CHECK(sp.rhs == doctest::Approx(25.0 / 5.0));

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto N = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
        const auto H = std::uniform_int_distribution<std::uint64_t>(1, 80)(rng);
        std::vector<Complex> a(N);
        for (auto& z : a)
            z = std::polar(std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                           std::uniform_real_distribution<double>(0.0, 6.3)(rng));
        const auto sides = vdc_check(a, H);
        REQUIRE(sides.lhs <= sides.rhs * (1.0 + 1e-12) + 1e-12);
    }
    CHECK_THROWS_AS(vdc_check(spike, 0), DomainError);
}

TEST_CASE("Vinogradov min sums") {
    const auto trivial = min_q_sum(1, 1, 0.0, 17, 40);
    CHECK(trivial.sum == 41.0 * 17.0);
    CHECK_THROWS_AS(min_q_sum(2, 4, 0.0, 10, 10), DomainError);

    for (std::uint64_t R : {100u, 1000u}) {
        const std::uint64_t Q = 50;
        const auto out = min_q_sum(1, R, 0.0, Q, R);
        CHECK(out.sum <= 8.0 * (double(Q) + double(R) * std::log(double(R))));
    }

    // Literal evaluation in floating point.
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const auto q = std::uniform_int_distribution<std::uint64_t>(1, 500)(rng);
        std::int64_t a = std::uniform_int_distribution<std::int64_t>(-1000, 1000)(rng);
        while (std::gcd(a, static_cast<std::int64_t>(q)) != 1) ++a;
        const double beta = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        const auto Q = std::uniform_int_distribution<std::uint64_t>(1, 100)(rng);
        const auto R = std::uniform_int_distribution<std::uint64_t>(0, 300)(rng);
        double direct = 0.0;
        for (std::uint64_t x = 0; x <= R; ++x) {
            const double d = circle_norm(double(a) * double(x) / double(q) + beta);
            direct += d == 0.0 ? double(Q) : std::min(double(Q), 1.0 / d);
        }
        CHECK(min_q_sum(a, q, beta, Q, R).sum == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("Dirichlet approximation") {
    const auto third = dirichlet_approx(1.0 / 3.0, 10);
    CHECK(third.a == 1);
    CHECK(third.q == 3);
    CHECK(third.error < 1e-15);
    const auto root2 = dirichlet_approx(std::numbers::sqrt2, 10);
    CHECK(root2.a == 7);
    CHECK(root2.q == 5);
    CHECK(root2.error == doctest::Approx(std::abs(std::numbers::sqrt2 - 1.4)));
    CHECK(root2.error <= 1.0 / 50.0);
    const auto zero = dirichlet_approx(0.0, 5);
    CHECK(zero.a == 0);
    CHECK(zero.q == 1);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = std::uniform_real_distribution<double>(-50.0, 50.0)(rng);
        const auto N = std::uniform_int_distribution<std::uint64_t>(1, 100'000)(rng);
        const auto r = dirichlet_approx(alpha, N);
        REQUIRE(r.q >= 1);
        REQUIRE(r.q <= N);
        REQUIRE(std::gcd(r.a, static_cast<std::int64_t>(r.q)) == 1);
        REQUIRE(std::abs(alpha - double(r.a) / double(r.q)) <= 1.0 / (double(r.q) * double(N)) + 1e-15);
    }
}

TEST_CASE("equidistribution lemma") {
    // Multiples of 5 make up a fifth of [1, N], so delta2 must not exceed 1/5.
    const std::uint64_t N = 10'000;
    CHECK(equidist_find_q(0.2, N, 0.001, 0.19) == std::optional<std::uint64_t>(5));
    CHECK_FALSE(equidist_find_q(0.2, N, 0.001, 0.5).has_value());

    const double delta1 = 0.005, delta2 = 0.19;
    const double alpha = 0.2 + delta1 / (5.0 * N);
    const auto q = equidist_find_q(alpha, N, delta1, delta2);
    REQUIRE(q.has_value());
    CHECK(*q <= 16);
    CHECK(circle_norm(alpha * double(*q)) <= 4 * delta1 / (delta2 * N));

    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK_FALSE(equidist_find_q(golden, N, 0.01, 0.5).has_value());
    CHECK_FALSE(equidist_find_q(golden, N, 0.001, 0.05).has_value());

    CHECK_THROWS_AS(equidist_find_q(0.2, N, 0.1, 0.5), DomainError);
    CHECK_THROWS_AS(equidist_find_q(0.2, 10, 0.001, 0.5), DomainError);
}
