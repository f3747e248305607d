#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "primelab/arith.hpp"

namespace primelab::digits {

// Binary digit sum s(n), or s_k(n) over the k lowest bits.
unsigned digit_sum(std::uint64_t n);
unsigned digit_sum(std::uint64_t n, unsigned k);

// (-1)^{s(n)} and (-1)^{s_k(n)}.
int digit_sign(std::uint64_t n);
int digit_sign(std::uint64_t n, unsigned k);

inline constexpr unsigned kMaxSpectrumBits = 26;

enum class SpectrumMethod { ProductFormula, Direct };

// hat f_k(r) = E_{x mod 2^k} f_k(x) e(-r x / 2^k), r = 0 .. 2^k - 1.
struct DigitSpectrum {
    unsigned k = 0;
    std::vector<std::complex<double>> values;
    SpectrumMethod method = SpectrumMethod::ProductFormula;

    std::size_t size() const { return values.size(); }
    double magnitude(std::size_t r) const { return std::abs(values[r]); }
};

// ProductFormula: 2^{-k} prod_j (1 - e(-2^j r / 2^k)), one factor per r via
// hat f_k(r) = (1 - e(-r/2^k))/2 * hat f_{k-1}(r mod 2^{k-1}).
// Direct: FFT of f_k divided by 2^k. Throws DomainError unless 1 <= k <= 26.
DigitSpectrum spectrum(unsigned k, SpectrumMethod method = SpectrumMethod::ProductFormula);

// One coefficient, multiplying out all k factors.
std::complex<double> spectrum_value(unsigned k, std::uint64_t r);

// S(a) = sum over r = a mod 2^{k'} of |hat f_k(r)|.
double progression_l1(const DigitSpectrum& spec, unsigned k_prime, std::uint64_t a);

// S(a) for every a in [0, 2^{k'}).
std::vector<double> progression_l1_all(const DigitSpectrum& spec, unsigned k_prime);

// sum_r |hat f_k(r)|.
double spectrum_l1(const DigitSpectrum& spec);

// E_{n <= X} Lambda(n) (-1)^{s(n)}.
double prime_digit_correlation(const FactorSieve& sieve, std::uint64_t X);

struct OmegaWeight {
    double value = 0.0;
    double bound = 0.0;  // 2^{-mu} + 2^{k-t-mu-nu} + 2^{t-k}
    unsigned t = 0;      // 2-adic valuation of r + s mod 2^k, k when it vanishes
};

inline constexpr std::uint64_t kOmegaBudget = 100'000'000;

// 2^{-mu-nu-rho} sum_{2^{nu-1} <= n < 2^nu} sum_{1 <= |h| <= 2^rho}
//   min(2^mu, ||(r(n+h) + s n)/2^k||^{-1}), with ||0||^{-1} = infinity.
// Throws DomainError when nu = 0, k > 62 or 2^{nu+rho} exceeds the budget.
OmegaWeight omega_weight(unsigned mu, unsigned nu, unsigned rho, unsigned k, std::uint64_t r,
                         std::uint64_t s);

}  // namespace primelab::digits
