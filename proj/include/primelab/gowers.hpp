#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "primelab/arith.hpp"
#include "primelab/dickson.hpp"

namespace primelab::gowers {

using Complex = std::complex<double>;

// A function Z/NZ -> C, stored as its N values.
class FiniteFunction {
public:
    explicit FiniteFunction(std::vector<Complex> values);
    static FiniteFunction from(std::uint64_t N, const std::function<Complex(std::uint64_t)>& f);

    std::uint64_t modulus() const { return values_.size(); }
    const std::vector<Complex>& values() const { return values_; }
    Complex operator()(std::uint64_t n) const { return values_[n % values_.size()]; }

    // Every |value| <= 1 + 1e-12.
    bool is_bounded() const;
    // Throws DomainError unless is_bounded().
    void require_bounded() const;

private:
    std::vector<Complex> values_;
};

// hat f(r) = E_n f(n) e(-rn/N), via FFTW.
FiniteFunction transform(const FiniteFunction& f);

// Derivative: E_{h_1..h_{k-1}} |E_x Delta_{h_1..h_{k-1}} f(x)|^2, cost N^k.
// Literal: the 2^k-fold product averaged over x, h_1..h_k, cost 2^k N^{k+1}.
// Fourier: (sum_r |hat f(r)|^4)^{1/4}, k = 2 only.
enum class NormMethod { Auto, Derivative, Literal, Fourier };

inline constexpr std::uint64_t kMaxModulusU2 = 1u << 20;
inline constexpr std::uint64_t kMaxModulusU2Direct = 4096;
inline constexpr std::uint64_t kMaxModulusU3 = 512;
inline constexpr std::uint64_t kMaxModulusU4 = 128;
inline constexpr double kLiteralBudget = 1e9;

// ||f||_{U^k} for k in {1, 2, 3, 4}; Auto uses Fourier for k = 2 and Derivative otherwise.
// Throws DomainError beyond the per-k modulus caps.
double u_norm(const FiniteFunction& f, unsigned k, NormMethod method = NormMethod::Auto);

struct LinearBias {
    std::uint64_t r = 0;
    double correlation = 0.0;  // |hat f(r)|
};

// argmax_r |hat f(r)|, least r on ties. f must be bounded.
LinearBias u2_inverse(const FiniteFunction& f);

struct GvnSides {
    double lhs = 0.0;  // |E_{n in (Z/N)^d} prod_i f_i(psi_i(n))|
    double rhs = 0.0;  // min_i ||f_i||_{U^{s+1}}
};

inline constexpr double kGvnBudget = 1e8;

// Throws DomainError unless N is prime, the f_i are bounded with common modulus N,
// complexity(system) <= s and N^d <= 1e8; ConsistencyError if lhs > rhs + 1e-9.
GvnSides gvn_check(const dickson::LinearFormSystem& system, const std::vector<FiniteFunction>& fs,
                   unsigned s);

struct WTrick {
    std::vector<double> values;  // (phi(W)/W) Lambda(W n + b), n = 1 .. M
    double mean = 0.0;
};

// Throws DomainError unless gcd(b, W) = 1 and W M + b <= sieve limit.
WTrick w_tricked_lambda(const FactorSieve& sieve, std::uint64_t b, std::uint64_t W, std::uint64_t M);

// Product of the primes up to w(N) = largest of {2, 3, 5} not exceeding max(2, log log N).
std::uint64_t default_w_modulus(std::uint64_t N);

// Upper unitriangular [[1, a, b], [0, 1, c], [0, 0, 1]].
struct HeisenbergElement {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

HeisenbergElement operator*(const HeisenbergElement& x, const HeisenbergElement& y);

struct HeisenbergOrbit {
    HeisenbergElement power;    // g^n
    HeisenbergElement lattice;  // integer element with power * lattice = reduced
    HeisenbergElement reduced;  // coordinates in [-1/2, 1/2)^3
};

// g^n for g = (alpha, beta, gamma): (n alpha, n beta + n(n-1)/2 alpha gamma, n gamma),
// reduced by right multiplication with an integer unitriangular matrix.
HeisenbergOrbit heisenberg_orbit(double alpha, double beta, double gamma, std::uint64_t n);

}  // namespace primelab::gowers
