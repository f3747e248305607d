#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "primelab/arith.hpp"
#include "primelab/tuple.hpp"

namespace primelab::gpy {

// Default truncation of Euler products over primes.
inline constexpr std::uint64_t kDefaultEulerCutoff = 100'000;

// True iff for every prime p <= k the k offsets miss some residue class mod p.
bool is_admissible(const PrimeTuple& tuple);

// Range [N, 2N), tuple size k, extra power l, and R = floor(N^gamma).
struct GpyConfig {
    std::uint64_t N = 0;
    unsigned k = 1;
    unsigned l = 0;
    double gamma = 0.25;

    // Throws DomainError unless k >= 1 and 0 < gamma < 1/2.
    void validate() const;
    double truncation() const;
};

struct GpyDensities {
    double R = 0.0;
    double Q1 = 0.0;
    std::vector<double> Q2;   // one entry per offset h_i
    std::vector<double> rho;  // Q2[i] / Q1
};

// mu_n = Lambda_{k+l,R}(prod(n + h_i))^2 over N <= n < 2N;
// Q1 = E mu_n, Q2[i] = E Lambda'(n + h_i) mu_n / log(3N).
// Throws DegenerateWeightsError when Q1 == 0.
GpyDensities gpy_densities(const FactorSieve& sieve, const GpyConfig& config,
                           const PrimeTuple& tuple);

// Asymptotic rho^(i) for each i: 2/(k+2l+1) * (2l+1)/(l+1) * log R/log N,
// with log R/log N = gamma. For large k and l = o(k) this is about 4 gamma/k.
double rho_predicted(const GpyConfig& config);

// Asymptotic sum_i rho^(i) = k * rho_predicted: 2k/(k+2l+1) * (2l+1)/(l+1) * gamma.
double rho_sum_predicted(const GpyConfig& config);

enum class PairEnumeration { Symmetric, Full };

struct MainTermSum {
    double sum = 0.0;
    // sum / (2 log R * prod_{3<=p<=cutoff} (1 - 1/(p-1)^2)); empty when R <= 1.
    // The factor 2 is the local factor at p = 2 (d, d' odd).
    std::optional<double> asymptotic_ratio;
    std::uint64_t euler_cutoff = 0;
};

// sum over odd d, d' <= R of mu(d)mu(d')/phi([d,d']) log(R/d) log(R/d').
// Symmetric evaluates d <= d' and doubles the off-diagonal.
MainTermSum main_term_sum(const FactorSieve& sieve, double R,
                          std::uint64_t euler_cutoff = kDefaultEulerCutoff,
                          PairEnumeration mode = PairEnumeration::Symmetric);

// prod_{3 <= p <= cutoff} (1 - 1/(p-1)^2).
double odd_twin_product(std::uint64_t cutoff);

struct BvDiscrepancy {
    double discrepancy = 0.0;   // sum_{q<=Q} max_{(a,q)=1} |psi(N;a,q) - 1/phi(q)|
    double trivial_bound = 0.0; // sum_{q<=Q} 1/phi(q)
};

// psi(N;a,q) = (1/N) sum_{n <= N, n = a mod q} Lambda(n).
BvDiscrepancy bv_discrepancy(const FactorSieve& sieve, std::uint64_t N, std::uint64_t Q);

struct BrunTitchmarsh {
    double majorant = 0.0;       // E_{x<n<=x+y} (sum_{d|n, d<=R} lambda_d)^2
    double prime_density = 0.0;  // (pi(x+y) - pi(x)) / y
    double lower_bound = 0.0;    // (pi(x+y) - pi(x) - pi(R)) / y
};

// Majorant density with lambda_d = mu(d) log(R/d) / log R.
BrunTitchmarsh brun_titchmarsh_density(const FactorSieve& sieve, std::uint64_t x,
                                       std::uint64_t y, double R);

}  // namespace primelab::gpy
