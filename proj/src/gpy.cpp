#include "primelab/gpy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "primelab/error.hpp"

namespace primelab::gpy {

bool is_admissible(const PrimeTuple& tuple) {
    const std::uint64_t k = tuple.size();
    for (std::uint64_t p : primes_up_to(k))
        if (tuple.residue_count(p) == p) return false;
    return true;
}

void GpyConfig::validate() const {
    if (k < 1) throw DomainError("GpyConfig: k must be >= 1");
    if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("GpyConfig: gamma must lie in (0, 1/2)");
    if (N < 2) throw DomainError("GpyConfig: N must be >= 2");
}

double GpyConfig::truncation() const { return std::floor(std::pow(double(N), gamma)); }

GpyDensities gpy_densities(const FactorSieve& sieve, const GpyConfig& config,
                           const PrimeTuple& tuple) {
    config.validate();
    if (tuple.size() != config.k) throw DomainError("gpy_densities: tuple size differs from k");
    if (!is_admissible(tuple)) throw DomainError("gpy_densities: tuple is not admissible");
    const std::uint64_t N = config.N;
    if (2 * N + static_cast<std::uint64_t>(tuple.max_offset()) > sieve.limit())
        throw DomainError("gpy_densities: 2N + max offset exceeds sieve limit");

    GpyDensities out;
    out.R = config.truncation();
    const TruncationParams params{config.k + config.l, out.R};
    const auto weights = batch_polynomial_weights(sieve, N, tuple, params);

    double q1 = 0.0;
    for (double w : weights) q1 += w;
    out.Q1 = q1 / double(N);
    if (!(out.Q1 > 0.0))
        throw DegenerateWeightsError("gpy_densities: Q1 = 0 (R = " + std::to_string(out.R) +
                                     " too small for N = " + std::to_string(N) + ")");

    const double log3n = std::log(3.0 * double(N));
    for (std::int64_t h : tuple.offsets()) {
        double acc = 0.0;
        for (std::uint64_t n = N; n < 2 * N; ++n) {
            const double w = weights[n - N];
            if (w == 0.0) continue;
            acc += von_mangoldt(sieve, n + h, MangoldtSupport::PrimesOnly) * w;
        }
        const double q2 = acc / double(N) / log3n;
        out.Q2.push_back(q2);
        out.rho.push_back(q2 / out.Q1);
    }
    return out;
}

double rho_predicted(const GpyConfig& config) {
    const double k = config.k, l = config.l;
    return 2.0 / (k + 2.0 * l + 1.0) * (2.0 * l + 1.0) / (l + 1.0) * config.gamma;
}

double rho_sum_predicted(const GpyConfig& config) { return config.k * rho_predicted(config); }

double odd_twin_product(std::uint64_t cutoff) {
    double prod = 1.0;
    for (std::uint64_t p : primes_up_to(cutoff)) {
        if (p < 3) continue;
        const double q = double(p - 1);
        prod *= 1.0 - 1.0 / (q * q);
    }
    return prod;
}

MainTermSum main_term_sum(const FactorSieve& sieve, double R, std::uint64_t euler_cutoff,
                          PairEnumeration mode) {
    if (!(R >= 1.0)) throw DomainError("main_term_sum: R must be >= 1");
    const auto rmax = static_cast<std::uint64_t>(std::floor(R));
    if (rmax > sieve.limit()) throw DomainError("main_term_sum: sieve does not cover R");

    struct Entry {
        std::uint64_t d;
        double weight;  // mu(d) log(R/d)
        double phi;
    };
    std::vector<Entry> odd;
    std::vector<double> phi_table(rmax + 1, 0.0);
    for (std::uint64_t d = 1; d <= rmax; ++d) {
        phi_table[d] = double(sieve.totient(d));
        if (d % 2 == 0) continue;
        const int mu = sieve.mobius(d);
        if (mu == 0) continue;
        odd.push_back({d, mu * std::log(R / double(d)), phi_table[d]});
    }

    // phi([d,d']) = phi(d) phi(d') / phi(gcd) for squarefree d, d'.
    auto pair_term = [&](const Entry& a, const Entry& b) {
        const std::uint64_t g = std::gcd(a.d, b.d);
        return a.weight * b.weight * phi_table[g] / (a.phi * b.phi);
    };

    double sum = 0.0;
    if (mode == PairEnumeration::Full) {
        for (const auto& a : odd)
            for (const auto& b : odd) sum += pair_term(a, b);
    } else {
        for (std::size_t i = 0; i < odd.size(); ++i) {
            double row = 0.0;
            for (std::size_t j = i + 1; j < odd.size(); ++j) row += pair_term(odd[i], odd[j]);
            sum += pair_term(odd[i], odd[i]) + 2.0 * row;
        }
    }

    MainTermSum out;
    out.sum = sum;
    out.euler_cutoff = euler_cutoff;
    if (R > 1.0) out.asymptotic_ratio = sum / (2.0 * std::log(R) * odd_twin_product(euler_cutoff));
    return out;
}

BvDiscrepancy bv_discrepancy(const FactorSieve& sieve, std::uint64_t N, std::uint64_t Q) {
    if (Q < 1 || Q > N) throw DomainError("bv_discrepancy: need 1 <= Q <= N");
    if (N > sieve.limit()) throw DomainError("bv_discrepancy: N exceeds sieve limit");

    std::vector<std::pair<std::uint64_t, double>> prime_powers;
    for (std::uint64_t n = 2; n <= N; ++n) {
        const double lam = von_mangoldt(sieve, n);
        if (lam != 0.0) prime_powers.emplace_back(n, lam);
    }

    BvDiscrepancy out;
    std::vector<double> class_sum;
    for (std::uint64_t q = 1; q <= Q; ++q) {
        class_sum.assign(q, 0.0);
        for (auto [n, lam] : prime_powers) class_sum[n % q] += lam;
        const double inv_phi = 1.0 / double(sieve.totient(q));
        double worst = 0.0;
        for (std::uint64_t a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            worst = std::max(worst, std::abs(class_sum[a] / double(N) - inv_phi));
        }
        out.discrepancy += worst;
        out.trivial_bound += inv_phi;
    }
    return out;
}

BrunTitchmarsh brun_titchmarsh_density(const FactorSieve& sieve, std::uint64_t x,
                                       std::uint64_t y, double R) {
    if (!(R > 1.0)) throw DomainError("brun_titchmarsh_density: R must exceed 1");
    if (y == 0 || !(R < double(y))) throw DomainError("brun_titchmarsh_density: need R < y");
    if (x + y > sieve.limit()) throw DomainError("brun_titchmarsh_density: x + y exceeds sieve limit");

    const auto rmax = static_cast<std::uint64_t>(std::floor(R));
    const double log_r = std::log(R);
    std::vector<double> partial(y, 0.0);  // index n - x - 1
    for (std::uint64_t d = 1; d <= rmax; ++d) {
        const int mu = sieve.mobius(d);
        if (mu == 0) continue;
        const double lambda = mu * std::log(R / double(d)) / log_r;
        for (std::uint64_t n = (x / d + 1) * d; n <= x + y; n += d) partial[n - x - 1] += lambda;
    }
    double acc = 0.0;
    for (double s : partial) acc += s * s;

    BrunTitchmarsh out;
    out.majorant = acc / double(y);
    const double primes_in = double(sieve.prime_count(x + y) - sieve.prime_count(x));
    out.prime_density = primes_in / double(y);
    out.lower_bound = (primes_in - double(sieve.prime_count(std::min<std::uint64_t>(rmax, x + y)))) /
                      double(y);
    return out;
}

}  // namespace primelab::gpy
