#include "primelab/digits.hpp"

#include <bit>
#include <cmath>
#include <fftw3.h>
#include <numbers>

#include "primelab/error.hpp"

namespace primelab::digits {

namespace {

// e(-x) for x = num / 2^bits, reduced exactly before the trig call.
std::complex<double> unit_root(std::uint64_t num, unsigned bits) {
    const std::uint64_t mask = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    const double x = std::ldexp(double(num & mask), -static_cast<int>(bits));
    const double angle = -2.0 * std::numbers::pi * x;
    return {std::cos(angle), std::sin(angle)};
}

void check_bits(unsigned k) {
    if (k < 1 || k > kMaxSpectrumBits)
        throw DomainError("spectrum: k must lie in [1, " + std::to_string(kMaxSpectrumBits) + "]");
}

}  // namespace

unsigned digit_sum(std::uint64_t n) { return static_cast<unsigned>(std::popcount(n)); }

unsigned digit_sum(std::uint64_t n, unsigned k) {
    if (k >= 64) return digit_sum(n);
    return digit_sum(n & ((std::uint64_t{1} << k) - 1));
}

int digit_sign(std::uint64_t n) { return digit_sum(n) % 2 ? -1 : 1; }
int digit_sign(std::uint64_t n, unsigned k) { return digit_sum(n, k) % 2 ? -1 : 1; }

std::complex<double> spectrum_value(unsigned k, std::uint64_t r) {
    check_bits(k);
    std::complex<double> prod = std::ldexp(1.0, -static_cast<int>(k));
    for (unsigned j = 0; j < k; ++j) prod *= 1.0 - unit_root(r << j, k);
    return prod;
}

DigitSpectrum spectrum(unsigned k, SpectrumMethod method) {
    check_bits(k);
    const std::size_t size = std::size_t{1} << k;
    DigitSpectrum out;
    out.k = k;
    out.method = method;

    if (method == SpectrumMethod::ProductFormula) {
        out.values.resize(size);
        out.values[0] = 0.0;
        out.values[1] = 1.0;  // k = 1: (1 - e(-1/2)) / 2
        for (unsigned level = 2; level <= k; ++level) {
            const std::size_t half = std::size_t{1} << (level - 1);
            for (std::size_t r = 2 * half; r-- > 0;)
                out.values[r] = 0.5 * (1.0 - unit_root(r, level)) * out.values[r % half];
        }
        return out;
    }

    const auto n = static_cast<int>(size);
    double* in = fftw_alloc_real(size);
    fftw_complex* freq = fftw_alloc_complex(size / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in, freq, FFTW_ESTIMATE);
    for (std::size_t x = 0; x < size; ++x) in[x] = digit_sign(x, k);
    fftw_execute(plan);
    const double scale = 1.0 / double(size);
    out.values.resize(size);
    for (std::size_t r = 0; r <= size / 2; ++r) {
        out.values[r] = {freq[r][0] * scale, freq[r][1] * scale};
        if (r > 0 && r < size / 2) out.values[size - r] = std::conj(out.values[r]);
    }
    fftw_destroy_plan(plan);
    fftw_free(freq);
    fftw_free(in);
    return out;
}

double progression_l1(const DigitSpectrum& spec, unsigned k_prime, std::uint64_t a) {
    if (k_prime > spec.k) throw DomainError("progression_l1: k' exceeds k");
    const std::uint64_t step = std::uint64_t{1} << k_prime;
    if (a >= step) throw DomainError("progression_l1: residue out of range");
    double acc = 0.0;
    for (std::uint64_t r = a; r < spec.size(); r += step) acc += spec.magnitude(r);
    return acc;
}

std::vector<double> progression_l1_all(const DigitSpectrum& spec, unsigned k_prime) {
    if (k_prime > spec.k) throw DomainError("progression_l1_all: k' exceeds k");
    const std::uint64_t step = std::uint64_t{1} << k_prime;
    std::vector<double> out(step, 0.0);
    for (std::uint64_t r = 0; r < spec.size(); ++r) out[r & (step - 1)] += spec.magnitude(r);
    return out;
}

double spectrum_l1(const DigitSpectrum& spec) { return progression_l1(spec, 0, 0); }

double prime_digit_correlation(const FactorSieve& sieve, std::uint64_t X) {
    if (X < 1) throw DomainError("prime_digit_correlation: X must be >= 1");
    if (X > sieve.limit()) throw DomainError("prime_digit_correlation: X exceeds sieve limit");
    double acc = 0.0;
    for (std::uint64_t n = 2; n <= X; ++n) {
        const double lam = von_mangoldt(sieve, n);
        if (lam != 0.0) acc += digit_sign(n) * lam;
    }
    return acc / double(X);
}

OmegaWeight omega_weight(unsigned mu, unsigned nu, unsigned rho, unsigned k, std::uint64_t r,
                         std::uint64_t s) {
    if (nu < 1) throw DomainError("omega_weight: nu must be >= 1");
    if (k < 1 || k > 62) throw DomainError("omega_weight: k must lie in [1, 62]");
    if (mu > 62) throw DomainError("omega_weight: mu must be <= 62");
    if (nu + rho > 40 || std::ldexp(1.0, static_cast<int>(nu + rho)) > double(kOmegaBudget))
        throw DomainError("omega_weight: 2^(nu+rho) exceeds enumeration budget");

    const std::uint64_t modulus = std::uint64_t{1} << k, mask = modulus - 1;
    r &= mask;
    s &= mask;
    const double cap = std::ldexp(1.0, static_cast<int>(mu));
    const auto H = static_cast<std::int64_t>(std::int64_t{1} << rho);

    double acc = 0.0;
    const std::uint64_t lo = std::uint64_t{1} << (nu - 1), hi = std::uint64_t{1} << nu;
    for (std::uint64_t n = lo; n < hi; ++n) {
        const std::uint64_t base = (r * n + s * n) & mask;  // r n + s n mod 2^k
        for (std::int64_t h = -H; h <= H; ++h) {
            if (h == 0) continue;
            const std::uint64_t shift = static_cast<std::uint64_t>(h) * r;  // wraps mod 2^64
            const std::uint64_t m = (base + shift) & mask;
            const std::uint64_t dist = std::min(m, modulus - m);
            acc += dist == 0 ? cap : std::min(cap, double(modulus) / double(dist));
        }
    }

    OmegaWeight out;
    out.value = acc * std::ldexp(1.0, -static_cast<int>(mu + nu + rho));
    const std::uint64_t sum = (r + s) & mask;
    out.t = sum == 0 ? k : static_cast<unsigned>(std::countr_zero(sum));
    const int ki = static_cast<int>(k), ti = static_cast<int>(out.t), mi = static_cast<int>(mu),
              ni = static_cast<int>(nu);
    out.bound = std::ldexp(1.0, -mi) + std::ldexp(1.0, ki - ti - mi - ni) + std::ldexp(1.0, ti - ki);
    return out;
}

}  // namespace primelab::digits
