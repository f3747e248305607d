#include "primelab/gowers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fftw3.h>
#include <numeric>

#include "primelab/error.hpp"

namespace primelab::gowers {

namespace {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

std::uint64_t modulus_cap(unsigned k) {
    switch (k) {
        case 1: return kMaxModulusU2;
        case 2: return kMaxModulusU2Direct;
        case 3: return kMaxModulusU3;
        default: return kMaxModulusU4;
    }
}

// E_{h_1..h_depth} |E_x Delta_h g(x)|^2 with Delta_h g(x) = g(x + h) conj g(x).
double derivative_energy(const std::vector<Complex>& g, unsigned depth) {
    const std::size_t N = g.size();
    if (depth == 0) {
        Complex mean = 0.0;
        for (auto z : g) mean += z;
        mean /= double(N);
        return std::norm(mean);
    }
    std::vector<Complex> next(N);
    double acc = 0.0;
    for (std::size_t h = 0; h < N; ++h) {
        for (std::size_t x = 0; x < N; ++x) next[x] = g[(x + h) % N] * std::conj(g[x]);
        acc += derivative_energy(next, depth - 1);
    }
    return acc / double(N);
}

double literal_power(const FiniteFunction& f, unsigned k) {
    const std::uint64_t N = f.modulus();
    const auto& v = f.values();
    std::vector<std::uint64_t> h(k, 0);
    Complex total = 0.0;
    while (true) {
        for (std::uint64_t x = 0; x < N; ++x) {
            Complex prod = 1.0;
            for (std::uint32_t omega = 0; omega < (1u << k); ++omega) {
                std::uint64_t point = x;
                for (unsigned i = 0; i < k; ++i)
                    if (omega >> i & 1) point += h[i];
                const Complex val = v[point % N];
                prod *= std::popcount(omega) % 2 ? std::conj(val) : val;
            }
            total += prod;
        }
        unsigned i = 0;
        while (i < k && ++h[i] == N) h[i++] = 0;
        if (i == k) break;
    }
    return total.real() / std::pow(double(N), double(k + 1));
}

}  // namespace

FiniteFunction::FiniteFunction(std::vector<Complex> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("FiniteFunction: modulus must be >= 1");
}

FiniteFunction FiniteFunction::from(std::uint64_t N, const std::function<Complex(std::uint64_t)>& f) {
    std::vector<Complex> v(N);
    for (std::uint64_t n = 0; n < N; ++n) v[n] = f(n);
    return FiniteFunction(std::move(v));
}

bool FiniteFunction::is_bounded() const {
    return std::all_of(values_.begin(), values_.end(), [](Complex z) { return std::abs(z) <= 1.0 + 1e-12; });
}

void FiniteFunction::require_bounded() const {
    if (!is_bounded()) throw DomainError("FiniteFunction: values must satisfy |f| <= 1");
}

FiniteFunction transform(const FiniteFunction& f) {
    const std::uint64_t N = f.modulus();
    if (N > kMaxModulusU2) throw DomainError("transform: modulus exceeds 2^20");
    auto* in = fftw_alloc_complex(N);
    auto* out = fftw_alloc_complex(N);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(N), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    for (std::uint64_t n = 0; n < N; ++n) {
        in[n][0] = f.values()[n].real();
        in[n][1] = f.values()[n].imag();
    }
    fftw_execute(plan);
    std::vector<Complex> v(N);
    for (std::uint64_t r = 0; r < N; ++r) v[r] = Complex(out[r][0], out[r][1]) / double(N);
    fftw_destroy_plan(plan);
    fftw_free(out);
    fftw_free(in);
    return FiniteFunction(std::move(v));
}

double u_norm(const FiniteFunction& f, unsigned k, NormMethod method) {
    if (k < 1 || k > 4) throw DomainError("u_norm: k must lie in {1, 2, 3, 4}");
    const std::uint64_t N = f.modulus();
    if (method == NormMethod::Auto) method = k == 2 ? NormMethod::Fourier : NormMethod::Derivative;

    double power = 0.0;
    switch (method) {
        case NormMethod::Fourier: {
            if (k != 2) throw DomainError("u_norm: Fourier method needs k = 2");
            const auto spec = transform(f);
            for (auto z : spec.values()) power += std::norm(z) * std::norm(z);
            break;
        }
        case NormMethod::Derivative:
            if (N > modulus_cap(k)) throw DomainError("u_norm: modulus exceeds the cap for this k");
            power = derivative_energy(f.values(), k - 1);
            break;
        case NormMethod::Literal:
            if (std::pow(double(N), double(k + 1)) * double(1u << k) > kLiteralBudget)
                throw DomainError("u_norm: literal average exceeds budget");
            power = literal_power(f, k);
            break;
        case NormMethod::Auto: break;
    }
    return std::pow(std::max(power, 0.0), 1.0 / double(1u << k));
}

LinearBias u2_inverse(const FiniteFunction& f) {
    f.require_bounded();
    const auto spec = transform(f);
    LinearBias out;
    out.correlation = -1.0;
    for (std::uint64_t r = 0; r < spec.modulus(); ++r) {
        const double m = std::abs(spec.values()[r]);
        if (m > out.correlation) {
            out.correlation = m;
            out.r = r;
        }
    }
    return out;
}

GvnSides gvn_check(const dickson::LinearFormSystem& system, const std::vector<FiniteFunction>& fs,
                   unsigned s) {
    if (fs.size() != system.forms()) throw DomainError("gvn_check: need one function per form");
    const std::uint64_t N = fs.front().modulus();
    if (!is_prime(N)) throw DomainError("gvn_check: modulus must be prime");
    for (const auto& f : fs) {
        if (f.modulus() != N) throw DomainError("gvn_check: functions must share a modulus");
        f.require_bounded();
    }
    if (s + 1 > 4) throw DomainError("gvn_check: s must be <= 3");
    const auto cx = dickson::complexity(system);
    if (!cx.is_finite() || cx.value() > s)
        throw DomainError("gvn_check: complexity " + cx.to_string() + " exceeds s = " + std::to_string(s));
    const std::size_t d = system.variables(), t = system.forms();
    if (std::pow(double(N), double(d)) > kGvnBudget) throw DomainError("gvn_check: N^d exceeds budget");

    // Coefficients reduced mod N; values of each form updated along the odometer.
    const auto Ni = static_cast<std::int64_t>(N);
    std::vector<std::int64_t> step(t * d), value(t);
    for (std::size_t i = 0; i < t; ++i) {
        value[i] = ((system.offsets()[i] % Ni) + Ni) % Ni;
        for (std::size_t j = 0; j < d; ++j)
            step[i * d + j] = ((system.coefficients()[i][j] % Ni) + Ni) % Ni;
    }
    std::vector<std::uint64_t> n(d, 0);
    Complex total = 0.0;
    while (true) {
        Complex prod = 1.0;
        for (std::size_t i = 0; i < t; ++i) prod *= fs[i].values()[value[i]];
        total += prod;
        std::size_t j = 0;
        for (; j < d; ++j) {
            for (std::size_t i = 0; i < t; ++i) value[i] = (value[i] + step[i * d + j]) % Ni;
            if (++n[j] < N) break;
            n[j] = 0;
        }
        if (j == d) break;
    }

    GvnSides out;
    out.lhs = std::abs(total) / std::pow(double(N), double(d));
    out.rhs = 1e300;
    for (const auto& f : fs) out.rhs = std::min(out.rhs, u_norm(f, s + 1));
    if (out.lhs > out.rhs + 1e-9)
        throw ConsistencyError("gvn_check: average exceeds the smallest uniformity norm");
    return out;
}

WTrick w_tricked_lambda(const FactorSieve& sieve, std::uint64_t b, std::uint64_t W, std::uint64_t M) {
    if (W < 1) throw DomainError("w_tricked_lambda: W must be >= 1");
    if (std::gcd(b, W) != 1) throw DomainError("w_tricked_lambda: gcd(b, W) must be 1");
    if (M < 1) throw DomainError("w_tricked_lambda: M must be >= 1");
    if (double(W) * double(M) + double(b) > double(sieve.limit()))
        throw DomainError("w_tricked_lambda: W M + b exceeds sieve limit");
    const double scale = double(sieve.totient(W)) / double(W);
    WTrick out;
    out.values.resize(M);
    double acc = 0.0;
    for (std::uint64_t n = 1; n <= M; ++n) {
        out.values[n - 1] = scale * von_mangoldt(sieve, W * n + b);
        acc += out.values[n - 1];
    }
    out.mean = acc / double(M);
    return out;
}

std::uint64_t default_w_modulus(std::uint64_t N) {
    const double w = std::max(2.0, N > 2 ? std::log(std::log(double(N))) : 0.0);
    std::uint64_t W = 1;
    for (std::uint64_t p : {2u, 3u, 5u})
        if (double(p) <= w || p == 2) W *= p;
    return W;
}

HeisenbergElement operator*(const HeisenbergElement& x, const HeisenbergElement& y) {
    return {x.a + y.a, x.b + y.b + x.a * y.c, x.c + y.c};
}

HeisenbergOrbit heisenberg_orbit(double alpha, double beta, double gamma, std::uint64_t n) {
    const double nd = double(n);
    HeisenbergOrbit out;
    out.power = {nd * alpha, nd * beta + 0.5 * nd * (nd - 1.0) * alpha * gamma, nd * gamma};

    // (a, b, c)(p, r, q) = (a + p, b + r + a q, c + q) with p, q, r integers.
    auto shift = [](double x) { return -std::floor(x + 0.5); };
    const double p = shift(out.power.a), q = shift(out.power.c);
    const double r = shift(out.power.b + out.power.a * q);
    out.lattice = {p, r, q};
    out.reduced = out.power * out.lattice;
    return out;
}

}  // namespace primelab::gowers
