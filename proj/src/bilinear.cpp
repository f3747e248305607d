#include "primelab/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "primelab/error.hpp"

namespace primelab::bilinear {

DyadicRange::DyadicRange(unsigned exponent) : e_(exponent) {
    if (exponent < 1 || exponent > 62) throw DomainError("DyadicRange: exponent must lie in [1, 62]");
}

VaughanTerms vaughan_identity_check(const FactorSieve& sieve, std::uint64_t n, double U) {
    if (n < 1 || n > sieve.limit()) throw DomainError("vaughan_identity_check: n out of range");
    VaughanTerms out;
    const auto divs = sieve.divisors(n);
    for (std::uint64_t b : divs) {
        const double lam = von_mangoldt(sieve, b);
        if (lam == 0.0) continue;
        for (auto [c, mu] : sieve.squarefree_divisors(n / b)) {
            const bool b_small = double(b) < U, c_small = double(c) < U;
            if (b_small && c_small) out.small_small -= lam * mu;
            else if (!b_small && !c_small) out.large_large += lam * mu;
        }
    }
    if (double(n) < U) out.small_n = von_mangoldt(sieve, n);
    for (auto [c, mu] : sieve.squarefree_divisors(n))
        if (double(c) < U) out.divisor_log += mu * std::log(double(n) / double(c));
    return out;
}

VaughanSplit vaughan_split(const FactorSieve& sieve, const ArithmeticFunction& f, std::uint64_t X,
                           std::optional<double> U_opt) {
    if (X < 1) throw DomainError("vaughan_split: X must be >= 1");
    if (X > sieve.limit()) throw DomainError("vaughan_split: X exceeds sieve limit");
    const double U = U_opt.value_or(std::cbrt(double(X)));
    if (!(U >= 1.0)) throw DomainError("vaughan_split: U must be >= 1");

    std::vector<Complex> fv(X + 1);
    std::vector<double> lam(X + 1, 0.0);
    for (std::uint64_t n = 1; n <= X; ++n) {
        fv[n] = f(n);
        if (std::abs(fv[n]) > 1.0 + 1e-12) throw DomainError("vaughan_split: |f(n)| exceeds 1");
        lam[n] = von_mangoldt(sieve, n);
    }
    // Integers below U: c < U iff c <= small_top.
    const auto small_top = static_cast<std::uint64_t>(std::min(std::ceil(U) - 1.0, double(X)));

    VaughanSplit out;
    out.U = U;
    out.X = X;
    double scale = 0.0;
    for (std::uint64_t n = 1; n <= X; ++n) {
        out.total += lam[n] * fv[n];
        scale += lam[n] * std::abs(fv[n]);
    }

    // S1 via w_m on m <= small_top^2.
    const std::uint64_t m_top = std::min<std::uint64_t>(X, small_top * small_top);
    std::vector<double> w(m_top + 1, 0.0);
    for (std::uint64_t b = 2; b <= small_top; ++b) {
        if (lam[b] == 0.0) continue;
        for (std::uint64_t c = 1; c <= small_top && b * c <= m_top; ++c) {
            const int mu = sieve.mobius(c);
            if (mu != 0) w[b * c] += lam[b] * mu;
        }
    }
    for (std::uint64_t m = 1; m <= m_top; ++m) {
        if (w[m] == 0.0) continue;
        Complex inner = 0.0;
        for (std::uint64_t mn = m; mn <= X; mn += m) inner += fv[mn];
        out.S1 -= w[m] * inner;
    }

    // S2 via v_n = [n = 1] - sum_{c < U, c | n} mu(c), nonzero only for n >= U.
    const std::uint64_t n_top = X / std::max<std::uint64_t>(small_top + 1, 1);
    std::vector<double> v(n_top + 1, 0.0);
    if (n_top >= 1) v[1] = 1.0;
    for (std::uint64_t c = 1; c <= small_top; ++c) {
        const int mu = sieve.mobius(c);
        if (mu == 0) continue;
        for (std::uint64_t n = c; n <= n_top; n += c) v[n] -= mu;
    }
    for (std::uint64_t m = small_top + 1; m <= X; ++m) {
        if (lam[m] == 0.0) continue;
        Complex inner = 0.0;
        for (std::uint64_t n = 1; n * m <= X; ++n)
            if (v[n] != 0.0) inner += v[n] * fv[n * m];
        out.S2 += lam[m] * inner;
    }

    for (std::uint64_t n = 1; n <= small_top; ++n) out.S3 += lam[n] * fv[n];

    for (std::uint64_t c = 1; c <= small_top; ++c) {
        const int mu = sieve.mobius(c);
        if (mu == 0) continue;
        Complex inner = 0.0;
        for (std::uint64_t t = 2; t * c <= X; ++t) inner += fv[t * c] * std::log(double(t));
        out.S4 += double(mu) * inner;
    }

    if (std::abs(out.sum() - out.total) > 1e-6 * std::max(1.0, scale))
        throw ConsistencyError("vaughan_split: S1+S2+S3+S4 differs from the direct sum");
    return out;
}

double type_i_sum(const ArithmeticFunction& f, DyadicRange m_range, DyadicRange n_range,
                  const IntervalChooser& choose) {
    if (m_range.exponent() + n_range.exponent() > 63)
        throw DomainError("type_i_sum: products overflow 64 bits");
    double total = 0.0;
    for (std::uint64_t m = m_range.lo(); m < m_range.hi(); ++m) {
        IntegerInterval I{n_range.lo(), n_range.hi()};
        if (choose) {
            I = choose(m);
            if (I.lo > I.hi || I.lo < n_range.lo() || I.hi > n_range.hi())
                throw DomainError("type_i_sum: interval leaves the dyadic range");
        }
        Complex inner = 0.0;
        for (std::uint64_t n = I.lo; n < I.hi; ++n) inner += f(m * n);
        total += std::abs(inner);
    }
    return total;
}

Complex type_ii_sum(const ArithmeticFunction& f, const std::vector<Complex>& a,
                    const std::vector<Complex>& b, DyadicRange m_range, DyadicRange n_range) {
    if (a.size() != m_range.size() || b.size() != n_range.size())
        throw DomainError("type_ii_sum: coefficient lengths must match the dyadic ranges");
    if (m_range.exponent() + n_range.exponent() > 63)
        throw DomainError("type_ii_sum: products overflow 64 bits");
    if (double(a.size()) * double(b.size()) > double(kBilinearBudget))
        throw BudgetError("type_ii_sum: pair count exceeds budget");
    auto bounded = [](const std::vector<Complex>& v) {
        return std::all_of(v.begin(), v.end(), [](Complex z) { return std::abs(z) <= 1.0 + 1e-12; });
    };
    if (!bounded(a) || !bounded(b)) throw DomainError("type_ii_sum: coefficients must satisfy |.| <= 1");

    Complex total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        const std::uint64_t m = m_range.lo() + i;
        Complex inner = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) inner += b[j] * f(m * (n_range.lo() + j));
        total += a[i] * inner;
    }
    return total;
}

VdcSides vdc_check(const std::vector<Complex>& a, std::uint64_t H) {
    if (H < 1) throw DomainError("vdc_check: H must be >= 1");
    const std::size_t N = a.size();
    VdcSides out;
    Complex s = 0.0;
    for (auto z : a) s += z;
    out.lhs = std::norm(s);

    // Terms with |h| = H carry weight 0; |h| >= N have empty correlation.
    const std::uint64_t reach = std::min<std::uint64_t>(H - 1, N == 0 ? 0 : N - 1);
    double acc = 0.0;
    for (std::uint64_t h = 0; h <= reach; ++h) {
        Complex corr = 0.0;
        for (std::size_t n = 0; n + h < N; ++n) corr += a[n] * std::conj(a[n + h]);
        const double weight = 1.0 - double(h) / double(H);
        // h and -h contribute conjugate correlations.
        acc += weight * (h == 0 ? corr.real() : 2.0 * corr.real());
    }
    out.rhs = (double(N) + double(H)) / double(H) * acc;
    return out;
}

double circle_norm(double x) { return std::abs(x - std::round(x)); }

MinSum min_q_sum(std::int64_t a, std::uint64_t q, double beta, std::uint64_t Q, std::uint64_t R) {
    if (q < 1 || Q < 1) throw DomainError("min_q_sum: q and Q must be >= 1");
    const auto qi = static_cast<std::int64_t>(q);
    if (std::gcd(a, qi) != 1) throw DomainError("min_q_sum: gcd(a, q) must be 1");
    const std::int64_t ar = ((a % qi) + qi) % qi;
    MinSum out;
    const double cap = double(Q);
    for (std::uint64_t x = 0; x <= R; ++x) {
        const auto residue = static_cast<std::uint64_t>((__int128(ar) * x) % qi);
        const double dist = circle_norm(double(residue) / double(q) + beta);
        out.sum += dist == 0.0 ? cap : std::min(cap, 1.0 / dist);
    }
    const double Qd = double(Q), qd = double(q), Rd = double(R);
    out.shape = (Qd + qd + Rd + Qd * Rd / qd) * std::log(2.0 + qd * Qd * Rd);
    return out;
}

Approximation dirichlet_approx(double alpha, std::uint64_t N) {
    if (N < 1) throw DomainError("dirichlet_approx: N must be >= 1");
    if (!std::isfinite(alpha)) throw DomainError("dirichlet_approx: alpha must be finite");

    const long double target = alpha;
    long double x = target;
    // Convergents p/q: (p_prev, q_prev) = (1, 0), (p, q) = (a0, 1).
    long double a0 = std::floor(x);
    __int128 p_prev = 1, q_prev = 0, p = static_cast<__int128>(a0), q = 1;
    long double frac = x - a0;
    while (frac > 1e-18L) {
        x = 1.0L / frac;
        const long double digit = std::floor(x);
        frac = x - digit;
        if (digit > 1e18L) break;
        const auto d = static_cast<__int128>(digit);
        const __int128 q_next = d * q + q_prev;
        if (q_next > static_cast<__int128>(N)) break;
        const __int128 p_next = d * p + p_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        // Stop once the convergent reproduces alpha to working precision.
        if (std::abs(target - static_cast<long double>(p) / static_cast<long double>(q)) == 0.0L) break;
    }

    Approximation out;
    out.a = static_cast<std::int64_t>(p);
    out.q = static_cast<std::uint64_t>(q);
    out.error = static_cast<double>(std::abs(target - static_cast<long double>(p) / static_cast<long double>(q)));
    return out;
}

std::optional<std::uint64_t> equidist_find_q(double alpha, std::uint64_t N, double delta1,
                                             double delta2) {
    if (!(delta2 > 0.0 && delta2 <= 1.0)) throw DomainError("equidist_find_q: delta2 must lie in (0, 1]");
    if (!(delta1 >= 0.0 && delta1 < delta2 / 16.0))
        throw DomainError("equidist_find_q: need 0 <= delta1 < delta2/16");
    if (double(N) < 8.0 / delta2) throw DomainError("equidist_find_q: need N >= 8/delta2");

    std::uint64_t hits = 0;
    for (std::uint64_t n = 1; n <= N; ++n)
        hits += circle_norm(std::fmod(alpha * double(n), 1.0)) <= delta1;
    if (double(hits) < delta2 * double(N)) return std::nullopt;

    const auto q_max = static_cast<std::uint64_t>(std::floor(8.0 / delta2));
    const double target = 4.0 * delta1 / (delta2 * double(N));
    for (std::uint64_t q = 1; q <= q_max; ++q)
        if (circle_norm(std::fmod(alpha * double(q), 1.0)) <= target) return q;
    throw ConsistencyError("equidist_find_q: hypothesis holds but no q <= 8/delta2 found");
}

}  // namespace primelab::bilinear
