#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "primelab/arith.hpp"

namespace primelab::bilinear {

using Complex = std::complex<double>;
using ArithmeticFunction = std::function<Complex(std::uint64_t)>;

// [2^{e-1}, 2^e), e >= 1.
class DyadicRange {
public:
    explicit DyadicRange(unsigned exponent);
    unsigned exponent() const { return e_; }
    std::uint64_t lo() const { return std::uint64_t{1} << (e_ - 1); }
    std::uint64_t hi() const { return std::uint64_t{1} << e_; }  // exclusive
    std::uint64_t size() const { return hi() - lo(); }
    bool contains(std::uint64_t n) const { return n >= lo() && n < hi(); }

private:
    unsigned e_;
};

// Half-open [lo, hi).
struct IntegerInterval {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
};

struct VaughanTerms {
    double small_small = 0.0;  // -sum_{b,c < U, bc | n} Lambda(b) mu(c)
    double large_large = 0.0;  // sum_{b,c >= U, bc | n} Lambda(b) mu(c)
    double small_n = 0.0;      // 1_{n < U} Lambda(n)
    double divisor_log = 0.0;  // sum_{c < U, c | n} mu(c) log(n/c)
    double total() const { return small_small + large_large + small_n + divisor_log; }
};

// The four terms of Vaughan's identity at n, by enumerating pairs bc | n.
VaughanTerms vaughan_identity_check(const FactorSieve& sieve, std::uint64_t n, double U);

struct VaughanSplit {
    Complex S1, S2, S3, S4;
    Complex total;  // sum_{n <= X} Lambda(n) f(n), summed directly
    double U = 0.0;
    std::uint64_t X = 0;
    Complex sum() const { return S1 + S2 + S3 + S4; }
};

// sum_{n <= X} Lambda(n) f(n) = S1 + S2 + S3 + S4 with
//   S1 = -sum_{m < U^2} w_m sum_{n <= X/m} f(mn),  w_m = sum_{bc = m; b, c < U} Lambda(b) mu(c)
//   S2 = sum_{m >= U} Lambda(m) sum_{n <= X/m} v_n f(mn),  v_n = sum_{c >= U, c | n} mu(c)
//   S3 = sum_{n < U} Lambda(n) f(n)
//   S4 = sum_{c < U} mu(c) sum_{t <= X/c} f(ct) log t.
// U defaults to X^{1/3}. Throws DomainError if |f| > 1 somewhere, ConsistencyError
// if the pieces miss the direct total by more than 1e-6 * sum Lambda |f|.
VaughanSplit vaughan_split(const FactorSieve& sieve, const ArithmeticFunction& f, std::uint64_t X,
                           std::optional<double> U = std::nullopt);

using IntervalChooser = std::function<IntegerInterval(std::uint64_t m)>;

// sum_{m in m_range} |sum_{n in I_m} f(mn)|; I_m is the whole n_range unless a
// chooser is given, and must lie inside it (DomainError otherwise).
double type_i_sum(const ArithmeticFunction& f, DyadicRange m_range, DyadicRange n_range,
                  const IntervalChooser& choose = {});

inline constexpr std::uint64_t kBilinearBudget = 1ull << 32;

// sum_{m in m_range} sum_{n in n_range} a_m b_n f(mn), with a indexed from
// m_range.lo() and b from n_range.lo(). Requires |a_m|, |b_n| <= 1.
Complex type_ii_sum(const ArithmeticFunction& f, const std::vector<Complex>& a,
                    const std::vector<Complex>& b, DyadicRange m_range, DyadicRange n_range);

struct VdcSides {
    double lhs = 0.0;  // |sum a_n|^2
    double rhs = 0.0;  // (N+H)/H sum_{|h| <= H} (1 - |h|/H) sum_n a_n conj(a_{n+h})
};

// a holds a_1 .. a_N; zero outside. Requires H >= 1.
VdcSides vdc_check(const std::vector<Complex>& a, std::uint64_t H);

struct MinSum {
    double sum = 0.0;
    double shape = 0.0;  // (Q + q + R + QR/q) log(2 + qQR)
    double ratio() const { return sum / shape; }
};

// sum_{x=0}^{R} min(Q, ||a x/q + beta||^{-1}), ||0||^{-1} = infinity.
// Throws DomainError unless gcd(a, q) = 1 and q, Q >= 1.
MinSum min_q_sum(std::int64_t a, std::uint64_t q, double beta, std::uint64_t Q, std::uint64_t R);

struct Approximation {
    std::int64_t a = 0;
    std::uint64_t q = 1;
    double error = 0.0;  // |alpha - a/q|
};

// Last continued-fraction convergent with denominator <= N:
// q <= N, gcd(a, q) = 1 and |alpha - a/q| <= 1/(qN).
Approximation dirichlet_approx(double alpha, std::uint64_t N);

// Distance to the nearest integer.
double circle_norm(double x);

// With delta1 < delta2/16 and N >= 8/delta2: if at least delta2 N of n in [1, N]
// satisfy ||alpha n|| <= delta1, the least q <= 8/delta2 with
// ||alpha q|| <= 4 delta1 / (delta2 N); otherwise nullopt.
std::optional<std::uint64_t> equidist_find_q(double alpha, std::uint64_t N, double delta1,
                                             double delta2);

}  // namespace primelab::bilinear
