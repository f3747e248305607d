#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "primelab/arith.hpp"
#include "primelab/exact.hpp"
#include "primelab/tuple.hpp"

namespace primelab::dickson {

inline constexpr std::uint64_t kDefaultPrimeCutoff = 100'000;
inline constexpr std::size_t kMaxComplexityForms = 10;
inline constexpr std::uint64_t kEnumerationBudget = 100'000'000;
inline constexpr std::uint64_t kVolumeSamples = 1'000'000;

// t affine-linear forms psi_i(n) = sum_j L[i][j] n_j + b[i] in d variables.
class LinearFormSystem {
public:
    // Throws DomainError on a zero row, a ragged matrix, or two rows that are
    // rational multiples of one another.
    LinearFormSystem(IntegerMatrix coefficients, std::vector<std::int64_t> offsets);

    // n + h_i for each offset of the tuple.
    static LinearFormSystem from_tuple(const PrimeTuple& tuple);

    std::size_t variables() const { return d_; }
    std::size_t forms() const { return L_.size(); }
    const IntegerMatrix& coefficients() const { return L_; }
    const std::vector<std::int64_t>& offsets() const { return b_; }

    std::int64_t evaluate(std::size_t i, std::span<const std::int64_t> n) const;

    // Forms reordered so that form k of the result is form perm[k] of this one.
    LinearFormSystem permuted(std::span<const std::size_t> perm) const;

    // psi_i(A m + c) as forms in m; A is d x d.
    LinearFormSystem substituted(const IntegerMatrix& A, std::span<const std::int64_t> c) const;

private:
    std::size_t d_ = 0;
    IntegerMatrix L_;
    std::vector<std::int64_t> b_;
};

class Complexity {
public:
    static Complexity finite(unsigned s) { return Complexity(s); }
    static Complexity infinite() { return Complexity(kInfinite); }

    bool is_finite() const { return value_ != kInfinite; }
    unsigned value() const;  // throws DomainError when infinite
    std::string to_string() const;

    friend bool operator==(const Complexity&, const Complexity&) = default;

private:
    static constexpr unsigned kInfinite = std::numeric_limits<unsigned>::max();
    explicit Complexity(unsigned v) : value_(v) {}
    unsigned value_;
};

std::ostream& operator<<(std::ostream& os, const Complexity& c);

// Least s such that for every i the remaining forms split into at most s+1
// classes, none of whose affine spans contains psi_i. Requires t <= 10.
Complexity complexity(const LinearFormSystem& system);

// Count: inclusion-exclusion over subsets of forms with ranks over F_p (exact, any p).
// Enumerate: sum over (Z/p)^d, requires p^d <= kEnumerationBudget.
enum class LocalFactorMethod { Count, Enumerate };

// beta_p = E_{x in (Z/p)^d} prod_i Lambda_p(psi_i(x)), Lambda_p(x) = p/(p-1) on units, else 0.
double local_factor(const LinearFormSystem& system, std::uint64_t p,
                    LocalFactorMethod method = LocalFactorMethod::Count);

// Integer box prod_j [lo_j, hi_j]. A box with some lo_j > hi_j is empty.
struct Box {
    std::vector<std::pair<std::int64_t, std::int64_t>> bounds;

    std::size_t dimension() const { return bounds.size(); }
    bool empty() const;
    double lattice_points() const;
};

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 when exact
    bool exact = true;
    std::uint64_t samples = 0;
};

struct DicksonPrediction {
    VolumeEstimate beta_inf;
    double product = 1.0;
    double prediction = 0.0;
    std::uint64_t prime_cutoff = 0;
};

// Number of lattice points of the box with every psi_i >= 0. Exact for d <= 2,
// Monte Carlo with `samples` draws from a fixed seed otherwise.
VolumeEstimate archimedean_factor(const LinearFormSystem& system, const Box& box,
                                  std::uint64_t seed = 0,
                                  std::uint64_t samples = kVolumeSamples);

// beta_inf * prod_{p <= prime_cutoff} beta_p. Throws DomainError on an empty box.
DicksonPrediction dickson_prediction(const LinearFormSystem& system, const Box& box,
                                     std::uint64_t prime_cutoff = kDefaultPrimeCutoff,
                                     std::uint64_t seed = 0);

// sum over lattice points of the box of prod_i Lambda(psi_i(n)); psi_i < 1 gives 0.
// Throws DomainError when some psi_i can exceed the sieve limit on the box.
double weighted_count(const FactorSieve& sieve, const LinearFormSystem& system, const Box& box);

// prod_{p <= prime_cutoff} (1 - nu_p/p)(1 - 1/p)^{-m}; zero iff the tuple is inadmissible.
double tuple_singular_series(const PrimeTuple& tuple,
                             std::uint64_t prime_cutoff = kDefaultPrimeCutoff);

inline constexpr std::uint64_t kGallagherEnumerationBudget = 2'000'000;
inline constexpr std::uint64_t kGallagherSamples = 200'000;

struct GallagherMean {
    double mean = 0.0;
    std::uint64_t tuples = 0;  // tuples evaluated
    bool sampled = false;
};

// Mean of the singular series over (k+1)-subsets of [0, H]; enumerated when
// C(H+1, k+1) <= kGallagherEnumerationBudget, sampled from `seed` otherwise.
GallagherMean gallagher_mean(unsigned k, std::uint64_t H,
                             std::uint64_t prime_cutoff = kDefaultPrimeCutoff,
                             std::uint64_t seed = 0);

}  // namespace primelab::dickson
