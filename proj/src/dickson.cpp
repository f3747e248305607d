#include "primelab/dickson.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "primelab/error.hpp"

namespace primelab::dickson {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

bool proportional(std::span<const std::int64_t> u, std::span<const std::int64_t> v) {
    for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t b = a + 1; b < u.size(); ++b)
            if (__int128(u[a]) * v[b] != __int128(u[b]) * v[a]) return false;
    return true;
}

// Shrinks [lo, hi] to the n with a n + rest >= 0 (a != 0).
void clip(std::int64_t a, std::int64_t rest, std::int64_t& lo, std::int64_t& hi) {
    if (a > 0) lo = std::max(lo, ceil_div(-rest, a));
    else hi = std::min(hi, floor_div(rest, -a));
}

double unit_weight(std::uint64_t p, std::size_t t) {
    return std::pow(double(p) / double(p - 1), double(t));
}

// Probability that every form is a unit mod p, for one-variable systems.
double unit_probability_1d(const LinearFormSystem& sys, std::uint64_t p) {
    const auto m = static_cast<std::int64_t>(p);
    std::vector<std::int64_t> roots;
    for (std::size_t i = 0; i < sys.forms(); ++i) {
        const std::int64_t a = ((sys.coefficients()[i][0] % m) + m) % m;
        const std::int64_t b = ((sys.offsets()[i] % m) + m) % m;
        if (a == 0) {
            if (b == 0) return 0.0;
            continue;
        }
        // root of a x + b = 0: x = -b a^{-1}
        __int128 inv = 1, base = a;
        for (std::uint64_t e = p - 2; e; e >>= 1) {
            if (e & 1) inv = inv * base % m;
            base = base * base % m;
        }
        roots.push_back(static_cast<std::int64_t>((m - b) % m * inv % m));
    }
    std::sort(roots.begin(), roots.end());
    const auto nu = std::unique(roots.begin(), roots.end()) - roots.begin();
    return double(m - nu) / double(m);
}

double unit_probability_count(const LinearFormSystem& sys, std::uint64_t p) {
    const std::size_t t = sys.forms();
    if (t > 24) throw BudgetError("local_factor: too many forms for inclusion-exclusion");
    long double acc = 0.0L;
    IntegerMatrix lin, aug;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
        lin.clear();
        aug.clear();
        for (std::size_t i = 0; i < t; ++i) {
            if (!(mask >> i & 1)) continue;
            lin.push_back(sys.coefficients()[i]);
            aug.push_back(sys.coefficients()[i]);
            aug.back().push_back(sys.offsets()[i]);
        }
        const std::size_t r = rank_mod_p(lin, p);
        if (rank_mod_p(aug, p) != r) continue;  // L x = -b has no solution
        const long double term = std::pow(static_cast<long double>(p), -static_cast<long double>(r));
        acc += (std::popcount(mask) % 2 ? -term : term);
    }
    return static_cast<double>(acc);
}

double unit_probability_enumerate(const LinearFormSystem& sys, std::uint64_t p) {
    const std::size_t d = sys.variables(), t = sys.forms();
    double total = 1.0;
    for (std::size_t j = 0; j < d; ++j) total *= double(p);
    if (total > double(kEnumerationBudget))
        throw BudgetError("local_factor: p^d exceeds enumeration budget");
    const auto m = static_cast<std::int64_t>(p);

    // values[i] = psi_i(x) mod p, updated as the odometer x advances.
    std::vector<std::int64_t> step(t * d), values(t);
    for (std::size_t i = 0; i < t; ++i) {
        values[i] = ((sys.offsets()[i] % m) + m) % m;
        for (std::size_t j = 0; j < d; ++j)
            step[i * d + j] = ((sys.coefficients()[i][j] % m) + m) % m;
    }
    std::vector<std::uint64_t> x(d, 0);
    std::uint64_t good = 0;
    while (true) {
        bool all_units = true;
        for (std::size_t i = 0; i < t && all_units; ++i) all_units = values[i] != 0;
        good += all_units;
        std::size_t j = 0;
        for (; j < d; ++j) {
            for (std::size_t i = 0; i < t; ++i) values[i] = (values[i] + step[i * d + j]) % m;
            if (++x[j] < p) break;
            x[j] = 0;  // values wrapped back since p * step = 0 mod p
        }
        if (j == d) break;
    }
    return double(good) / total;
}

}  // namespace

LinearFormSystem::LinearFormSystem(IntegerMatrix coefficients, std::vector<std::int64_t> offsets)
    : L_(std::move(coefficients)), b_(std::move(offsets)) {
    if (L_.empty()) throw DomainError("LinearFormSystem: no forms");
    if (L_.size() != b_.size()) throw DomainError("LinearFormSystem: offsets/rows size mismatch");
    d_ = L_.front().size();
    if (d_ == 0) throw DomainError("LinearFormSystem: no variables");
    std::vector<std::vector<std::int64_t>> rows;
    for (std::size_t i = 0; i < L_.size(); ++i) {
        if (L_[i].size() != d_) throw DomainError("LinearFormSystem: ragged coefficient matrix");
        if (std::all_of(L_[i].begin(), L_[i].end(), [](auto x) { return x == 0; }))
            throw DomainError("LinearFormSystem: form " + std::to_string(i) + " is constant");
        rows.push_back(L_[i]);
        rows.back().push_back(b_[i]);
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (proportional(rows[i], rows[j]))
                throw DomainError("LinearFormSystem: forms " + std::to_string(i) + " and " +
                                  std::to_string(j) + " are rational multiples");
}

LinearFormSystem LinearFormSystem::from_tuple(const PrimeTuple& tuple) {
    IntegerMatrix L(tuple.size(), std::vector<std::int64_t>{1});
    return LinearFormSystem(std::move(L), {tuple.offsets().begin(), tuple.offsets().end()});
}

std::int64_t LinearFormSystem::evaluate(std::size_t i, std::span<const std::int64_t> n) const {
    if (n.size() != d_) throw DomainError("evaluate: point has wrong dimension");
    std::int64_t acc = b_.at(i);
    for (std::size_t j = 0; j < d_; ++j) acc += L_[i][j] * n[j];
    return acc;
}

LinearFormSystem LinearFormSystem::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != forms()) throw DomainError("permuted: permutation has wrong size");
    IntegerMatrix L;
    std::vector<std::int64_t> b;
    for (std::size_t k : perm) {
        L.push_back(L_.at(k));
        b.push_back(b_.at(k));
    }
    return LinearFormSystem(std::move(L), std::move(b));
}

LinearFormSystem LinearFormSystem::substituted(const IntegerMatrix& A,
                                               std::span<const std::int64_t> c) const {
    if (A.size() != d_ || c.size() != d_) throw DomainError("substituted: dimension mismatch");
    IntegerMatrix L(forms(), std::vector<std::int64_t>(d_, 0));
    std::vector<std::int64_t> b = b_;
    for (std::size_t i = 0; i < forms(); ++i)
        for (std::size_t j = 0; j < d_; ++j) {
            if (A[j].size() != d_) throw DomainError("substituted: A is not square");
            for (std::size_t k = 0; k < d_; ++k) L[i][k] += L_[i][j] * A[j][k];
            b[i] += L_[i][j] * c[j];
        }
    return LinearFormSystem(std::move(L), std::move(b));
}

unsigned Complexity::value() const {
    if (!is_finite()) throw DomainError("Complexity: value of INFINITE");
    return value_;
}

std::string Complexity::to_string() const {
    return is_finite() ? std::to_string(value_) : std::string("INFINITE");
}

std::ostream& operator<<(std::ostream& os, const Complexity& c) { return os << c.to_string(); }

Complexity complexity(const LinearFormSystem& system) {
    const std::size_t t = system.forms();
    if (t > kMaxComplexityForms) throw BudgetError("complexity: more than 10 forms");
    const auto& L = system.coefficients();

    unsigned worst = 1;
    for (std::size_t i = 0; i < t; ++i) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < t; ++j)
            if (j != i) rest.push_back(j);
        const std::size_t r = rest.size();
        if (r == 0) continue;

        // Span of the forms is affine, so psi_i lies in it iff its linear part
        // lies in the linear span of theirs.
        std::vector<char> contains(std::size_t{1} << r, 0);
        for (std::uint64_t mask = 1; mask < contains.size(); ++mask) {
            IntegerMatrix rows;
            for (std::size_t k = 0; k < r; ++k)
                if (mask >> k & 1) rows.push_back(L[rest[k]]);
            contains[mask] = in_rational_span(rows, L[i]);
        }
        if (std::any_of(contains.begin(), contains.end(), [](char c) { return c; })) {
            bool singleton_blocked = false;
            for (std::size_t k = 0; k < r; ++k) singleton_blocked |= contains[1u << k] != 0;
            if (singleton_blocked) return Complexity::infinite();
        }

        std::vector<std::uint64_t> classes;
        std::function<bool(std::size_t, std::size_t)> place = [&](std::size_t e, std::size_t cap) {
            if (e == r) return true;
            for (std::size_t c = 0; c <= classes.size() && c < cap; ++c) {
                const bool fresh = c == classes.size();
                if (fresh) classes.push_back(0);
                classes[c] |= std::uint64_t{1} << e;
                const bool ok = !contains[classes[c]] && place(e + 1, cap);
                classes[c] &= ~(std::uint64_t{1} << e);
                if (fresh) classes.pop_back();
                if (ok) return true;
            }
            return false;
        };
        unsigned needed = 0;
        for (std::size_t cap = 1; cap <= r; ++cap) {
            classes.clear();
            if (place(0, cap)) {
                needed = static_cast<unsigned>(cap);
                break;
            }
        }
        if (needed == 0) return Complexity::infinite();
        worst = std::max(worst, needed);
    }
    return Complexity::finite(worst - 1);
}

double local_factor(const LinearFormSystem& system, std::uint64_t p, LocalFactorMethod method) {
    if (p < 2) throw DomainError("local_factor: p must be prime");
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) throw DomainError("local_factor: p must be prime");

    double prob;
    if (method == LocalFactorMethod::Enumerate) prob = unit_probability_enumerate(system, p);
    else if (system.variables() == 1) prob = unit_probability_1d(system, p);
    else prob = unit_probability_count(system, p);
    return prob * unit_weight(p, system.forms());
}

bool Box::empty() const {
    return std::any_of(bounds.begin(), bounds.end(), [](auto b) { return b.first > b.second; });
}

double Box::lattice_points() const {
    if (empty()) return 0.0;
    double n = 1.0;
    for (auto [lo, hi] : bounds) n *= double(hi - lo) + 1.0;
    return n;
}

VolumeEstimate archimedean_factor(const LinearFormSystem& system, const Box& box,
                                  std::uint64_t seed, std::uint64_t samples) {
    if (box.dimension() != system.variables())
        throw DomainError("archimedean_factor: box dimension differs from number of variables");
    if (box.empty()) throw DomainError("archimedean_factor: empty box");
    const auto& L = system.coefficients();
    const auto& b = system.offsets();
    const std::size_t d = system.variables(), t = system.forms();
    VolumeEstimate out;

    if (d == 1) {
        auto [lo, hi] = box.bounds[0];
        for (std::size_t i = 0; i < t; ++i) clip(L[i][0], b[i], lo, hi);
        out.value = hi >= lo ? double(hi - lo) + 1.0 : 0.0;
        return out;
    }
    if (d == 2) {
        // Loop over the shorter side and clip the other per step.
        const std::size_t outer = (box.bounds[0].second - box.bounds[0].first <=
                                   box.bounds[1].second - box.bounds[1].first)
                                      ? 0
                                      : 1;
        const std::size_t inner = 1 - outer;
        const auto [olo, ohi] = box.bounds[outer];
        if (double(ohi - olo) + 1.0 > double(kEnumerationBudget))
            throw BudgetError("archimedean_factor: box side exceeds enumeration budget");
        double count = 0.0;
        for (std::int64_t x = olo; x <= ohi; ++x) {
            auto [lo, hi] = box.bounds[inner];
            for (std::size_t i = 0; i < t && lo <= hi; ++i) {
                const std::int64_t rest = L[i][outer] * x + b[i];
                if (L[i][inner] == 0) {
                    if (rest < 0) hi = lo - 1;
                } else {
                    clip(L[i][inner], rest, lo, hi);
                }
            }
            if (hi >= lo) count += double(hi - lo) + 1.0;
        }
        out.value = count;
        return out;
    }

    std::mt19937_64 rng(seed);
    std::vector<std::uniform_int_distribution<std::int64_t>> coord;
    for (auto [lo, hi] : box.bounds) coord.emplace_back(lo, hi);
    std::vector<std::int64_t> n(d);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (std::size_t j = 0; j < d; ++j) n[j] = coord[j](rng);
        bool inside = true;
        for (std::size_t i = 0; i < t && inside; ++i) inside = system.evaluate(i, n) >= 0;
        hits += inside;
    }
    const double total = box.lattice_points();
    const double frac = double(hits) / double(samples);
    out.exact = false;
    out.samples = samples;
    out.value = frac * total;
    out.std_error = total * std::sqrt(frac * (1.0 - frac) / double(samples));
    return out;
}

DicksonPrediction dickson_prediction(const LinearFormSystem& system, const Box& box,
                                     std::uint64_t prime_cutoff, std::uint64_t seed) {
    if (box.empty()) throw DomainError("dickson_prediction: empty box");
    DicksonPrediction out;
    out.beta_inf = archimedean_factor(system, box, seed);
    out.prime_cutoff = prime_cutoff;
    for (std::uint64_t p : primes_up_to(prime_cutoff)) out.product *= local_factor(system, p);
    out.prediction = out.beta_inf.value * out.product;
    return out;
}

double weighted_count(const FactorSieve& sieve, const LinearFormSystem& system, const Box& box) {
    if (box.dimension() != system.variables())
        throw DomainError("weighted_count: box dimension differs from number of variables");
    if (box.empty()) return 0.0;
    const auto& L = system.coefficients();
    const std::size_t d = system.variables(), t = system.forms();
    for (std::size_t i = 0; i < t; ++i) {
        __int128 top = system.offsets()[i];
        for (std::size_t j = 0; j < d; ++j)
            top += std::max(__int128(L[i][j]) * box.bounds[j].first,
                            __int128(L[i][j]) * box.bounds[j].second);
        if (top > __int128(sieve.limit()))
            throw DomainError("weighted_count: form values exceed sieve limit on the box");
    }

    std::vector<std::int64_t> n(d);
    for (std::size_t j = 0; j < d; ++j) n[j] = box.bounds[j].first;
    double total = 0.0;
    while (true) {
        double prod = 1.0;
        for (std::size_t i = 0; i < t && prod != 0.0; ++i) {
            const std::int64_t v = system.evaluate(i, n);
            prod = v < 1 ? 0.0 : prod * von_mangoldt(sieve, static_cast<std::uint64_t>(v));
        }
        total += prod;
        std::size_t j = 0;
        for (; j < d; ++j) {
            if (n[j] < box.bounds[j].second) {
                ++n[j];
                break;
            }
            n[j] = box.bounds[j].first;
        }
        if (j == d) break;
    }
    return total;
}

namespace {

// Local factor of the singular series for m offsets occupying nu residues mod p.
double series_factor(std::uint64_t p, std::uint64_t nu, std::size_t m) {
    if (nu >= p) return 0.0;
    return double(p - nu) / double(p - 1) * std::pow(double(p) / double(p - 1), double(m) - 1.0);
}

std::uint64_t residue_count(std::span<const std::int64_t> offsets, std::uint64_t p,
                            std::vector<std::uint64_t>& scratch) {
    scratch.clear();
    for (std::int64_t h : offsets) scratch.push_back(static_cast<std::uint64_t>(h) % p);
    std::sort(scratch.begin(), scratch.end());
    return static_cast<std::uint64_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin());
}

// Series of offsets in [0, H]: primes <= H individually, the rest via a shared tail.
class SeriesEvaluator {
public:
    SeriesEvaluator(std::size_t m, std::uint64_t H, std::uint64_t prime_cutoff) : m_(m) {
        for (std::uint64_t p : primes_up_to(prime_cutoff)) {
            if (p <= H) small_.push_back(p);
            else tail_ *= series_factor(p, std::min<std::uint64_t>(m, p), m);
        }
    }

    double operator()(std::span<const std::int64_t> offsets) {
        double prod = tail_;
        for (std::uint64_t p : small_) {
            prod *= series_factor(p, residue_count(offsets, p, scratch_), m_);
            if (prod == 0.0) break;
        }
        return prod;
    }

private:
    std::size_t m_;
    std::vector<std::uint64_t> small_;
    double tail_ = 1.0;
    std::vector<std::uint64_t> scratch_;
};

}  // namespace

double tuple_singular_series(const PrimeTuple& tuple, std::uint64_t prime_cutoff) {
    const auto spread = static_cast<std::uint64_t>(tuple.max_offset() - tuple.offsets().front());
    SeriesEvaluator eval(tuple.size(), spread, prime_cutoff);
    return eval(tuple.offsets());
}

GallagherMean gallagher_mean(unsigned k, std::uint64_t H, std::uint64_t prime_cutoff,
                             std::uint64_t seed) {
    const std::size_t m = k + 1;
    if (m > H + 1) throw DomainError("gallagher_mean: k + 1 exceeds H + 1");
    SeriesEvaluator eval(m, H, prime_cutoff);

    // C(H+1, m), saturating at the budget.
    double combos = 1.0;
    for (std::size_t i = 0; i < m; ++i) combos = combos * double(H + 1 - i) / double(i + 1);

    GallagherMean out;
    std::vector<std::int64_t> h(m);
    long double acc = 0.0L;
    if (combos <= double(kGallagherEnumerationBudget)) {
        for (std::size_t i = 0; i < m; ++i) h[i] = static_cast<std::int64_t>(i);
        const auto top = static_cast<std::int64_t>(H);
        while (true) {
            acc += eval(h);
            ++out.tuples;
            std::size_t i = m;
            while (i > 0 && h[i - 1] == top - static_cast<std::int64_t>(m - i)) --i;
            if (i == 0) break;
            ++h[i - 1];
            for (std::size_t j = i; j < m; ++j) h[j] = h[j - 1] + 1;
        }
    } else {
        out.sampled = true;
        std::mt19937_64 rng(seed);
        std::set<std::int64_t> chosen;
        for (std::uint64_t s = 0; s < kGallagherSamples; ++s) {
            // Floyd's algorithm for a uniform m-subset of [0, H].
            chosen.clear();
            for (std::uint64_t j = H + 1 - m; j <= H; ++j) {
                const auto v = static_cast<std::int64_t>(
                    std::uniform_int_distribution<std::uint64_t>(0, j)(rng));
                if (!chosen.insert(v).second) chosen.insert(static_cast<std::int64_t>(j));
            }
            std::copy(chosen.begin(), chosen.end(), h.begin());
            acc += eval(h);
            ++out.tuples;
        }
    }
    out.mean = static_cast<double>(acc / static_cast<long double>(out.tuples));
    return out;
}

}  // namespace primelab::dickson
