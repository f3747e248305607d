#include "primelab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "primelab/bilinear.hpp"
#include "primelab/dickson.hpp"
#include "primelab/digits.hpp"
#include "primelab/error.hpp"
#include "primelab/gowers.hpp"
#include "primelab/gpy.hpp"

namespace primelab::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_plain(const std::string& text) {
    if (text.empty()) throw UsageError("empty number");
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(value)) throw UsageError("not a number: '" + text + "'");
    return value;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// One registered parameter: its raw text is echoed into the metadata.
struct Param {
    std::string name;
    std::string value;
};

class Command {
public:
    Command(CLI::App& parent, std::string name, std::string description)
        : app_(parent.add_subcommand(std::move(name), std::move(description))) {}

    void param(const std::string& name, std::string fallback, const std::string& help) {
        auto& p = params_.emplace_back(Param{name, std::move(fallback)});
        app_->add_option("--" + name, p.value, help)->capture_default_str();
    }

    const std::string& raw(const std::string& name) const {
        for (const auto& p : params_)
            if (p.name == name) return p.value;
        throw std::logic_error("unregistered parameter " + name);
    }
    double real(const std::string& name) const { return parse_real(raw(name)); }
    std::uint64_t count(const std::string& name) const { return parse_count(raw(name)); }

    CLI::App* app() const { return app_; }
    const std::deque<Param>& params() const { return params_; }

    std::function<Table(const Command&)> handler;

private:
    CLI::App* app_;
    std::deque<Param> params_;
};

struct Globals {
    std::string format = "csv";
    std::string output;
    std::string seed = "0";
};

PrimeTuple parse_tuple(const std::string& text) {
    std::vector<std::int64_t> offsets;
    for (const auto& part : split(text, ',')) offsets.push_back(parse_integer(part));
    return PrimeTuple(std::move(offsets));
}

// Rows "a_1 ... a_d b" separated by ';': coefficients then the constant term.
dickson::LinearFormSystem parse_system(const std::string& text) {
    IntegerMatrix coefficients;
    std::vector<std::int64_t> offsets;
    for (const auto& row : split(text, ';')) {
        std::istringstream in(row);
        std::vector<std::int64_t> entries;
        for (std::string token; in >> token;) entries.push_back(parse_integer(token));
        if (entries.size() < 2) throw UsageError("system rows need coefficients and a constant term");
        offsets.push_back(entries.back());
        entries.pop_back();
        coefficients.push_back(std::move(entries));
    }
    return dickson::LinearFormSystem(std::move(coefficients), std::move(offsets));
}

dickson::Box parse_box(const std::string& text) {
    dickson::Box box;
    for (const auto& row : split(text, ';')) {
        std::istringstream in(row);
        std::string lo, hi, extra;
        if (!(in >> lo >> hi) || (in >> extra)) throw UsageError("box rows must be 'lo hi'");
        box.bounds.emplace_back(parse_integer(lo), parse_integer(hi));
    }
    return box;
}

std::function<std::complex<double>(std::uint64_t)> named_function(const std::string& name) {
    if (name == "one") return [](std::uint64_t) { return std::complex<double>(1.0); };
    if (name == "thue-morse") return [](std::uint64_t n) { return std::complex<double>(digits::digit_sign(n)); };
    if (name == "e-sqrt2")
        return [](std::uint64_t n) {
            const double x = std::fmod(double(n) * std::numbers::sqrt2, 1.0);
            return std::polar(1.0, 2.0 * std::numbers::pi * x);
        };
    throw UsageError("unknown function '" + name + "' (one, thue-morse, e-sqrt2)");
}

std::uint64_t form_maximum(const dickson::LinearFormSystem& system, const dickson::Box& box) {
    __int128 top = 1;
    for (std::size_t i = 0; i < system.forms(); ++i) {
        __int128 value = system.offsets()[i];
        for (std::size_t j = 0; j < system.variables(); ++j) {
            const __int128 c = system.coefficients()[i][j];
            value += std::max(c * box.bounds[j].first, c * box.bounds[j].second);
        }
        top = std::max(top, value);
    }
    if (top > __int128(kDefaultSieveCeiling)) throw BudgetError("forms exceed the sieve ceiling");
    return static_cast<std::uint64_t>(top);
}

Table gaps(const Command& c) {
    const auto tuple = parse_tuple(c.raw("tuple"));
    gpy::GpyConfig config;
    config.N = c.count("N");
    const auto k = c.count("k");
    if (k != 0 && k != tuple.size()) throw DomainError("gaps: k must equal the tuple size");
    config.k = static_cast<unsigned>(tuple.size());
    config.l = static_cast<unsigned>(c.count("l"));
    config.gamma = c.real("gamma");
    config.validate();
    const FactorSieve sieve(2 * config.N + static_cast<std::uint64_t>(tuple.max_offset()) + 1);
    const auto d = gpy::gpy_densities(sieve, config, tuple);
    const double predicted = gpy::rho_predicted(config);

    Table t;
    t.meta = {{"R", format_cell(d.R)}, {"Q1", format_cell(d.Q1)}};
    t.columns = {"i", "h", "rho_empirical", "rho_predicted", "ratio"};
    for (std::size_t i = 0; i < tuple.size(); ++i)
        t.rows.push_back({std::int64_t(i + 1), tuple[i], d.rho[i], predicted, d.rho[i] / predicted});
    return t;
}

Table eq333(const Command& c) {
    const double R_max = c.real("R");
    const auto steps = c.count("steps");
    const auto cutoff = c.count("P_max");
    if (R_max < 1.0 || steps < 1) throw DomainError("eq333: need R >= 1 and steps >= 1");
    const FactorSieve sieve(static_cast<std::uint64_t>(R_max) + 1);
    Table t;
    t.columns = {"R", "sum", "asymptotic_ratio"};
    for (std::uint64_t j = 1; j <= steps; ++j) {
        const double R = std::pow(R_max, double(j) / double(steps));
        const auto m = gpy::main_term_sum(sieve, R, cutoff);
        t.rows.push_back({R, m.sum, m.asymptotic_ratio ? Cell(*m.asymptotic_ratio) : Cell(std::string("NA"))});
    }
    return t;
}

Table bv(const Command& c) {
    const auto N = c.count("N"), Q = c.count("Q");
    if (Q < 1) throw DomainError("bv: Q must be >= 1");
    const FactorSieve sieve(N);
    Table t;
    t.columns = {"Q", "discrepancy", "trivial_bound", "ratio"};
    std::vector<std::uint64_t> levels;
    for (std::uint64_t q = 1; q < Q; q *= 2) levels.push_back(q);
    levels.push_back(Q);
    for (auto q : levels) {
        const auto b = gpy::bv_discrepancy(sieve, N, q);
        t.rows.push_back({std::int64_t(q), b.discrepancy, b.trivial_bound, b.discrepancy / b.trivial_bound});
    }
    return t;
}

Table dickson_cmd(const Command& c, std::uint64_t seed) {
    const auto system = parse_system(c.raw("system"));
    const auto box = parse_box(c.raw("box"));
    if (box.dimension() != system.variables()) throw DomainError("dickson: box dimension must match the variables");
    const auto prediction = dickson::dickson_prediction(system, box, c.count("P_max"), seed);
    const FactorSieve sieve(form_maximum(system, box));
    const double count = dickson::weighted_count(sieve, system, box);
    Table t;
    t.meta = {{"complexity", dickson::complexity(system).to_string()}};
    t.columns = {"weighted_count", "beta_inf", "local_product", "prediction", "ratio"};
    t.rows.push_back({count, prediction.beta_inf.value, prediction.product, prediction.prediction,
                      count / prediction.prediction});
    return t;
}

Table tuple_series(const Command& c) {
    const auto tuple = parse_tuple(c.raw("tuple"));
    const auto cutoff = c.count("P_max");
    Table t;
    t.columns = {"P_max", "singular_series", "admissible"};
    t.rows.push_back({std::int64_t(cutoff), dickson::tuple_singular_series(tuple, cutoff),
                      std::int64_t(gpy::is_admissible(tuple))});
    return t;
}

Table gallagher(const Command& c, std::uint64_t seed) {
    const auto k = static_cast<unsigned>(c.count("k"));
    const auto H = c.count("H");
    const auto g = dickson::gallagher_mean(k, H, c.count("P_max"), seed);
    Table t;
    t.columns = {"k", "H", "mean", "tuples", "sampled"};
    t.rows.push_back({std::int64_t(k), std::int64_t(H), g.mean, std::int64_t(g.tuples), std::int64_t(g.sampled)});
    return t;
}

Table complexity_cmd(const Command& c) {
    const auto cx = dickson::complexity(parse_system(c.raw("system")));
    Table t;
    t.columns = {"complexity"};
    t.rows.push_back({cx.is_finite() ? Cell(std::int64_t(cx.value())) : Cell(cx.to_string())});
    return t;
}

Table digits_corr(const Command& c) {
    const auto X_max = c.count("Xmax"), steps = c.count("steps"), ratio = c.count("ratio");
    if (steps < 1 || ratio < 2) throw DomainError("digits-corr: need steps >= 1 and ratio >= 2");
    std::vector<std::uint64_t> xs(steps);
    std::uint64_t X = X_max;
    for (std::uint64_t j = steps; j-- > 0;) {
        if (X < 1) throw DomainError("digits-corr: Xmax too small for the requested steps");
        xs[j] = X;
        X /= ratio;
    }
    const FactorSieve sieve(X_max);
    Table t;
    t.columns = {"X", "correlation", "log2_abs_correlation"};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto x : xs) {
        const double corr = digits::prime_digit_correlation(sieve, x);
        const double lx = std::log(double(x)), ly = std::log(std::abs(corr));
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        t.rows.push_back({std::int64_t(x), corr, std::log2(std::abs(corr))});
    }
    const double n = double(xs.size());
    const double denom = n * sxx - sx * sx;
    t.meta = {{"slope", denom > 0 ? format_cell((n * sxy - sx * sy) / denom) : std::string("NA")}};
    return t;
}

Table spectrum_cmd(const Command& c) {
    const auto k_max = static_cast<unsigned>(c.count("k"));
    const auto k_min = static_cast<unsigned>(c.count("k_min"));
    const auto& name = c.raw("method");
    digits::SpectrumMethod method;
    if (name == "product") method = digits::SpectrumMethod::ProductFormula;
    else if (name == "direct") method = digits::SpectrumMethod::Direct;
    else throw UsageError("unknown spectrum method '" + name + "' (product, direct)");
    if (k_min < 1 || k_min > k_max) throw DomainError("spectrum: need 1 <= k_min <= k");
    Table t;
    t.columns = {"k", "max_abs", "decay_bound", "l1_normalized"};
    for (unsigned k = k_min; k <= k_max; ++k) {
        const auto spec = digits::spectrum(k, method);
        double top = 0.0;
        for (std::uint64_t r = 0; r < spec.size(); ++r) top = std::max(top, spec.magnitude(r));
        t.rows.push_back({std::int64_t(k), top, std::pow(2.0, -double(k) / 10.0),
                          digits::spectrum_l1(spec) / std::pow(2.0, double(k) / 2.0)});
    }
    return t;
}

Table vaughan(const Command& c) {
    const auto X = c.count("X");
    const auto f = named_function(c.raw("f"));
    std::optional<double> U;
    if (!c.raw("U").empty()) U = c.real("U");
    const FactorSieve sieve(X);
    const auto split_sum = bilinear::vaughan_split(sieve, f, X, U);
    Table t;
    t.meta = {{"U_used", format_cell(split_sum.U)}};
    t.columns = {"piece", "real", "imag"};
    const std::pair<const char*, std::complex<double>> pieces[] = {
        {"S1", split_sum.S1}, {"S2", split_sum.S2},   {"S3", split_sum.S3},
        {"S4", split_sum.S4}, {"sum", split_sum.sum()}, {"direct", split_sum.total}};
    for (const auto& [name, z] : pieces) t.rows.push_back({std::string(name), z.real(), z.imag()});
    return t;
}

Table type_sums(const Command& c, std::uint64_t seed) {
    const bilinear::DyadicRange m_range(static_cast<unsigned>(c.count("m_exp")));
    const bilinear::DyadicRange n_range(static_cast<unsigned>(c.count("n_exp")));
    const auto f = named_function(c.raw("f"));
    const double trivial = double(m_range.size()) * double(n_range.size());

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 1.0);
    auto unimodular = [&](std::size_t len) {
        std::vector<std::complex<double>> v(len);
        for (auto& z : v) z = std::polar(1.0, 2.0 * std::numbers::pi * phase(rng));
        return v;
    };
    const auto a = unimodular(m_range.size());
    const auto b = unimodular(n_range.size());
    const double type_i = bilinear::type_i_sum(f, m_range, n_range);
    const double type_ii = std::abs(bilinear::type_ii_sum(f, a, b, m_range, n_range));

    Table t;
    t.columns = {"kind", "value", "trivial", "normalized"};
    t.rows.push_back({std::string("type_i"), type_i, trivial, type_i / trivial});
    t.rows.push_back({std::string("type_ii"), type_ii, trivial, type_ii / trivial});
    return t;
}

Table gowers_cmd(const Command& c, std::uint64_t seed) {
    const auto N = c.count("N");
    const auto k_max = static_cast<unsigned>(c.count("k"));
    const auto& name = c.raw("f");
    if (N < 1) throw DomainError("gowers: N must be >= 1");
    auto e = [](double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); };
    std::function<std::complex<double>(std::uint64_t)> f;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (name == "one") f = [](std::uint64_t) { return std::complex<double>(1.0); };
    else if (name == "linear") {
        const auto r = c.count("r") % N;
        f = [=](std::uint64_t n) { return e(double(r * n % N) / double(N)); };
    } else if (name == "quadratic") f = [=](std::uint64_t n) { return e(double(n % N * (n % N) % N) / double(N)); };
    else if (name == "bracket")
        f = [=](std::uint64_t n) {
            const double inner = std::floor(double(n) * std::numbers::sqrt2);
            return e(std::fmod(double(n) * inner, double(N)) / double(N));
        };
    else if (name == "random") f = [&](std::uint64_t) { return unit(rng) * e(unit(rng)); };
    else throw UsageError("unknown function '" + name + "' (one, linear, quadratic, bracket, random)");

    const auto values = gowers::FiniteFunction::from(N, f);
    const auto bias = gowers::u2_inverse(values);
    Table t;
    t.meta = {{"u2_inverse_r", std::to_string(bias.r)}, {"u2_inverse_correlation", format_cell(bias.correlation)}};
    t.columns = {"k", "norm"};
    if (k_max < 2 || k_max > 4) throw DomainError("gowers: k must lie in {2, 3, 4}");
    for (unsigned k = 2; k <= k_max; ++k) t.rows.push_back({std::int64_t(k), gowers::u_norm(values, k)});
    return t;
}

Table wtrick(const Command& c) {
    const auto M = c.count("M");
    const std::uint64_t W = c.raw("W").empty() ? gowers::default_w_modulus(M) : c.count("W");
    if (W < 1) throw DomainError("wtrick: W must be >= 1");
    std::vector<std::uint64_t> residues;
    if (c.raw("b").empty()) {
        for (std::uint64_t b = 1; b <= W; ++b)
            if (std::gcd(b, W) == 1) residues.push_back(b);
    } else {
        residues.push_back(c.count("b"));
    }
    std::uint64_t top = 0;
    for (auto b : residues) top = std::max(top, W * M + b);
    const FactorSieve sieve(top);
    Table t;
    t.columns = {"W", "b", "M", "mean"};
    for (auto b : residues)
        t.rows.push_back({std::int64_t(W), std::int64_t(b), std::int64_t(M), gowers::w_tricked_lambda(sieve, b, W, M).mean});
    return t;
}

Table heisenberg(const Command& c) {
    const double alpha = c.real("alpha"), beta = c.real("beta"), gamma = c.real("gamma");
    const auto count = c.count("n");
    Table t;
    t.columns = {"n", "a", "b", "c", "reduced_a", "reduced_b", "reduced_c"};
    for (std::uint64_t n = 0; n <= count; ++n) {
        const auto o = gowers::heisenberg_orbit(alpha, beta, gamma, n);
        t.rows.push_back({std::int64_t(n), o.power.a, o.power.b, o.power.c, o.reduced.a, o.reduced.b, o.reduced.c});
    }
    return t;
}

}  // namespace

std::string format_cell(const Cell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(cell));
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (const auto& [key, value] : table.meta) out += "# " + key + ": " + value + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + csv_escape(table.columns[i]);
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(format_cell(row[i]));
        out += "\n";
    }
    return out;
}

std::string to_json(const Table& table) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.meta) doc["meta"][key] = value;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json entry = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            std::visit([&](const auto& v) { entry[table.columns[i]] = v; }, row[i]);
        }
        doc["rows"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

std::string to_plain(const Table& table) {
    std::string out;
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? " " : "") + format_cell(row[i]);
        out += "\n";
    }
    return out;
}

double parse_real(std::string_view text) {
    const std::string s = trim(text);
    if (const auto caret = s.find('^'); caret != std::string::npos)
        return std::pow(parse_real(s.substr(0, caret)), parse_real(s.substr(caret + 1)));
    if (const auto slash = s.find('/'); slash != std::string::npos && slash > 0) {
        const double den = parse_real(s.substr(slash + 1));
        if (den == 0.0) throw UsageError("division by zero in '" + s + "'");
        return parse_real(s.substr(0, slash)) / den;
    }
    return parse_plain(s);
}

std::int64_t parse_integer(std::string_view text) {
    const std::string s = trim(text);
    // Exact integer powers, beyond double's 53-bit mantissa if need be.
    if (const auto caret = s.find('^'); caret != std::string::npos) {
        const std::int64_t base = parse_integer(s.substr(0, caret));
        const std::int64_t exp = parse_integer(s.substr(caret + 1));
        if (exp < 0) throw UsageError("negative exponent in integer '" + s + "'");
        __int128 value = 1;
        for (std::int64_t i = 0; i < exp; ++i) {
            value *= base;
            if (value > __int128(INT64_MAX) || value < -__int128(INT64_MAX)) throw UsageError("integer overflow in '" + s + "'");
        }
        return static_cast<std::int64_t>(value);
    }
    const double value = parse_real(s);
    if (value != std::floor(value) || std::abs(value) >= 9.2e18) throw UsageError("not an integer: '" + s + "'");
    return static_cast<std::int64_t>(value);
}

std::uint64_t parse_count(std::string_view text) {
    const std::int64_t value = parse_integer(text);
    if (value < 0) throw UsageError("expected a non-negative integer, got '" + std::string(text) + "'");
    return static_cast<std::uint64_t>(value);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app("Numerical experiments on primes: sieve weights, prime patterns, digits, bilinear sums, uniformity norms.",
                 "primelab");
    app.fallthrough();
    app.require_subcommand(1);
    Globals globals;
    app.add_option("--format", globals.format, "Output format")->check(CLI::IsMember({"csv", "json", "plain"}))
        ->capture_default_str();
    app.add_option("--output,-o", globals.output, "Write to this file instead of stdout");
    app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();

    std::deque<Command> commands;
    auto add = [&](std::string name, std::string description) -> Command& {
        return commands.emplace_back(app, std::move(name), std::move(description));
    };
    std::uint64_t seed = 0;

    auto& c_gaps = add("gaps", "Sieve-weighted prime densities rho^(i) for an admissible tuple");
    c_gaps.param("N", "1e5", "Range [N, 2N)");
    c_gaps.param("k", "0", "Tuple size (0: take from --tuple)");
    c_gaps.param("l", "1", "Extra power l");
    c_gaps.param("gamma", "0.25", "R = N^gamma");
    c_gaps.param("tuple", "0,2,6", "Comma-separated offsets");
    c_gaps.handler = gaps;

    auto& c_eq = add("eq333", "Main-term divisor sum and its asymptotic ratio");
    c_eq.param("R", "1e4", "Largest truncation level");
    c_eq.param("steps", "2", "Levels R^(j/steps), j = 1..steps");
    c_eq.param("P_max", "1e5", "Euler product cutoff");
    c_eq.handler = eq333;

    auto& c_bv = add("bv", "Bombieri-Vinogradov discrepancy at dyadic Q up to --Q");
    c_bv.param("N", "1e6", "Range [1, N]");
    c_bv.param("Q", "1000", "Largest modulus bound");
    c_bv.handler = bv;

    auto& c_dickson = add("dickson", "Weighted pattern count against the Hardy-Littlewood prediction");
    c_dickson.param("system", "1 0; 1 2", "Rows 'a_1 ... a_d b' separated by ';'");
    c_dickson.param("box", "1 1e6", "Rows 'lo hi' per variable separated by ';'");
    c_dickson.param("P_max", "1e5", "Local factor cutoff");
    c_dickson.handler = [&](const Command& c) { return dickson_cmd(c, seed); };

    auto& c_series = add("tuple-series", "Singular series of a prime tuple");
    c_series.param("tuple", "0,2", "Comma-separated offsets");
    c_series.param("P_max", "1e5", "Prime cutoff");
    c_series.handler = tuple_series;

    auto& c_gallagher = add("gallagher", "Mean singular series over (k+1)-subsets of [0, H]");
    c_gallagher.param("k", "1", "Subsets of size k + 1");
    c_gallagher.param("H", "1000", "Offsets in [0, H]");
    c_gallagher.param("P_max", "1e5", "Prime cutoff");
    c_gallagher.handler = [&](const Command& c) { return gallagher(c, seed); };

    auto& c_cx = add("complexity", "Complexity of a system of linear forms");
    c_cx.param("system", "1 0 0; 1 1 0; 1 2 0", "Rows 'a_1 ... a_d b' separated by ';'");
    c_cx.handler = complexity_cmd;

    auto& c_corr = add("digits-corr", "Correlation of Lambda with (-1)^{digit sum}");
    c_corr.param("Xmax", "2^20", "Largest X");
    c_corr.param("steps", "5", "Number of X values");
    c_corr.param("ratio", "4", "Ratio between consecutive X");
    c_corr.handler = digits_corr;

    auto& c_spec = add("spectrum", "Fourier spectrum of the digit-sum sign on Z/2^k");
    c_spec.param("k", "16", "Largest k");
    c_spec.param("k_min", "1", "Smallest k");
    c_spec.param("method", "product", "product or direct");
    c_spec.handler = spectrum_cmd;

    auto& c_vaughan = add("vaughan", "Vaughan decomposition of sum Lambda(n) f(n)");
    c_vaughan.param("X", "2^16", "Range [1, X]");
    c_vaughan.param("U", "", "Cut parameter (default X^(1/3))");
    c_vaughan.param("f", "thue-morse", "one, thue-morse or e-sqrt2");
    c_vaughan.handler = vaughan;

    auto& c_types = add("type-sums", "Type I and Type II sums on dyadic ranges");
    c_types.param("m_exp", "8", "m in [2^(e-1), 2^e)");
    c_types.param("n_exp", "8", "n in [2^(e-1), 2^e)");
    c_types.param("f", "thue-morse", "one, thue-morse or e-sqrt2");
    c_types.handler = [&](const Command& c) { return type_sums(c, seed); };

    auto& c_gowers = add("gowers", "Uniformity norms U^2 .. U^k of a function on Z/NZ");
    c_gowers.param("N", "127", "Modulus");
    c_gowers.param("k", "3", "Largest norm order");
    c_gowers.param("f", "bracket", "one, linear, quadratic, bracket or random");
    c_gowers.param("r", "1", "Frequency for f = linear");
    c_gowers.handler = [&](const Command& c) { return gowers_cmd(c, seed); };

    auto& c_wtrick = add("wtrick", "Means of the W-tricked von Mangoldt function");
    c_wtrick.param("M", "1e5", "n = 1 .. M");
    c_wtrick.param("W", "", "Modulus (default from log log M)");
    c_wtrick.param("b", "", "Residue (default: every residue coprime to W)");
    c_wtrick.handler = wtrick;

    auto& c_heis = add("heisenberg", "Orbit g^n of a Heisenberg element and its reduction");
    c_heis.param("alpha", "2^0.5", "Entry (1,2)");
    c_heis.param("beta", "0", "Entry (1,3)");
    c_heis.param("gamma", "1", "Entry (2,3)");
    c_heis.param("n", "10", "Powers 0 .. n");
    c_heis.handler = heisenberg;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const Command* chosen = nullptr;
    for (const auto& c : commands)
        if (c.app()->parsed()) chosen = &c;

    try {
        seed = parse_count(globals.seed);
        Table table = chosen->handler(*chosen);
        std::vector<std::pair<std::string, std::string>> meta = {
            {"command", chosen->app()->get_name()}, {"seed", std::to_string(seed)}};
        for (const auto& p : chosen->params()) meta.emplace_back(p.name, p.value);
        meta.insert(meta.end(), table.meta.begin(), table.meta.end());
        table.meta = std::move(meta);

        const std::string text = globals.format == "json"    ? to_json(table)
                                 : globals.format == "plain" ? to_plain(table)
                                                             : to_csv(table);
        if (globals.output.empty()) {
            out << text;
        } else {
            std::ofstream file(globals.output, std::ios::binary);
            if (!(file << text)) throw UsageError("cannot write " + globals.output);
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "primelab: usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "primelab: domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const DegenerateWeightsError& e) {
        err << "primelab: domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const BudgetError& e) {
        err << "primelab: budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        err << "primelab: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace primelab::cli
