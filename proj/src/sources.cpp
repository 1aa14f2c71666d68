#include "sidelz/sources.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "sidelz/errors.hpp"

namespace sidelz {

namespace {

constexpr double kColumnTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-12;
constexpr std::size_t kStationaryIterations = 10'000'000;
constexpr std::uint64_t kExactLeafBudget = std::uint64_t{1} << 20;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw from a cumulative table whose last entry is ~1.
unsigned draw(const double* cumulative, unsigned count, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    for (unsigned i = 0; i + 1 < count; ++i) {
        if (u < cumulative[i]) {
            return i;
        }
    }
    return count - 1;
}

double entropy_bits(const double* p, unsigned count) {
    double h = 0;
    for (unsigned i = 0; i < count; ++i) {
        if (p[i] > 0) {
            h -= p[i] * std::log2(p[i]);
        }
    }
    return h;
}

struct Sampler {
    explicit Sampler(const MarkovModel& m) : model(m), S(m.state_count()), start(S), cols(S * S) {
        double acc = 0;
        for (unsigned s = 0; s < S; ++s) {
            acc += m.stationary()[s];
            start[s] = acc;
        }
        for (unsigned cur = 0; cur < S; ++cur) {
            acc = 0;
            for (unsigned next = 0; next < S; ++next) {
                acc += m.transition(next, cur);
                cols[cur * S + next] = acc;
            }
        }
    }

    unsigned first(std::mt19937_64& rng) const { return draw(start.data(), S, rng); }
    unsigned step(unsigned cur, std::mt19937_64& rng) const {
        return draw(cols.data() + std::size_t{cur} * S, S, rng);
    }

    const MarkovModel& model;
    unsigned S;
    std::vector<double> start;
    std::vector<double> cols;
};

// Normalized forward recursion over the hidden state given the observed y's.
class Forward {
public:
    explicit Forward(const MarkovModel& m) : model_(m), alpha_(m.state_count()), next_(alpha_) {}

    // log2 P(y_1 | start), start given as a distribution over states.
    double begin(const std::vector<double>& start, Symbol y) {
        double total = 0;
        for (unsigned s = 0; s < alpha_.size(); ++s) {
            alpha_[s] = model_.y_of(s) == y ? start[s] : 0.0;
            total += alpha_[s];
        }
        return normalize(total);
    }

    // log2 P(y_t | y_1^{t-1}, start).
    double advance(Symbol y) {
        const unsigned S = static_cast<unsigned>(alpha_.size());
        double total = 0;
        for (unsigned nx = 0; nx < S; ++nx) {
            double v = 0;
            if (model_.y_of(nx) == y) {
                for (unsigned cur = 0; cur < S; ++cur) {
                    v += model_.transition(nx, cur) * alpha_[cur];
                }
            }
            next_[nx] = v;
            total += v;
        }
        alpha_.swap(next_);
        return normalize(total);
    }

private:
    double normalize(double total) {
        if (!(total > 0) || !std::isfinite(total)) {
            throw NumericError("forward recursion reached a zero-probability observation");
        }
        for (double& a : alpha_) {
            a /= total;
        }
        return std::log2(total);
    }

    const MarkovModel& model_;
    std::vector<double> alpha_;
    std::vector<double> next_;
};

// Accumulates sum over y^t of -P log2 P, for every t <= n, by depth-first
// enumeration of Y prefixes with unnormalized forward vectors.
class PrefixEntropy {
public:
    PrefixEntropy(const MarkovModel& m, std::size_t n)
        : model_(m), n_(n), S_(m.state_count()), alphas_((n + 1) * S_), h_(n + 1, 0.0) {}

    void run(const std::vector<double>& start, double weight) {
        weight_ = weight;
        for (Symbol y = 0; y < model_.y_alphabet(); ++y) {
            double total = 0;
            for (unsigned s = 0; s < S_; ++s) {
                const double v = model_.y_of(s) == y ? start[s] : 0.0;
                alphas_[S_ + s] = v;
                total += v;
            }
            visit(1, total);
        }
    }

    const std::vector<double>& entropies() const noexcept { return h_; }

private:
    void visit(std::size_t depth, double p) {
        if (p <= 0) {
            return;
        }
        h_[depth] -= weight_ * p * std::log2(p);
        if (depth == n_) {
            return;
        }
        const double* alpha = alphas_.data() + depth * S_;
        double* next = alphas_.data() + (depth + 1) * S_;
        for (Symbol y = 0; y < model_.y_alphabet(); ++y) {
            double total = 0;
            for (unsigned nx = 0; nx < S_; ++nx) {
                double v = 0;
                if (model_.y_of(nx) == y) {
                    for (unsigned cur = 0; cur < S_; ++cur) {
                        v += model_.transition(nx, cur) * alpha[cur];
                    }
                }
                next[nx] = v;
                total += v;
            }
            visit(depth + 1, total);
        }
    }

    const MarkovModel& model_;
    std::size_t n_;
    unsigned S_;
    std::vector<double> alphas_;
    std::vector<double> h_;
    double weight_ = 1;
};

struct MeanAccumulator {
    void add(double v) {
        ++count;
        const double d = v - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (v - mean);
    }
    double std_error() const {
        if (count < 2) {
            return 0;
        }
        return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
    }
    std::size_t count = 0;
    double mean = 0;
    double m2 = 0;
};

}  // namespace

MarkovModel::MarkovModel(unsigned x_alphabet, unsigned y_alphabet, std::vector<double> column_major)
    : x_alphabet_(x_alphabet), y_alphabet_(y_alphabet), columns_(std::move(column_major)) {
    if (x_alphabet_ < 2 || y_alphabet_ < 2) {
        throw InputError("alphabet sizes must be at least 2");
    }
    const unsigned S = state_count();
    if (columns_.size() != std::size_t{S} * S) {
        throw InputError("transition matrix must have " + std::to_string(S * S) + " entries");
    }
    for (unsigned cur = 0; cur < S; ++cur) {
        double sum = 0;
        for (unsigned next = 0; next < S; ++next) {
            const double v = transition(next, cur);
            if (!(v >= 0) || !std::isfinite(v)) {
                throw InputError("transition matrix has a negative or non-finite entry");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kColumnTolerance) {
            throw InputError("column " + std::to_string(cur) + " sums to " + std::to_string(sum));
        }
    }
    stationary_ = stationary_distribution(*this);
}

MarkovModel model_from_q(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw DomainError("q must lie in [0, 1]");
    }
    const double r = (1.0 - q) / 3.0;
    return MarkovModel(2, 2,
                       {q, r, r, r,  //
                        .25, .25, .25, .25,  //
                        .25, .25, .25, .25,  //
                        r, r, r, q});
}

MarkovModel read_model(std::istream& in) {
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string tok;
        while (fields >> tok) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(tok, &used));
                if (used != tok.size()) {
                    throw std::invalid_argument(tok);
                }
            } catch (const std::exception&) {
                throw InputError("model file: bad number '" + tok + "'");
            }
        }
    }
    if (values.size() < 2) {
        throw InputError("model file: missing alphabet sizes");
    }
    const auto a = static_cast<unsigned>(values[0]);
    const auto b = static_cast<unsigned>(values[1]);
    if (a != values[0] || b != values[1] || a < 2 || b < 2) {
        throw InputError("model file: alphabet sizes must be integers >= 2");
    }
    const std::size_t S = std::size_t{a} * b;
    if (values.size() != 2 + S * S) {
        throw InputError("model file: expected " + std::to_string(S * S) + " matrix entries");
    }
    std::vector<double> columns(S * S);
    for (std::size_t next = 0; next < S; ++next) {
        for (std::size_t cur = 0; cur < S; ++cur) {
            columns[cur * S + next] = values[2 + next * S + cur];
        }
    }
    return MarkovModel(a, b, std::move(columns));
}

void write_model(std::ostream& out, const MarkovModel& model) {
    const unsigned S = model.state_count();
    out << model.x_alphabet() << ' ' << model.y_alphabet() << '\n';
    const auto old = out.precision(17);
    for (unsigned next = 0; next < S; ++next) {
        for (unsigned cur = 0; cur < S; ++cur) {
            out << (cur ? " " : "") << model.transition(next, cur);
        }
        out << '\n';
    }
    out.precision(old);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

PairedSource generate(const MarkovModel& model, std::size_t length, std::uint64_t seed) {
    const Sampler sampler(model);
    std::mt19937_64 rng(seed);
    std::vector<Symbol> x(length);
    std::vector<Symbol> y(length);
    unsigned s = 0;
    for (std::size_t i = 0; i < length; ++i) {
        s = i == 0 ? sampler.first(rng) : sampler.step(s, rng);
        x[i] = model.x_of(s);
        y[i] = model.y_of(s);
    }
    return {SymbolSequence(model.x_alphabet(), std::move(x)),
            SymbolSequence(model.y_alphabet(), std::move(y))};
}

std::vector<double> stationary_distribution(const MarkovModel& model) {
    const unsigned S = model.state_count();
    std::vector<double> pi(S, 1.0 / S);
    std::vector<double> next(S);
    for (std::size_t it = 0; it < kStationaryIterations; ++it) {
        double delta = 0;
        for (unsigned nx = 0; nx < S; ++nx) {
            double v = 0;
            for (unsigned cur = 0; cur < S; ++cur) {
                v += model.transition(nx, cur) * pi[cur];
            }
            next[nx] = 0.5 * (v + pi[nx]);
        }
        double total = 0;
        for (double v : next) {
            total += v;
        }
        for (unsigned s = 0; s < S; ++s) {
            next[s] /= total;
            delta = std::max(delta, std::abs(next[s] - pi[s]));
        }
        pi.swap(next);
        if (delta < kStationaryTolerance) {
            return pi;
        }
    }
    throw NumericError("stationary distribution: power iteration did not converge");
}

std::string_view to_string(EntropyMethod m) noexcept {
    switch (m) {
    case EntropyMethod::exact_markov: return "exact_markov";
    case EntropyMethod::monte_carlo: return "monte_carlo";
    case EntropyMethod::sandwich: return "sandwich";
    }
    return "unknown";
}

EntropyEstimate joint_entropy_rate(const MarkovModel& model) {
    const unsigned S = model.state_count();
    std::vector<double> column(S);
    double h = 0;
    for (unsigned cur = 0; cur < S; ++cur) {
        for (unsigned nx = 0; nx < S; ++nx) {
            column[nx] = model.transition(nx, cur);
        }
        h += model.stationary()[cur] * entropy_bits(column.data(), S);
    }
    return {h, 0.0, EntropyMethod::exact_markov};
}

SandwichBounds hidden_entropy_bounds(const MarkovModel& model, std::size_t n, std::size_t trials,
                                     std::uint64_t seed) {
    if (n == 0) {
        throw InputError("sandwich length n must be positive");
    }
    const unsigned S = model.state_count();
    const auto& pi = model.stationary();
    SandwichBounds out;
    out.n = n;

    const double leaves = std::pow(static_cast<double>(model.y_alphabet()), static_cast<double>(n));
    if (leaves <= static_cast<double>(kExactLeafBudget)) {
        PrefixEntropy plain(model, n);
        plain.run(pi, 1.0);
        PrefixEntropy given_start(model, n);
        std::vector<double> delta(S, 0.0);
        for (unsigned s = 0; s < S; ++s) {
            if (pi[s] <= 0) {
                continue;
            }
            delta.assign(S, 0.0);
            delta[s] = 1.0;
            given_start.run(delta, pi[s]);
        }
        const auto& h = plain.entropies();
        const auto& hc = given_start.entropies();
        out.upper = h[n] - h[n - 1];
        out.lower = hc[n] - hc[n - 1];
        return out;
    }

    if (trials < 2) {
        throw InputError("Monte Carlo sandwich needs at least 2 trials");
    }
    out.exact = false;
    const Sampler sampler(model);
    std::mt19937_64 rng(seed);
    Forward fwd(model);
    Forward fwd_start(model);
    std::vector<double> delta(S, 0.0);
    MeanAccumulator upper;
    MeanAccumulator lower;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        unsigned s = sampler.first(rng);
        delta.assign(S, 0.0);
        delta[s] = 1.0;
        double last = fwd.begin(pi, model.y_of(s));
        double last_start = fwd_start.begin(delta, model.y_of(s));
        for (std::size_t t = 1; t < n; ++t) {
            s = sampler.step(s, rng);
            last = fwd.advance(model.y_of(s));
            last_start = fwd_start.advance(model.y_of(s));
        }
        upper.add(-last);
        lower.add(-last_start);
    }
    out.upper = upper.mean;
    out.lower = lower.mean;
    out.upper_std_error = upper.std_error();
    out.lower_std_error = lower.std_error();
    return out;
}

EntropyEstimate hidden_entropy_rate(const MarkovModel& model, std::size_t n, std::size_t trials,
                                    std::uint64_t seed) {
    const SandwichBounds b = hidden_entropy_bounds(model, n, trials, seed);
    const double half_width = std::max(0.0, b.upper - b.lower) / 2;
    const double mc = std::max(b.upper_std_error, b.lower_std_error);
    return {(b.upper + b.lower) / 2, half_width + mc, EntropyMethod::sandwich};
}

EntropyEstimate conditional_entropy_rate(const MarkovModel& model, std::size_t n,
                                         std::size_t trials, std::uint64_t seed) {
    const EntropyEstimate joint = joint_entropy_rate(model);
    const EntropyEstimate hy = hidden_entropy_rate(model, n, trials, seed);
    return {joint.value - hy.value, hy.std_error, EntropyMethod::sandwich};
}

EntropyEstimate block_conditional_entropy(const MarkovModel& model, std::size_t L,
                                          std::size_t samples, std::uint64_t seed) {
    if (L == 0) {
        throw InputError("block length L must be positive");
    }
    if (samples < 2) {
        throw InputError("block entropy needs at least 2 samples");
    }
    const Sampler sampler(model);
    std::mt19937_64 rng(seed);
    Forward fwd(model);
    MeanAccumulator acc;
    const auto& pi = model.stationary();
    for (std::size_t i = 0; i < samples; ++i) {
        unsigned s = sampler.first(rng);
        double log_joint = std::log2(pi[s]);
        double log_y = fwd.begin(pi, model.y_of(s));
        for (std::size_t t = 1; t < L; ++t) {
            const unsigned next = sampler.step(s, rng);
            log_joint += std::log2(model.transition(next, s));
            log_y += fwd.advance(model.y_of(next));
            s = next;
        }
        acc.add(log_y - log_joint);
    }
    return {acc.mean, acc.std_error(), EntropyMethod::monte_carlo};
}

RateBound rate_bound(const MarkovModel& model, std::size_t L, std::size_t samples,
                     std::uint64_t seed) {
    const EntropyEstimate h = block_conditional_entropy(model, L, samples, seed);
    const std::uint64_t k = raw_bit_width(model.x_alphabet(), L);
    const double len = static_cast<double>(L);
    return {static_cast<double>(ceil_log2(k + 1)) / len + h.value / len, h.std_error / len};
}

}  // namespace sidelz
