#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "sidelz/symbols.hpp"

namespace sidelz {

// Joint Markov chain over states s = x * |B| + y. The transition matrix is
// column-stochastic: transition(next, cur) = P[S_{t+1} = next | S_t = cur].
class MarkovModel {
public:
    // `column_major` holds S*S entries, entry [cur * S + next]. Throws InputError
    // if an entry is negative or a column does not sum to 1 within 1e-12.
    MarkovModel(unsigned x_alphabet, unsigned y_alphabet, std::vector<double> column_major);

    unsigned x_alphabet() const noexcept { return x_alphabet_; }
    unsigned y_alphabet() const noexcept { return y_alphabet_; }
    unsigned state_count() const noexcept { return x_alphabet_ * y_alphabet_; }

    double transition(unsigned next, unsigned cur) const noexcept {
        return columns_[cur * state_count() + next];
    }
    unsigned state(Symbol x, Symbol y) const noexcept { return x * y_alphabet_ + y; }
    Symbol x_of(unsigned s) const noexcept { return s / y_alphabet_; }
    Symbol y_of(unsigned s) const noexcept { return s % y_alphabet_; }

    // Power iteration result, computed once at construction.
    const std::vector<double>& stationary() const noexcept { return stationary_; }

private:
    unsigned x_alphabet_;
    unsigned y_alphabet_;
    std::vector<double> columns_;
    std::vector<double> stationary_;
};

// Four-state binary model with columns [q, r, r, r], uniform, uniform, [r, r, r, q], r = (1-q)/3.
// Throws DomainError for q outside [0, 1].
MarkovModel model_from_q(double q);

// Plain-text form: "x_alphabet y_alphabet" then S rows of S numbers, row = next state,
// column = current state (the matrix as printed). '#' starts a comment.
MarkovModel read_model(std::istream& in);
void write_model(std::ostream& out, const MarkovModel& model);

// Seed for stream `stream` derived from `base` by splitmix64 mixing.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

// Stationary start, then a walk of `length` states. Deterministic in `seed`.
PairedSource generate(const MarkovModel& model, std::size_t length, std::uint64_t seed);

// pi with T pi = pi, sum pi = 1, by power iteration to 1e-12 (on the lazy
// chain (T + I) / 2, which has the same fixed points and no periodicity).
// Throws NumericError when the iteration cap is hit.
std::vector<double> stationary_distribution(const MarkovModel& model);

enum class EntropyMethod : std::uint8_t { exact_markov, monte_carlo, sandwich };

std::string_view to_string(EntropyMethod m) noexcept;

struct EntropyEstimate {
    double value = 0;
    double std_error = 0;
    EntropyMethod method = EntropyMethod::exact_markov;
};

// H(X,Y) = sum_s pi_s H(column s), in bits per symbol.
EntropyEstimate joint_entropy_rate(const MarkovModel& model);

// H(Y_n | Y^{n-1}, S_1) <= H(Y) <= H(Y_n | Y^{n-1}).
struct SandwichBounds {
    double lower = 0;
    double upper = 0;
    std::size_t n = 0;
    bool exact = true;          // false when both ends are Monte Carlo estimates
    double lower_std_error = 0;
    double upper_std_error = 0;
};

// Exact enumeration of Y^n when |B|^n <= 2^22, else Monte Carlo over `trials`
// sampled paths (seeded).
SandwichBounds hidden_entropy_bounds(const MarkovModel& model, std::size_t n,
                                     std::size_t trials = 20000, std::uint64_t seed = 1);

// H(Y): sandwich midpoint, half-width (plus MC error if any) as std_error.
EntropyEstimate hidden_entropy_rate(const MarkovModel& model, std::size_t n,
                                    std::size_t trials = 20000, std::uint64_t seed = 1);

// H(X|Y) = H(X,Y) - H(Y).
EntropyEstimate conditional_entropy_rate(const MarkovModel& model, std::size_t n,
                                         std::size_t trials = 20000, std::uint64_t seed = 1);

// Monte Carlo estimate of H(X_1^L | Y_1^L) in bits per block: the mean of
// -log2 P(x^L | y^L) over `samples` stationary draws, P(y^L) by the forward recursion.
EntropyEstimate block_conditional_entropy(const MarkovModel& model, std::size_t L,
                                          std::size_t samples, std::uint64_t seed);

struct RateBound {
    double value = 0;
    double std_error = 0;
};

// ceil(log2(1+k))/L + H(X_1^L|Y_1^L)/L with k = ceil(L log2|A|).
RateBound rate_bound(const MarkovModel& model, std::size_t L, std::size_t samples,
                     std::uint64_t seed);

}  // namespace sidelz
