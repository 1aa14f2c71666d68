#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sidelz/fixed_lz.hpp"
#include "sidelz/sources.hpp"

namespace sidelz {

struct RateRow {
    std::string algorithm;   // alg1 .. alg4
    std::string param_name;  // "L" or "n_w"
    std::uint64_t param = 0;
    std::string length_name;  // "N" or "K"
    std::uint64_t length = 0;
    std::optional<double> q;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double mean_rate = 0;
    double std_error = 0;
    std::optional<double> bound;
    std::optional<double> bound_std_error;
    std::vector<double> trial_rates;  // not serialized; trial t used seed derive_seed(seed, t)
};

struct RateReport {
    std::vector<RateRow> rows;
    // Per-phrase audit of variant 3 against variant 1 on identical inputs.
    std::uint64_t dominance_checked = 0;
    std::uint64_t dominance_violations = 0;

    const RateRow* find(const std::string& algorithm, std::uint64_t param,
                        std::uint64_t length) const;
};

struct FixedRateExperiment {
    std::vector<FixedVariant> variants{FixedVariant::plain};
    std::vector<std::uint64_t> phrase_lengths{5, 10, 15};
    // Prefix lengths N at which cumulative rates are reported; the largest is simulated.
    std::vector<std::uint64_t> checkpoints{2000};
    std::size_t trials = 30;
    std::uint64_t seed = 7;
    unsigned m = 3;
    bool with_bound = true;
    std::size_t bound_samples = 200000;
    std::optional<double> q;
};

// Rates include the uncompressed first phrase. Every variant and every L sees
// the same source realization per trial.
RateReport run_rate_experiment(const MarkovModel& model, const FixedRateExperiment& exp);

struct WindowRateExperiment {
    std::vector<std::uint64_t> windows{256, 4096, 65536};
    std::uint64_t length_factor = 10;  // K = factor * n_w
    std::size_t trials = 10;
    std::uint64_t seed = 7;
    std::optional<double> q;
};

// Rates include the raw first window.
RateReport run_window_experiment(const MarkovModel& model, const WindowRateExperiment& exp);

// Cumulative bits after each phrase: out[i] = bits of phrases 1..i+1.
std::vector<std::uint64_t> cumulative_bits(const std::vector<PhraseTrace>& trace);

struct LemmaRow {
    std::string x;  // block as a digit string
    std::string y;
    double probability = 0;  // P[X_1^L = x | Y_1^L = y], exact
    double bound = 0;        // 1 / probability
    std::uint64_t observations = 0;
    double mean_c = 0;
    double std_error = 0;
    bool pass = false;
};

struct LemmaCheckReport {
    std::size_t block = 0;
    std::uint64_t length = 0;
    std::uint64_t seed = 0;
    std::uint64_t skipped = 0;  // origins with no (X,Y)-recurrence in the simulated past
    std::vector<LemmaRow> rows;          // observed pairs only
    std::vector<std::string> unobserved;  // "x/y" pairs with P > 0 never seen
    bool all_pass() const;
};

struct LemmaCheckConfig {
    std::size_t block = 3;
    std::uint64_t length = 1'000'000;
    std::uint64_t burn_in = 4096;
    std::size_t batches = 50;
    std::uint64_t seed = 11;
};

// Measures C at every origin after the burn-in of one long realization.
// Standard errors are batch means over contiguous stretches of origins.
LemmaCheckReport lemma1_check(const MarkovModel& model, const LemmaCheckConfig& cfg);

// P[X_1^L = x, Y_1^L = y] and P[Y_1^L = y] for a stationary start.
double block_joint_probability(const MarkovModel& model, const std::vector<Symbol>& x,
                               const std::vector<Symbol>& y);
double block_side_probability(const MarkovModel& model, const std::vector<Symbol>& y);

struct Alg2AdvantageRow {
    std::uint64_t prefix = 0;        // N
    double case1_frequency = 0;      // share of phrases 2..N with 1 <= n_i <= 2^k - 1
    std::optional<double> threshold; // 1 - 1/d, d = ceil(log2(1+k)) - ceil(log2(1+m))
    std::optional<bool> condition_holds;
    std::uint64_t alg1_bits = 0;
    std::uint64_t alg2_bits = 0;
};

struct Alg2Advantage {
    unsigned k = 0;
    unsigned m = 0;
    int d = 0;
    // "defined", "undefined" (d = 0) or "unsatisfiable" (d < 0).
    std::string condition;
    std::vector<Alg2AdvantageRow> rows;
};

// Traces must come from variants 1 and 2 on the same input.
Alg2Advantage alg2_advantage(const std::vector<PhraseTrace>& alg1,
                             const std::vector<PhraseTrace>& alg2, unsigned k, unsigned m,
                             const std::vector<std::uint64_t>& prefixes);

void write_rate_csv(std::ostream& out, const RateReport& report);
void write_lemma_csv(std::ostream& out, const LemmaCheckReport& report);
void write_alg2_csv(std::ostream& out, const Alg2Advantage& adv);

// %.9g, the only floating-point format used in reports.
std::string format_number(double v);

}  // namespace sidelz
