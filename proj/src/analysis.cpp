#include "sidelz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sidelz/errors.hpp"
#include "sidelz/window_lz.hpp"

namespace sidelz {

namespace {

struct Summary {
    double mean = 0;
    double std_error = 0;
};

Summary summarize(const std::vector<double>& v) {
    Summary s;
    if (v.empty()) {
        return s;
    }
    for (double x : v) {
        s.mean += x;
    }
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0;
        for (double x : v) {
            ss += (x - s.mean) * (x - s.mean);
        }
        const auto n = static_cast<double>(v.size());
        s.std_error = std::sqrt(ss / (n - 1) / n);
    }
    return s;
}

std::string variant_name(FixedVariant v) {
    return "alg" + std::to_string(static_cast<int>(v));
}

std::string block_string(const std::vector<Symbol>& block, unsigned alphabet) {
    std::string out;
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (alphabet > 10 && i > 0) {
            out += '.';
        }
        out += std::to_string(block[i]);
    }
    return out;
}

std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t limit) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (p > limit / base) {
            throw InputError("block alphabet too large for an exhaustive lemma check");
        }
        p *= base;
    }
    return p;
}

}  // namespace

const RateRow* RateReport::find(const std::string& algorithm, std::uint64_t param,
                                std::uint64_t length) const {
    for (const RateRow& r : rows) {
        if (r.algorithm == algorithm && r.param == param && r.length == length) {
            return &r;
        }
    }
    return nullptr;
}

std::vector<std::uint64_t> cumulative_bits(const std::vector<PhraseTrace>& trace) {
    std::vector<std::uint64_t> out(trace.size());
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        acc += trace[i].emitted_bits;
        out[i] = acc;
    }
    return out;
}

RateReport run_rate_experiment(const MarkovModel& model, const FixedRateExperiment& exp) {
    if (exp.checkpoints.empty() || exp.phrase_lengths.empty() || exp.variants.empty()) {
        throw InputError("rate experiment needs variants, phrase lengths and checkpoints");
    }
    if (exp.trials == 0) {
        throw InputError("rate experiment needs at least one trial");
    }
    const std::uint64_t n_max = *std::max_element(exp.checkpoints.begin(), exp.checkpoints.end());
    if (*std::min_element(exp.checkpoints.begin(), exp.checkpoints.end()) == 0) {
        throw InputError("checkpoints must be positive");
    }
    const bool audit = std::count(exp.variants.begin(), exp.variants.end(), FixedVariant::plain) &&
                       std::count(exp.variants.begin(), exp.variants.end(), FixedVariant::adaptive);

    RateReport report;
    for (std::uint64_t L : exp.phrase_lengths) {
        std::optional<RateBound> bound;
        if (exp.with_bound) {
            bound = rate_bound(model, L, exp.bound_samples, derive_seed(exp.seed, 1'000'000 + L));
        }
        // rates[variant][checkpoint][trial]
        std::vector<std::vector<std::vector<double>>> rates(
            exp.variants.size(),
            std::vector<std::vector<double>>(exp.checkpoints.size(),
                                             std::vector<double>(exp.trials)));
        for (std::size_t t = 0; t < exp.trials; ++t) {
            const PairedSource src = generate(model, n_max * L, derive_seed(exp.seed, t));
            std::vector<std::vector<PhraseTrace>> traces(exp.variants.size());
            for (std::size_t v = 0; v < exp.variants.size(); ++v) {
                FixedParseConfig cfg;
                cfg.phrase_length = L;
                cfg.phrase_count = n_max;
                cfg.variant = exp.variants[v];
                cfg.m = exp.m;
                cfg.x_alphabet = model.x_alphabet();
                cfg.y_alphabet = model.y_alphabet();
                traces[v] = encode_fixed(src.x, src.y, cfg).trace;
                const auto cum = cumulative_bits(traces[v]);
                for (std::size_t c = 0; c < exp.checkpoints.size(); ++c) {
                    const std::uint64_t N = exp.checkpoints[c];
                    rates[v][c][t] =
                        static_cast<double>(cum[N - 1]) / static_cast<double>(N * L);
                }
            }
            if (audit) {
                const auto p1 = std::find(exp.variants.begin(), exp.variants.end(),
                                          FixedVariant::plain) - exp.variants.begin();
                const auto p3 = std::find(exp.variants.begin(), exp.variants.end(),
                                          FixedVariant::adaptive) - exp.variants.begin();
                for (std::size_t i = 0; i < n_max; ++i) {
                    ++report.dominance_checked;
                    if (traces[p3][i].emitted_bits > traces[p1][i].emitted_bits) {
                        ++report.dominance_violations;
                    }
                }
            }
        }
        for (std::size_t v = 0; v < exp.variants.size(); ++v) {
            for (std::size_t c = 0; c < exp.checkpoints.size(); ++c) {
                RateRow row;
                row.algorithm = variant_name(exp.variants[v]);
                row.param_name = "L";
                row.param = L;
                row.length_name = "N";
                row.length = exp.checkpoints[c];
                row.q = exp.q;
                row.trials = exp.trials;
                row.seed = exp.seed;
                const Summary s = summarize(rates[v][c]);
                row.mean_rate = s.mean;
                row.std_error = s.std_error;
                if (bound) {
                    row.bound = bound->value;
                    row.bound_std_error = bound->std_error;
                }
                row.trial_rates = std::move(rates[v][c]);
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

RateReport run_window_experiment(const MarkovModel& model, const WindowRateExperiment& exp) {
    if (exp.windows.empty() || exp.trials == 0 || exp.length_factor < 2) {
        throw InputError("window experiment needs windows, trials and a length factor >= 2");
    }
    RateReport report;
    for (std::uint64_t nw : exp.windows) {
        WindowConfig cfg;
        cfg.window = nw;
        cfg.length = nw * exp.length_factor;
        cfg.x_alphabet = model.x_alphabet();
        cfg.y_alphabet = model.y_alphabet();
        RateRow row;
        row.algorithm = "alg4";
        row.param_name = "n_w";
        row.param = nw;
        row.length_name = "K";
        row.length = cfg.length;
        row.q = exp.q;
        row.trials = exp.trials;
        row.seed = exp.seed;
        for (std::size_t t = 0; t < exp.trials; ++t) {
            const PairedSource src = generate(model, cfg.length, derive_seed(exp.seed, t));
            const WindowEncoding enc = encode_window(src.x, src.y, cfg);
            row.trial_rates.push_back(static_cast<double>(enc.code.bit_length()) /
                                      static_cast<double>(cfg.length));
        }
        const Summary s = summarize(row.trial_rates);
        row.mean_rate = s.mean;
        row.std_error = s.std_error;
        report.rows.push_back(std::move(row));
    }
    return report;
}

double block_joint_probability(const MarkovModel& model, const std::vector<Symbol>& x,
                               const std::vector<Symbol>& y) {
    if (x.size() != y.size() || x.empty()) {
        throw InputError("blocks must be non-empty and of equal length");
    }
    unsigned s = model.state(x[0], y[0]);
    double p = model.stationary()[s];
    for (std::size_t t = 1; t < x.size(); ++t) {
        const unsigned next = model.state(x[t], y[t]);
        p *= model.transition(next, s);
        s = next;
    }
    return p;
}

double block_side_probability(const MarkovModel& model, const std::vector<Symbol>& y) {
    if (y.empty()) {
        throw InputError("block must be non-empty");
    }
    const unsigned S = model.state_count();
    std::vector<double> alpha(S);
    std::vector<double> next(S);
    for (unsigned s = 0; s < S; ++s) {
        alpha[s] = model.y_of(s) == y[0] ? model.stationary()[s] : 0.0;
    }
    for (std::size_t t = 1; t < y.size(); ++t) {
        for (unsigned nx = 0; nx < S; ++nx) {
            double v = 0;
            if (model.y_of(nx) == y[t]) {
                for (unsigned cur = 0; cur < S; ++cur) {
                    v += model.transition(nx, cur) * alpha[cur];
                }
            }
            next[nx] = v;
        }
        alpha.swap(next);
    }
    double p = 0;
    for (double a : alpha) {
        p += a;
    }
    return p;
}

bool LemmaCheckReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const LemmaRow& r) { return r.pass; });
}

LemmaCheckReport lemma1_check(const MarkovModel& model, const LemmaCheckConfig& cfg) {
    const std::size_t L = cfg.block;
    if (L == 0 || cfg.batches < 2) {
        throw InputError("lemma check needs L >= 1 and at least 2 batches");
    }
    if (cfg.length < cfg.burn_in + L + cfg.batches) {
        throw InputError("lemma check: simulation too short for the burn-in");
    }
    const unsigned S = model.state_count();
    const unsigned B = model.y_alphabet();
    const std::uint64_t joint_grams = checked_power(S, L, std::uint64_t{1} << 20);
    const std::uint64_t side_grams = checked_power(B, L, std::uint64_t{1} << 20);

    const PairedSource src = generate(model, cfg.length, cfg.seed);
    const std::size_t origins = cfg.length - L + 1;

    std::vector<std::uint64_t> side_count(side_grams, 0);
    std::vector<std::int64_t> count_at_last(joint_grams, -1);
    std::vector<double> batch_sum(joint_grams * cfg.batches, 0.0);
    std::vector<std::uint64_t> batch_n(joint_grams * cfg.batches, 0);

    LemmaCheckReport report;
    report.block = L;
    report.length = cfg.length;
    report.seed = cfg.seed;
    const std::uint64_t measured = origins - cfg.burn_in;
    for (std::size_t tau = 0; tau < origins; ++tau) {
        std::uint64_t gj = 0;
        std::uint64_t gy = 0;
        for (std::size_t j = 0; j < L; ++j) {
            gj = gj * S + model.state(src.x[tau + j], src.y[tau + j]);
            gy = gy * B + src.y[tau + j];
        }
        if (tau >= cfg.burn_in) {
            if (count_at_last[gj] < 0) {
                ++report.skipped;
            } else {
                const auto c = static_cast<double>(side_count[gy] -
                                                   static_cast<std::uint64_t>(count_at_last[gj]));
                const std::size_t b = (tau - cfg.burn_in) * cfg.batches / measured;
                batch_sum[gj * cfg.batches + b] += c;
                ++batch_n[gj * cfg.batches + b];
            }
        }
        count_at_last[gj] = static_cast<std::int64_t>(side_count[gy]);
        ++side_count[gy];
    }

    std::vector<Symbol> xs(L);
    std::vector<Symbol> ys(L);
    for (std::uint64_t gj = 0; gj < joint_grams; ++gj) {
        std::uint64_t code = gj;
        for (std::size_t j = L; j-- > 0;) {
            const auto s = static_cast<unsigned>(code % S);
            code /= S;
            xs[j] = model.x_of(s);
            ys[j] = model.y_of(s);
        }
        const double pxy = block_joint_probability(model, xs, ys);
        if (pxy <= 0) {
            continue;
        }
        double total = 0;
        std::uint64_t n = 0;
        for (std::size_t b = 0; b < cfg.batches; ++b) {
            total += batch_sum[gj * cfg.batches + b];
            n += batch_n[gj * cfg.batches + b];
        }
        const std::string label_x = block_string(xs, model.x_alphabet());
        const std::string label_y = block_string(ys, model.y_alphabet());
        if (n == 0) {
            report.unobserved.push_back(label_x + "/" + label_y);
            continue;
        }
        LemmaRow row;
        row.x = label_x;
        row.y = label_y;
        row.probability = pxy / block_side_probability(model, ys);
        row.bound = 1.0 / row.probability;
        row.observations = n;
        row.mean_c = total / static_cast<double>(n);
        double ss = 0;
        for (std::size_t b = 0; b < cfg.batches; ++b) {
            const double dev = batch_sum[gj * cfg.batches + b] -
                               row.mean_c * static_cast<double>(batch_n[gj * cfg.batches + b]);
            ss += dev * dev;
        }
        const auto nb = static_cast<double>(cfg.batches);
        row.std_error = std::sqrt(nb / (nb - 1) * ss) / static_cast<double>(n);
        row.pass = row.mean_c <= row.bound + 3 * row.std_error;
        report.rows.push_back(std::move(row));
    }
    return report;
}

Alg2Advantage alg2_advantage(const std::vector<PhraseTrace>& alg1,
                             const std::vector<PhraseTrace>& alg2, unsigned k, unsigned m,
                             const std::vector<std::uint64_t>& prefixes) {
    if (alg1.size() != alg2.size()) {
        throw InputError("alg2_advantage: traces differ in length");
    }
    Alg2Advantage out;
    out.k = k;
    out.m = m;
    out.d = static_cast<int>(ceil_log2(std::uint64_t{k} + 1)) -
            static_cast<int>(ceil_log2(std::uint64_t{m} + 1));
    out.condition = out.d > 0 ? "defined" : out.d == 0 ? "undefined" : "unsatisfiable";

    const auto cum1 = cumulative_bits(alg1);
    const auto cum2 = cumulative_bits(alg2);
    const std::uint64_t top = std::uint64_t{1} << k;
    std::vector<std::uint64_t> case1(alg1.size() + 1, 0);
    for (std::size_t i = 0; i < alg1.size(); ++i) {
        const bool hit = alg1[i].index >= 2 && alg1[i].n >= 1 && alg1[i].n < top;
        case1[i + 1] = case1[i] + (hit ? 1 : 0);
    }
    for (std::uint64_t N : prefixes) {
        if (N == 0 || N > alg1.size()) {
            throw InputError("alg2_advantage: prefix " + std::to_string(N) + " out of range");
        }
        Alg2AdvantageRow row;
        row.prefix = N;
        row.case1_frequency =
            N > 1 ? static_cast<double>(case1[N]) / static_cast<double>(N - 1) : 0.0;
        if (out.d > 0) {
            row.threshold = 1.0 - 1.0 / out.d;
            row.condition_holds = row.case1_frequency <= *row.threshold;
        } else if (out.d < 0) {
            row.condition_holds = false;
        }
        row.alg1_bits = cum1[N - 1];
        row.alg2_bits = cum2[N - 1];
        out.rows.push_back(row);
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

void write_rate_csv(std::ostream& out, const RateReport& report) {
    out << "algorithm,param_name,param,length_name,length,q,trials,seed,mean_rate,std_error,"
           "bound,bound_std_error,transition_convention\n";
    for (const RateRow& r : report.rows) {
        out << r.algorithm << ',' << r.param_name << ',' << r.param << ',' << r.length_name << ','
            << r.length << ',' << opt(r.q) << ',' << r.trials << ',' << r.seed << ','
            << format_number(r.mean_rate) << ',' << format_number(r.std_error) << ','
            << opt(r.bound) << ',' << opt(r.bound_std_error) << ",column_stochastic\n";
    }
}

void write_lemma_csv(std::ostream& out, const LemmaCheckReport& report) {
    out << "L,length,seed,x,y,probability,bound,observations,mean_c,std_error,pass\n";
    for (const LemmaRow& r : report.rows) {
        out << report.block << ',' << report.length << ',' << report.seed << ',' << r.x << ','
            << r.y << ',' << format_number(r.probability) << ',' << format_number(r.bound) << ','
            << r.observations << ',' << format_number(r.mean_c) << ','
            << format_number(r.std_error) << ',' << (r.pass ? "pass" : "fail") << '\n';
    }
}

void write_alg2_csv(std::ostream& out, const Alg2Advantage& adv) {
    out << "N,k,m,condition,case1_frequency,threshold,condition_holds,alg1_bits,alg2_bits\n";
    for (const Alg2AdvantageRow& r : adv.rows) {
        out << r.prefix << ',' << adv.k << ',' << adv.m << ',' << adv.condition << ','
            << format_number(r.case1_frequency) << ',' << opt(r.threshold) << ','
            << (r.condition_holds ? (*r.condition_holds ? "true" : "false") : "") << ','
            << r.alg1_bits << ',' << r.alg2_bits << '\n';
    }
}

}  // namespace sidelz
