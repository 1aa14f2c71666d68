// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes, except those named with
// --allow-fail=<n>[,<n>...]; those still print FAIL but do not fail the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sidelz/analysis.hpp"
#include "sidelz/errors.hpp"
#include "sidelz/fixed_lz.hpp"
#include "sidelz/matching.hpp"
#include "sidelz/prefix_codes.hpp"
#include "sidelz/sources.hpp"
#include "sidelz/window_lz.hpp"
#include "closed_form.hpp"

using namespace sidelz;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Pair {
    std::string name;
    SymbolSequence x;
    SymbolSequence y;
};

MarkovModel iid_independent() {
    std::vector<double> col{0.28, 0.42, 0.12, 0.18};
    std::vector<double> cols;
    for (int c = 0; c < 4; ++c) {
        cols.insert(cols.end(), col.begin(), col.end());
    }
    return MarkovModel(2, 2, cols);
}

std::vector<Pair> adversarial_fixtures() {
    std::vector<Pair> out;
    const std::size_t n = 3000;
    std::mt19937_64 rng(2024);
    auto make = [&](std::string name, unsigned a, unsigned b, auto fx, auto fy) {
        std::vector<Symbol> x(n);
        std::vector<Symbol> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = fx(i);
            y[i] = fy(i);
        }
        out.push_back({std::move(name), SymbolSequence(a, x), SymbolSequence(b, y)});
    };
    auto zero = [](std::size_t) -> Symbol { return 0; };
    auto one = [](std::size_t) -> Symbol { return 1; };
    auto coin = [&](std::size_t) -> Symbol { return rng() & 1; };
    make("constant", 2, 2, zero, zero);
    make("constant x, constant y differ", 2, 2, one, zero);
    make("constant x, random y", 2, 2, zero, coin);
    make("random x, constant y", 2, 2, coin, zero);
    make("period 2", 2, 2, [](std::size_t i) -> Symbol { return i % 2; },
         [](std::size_t i) -> Symbol { return i % 2; });
    make("period 3 vs period 5", 2, 2, [](std::size_t i) -> Symbol { return i % 3 == 0; },
         [](std::size_t i) -> Symbol { return i % 5 == 0; });
    make("period 7 ternary", 3, 2, [](std::size_t i) -> Symbol { return (i * 5 + 1) % 7 % 3; },
         [](std::size_t i) -> Symbol { return i % 7 < 3; });
    make("period 64", 2, 2, [](std::size_t i) -> Symbol { return (i % 64) < 32; },
         [](std::size_t i) -> Symbol { return (i % 64) % 3 == 0; });
    make("period 300", 2, 2, [](std::size_t i) -> Symbol { return (i % 300) * 7919 % 13 < 6; },
         [](std::size_t i) -> Symbol { return (i % 300) * 104729 % 11 < 5; });
    make("complement", 2, 2, [](std::size_t i) -> Symbol { return (i / 3) % 2; },
         [](std::size_t i) -> Symbol { return 1 - (i / 3) % 2; });
    make("growing runs", 2, 2,
         [](std::size_t i) -> Symbol { return static_cast<Symbol>(std::sqrt(double(i))) % 2; },
         [](std::size_t i) -> Symbol { return static_cast<Symbol>(std::sqrt(double(i) / 2)) % 2; });
    make("alternating blocks", 4, 3, [](std::size_t i) -> Symbol { return (i / 10) % 4; },
         [](std::size_t i) -> Symbol { return (i / 15) % 3; });
    for (int k = 0; k < 3; ++k) {
        std::vector<Symbol> v(n);
        for (auto& s : v) {
            s = rng() % 4;
        }
        out.push_back({"x = y random 4-ary #" + std::to_string(k), SymbolSequence(4, v), SymbolSequence(4, v)});
    }
    const PairedSource same = generate(model_from_q(0.9), n, 77);
    out.push_back({"x = y from the chain", same.x, same.x});
    for (std::uint64_t k = 0; k < 3; ++k) {
        const PairedSource s = generate(iid_independent(), n, 500 + k);
        out.push_back({"x independent of y #" + std::to_string(k), s.x, s.y});
    }
    {
        std::vector<Symbol> x(n);
        std::vector<Symbol> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng() % 5;
            x[i] = static_cast<Symbol>(rng() % 256);
        }
        out.push_back({"byte x, 5-ary y", SymbolSequence(256, x), SymbolSequence(5, y)});
    }
    return out;
}

struct RoundTripStats {
    std::uint64_t encodes = 0;
    std::uint64_t round_trip_failures = 0;
    std::uint64_t phrases = 0;
    std::uint64_t table_mismatches = 0;
    std::uint64_t dominance_checked = 0;
    std::uint64_t dominance_violations = 0;
    std::vector<std::string> first_errors;
    double seconds = 0;

    void note(const std::string& what) {
        if (first_errors.size() < 5) {
            first_errors.push_back(what);
        }
    }
};

void check_fixed(const SymbolSequence& x, const SymbolSequence& y, std::uint64_t L, std::uint64_t N,
                 unsigned m, const std::string& label, RoundTripStats& st) {
    FixedParseConfig cfg;
    cfg.phrase_length = L;
    cfg.phrase_count = N;
    cfg.m = m;
    cfg.x_alphabet = x.alphabet_size();
    cfg.y_alphabet = y.alphabet_size();
    const SymbolSequence xs = x.prefix(L * N);
    const SymbolSequence ys = y.prefix(L * N);
    std::vector<PhraseTrace> t1;
    for (auto v : {FixedVariant::plain, FixedVariant::flagged, FixedVariant::adaptive}) {
        cfg.variant = v;
        ++st.encodes;
        const FixedEncoding e = encode_fixed(xs, ys, cfg);
        bool ok = false;
        try {
            ok = decode_fixed(e.code, ys, cfg) == xs;
        } catch (const Error& err) {
            st.note(label + ": " + err.what());
        }
        if (!ok) {
            ++st.round_trip_failures;
            st.note(label + " alg" + std::to_string(static_cast<int>(v)) + " L=" + std::to_string(L));
        }
        for (const auto& t : e.trace) {
            ++st.phrases;
            if (t.emitted_bits != closed_form::closed_form_length(t, cfg)) {
                ++st.table_mismatches;
            }
        }
        if (v == FixedVariant::plain) {
            t1 = e.trace;
        } else if (v == FixedVariant::adaptive) {
            for (std::size_t i = 0; i < N; ++i) {
                ++st.dominance_checked;
                if (e.trace[i].emitted_bits > t1[i].emitted_bits) {
                    ++st.dominance_violations;
                }
            }
        }
    }
}

void check_window(const SymbolSequence& x, const SymbolSequence& y, std::uint64_t nw, std::uint64_t K,
                  const std::string& label, RoundTripStats& st) {
    WindowConfig cfg;
    cfg.window = nw;
    cfg.length = K;
    cfg.x_alphabet = x.alphabet_size();
    cfg.y_alphabet = y.alphabet_size();
    const SymbolSequence xs = x.prefix(K);
    const SymbolSequence ys = y.prefix(K);
    ++st.encodes;
    const WindowEncoding e = encode_window(xs, ys, cfg);
    bool ok = false;
    try {
        ok = decode_window(e.code, ys, cfg) == xs;
    } catch (const Error& err) {
        st.note(label + ": " + err.what());
    }
    if (!ok) {
        ++st.round_trip_failures;
        st.note(label + " alg4 n_w=" + std::to_string(nw));
    }
}

RoundTripStats run_round_trips() {
    const auto t0 = std::chrono::steady_clock::now();
    RoundTripStats st;
    const std::uint64_t lengths[] = {1, 2, 5, 15};
    const std::uint64_t windows[] = {16, 256};
    const double qs[] = {0.25, 0.5, 0.9};
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 500; ++i) {
        const double q = qs[i % 3];
        const std::uint64_t L = lengths[(i / 3) % 4];
        const std::uint64_t N = 1 + rng() % 500;
        const std::uint64_t nw = windows[i % 2];
        const std::uint64_t K = nw + 1 + rng() % 3000;
        const std::size_t n = std::max<std::size_t>(L * N, K);
        const PairedSource s = generate(model_from_q(q), n, derive_seed(99, i));
        const std::string label = "pair " + std::to_string(i);
        check_fixed(s.x, s.y, L, N, 1 + rng() % 8, label, st);
        check_window(s.x, s.y, nw, K, label, st);
    }
    for (const Pair& p : adversarial_fixtures()) {
        for (std::uint64_t L : lengths) {
            check_fixed(p.x, p.y, L, std::min<std::uint64_t>(500, p.x.size() / L), 3, p.name, st);
        }
        for (std::uint64_t nw : windows) {
            check_window(p.x, p.y, nw, p.x.size(), p.name, st);
        }
    }
    st.seconds = seconds_since(t0);
    return st;
}

Outcome criterion1(const RoundTripStats& st) {
    Outcome o;
    o.pass = st.round_trip_failures == 0 && st.seconds < 120;
    o.detail = "lossless round trip: " + std::to_string(st.encodes) + " encodes (500 pairs, 20 fixtures), " +
               std::to_string(st.round_trip_failures) + " failures, " + fmt("%.1f s", st.seconds);
    for (const auto& e : st.first_errors) {
        o.detail += "; " + e;
    }
    return o;
}

Outcome criterion2(const RoundTripStats& st) {
    const auto t0 = std::chrono::steady_clock::now();
    std::uint64_t checked = 0;
    std::uint64_t bad = 0;
    for (unsigned k = 0; k <= 12; ++k) {
        const HkParameter hk(k);
        for (std::uint64_t n = 1; n <= (std::uint64_t{1} << k); ++n) {
            const Bitstream code = hk_encode(hk, n);
            const std::uint64_t closed =
                closed_form::ceil_log2_1p(k) + (n == hk.top() ? 0 : closed_form::floor_log2(n));
            ++checked;
            BitReader r(code);
            if (code.bit_length() != closed || hk_length(hk, n) != closed || hk_decode(r, hk) != n ||
                !r.at_end()) {
                ++bad;
            }
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = bad == 0 && st.table_mismatches == 0 && secs < 30;
    o.detail = "h_k lengths: " + std::to_string(checked) + " codewords, " + std::to_string(bad) +
               " wrong; traced phrases: " + std::to_string(st.phrases) + ", " +
               std::to_string(st.table_mismatches) + " off the closed form, " + fmt("%.1f s", secs);
    return o;
}

Outcome criterion3() {
    std::uint64_t bad = 0;
    const std::uint64_t top = std::uint64_t{1} << 20;
    for (std::uint64_t n = 1; n <= top; ++n) {
        const double len = static_cast<double>(g_encode(n).bit_length());
        if (len > 4.0 * std::log2(static_cast<double>(n) + 1.0) || g_length(n) != len) {
            ++bad;
        }
    }
    return {bad == 0, "g length bound over 1..2^20: " + std::to_string(bad) + " violations"};
}

Outcome criterion4(const RoundTripStats& st) {
    return {st.dominance_checked > 0 && st.dominance_violations == 0,
            "per-phrase alg3 <= alg1: " + std::to_string(st.dominance_checked) + " phrases, " +
                std::to_string(st.dominance_violations) + " violations"};
}

Outcome criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    LemmaCheckConfig cfg;
    cfg.block = 3;
    cfg.length = 1'000'000;
    std::string detail = "match count C vs 1/P:";
    bool pass = true;
    const std::pair<const char*, MarkovModel> models[] = {{"q=0.9", model_from_q(0.9)},
                                                          {"independent", iid_independent()}};
    for (const auto& [name, model] : models) {
        const LemmaCheckReport r = lemma1_check(model, cfg);
        std::size_t failed = 0;
        double worst = -1e9;
        for (const auto& row : r.rows) {
            failed += row.pass ? 0 : 1;
            if (row.std_error > 0) {
                worst = std::max(worst, (row.mean_c - row.bound) / row.std_error);
            }
        }
        pass = pass && failed == 0 && !r.rows.empty();
        detail += std::string(" ") + name + " " + std::to_string(r.rows.size()) + " pairs, " +
                  std::to_string(failed) + " over, max z " + fmt("%.2f", worst) + ";";
    }
    const double secs = seconds_since(t0);
    return {pass && secs < 120, detail + fmt(" %.1f s", secs)};
}

Outcome criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    FixedRateExperiment exp;
    exp.variants = {FixedVariant::plain};
    exp.phrase_lengths = {5, 10, 15};
    exp.checkpoints = {2000};
    exp.trials = 30;
    exp.q = 0.9;
    const RateReport r = run_rate_experiment(model_from_q(0.9), exp);
    bool pass = true;
    std::string detail = "alg1 rate at N=2000 vs bound:";
    for (std::uint64_t L : exp.phrase_lengths) {
        const RateRow* row = r.find("alg1", L, 2000);
        const double se = std::hypot(row->std_error, row->bound_std_error.value_or(0));
        const bool ok = row->mean_rate <= *row->bound + 3 * se;
        pass = pass && ok;
        detail += " L=" + std::to_string(L) + " " + fmt("%.4f", row->mean_rate) + " <= " +
                  fmt("%.4f", *row->bound) + (ok ? "" : " (no)") + ";";
    }
    const RateRow* r5 = r.find("alg1", 5, 2000);
    const RateRow* r15 = r.find("alg1", 15, 2000);
    const double se = std::hypot(r5->std_error, r15->std_error);
    const bool drop = r5->mean_rate - r15->mean_rate > 3 * se;
    const double secs = seconds_since(t0);
    detail += " L=15 below L=5 by " + fmt("%.4f", r5->mean_rate - r15->mean_rate) + " (3 SE " +
              fmt("%.4f", 3 * se) + "), " + fmt("%.1f s", secs);
    return {pass && drop && secs < 300, detail};
}

Outcome criterion7() {
    const MarkovModel model = model_from_q(0.9);
    const std::uint64_t L = 15;
    const std::uint64_t N = 2000;
    const std::size_t trials = 30;
    FixedParseConfig cfg;
    cfg.phrase_length = L;
    cfg.phrase_count = N;
    cfg.m = FixedRateExperiment{}.m;
    std::size_t early = 0;
    std::size_t late = 0;
    std::size_t dominated = 0;
    std::size_t all_three = 0;
    std::uint64_t first_cross_sum = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const PairedSource s = generate(model, N * L, derive_seed(FixedRateExperiment{}.seed, t));
        std::vector<std::vector<std::uint64_t>> cum;
        for (auto v : {FixedVariant::plain, FixedVariant::flagged, FixedVariant::adaptive}) {
            cfg.variant = v;
            cum.push_back(cumulative_bits(encode_fixed(s.x, s.y, cfg).trace));
        }
        bool a = false;
        for (std::size_t i = 0; i < N; ++i) {
            if (cum[1][i] < cum[0][i]) {
                a = true;
                first_cross_sum += i + 1;
                break;
            }
        }
        const bool b = cum[0][N - 1] <= cum[1][N - 1];
        bool c = true;
        for (std::size_t i = 0; i < N; ++i) {
            c = c && cum[2][i] <= cum[0][i];
        }
        early += a;
        late += b;
        dominated += c;
        all_three += a && b && c;
    }
    const bool pass = 2 * all_three > trials;
    std::ostringstream d;
    d << "m=" << cfg.m << ", trials with alg2 < alg1 at some N: " << early << "/" << trials
      << ", alg1 <= alg2 at N=2000: " << late << "/" << trials << ", alg3 <= alg1 at every N: "
      << dominated << "/" << trials << ", all three: " << all_three << "/" << trials;
    return {pass, d.str()};
}

Outcome criterion8() {
    const auto t0 = std::chrono::steady_clock::now();
    const MarkovModel model = model_from_q(0.9);
    WindowRateExperiment exp;
    exp.windows = {256, 4096, 65536};
    exp.length_factor = 10;
    exp.trials = 10;
    exp.q = 0.9;
    const RateReport r = run_window_experiment(model, exp);
    bool pass = true;
    std::string detail = "alg4 mean rate:";
    const RateRow* prev = nullptr;
    for (std::uint64_t nw : exp.windows) {
        const RateRow* row = r.find("alg4", nw, nw * exp.length_factor);
        detail += " n_w=" + std::to_string(nw) + " " + fmt("%.4f", row->mean_rate) + fmt("+-%.4f", row->std_error) + ";";
        if (prev != nullptr) {
            pass = pass && row->mean_rate <= prev->mean_rate + 3 * std::hypot(row->std_error, prev->std_error);
        }
        prev = row;
    }
    const EntropyEstimate h = conditional_entropy_rate(model, 20);
    const bool floor_ok = prev->mean_rate > h.value - 3 * std::hypot(prev->std_error, h.std_error);
    const double secs = seconds_since(t0);
    detail += " H(X|Y) " + fmt("%.4f", h.value) + (floor_ok ? "" : " (below floor)") + ", " + fmt("%.1f s", secs);
    return {pass && floor_ok && secs < 600, detail};
}

std::vector<Symbol> random_symbols(std::mt19937_64& rng, std::size_t n, unsigned a, double stay) {
    std::vector<Symbol> out(n);
    std::uniform_real_distribution<double> u(0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (i > 0 && u(rng) < stay) ? out[i - 1] : static_cast<Symbol>(rng() % a);
    }
    return out;
}

Outcome criterion9() {
    std::mt19937_64 rng(4242);
    std::uint64_t queries = 0;
    std::uint64_t mismatches = 0;
    const int instances = 10000;
    for (int round = 0; round < instances; ++round) {
        const unsigned a = 2 + rng() % 3;
        const unsigned b = 2 + rng() % 3;
        const double stay = (rng() % 4) * 0.3;
        const std::size_t n = 8 + rng() % 120;
        const auto xv = random_symbols(rng, n, a, stay);
        const auto yv = rng() % 5 == 0 ? xv : random_symbols(rng, n, b, stay);
        const unsigned b_eff = yv == xv ? a : b;

        const std::size_t L = 1 + rng() % 6;
        const FixedMatcher fm(xv, yv, L);
        for (std::size_t pos = 0; pos + L <= n; pos += 1 + rng() % 3) {
            ++queries;
            mismatches += fm.recurrence(pos) == oracle::fixed_recurrence(xv, yv, pos, L) ? 0 : 1;
        }
        const std::size_t window = 1 + rng() % (n - 1);
        const WindowMatcher wm(xv, yv, b_eff, window);
        for (std::size_t u = window; u < n; u += 1 + rng() % 4) {
            ++queries;
            const WindowMatch got = wm.query(u, n);
            mismatches += got == oracle::window_match(xv, yv, u, window, n) ? 0 : 1;
            const auto offsets = oracle::window_y_matches(yv, u, got.length, window);
            for (std::size_t r = 1; r <= offsets.size(); ++r) {
                ++queries;
                mismatches +=
                    wm.y_index().enumerate(u, got.length, 0, r).selected_offset == offsets[r - 1] ? 0 : 1;
            }
        }
    }
    return {mismatches == 0, "indexed vs naive matcher: " + std::to_string(instances) + " instances, " +
                                 std::to_string(queries) + " queries, " + std::to_string(mismatches) +
                                 " mismatches"};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> allowed;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        auto parse_list = [&](const std::string& list, std::set<int>& into) {
            std::stringstream ss(list);
            std::string item;
            while (std::getline(ss, item, ',')) {
                into.insert(std::stoi(item));
            }
        };
        if (arg.rfind("--allow-fail=", 0) == 0) {
            parse_list(arg.substr(13), allowed);
        } else if (arg.rfind("--only=", 0) == 0) {
            parse_list(arg.substr(7), only);
        } else {
            std::fprintf(stderr, "usage: acceptance [--only=1,2,...] [--allow-fail=6,7,...]\n");
            return 2;
        }
    }
    auto wanted = [&](int c) { return only.empty() || only.count(c) > 0; };

    RoundTripStats st;
    if (wanted(1) || wanted(2) || wanted(4)) {
        st = run_round_trips();
    }
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, [&] { return criterion1(st); }}, {2, [&] { return criterion2(st); }},
        {3, criterion3},                     {4, [&] { return criterion4(st); }},
        {5, criterion5},                     {6, criterion6},
        {7, criterion7},                     {8, criterion8},
        {9, criterion9},
    };
    int failed = 0;
    int blocking = 0;
    for (const auto& [id, run] : criteria) {
        if (!wanted(id)) {
            continue;
        }
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) {
            ++failed;
            blocking += allowed.count(id) ? 0 : 1;
        }
    }
    std::printf("%d failed, %d blocking\n", failed, blocking);
    return blocking == 0 ? 0 : 1;
}
