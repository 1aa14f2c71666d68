#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sidelz/analysis.hpp"
#include "sidelz/container.hpp"
#include "sidelz/errors.hpp"
#include "sidelz/fixed_lz.hpp"
#include "sidelz/sources.hpp"

namespace {

using namespace sidelz;

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_checksum = 3,
    exit_corrupt = 4,
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + "\"";
}

void report_error(const char* kind, const std::string& message) {
    std::cerr << "status=error kind=" << kind << " message=" << quote(message) << '\n';
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw InputError("cannot write " + path);
    }
}

// Bytes are symbols; with `bits` each byte unpacks to 8 binary symbols, MSB first.
SymbolSequence to_symbols(const std::vector<std::uint8_t>& bytes, unsigned alphabet, bool bits,
                          const char* what) {
    std::vector<Symbol> symbols;
    if (bits) {
        symbols.reserve(bytes.size() * 8);
        for (std::uint8_t b : bytes) {
            for (int i = 7; i >= 0; --i) {
                symbols.push_back((b >> i) & 1u);
            }
        }
        return SymbolSequence(2, std::move(symbols));
    }
    symbols.assign(bytes.begin(), bytes.end());
    try {
        return SymbolSequence(alphabet, std::move(symbols));
    } catch (const InputError& e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

std::vector<std::uint8_t> from_symbols(const SymbolSequence& s, bool bits) {
    std::vector<std::uint8_t> out;
    if (!bits) {
        out.assign(s.symbols().begin(), s.symbols().end());
        return out;
    }
    if (s.size() % 8 != 0) {
        throw InputError("--bits output needs a multiple of 8 symbols, have " +
                         std::to_string(s.size()));
    }
    out.resize(s.size() / 8, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[i / 8] = static_cast<std::uint8_t>(out[i / 8] | (s[i] << (7 - i % 8)));
    }
    return out;
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t base = 1; base < n; base *= 10) {
        for (std::uint64_t f : {1, 2, 5}) {
            if (base * f < n) {
                out.push_back(base * f);
            }
        }
    }
    out.push_back(n);
    return out;
}

struct CompressOptions {
    std::string input;
    std::string side;
    std::string output;
    int algorithm = 1;
    std::uint32_t L = 8;
    std::uint32_t m = 3;
    std::uint32_t window = 256;
    unsigned x_alphabet = 2;
    unsigned y_alphabet = 2;
    bool bits = false;
};

int run_compress(const CompressOptions& o) {
    const SymbolSequence x = to_symbols(read_file(o.input), o.x_alphabet, o.bits, "input");
    const SymbolSequence y = to_symbols(read_file(o.side), o.y_alphabet, o.bits, "side");
    if (x.size() != y.size()) {
        throw InputError("length mismatch: input has " + std::to_string(x.size()) +
                         " symbols, side has " + std::to_string(y.size()));
    }
    ContainerHeader h;
    h.algorithm = static_cast<std::uint8_t>(o.algorithm);
    h.x_alphabet = x.alphabet_size();
    h.y_alphabet = y.alphabet_size();
    if (x.size() >= (std::uint64_t{1} << 32)) {
        throw InputError("input longer than 2^32 - 1 symbols");
    }
    if (o.algorithm == 4) {
        h.window = o.window;
        h.length = static_cast<std::uint32_t>(x.size());
    } else {
        if (o.L == 0 || x.size() % o.L != 0) {
            throw InputError("input length " + std::to_string(x.size()) +
                             " is not a multiple of L = " + std::to_string(o.L));
        }
        h.phrase_length = o.L;
        h.phrase_count = static_cast<std::uint32_t>(x.size() / o.L);
        h.m = o.algorithm == 2 ? o.m : 0;
    }
    const Container c = compress(x, y, h);
    write_file(o.output, serialize_container(c, y.symbols()));
    const double rate = x.empty() ? 0.0
                                  : static_cast<double>(c.payload.bit_length()) /
                                        static_cast<double>(x.size());
    std::cout << "status=ok symbols=" << x.size() << " payload_bits=" << c.payload.bit_length()
              << " bits_per_symbol=" << format_number(rate) << '\n';
    return exit_ok;
}

struct DecompressOptions {
    std::string input;
    std::string side;
    std::string output;
    bool bits = false;
};

int run_decompress(const DecompressOptions& o) {
    const std::vector<std::uint8_t> bytes = read_file(o.input);
    const ContainerHeader peek = peek_container_header(bytes);
    const SymbolSequence y = to_symbols(read_file(o.side), peek.y_alphabet, o.bits, "side");
    if (y.size() != peek.symbol_count()) {
        throw InputError("length mismatch: side has " + std::to_string(y.size()) +
                         " symbols, container expects " + std::to_string(peek.symbol_count()));
    }
    const Container c = parse_container(bytes, y.symbols());
    const SymbolSequence x = decompress(c, y);
    write_file(o.output, from_symbols(x, o.bits));
    std::cout << "status=ok symbols=" << x.size() << '\n';
    return exit_ok;
}

struct SimulateOptions {
    std::string experiment;
    double q = 0.9;
    std::string model_path;
    std::vector<std::uint64_t> L;
    std::uint64_t N = 2000;
    std::vector<std::uint64_t> checkpoints;
    std::vector<std::uint64_t> windows{256, 4096, 65536};
    std::uint64_t length_factor = 10;
    std::size_t trials = 30;
    std::uint64_t seed = 7;
    unsigned m = 3;
    std::size_t bound_samples = 200000;
    std::uint64_t lemma_length = 1'000'000;
    std::string out;
    std::string advantage_out;
};

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") {
        return std::cout;
    }
    file.open(path);
    if (!file) {
        throw InputError("cannot write " + path);
    }
    return file;
}

int run_simulate(const SimulateOptions& o) {
    std::optional<double> q;
    std::optional<MarkovModel> model;
    if (!o.model_path.empty()) {
        std::ifstream in(o.model_path);
        if (!in) {
            throw InputError("cannot open " + o.model_path);
        }
        model.emplace(read_model(in));
    } else {
        q = o.q;
        model.emplace(model_from_q(o.q));
    }
    std::ofstream file;
    std::ostream& out = open_out(o.out, file);

    if (o.experiment == "lemma1") {
        LemmaCheckConfig cfg;
        cfg.block = o.L.empty() ? 3 : o.L.front();
        cfg.length = o.lemma_length;
        cfg.seed = o.seed;
        const LemmaCheckReport r = lemma1_check(*model, cfg);
        write_lemma_csv(out, r);
        std::cerr << "status=ok experiment=lemma1 pairs=" << r.rows.size()
                  << " all_pass=" << (r.all_pass() ? "true" : "false") << '\n';
        return exit_ok;
    }
    if (o.experiment == "window") {
        WindowRateExperiment exp;
        exp.windows = o.windows;
        exp.length_factor = o.length_factor;
        exp.trials = o.trials;
        exp.seed = o.seed;
        exp.q = q;
        write_rate_csv(out, run_window_experiment(*model, exp));
        return exit_ok;
    }

    FixedRateExperiment exp;
    exp.trials = o.trials;
    exp.seed = o.seed;
    exp.m = o.m;
    exp.q = q;
    exp.bound_samples = o.bound_samples;
    exp.checkpoints = o.checkpoints.empty() ? default_checkpoints(o.N) : o.checkpoints;
    if (o.experiment == "fig1") {
        exp.variants = {FixedVariant::plain};
        exp.phrase_lengths = o.L.empty() ? std::vector<std::uint64_t>{5, 10, 15} : o.L;
    } else if (o.experiment == "fig2") {
        exp.variants = {FixedVariant::plain, FixedVariant::flagged, FixedVariant::adaptive};
        exp.phrase_lengths = o.L.empty() ? std::vector<std::uint64_t>{15} : o.L;
    } else if (o.experiment == "fig3") {
        exp.variants = {FixedVariant::plain, FixedVariant::adaptive};
        exp.phrase_lengths = o.L.empty() ? std::vector<std::uint64_t>{5, 10, 15} : o.L;
        exp.with_bound = false;
    } else {
        throw CLI::ValidationError("experiment", "unknown experiment '" + o.experiment + "'");
    }
    const RateReport report = run_rate_experiment(*model, exp);
    write_rate_csv(out, report);
    if (report.dominance_checked > 0) {
        std::cerr << "status=ok experiment=" << o.experiment
                  << " dominance_checked=" << report.dominance_checked
                  << " dominance_violations=" << report.dominance_violations << '\n';
    }

    if (o.experiment == "fig2" && !o.advantage_out.empty()) {
        const std::uint64_t L = exp.phrase_lengths.front();
        const std::uint64_t n_max = *std::max_element(exp.checkpoints.begin(), exp.checkpoints.end());
        const PairedSource src = generate(*model, n_max * L, derive_seed(o.seed, 0));
        FixedParseConfig cfg;
        cfg.phrase_length = L;
        cfg.phrase_count = n_max;
        cfg.m = o.m;
        cfg.x_alphabet = model->x_alphabet();
        cfg.y_alphabet = model->y_alphabet();
        const auto t1 = encode_fixed(src.x, src.y, cfg).trace;
        cfg.variant = FixedVariant::flagged;
        const auto t2 = encode_fixed(src.x, src.y, cfg).trace;
        std::ofstream adv(o.advantage_out);
        if (!adv) {
            throw InputError("cannot write " + o.advantage_out);
        }
        write_alg2_csv(adv, alg2_advantage(t1, t2, cfg.k(), o.m, exp.checkpoints));
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lempel-Ziv compression with side information"};
    app.require_subcommand(1);

    CompressOptions copt;
    auto* compress_cmd = app.add_subcommand("compress", "Compress INPUT given side information SIDE");
    compress_cmd->add_option("input", copt.input, "Source file")->required();
    compress_cmd->add_option("--side,-s", copt.side, "Side-information file")->required();
    compress_cmd->add_option("--output,-o", copt.output, "Container file")->required();
    compress_cmd->add_option("--algorithm,-a", copt.algorithm, "1-4")->check(CLI::Range(1, 4));
    compress_cmd->add_option("--L", copt.L, "Phrase length (algorithms 1-3)");
    compress_cmd->add_option("--m", copt.m, "X-match code parameter (algorithm 2)");
    compress_cmd->add_option("--window", copt.window, "Window size n_w (algorithm 4)");
    compress_cmd->add_option("--x-alphabet", copt.x_alphabet, "Source alphabet size")
        ->check(CLI::Range(2, 256));
    compress_cmd->add_option("--y-alphabet", copt.y_alphabet, "Side alphabet size")
        ->check(CLI::Range(2, 256));
    compress_cmd->add_flag("--bits", copt.bits, "Unpack bytes to bits (both alphabets binary)");

    DecompressOptions dopt;
    auto* decompress_cmd = app.add_subcommand("decompress", "Restore the source from a container");
    decompress_cmd->add_option("input", dopt.input, "Container file")->required();
    decompress_cmd->add_option("--side,-s", dopt.side, "Side-information file")->required();
    decompress_cmd->add_option("--output,-o", dopt.output, "Restored file")->required();
    decompress_cmd->add_flag("--bits", dopt.bits, "Side file and output are packed bits");

    SimulateOptions sopt;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a rate or lemma experiment");
    simulate_cmd->add_option("experiment", sopt.experiment, "fig1, fig2, fig3, lemma1 or window")
        ->required();
    simulate_cmd->add_option("--q", sopt.q, "Model parameter q")->check(CLI::Range(0.0, 1.0));
    simulate_cmd->add_option("--model", sopt.model_path, "Plain-text transition matrix file");
    simulate_cmd->add_option("--L", sopt.L, "Phrase (or lemma block) lengths")->delimiter(',');
    simulate_cmd->add_option("--N", sopt.N, "Largest phrase count");
    simulate_cmd->add_option("--checkpoints", sopt.checkpoints, "Reported prefix lengths N")
        ->delimiter(',');
    simulate_cmd->add_option("--window", sopt.windows, "Window sizes n_w")->delimiter(',');
    simulate_cmd->add_option("--K-factor", sopt.length_factor, "K = factor * n_w");
    simulate_cmd->add_option("--trials", sopt.trials, "Independent trials")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", sopt.seed, "Base seed");
    simulate_cmd->add_option("--m", sopt.m, "Algorithm 2 parameter");
    simulate_cmd->add_option("--bound-samples", sopt.bound_samples, "Samples for the rate bound");
    simulate_cmd->add_option("--length", sopt.lemma_length, "Simulated symbols (lemma1)");
    simulate_cmd->add_option("--out", sopt.out, "CSV path (default stdout)");
    simulate_cmd->add_option("--advantage-out", sopt.advantage_out,
                             "fig2 only: Algorithm 2 advantage diagnostic CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return exit_usage;
    }

    try {
        if (compress_cmd->parsed()) {
            return run_compress(copt);
        }
        if (decompress_cmd->parsed()) {
            return run_decompress(dopt);
        }
        return run_simulate(sopt);
    } catch (const CLI::Error& e) {
        report_error("usage", e.what());
        return exit_usage;
    } catch (const ChecksumMismatch& e) {
        report_error("checksum", e.what());
        return exit_checksum;
    } catch (const CorruptStream& e) {
        report_error("corrupt", e.what());
        return exit_corrupt;
    } catch (const TruncatedStream& e) {
        report_error("truncated", e.what());
        return exit_corrupt;
    } catch (const InputError& e) {
        report_error("input", e.what());
        return exit_usage;
    } catch (const DomainError& e) {
        report_error("input", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return exit_internal;
    }
}
