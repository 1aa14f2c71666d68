#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sidelz/analysis.hpp"
#include "sidelz/container.hpp"
#include "sidelz/errors.hpp"
#include "sidelz/fixed_lz.hpp"
#include "sidelz/prefix_codes.hpp"
#include "sidelz/sources.hpp"
#include "sidelz/window_lz.hpp"

namespace py = pybind11;
using namespace sidelz;

namespace {

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

Bitstream bitstream_from(const py::bytes& data, std::uint64_t bit_length) {
    return Bitstream::parse(from_bytes(data), bit_length);
}

py::dict fixed_trace_dict(const PhraseTrace& t) {
    py::dict d;
    d["index"] = t.index;
    d["case"] = std::string(to_string(t.tag));
    d["n"] = t.n;
    d["p"] = t.p;
    d["r"] = t.r;
    d["k_bar"] = t.k_bar;
    d["bits"] = t.emitted_bits;
    return d;
}

py::dict window_trace_dict(const WindowPhraseTrace& t) {
    py::dict d;
    d["start"] = t.start;
    d["length"] = t.length;
    d["y_count"] = t.y_count;
    d["branch"] = t.branch == WindowBranch::raw ? "raw" : "position";
    d["bits"] = t.emitted_bits;
    return d;
}

FixedParseConfig fixed_config(std::uint64_t L, int algorithm, unsigned m, unsigned a, unsigned b,
                              std::uint64_t n) {
    if (algorithm < 1 || algorithm > 3) {
        throw InputError("fixed-length algorithms are 1, 2 and 3");
    }
    if (L == 0 || n % L != 0) {
        throw InputError("sequence length " + std::to_string(n) + " is not a multiple of L");
    }
    FixedParseConfig cfg;
    cfg.phrase_length = L;
    cfg.phrase_count = n / L;
    cfg.variant = static_cast<FixedVariant>(algorithm);
    cfg.m = m;
    cfg.x_alphabet = a;
    cfg.y_alphabet = b;
    return cfg;
}

py::dict rate_row_dict(const RateRow& r) {
    py::dict d;
    d["algorithm"] = r.algorithm;
    d[py::str(r.param_name)] = r.param;
    d[py::str(r.length_name)] = r.length;
    d["trials"] = r.trials;
    d["mean_rate"] = r.mean_rate;
    d["std_error"] = r.std_error;
    d["bound"] = r.bound ? py::object(py::float_(*r.bound)) : py::object(py::none());
    d["trial_rates"] = r.trial_rates;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Lempel-Ziv compression with side information (C++ core)";

    auto error = py::register_exception<Error>(mod, "Error");
    py::register_exception<DomainError>(mod, "DomainError", error.ptr());
    py::register_exception<InputError>(mod, "InputError", error.ptr());
    py::register_exception<TruncatedStream>(mod, "TruncatedStream", error.ptr());
    py::register_exception<CorruptStream>(mod, "CorruptStream", error.ptr());
    py::register_exception<ChecksumMismatch>(mod, "ChecksumMismatch", error.ptr());
    py::register_exception<NumericError>(mod, "NumericError", error.ptr());

    mod.def("hk_encode", [](unsigned k, std::uint64_t n) { return hk_encode(HkParameter(k), n).to_string(); },
            py::arg("k"), py::arg("n"), "Codeword h_k(n) as a string of '0'/'1'.");
    mod.def("g_encode", [](std::uint64_t n) { return g_encode(n).to_string(); }, py::arg("n"));

    mod.def(
        "encode_fixed",
        [](const std::vector<Symbol>& x, const std::vector<Symbol>& y, std::uint64_t L, int algorithm,
           unsigned m, unsigned x_alphabet, unsigned y_alphabet) {
            const auto cfg = fixed_config(L, algorithm, m, x_alphabet, y_alphabet, x.size());
            const FixedEncoding e =
                encode_fixed(SymbolSequence(x_alphabet, x), SymbolSequence(y_alphabet, y), cfg);
            py::list trace;
            for (const auto& t : e.trace) {
                trace.append(fixed_trace_dict(t));
            }
            return py::make_tuple(to_bytes(e.code.finalize()), e.code.bit_length(), trace);
        },
        py::arg("x"), py::arg("y"), py::arg("L"), py::arg("algorithm") = 1, py::arg("m") = 3,
        py::arg("x_alphabet") = 2, py::arg("y_alphabet") = 2,
        "Returns (payload bytes, bit length, per-phrase trace).");
    mod.def(
        "decode_fixed",
        [](const py::bytes& data, std::uint64_t bit_length, const std::vector<Symbol>& y, std::uint64_t L,
           int algorithm, unsigned m, unsigned x_alphabet, unsigned y_alphabet) {
            const auto cfg = fixed_config(L, algorithm, m, x_alphabet, y_alphabet, y.size());
            return decode_fixed(bitstream_from(data, bit_length), SymbolSequence(y_alphabet, y), cfg).vector();
        },
        py::arg("data"), py::arg("bit_length"), py::arg("y"), py::arg("L"), py::arg("algorithm") = 1,
        py::arg("m") = 3, py::arg("x_alphabet") = 2, py::arg("y_alphabet") = 2);

    mod.def(
        "encode_window",
        [](const std::vector<Symbol>& x, const std::vector<Symbol>& y, std::uint64_t window,
           unsigned x_alphabet, unsigned y_alphabet) {
            WindowConfig cfg{window, x.size(), x_alphabet, y_alphabet};
            const WindowEncoding e =
                encode_window(SymbolSequence(x_alphabet, x), SymbolSequence(y_alphabet, y), cfg);
            py::list trace;
            for (const auto& t : e.trace) {
                trace.append(window_trace_dict(t));
            }
            return py::make_tuple(to_bytes(e.code.finalize()), e.code.bit_length(), trace);
        },
        py::arg("x"), py::arg("y"), py::arg("window"), py::arg("x_alphabet") = 2, py::arg("y_alphabet") = 2);
    mod.def(
        "decode_window",
        [](const py::bytes& data, std::uint64_t bit_length, const std::vector<Symbol>& y, std::uint64_t window,
           unsigned x_alphabet, unsigned y_alphabet) {
            WindowConfig cfg{window, y.size(), x_alphabet, y_alphabet};
            return decode_window(bitstream_from(data, bit_length), SymbolSequence(y_alphabet, y), cfg).vector();
        },
        py::arg("data"), py::arg("bit_length"), py::arg("y"), py::arg("window"), py::arg("x_alphabet") = 2,
        py::arg("y_alphabet") = 2);

    mod.def(
        "compress",
        [](const std::vector<Symbol>& x, const std::vector<Symbol>& y, int algorithm, std::uint32_t L,
           std::uint32_t m, std::uint32_t window, unsigned x_alphabet, unsigned y_alphabet) {
            if (x.size() != y.size()) {
                throw InputError("length mismatch: input has " + std::to_string(x.size()) +
                                 " symbols, side has " + std::to_string(y.size()));
            }
            ContainerHeader h;
            h.algorithm = static_cast<std::uint8_t>(algorithm);
            h.x_alphabet = x_alphabet;
            h.y_alphabet = y_alphabet;
            if (algorithm == 4) {
                h.window = window;
                h.length = static_cast<std::uint32_t>(x.size());
            } else {
                const auto cfg = fixed_config(L, algorithm, m, x_alphabet, y_alphabet, x.size());
                h.phrase_length = L;
                h.phrase_count = static_cast<std::uint32_t>(cfg.phrase_count);
                h.m = algorithm == 2 ? m : 0;
            }
            const SymbolSequence ys(y_alphabet, y);
            const Container c = compress(SymbolSequence(x_alphabet, x), ys, h);
            return to_bytes(serialize_container(c, ys.symbols()));
        },
        py::arg("x"), py::arg("y"), py::arg("algorithm") = 1, py::arg("L") = 8, py::arg("m") = 3,
        py::arg("window") = 256, py::arg("x_alphabet") = 2, py::arg("y_alphabet") = 2,
        "Compress x given y into a self-describing container.");
    mod.def(
        "decompress",
        [](const py::bytes& data, const std::vector<Symbol>& y) {
            const auto bytes = from_bytes(data);
            const ContainerHeader peek = peek_container_header(bytes);
            if (y.size() != peek.symbol_count()) {
                throw InputError("length mismatch: side has " + std::to_string(y.size()) +
                                 " symbols, container expects " + std::to_string(peek.symbol_count()));
            }
            const SymbolSequence ys(peek.y_alphabet, y);
            return decompress(parse_container(bytes, ys.symbols()), ys).vector();
        },
        py::arg("data"), py::arg("y"));

    py::class_<MarkovModel>(mod, "MarkovModel")
        .def(py::init([](const std::vector<std::vector<double>>& rows, unsigned x_alphabet, unsigned y_alphabet) {
                 const std::size_t S = std::size_t{x_alphabet} * y_alphabet;
                 if (rows.size() != S) {
                     throw InputError("expected " + std::to_string(S) + " rows");
                 }
                 std::vector<double> cols(S * S);
                 for (std::size_t r = 0; r < S; ++r) {
                     if (rows[r].size() != S) {
                         throw InputError("expected " + std::to_string(S) + " columns");
                     }
                     for (std::size_t c = 0; c < S; ++c) {
                         cols[c * S + r] = rows[r][c];
                     }
                 }
                 return MarkovModel(x_alphabet, y_alphabet, std::move(cols));
             }),
             py::arg("rows"), py::arg("x_alphabet") = 2, py::arg("y_alphabet") = 2,
             "rows[next][cur]: column-stochastic transition matrix over states x*|B|+y.")
        .def_static("from_q", &model_from_q, py::arg("q"))
        .def_property_readonly("x_alphabet", &MarkovModel::x_alphabet)
        .def_property_readonly("y_alphabet", &MarkovModel::y_alphabet)
        .def_property_readonly("stationary", &MarkovModel::stationary)
        .def("transition", &MarkovModel::transition, py::arg("next"), py::arg("cur"))
        .def("__str__", [](const MarkovModel& m) {
            std::ostringstream out;
            write_model(out, m);
            return out.str();
        });

    mod.def(
        "generate",
        [](const MarkovModel& model, std::size_t length, std::uint64_t seed) {
            const PairedSource s = generate(model, length, seed);
            return py::make_tuple(s.x.vector(), s.y.vector());
        },
        py::arg("model"), py::arg("length"), py::arg("seed"));
    mod.def("joint_entropy_rate", [](const MarkovModel& m) { return joint_entropy_rate(m).value; });
    mod.def(
        "conditional_entropy_rate",
        [](const MarkovModel& m, std::size_t n) {
            const EntropyEstimate e = conditional_entropy_rate(m, n);
            return py::make_tuple(e.value, e.std_error);
        },
        py::arg("model"), py::arg("n") = 20, "(H(X|Y) estimate, half-width of the bracket)");
    mod.def(
        "rate_bound",
        [](const MarkovModel& m, std::size_t L, std::size_t samples, std::uint64_t seed) {
            const RateBound b = rate_bound(m, L, samples, seed);
            return py::make_tuple(b.value, b.std_error);
        },
        py::arg("model"), py::arg("L"), py::arg("samples") = 200000, py::arg("seed") = 1);

    mod.def(
        "rate_experiment",
        [](const MarkovModel& model, const std::vector<int>& algorithms, const std::vector<std::uint64_t>& L,
           const std::vector<std::uint64_t>& checkpoints, std::size_t trials, std::uint64_t seed, unsigned m,
           bool with_bound, std::size_t bound_samples) {
            FixedRateExperiment exp;
            exp.variants.clear();
            for (int a : algorithms) {
                if (a < 1 || a > 3) {
                    throw InputError("rate experiments cover algorithms 1, 2 and 3");
                }
                exp.variants.push_back(static_cast<FixedVariant>(a));
            }
            exp.phrase_lengths = L;
            exp.checkpoints = checkpoints;
            exp.trials = trials;
            exp.seed = seed;
            exp.m = m;
            exp.with_bound = with_bound;
            exp.bound_samples = bound_samples;
            py::list rows;
            for (const auto& r : run_rate_experiment(model, exp).rows) {
                rows.append(rate_row_dict(r));
            }
            return rows;
        },
        py::arg("model"), py::arg("algorithms") = std::vector<int>{1}, py::arg("L") = std::vector<std::uint64_t>{5, 10, 15},
        py::arg("checkpoints") = std::vector<std::uint64_t>{2000}, py::arg("trials") = 30, py::arg("seed") = 7,
        py::arg("m") = 3, py::arg("with_bound") = true, py::arg("bound_samples") = 200000);
}
