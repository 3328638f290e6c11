// tracecast: command-line surface for trace subshifts of one-dimensional CA.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracecast/ca.hpp"
#include "tracecast/omega.hpp"
#include "tracecast/rule_io.hpp"
#include "tracecast/sft.hpp"
#include "tracecast/sofic.hpp"
#include "tracecast/subshift_io.hpp"
#include "tracecast/synthesis.hpp"
#include "tracecast/tracecheck.hpp"
#include "tracecast/verify.hpp"

namespace {

using namespace tracecast;

constexpr int kExitHolds = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitInputError = 2;

std::uint64_t default_budget() {
    if (const char* env = std::getenv("TRACECAST_BUDGET")) return std::stoull(env);
    return 1ull << 21;
}

void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write '" + path + "'");
        out << content;
        if (!out.flush()) throw Error("cannot write '" + path + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot write '" + path + "'");
}

LoadedRule load_rule_arg(const std::string& rule_path, const std::string& builtin_name) {
    if (!builtin_name.empty()) return LoadedRule{builtin(builtin_name), std::nullopt};
    if (rule_path.empty()) throw Error("need a rule file or --builtin NAME");
    return load_rule_file(rule_path);
}

T3Witness parse_t3_spec(const std::string& spec, const Alphabet& alph) {
    // "phi:0->0,1->0;w:1"
    std::vector<Symbol> image(static_cast<std::size_t>(alph.size()), -1);
    Word w;
    std::istringstream in(spec);
    std::string part;
    while (std::getline(in, part, ';')) {
        std::size_t colon = part.find(':');
        if (colon == std::string::npos) throw ParseError("t3 spec: expected 'phi:...' and 'w:...'");
        std::string key = part.substr(0, colon), val = part.substr(colon + 1);
        if (key == "phi") {
            std::istringstream pairs(val);
            std::string pair;
            while (std::getline(pairs, pair, ',')) {
                std::size_t arrow = pair.find("->");
                if (arrow == std::string::npos) throw ParseError("t3 spec: expected 'a->b'");
                auto a = alph.find(pair.substr(0, arrow));
                auto b = alph.find(pair.substr(arrow + 2));
                if (!a || !b) throw ParseError("t3 spec: unknown symbol in '" + pair + "'");
                image[static_cast<std::size_t>(*a)] = *b;
            }
        } else if (key == "w") {
            w = alph.parse_word(val);
        } else {
            throw ParseError("t3 spec: unknown key '" + key + "'");
        }
    }
    for (Symbol s : image)
        if (s < 0) throw ParseError("t3 spec: phi is not total");
    if (w.empty()) throw ParseError("t3 spec: missing w");
    return T3Witness{PhiMap{alph, image}, w};
}

/// A subshift file whose alphabet symbols are equal-length words over the
/// base alphabet, read as a 2-SFT over blocks.
std::pair<Sft, BlockAlphabet> load_block_sft(const std::string& path, const Alphabet& base) {
    LoadedSubshift s = load_subshift(path);
    if (!s.sft || s.sft->order != 2) throw Error("t1 witness must be an order-2 SFT file");
    std::vector<Word> blocks;
    int k = -1;
    for (const std::string& name : s.alphabet.symbols()) {
        Word b = base.parse_word(name);
        if (k < 0) k = static_cast<int>(b.size());
        if (static_cast<int>(b.size()) != k) throw Error("t1 witness blocks must have equal length");
        blocks.push_back(b);
    }
    return {*s.sft, BlockAlphabet(base, k, std::move(blocks))};
}

int cmd_check(const std::string& file, bool t0, bool t2, bool t3, bool transitive, bool infinite,
              int bound) {
    LoadedSubshift s = load_subshift(file);
    if (t0) {
        auto phi = check_t0(s.graph);
        if (phi) {
            std::cout << "T0: yes\nphi: " << phi->format() << "\n";
            return kExitHolds;
        }
        std::cout << "T0: no\n";
        return kExitRefuted;
    }
    if (t3) {
        int b = bound > 0 ? bound : default_t3_bound(s.graph);
        T3Result r = check_t3(s.graph, b);
        switch (r.status) {
            case T3Result::Status::Found:
                std::cout << "T3: yes\nphi: " << r.witness->phi.format()
                          << "\nw: " << s.alphabet.format(r.witness->w) << "\n";
                return kExitHolds;
            case T3Result::Status::NotFoundUpToBound:
                std::cout << "T3: no witness up to bound " << b << "\n";
                return kExitRefuted;
            case T3Result::Status::NotT0:
                std::cout << "T3: no (not T0)\n";
                return kExitRefuted;
        }
    }
    if (t2) {
        auto witness = check_t2(s.graph);
        if (witness) {
            std::cout << "T2: yes\nwitness-vertices: " << witness->num_vertices() << "\n";
            return kExitHolds;
        }
        std::cout << "T2: no\n";
        return kExitRefuted;
    }
    if (transitive) {
        bool r = is_transitive(s.graph);
        std::cout << "transitive: " << (r ? "yes" : "no") << "\n";
        return r ? kExitHolds : kExitRefuted;
    }
    if (infinite) {
        bool r = is_infinite(s.graph);
        std::cout << "infinite: " << (r ? "yes" : "no") << "\n";
        return r ? kExitHolds : kExitRefuted;
    }
    throw Error("check: pick one of --t0 --t2 --t3 --transitive --infinite");
}

int cmd_synth(const std::string& sigma_file, const std::string& mode, const std::string& t1_file,
              const std::string& t3_spec, const std::string& out_path) {
    LoadedSubshift sigma = load_subshift(sigma_file);
    if (mode == "2sft") {
        if (!sigma.sft || sigma.sft->order != 2) throw Error("--mode 2sft needs an order-2 SFT file");
        Sft ess = essential_sft(*sigma.sft);
        TracerRule r = trace_2sft(ess);
        write_file(out_path, save_rule_file(r.rule));
        std::cout << "wrote " << out_path << " (anchor 0, diameter 2)\n";
        return kExitHolds;
    }
    if (mode != "full") throw Error("unknown --mode '" + mode + "'");
    if (t1_file.empty() || t3_spec.empty()) throw Error("--mode full needs --t1 FILE and --t3 SPEC");
    auto [gamma2, blocks] = load_block_sft(t1_file, sigma.alphabet);
    T3Witness t3 = parse_t3_spec(t3_spec, sigma.alphabet);
    SynthesisResult r = [&] {
        try {
            return synthesize(sigma.graph, gamma2, blocks, t3);
        } catch (const Error& e) {
            std::cerr << "witness verification failed: " << e.what() << "\n";
            std::exit(kExitRefuted);
        }
    }();
    write_file(out_path, save_synth_rule_file(r));
    nlohmann::json meta;
    meta["k"] = r.gamma_blocks.k;
    meta["w"] = r.t3.phi.alph.format(r.t3.w);
    meta["phi"] = r.t3.phi.format();
    meta["h"] = r.borders.h;
    meta["l"] = r.borders.l;
    meta["upsilon"] = r.borders.upsilon.size();
    meta["anchor"] = r.rule.anchor();
    meta["diameter"] = r.rule.diameter();
    {
        nlohmann::json inner;
        const Alphabet& balph = r.inner.rule.alphabet();
        inner["blocks"] = balph.symbols();
        nlohmann::json table = nlohmann::json::array();
        for (Symbol a = 0; a < balph.size(); ++a)
            for (Symbol b = 0; b < balph.size(); ++b) {
                Word pair{a, b};
                table.push_back({{"from", balph.name(a) + " " + balph.name(b)},
                                 {"to", balph.name(r.inner.rule.eval(pair))}});
            }
        inner["table"] = table;
        meta["inner"] = inner;
    }
    write_file(out_path + ".meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << out_path << " (anchor " << r.rule.anchor() << ", diameter "
              << r.rule.diameter() << ") and " << out_path << ".meta.json\n";
    return kExitHolds;
}

int cmd_simulate(const std::string& rule_path, const std::string& builtin_name,
                 const std::string& config, int steps, int window, long long window_start,
                 const std::string& format, bool trace_only, const std::string& out_path) {
    LoadedRule lr = load_rule_arg(rule_path, builtin_name);
    std::string word_text = config;
    int phase = 0;
    if (std::size_t at = config.find('@'); at != std::string::npos) {
        word_text = config.substr(0, at);
        phase = std::stoi(config.substr(at + 1));
    }
    PeriodicConfig cfg(lr.rule.alphabet().parse_word(word_text), phase);
    if (trace_only) {
        Word tr = trace_periodic(lr.rule, cfg, steps);
        std::string text = lr.rule.alphabet().format(tr) + "\n";
        if (out_path.empty())
            std::cout << text;
        else
            write_file(out_path, text);
        return kExitHolds;
    }
    SpaceTimeDiagram d = space_time(lr.rule, cfg, steps, window_start, window);
    std::string rendered;
    if (format == "text")
        rendered = render_text(d, lr.rule.alphabet());
    else if (format == "pgm")
        rendered = render_pgm(d, lr.rule.alphabet());
    else
        throw Error("unknown format '" + format + "'");
    if (out_path.empty())
        std::cout << rendered;
    else
        write_file(out_path, rendered);
    return kExitHolds;
}

int cmd_verify(const std::string& rule_path, const std::string& builtin_name,
               const std::string& sigma_file, int n, int completeness_n, std::uint64_t budget,
               int samples, std::uint64_t seed, int steps, int max_period,
               const std::string& out_path) {
    LoadedRule lr = load_rule_arg(rule_path, builtin_name);
    LoadedSubshift sigma = load_subshift(sigma_file);
    SamplingParams params;
    params.samples = samples;
    params.seed = seed;
    params.steps = steps;
    params.max_period = max_period;
    TraceReport rep = compare_trace_language(lr.rule, sigma.graph, n, budget, params,
                                             lr.synth ? &*lr.synth : nullptr, completeness_n);
    std::cout << rep.text(sigma.alphabet);
    if (!out_path.empty()) {
        nlohmann::json j;
        j["mode"] = rep.mode == TraceReport::Mode::Exact ? "exact" : "sampled";
        j["verdict"] = rep.verdict_name();
        j["n"] = rep.n;
        j["completeness_n"] = rep.completeness_n;
        j["seed"] = rep.seed;
        j["samples"] = rep.sample_count;
        j["required_windows"] = rep.required_windows;
        nlohmann::json missing = nlohmann::json::array(), extra = nlohmann::json::array();
        for (const Word& w : rep.missing) missing.push_back(sigma.alphabet.format(w));
        for (const Word& w : rep.extra) extra.push_back(sigma.alphabet.format(w));
        j["missing"] = missing;
        j["extra"] = extra;
        write_file(out_path, j.dump(2) + "\n");
    }
    return rep.refuted() ? kExitRefuted : kExitHolds;
}

int cmd_factors(const std::string& file, int n, bool as_rule, std::uint64_t budget) {
    if (as_rule) {
        LoadedRule lr = load_rule_file(file);
        ExactTraceResult r = exact_trace_factors(lr.rule, n, budget);
        if (!r.factors) {
            std::cerr << "budget exceeded: needs " << r.required_windows << " windows\n";
            return kExitRefuted;
        }
        for (const Word& w : *r.factors) std::cout << lr.rule.alphabet().format(w) << "\n";
        return kExitHolds;
    }
    LoadedSubshift s = load_subshift(file);
    for (const Word& w : s.graph.factors(n)) std::cout << s.alphabet.format(w) << "\n";
    return kExitHolds;
}

int run(int argc, char** argv) {
    CLI::App app{"tracecast: trace subshifts of one-dimensional cellular automata"};
    app.require_subcommand(1);

    // check
    auto* check = app.add_subcommand("check", "decide subshift properties");
    std::string check_file;
    bool f_t0 = false, f_t2 = false, f_t3 = false, f_trans = false, f_inf = false;
    int bound = 0;
    check->add_option("file", check_file)->required();
    check->add_flag("--t0", f_t0);
    check->add_flag("--t2", f_t2);
    check->add_flag("--t3", f_t3);
    check->add_flag("--transitive", f_trans);
    check->add_flag("--infinite", f_inf);
    check->add_option("--bound", bound, "T3 word-length bound");

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize a tracing CA");
    std::string synth_sigma, synth_mode = "2sft", synth_t1, synth_t3, synth_out;
    synth->add_option("sigma", synth_sigma)->required();
    synth->add_option("--mode", synth_mode, "2sft | full");
    synth->add_option("--t1", synth_t1, "order-2 SFT witness file over blocks");
    synth->add_option("--t3", synth_t3, "witness spec phi:a->b,...;w:WORD");
    synth->add_option("-o,--out", synth_out)->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a CA and render its space-time diagram");
    std::string sim_rule, sim_builtin, sim_config, sim_format = "text", sim_out;
    int sim_steps = 10, sim_window = 40;
    long long sim_window_start = 0;
    bool sim_trace = false;
    sim->add_option("rule", sim_rule);
    sim->add_option("--builtin", sim_builtin);
    sim->add_option("--config", sim_config, "periodic word, optionally WORD@PHASE")->required();
    sim->add_option("--steps", sim_steps);
    sim->add_option("--window", sim_window);
    sim->add_option("--window-start", sim_window_start);
    sim->add_option("--format", sim_format, "text | pgm");
    sim->add_flag("--trace", sim_trace, "print the traced column instead");
    sim->add_option("-o,--out", sim_out);

    // verify
    auto* ver = app.add_subcommand("verify", "compare a CA's trace subshift with a target");
    std::string ver_rule, ver_builtin, ver_sigma, ver_out;
    int ver_n = 6, ver_cn = -1, ver_samples = 10000, ver_steps = 200, ver_period = 64;
    std::uint64_t ver_budget = default_budget(), ver_seed = 1;
    ver->add_option("rule", ver_rule);
    ver->add_option("--builtin", ver_builtin);
    ver->add_option("sigma", ver_sigma);
    ver->add_option("-n", ver_n, "factor length");
    ver->add_option("--completeness-n", ver_cn);
    ver->add_option("--budget", ver_budget);
    ver->add_option("--samples", ver_samples);
    ver->add_option("--seed", ver_seed);
    ver->add_option("--steps", ver_steps);
    ver->add_option("--max-period", ver_period);
    ver->add_option("-o,--out", ver_out, "write the JSON report here");

    // factors
    auto* fac = app.add_subcommand("factors", "list length-n factors");
    std::string fac_file;
    int fac_n = 4;
    bool fac_rule = false;
    std::uint64_t fac_budget = default_budget();
    fac->add_option("file", fac_file)->required();
    fac->add_option("-n", fac_n);
    fac->add_flag("--rule", fac_rule, "treat the file as a CA rule; list trace factors");
    fac->add_option("--budget", fac_budget);

    // render
    auto* ren = app.add_subcommand("render", "render a space-time diagram to a file");
    std::string ren_rule, ren_builtin, ren_config, ren_format = "pgm", ren_out;
    int ren_steps = 40, ren_window = 80;
    long long ren_window_start = 0;
    ren->add_option("rule", ren_rule);
    ren->add_option("--builtin", ren_builtin);
    ren->add_option("--config", ren_config)->required();
    ren->add_option("--steps", ren_steps);
    ren->add_option("--window", ren_window);
    ren->add_option("--window-start", ren_window_start);
    ren->add_option("--format", ren_format);
    ren->add_option("-o,--out", ren_out)->required();

    CLI11_PARSE(app, argc, argv);

    if (check->parsed())
        return cmd_check(check_file, f_t0, f_t2, f_t3, f_trans, f_inf, bound);
    if (synth->parsed()) return cmd_synth(synth_sigma, synth_mode, synth_t1, synth_t3, synth_out);
    if (sim->parsed())
        return cmd_simulate(sim_rule, sim_builtin, sim_config, sim_steps, sim_window,
                            sim_window_start, sim_format, sim_trace, sim_out);
    if (ver->parsed()) {
        if (!ver_builtin.empty() && ver_sigma.empty()) std::swap(ver_rule, ver_sigma);
        if (ver_sigma.empty()) throw Error("verify: missing the target subshift file");
        return cmd_verify(ver_rule, ver_builtin, ver_sigma, ver_n, ver_cn, ver_budget, ver_samples,
                          ver_seed, ver_steps, ver_period, ver_out);
    }
    if (fac->parsed()) return cmd_factors(fac_file, fac_n, fac_rule, fac_budget);
    if (ren->parsed())
        return cmd_simulate(ren_rule, ren_builtin, ren_config, ren_steps, ren_window,
                            ren_window_start, ren_format, false, ren_out);
    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
