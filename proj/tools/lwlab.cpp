// lwlab: command-line laboratory for low-weight syndrome errors under BP
// decoding. Subcommands: gen-model, pairs, enumerate, dynamics, amend, trace.
// Every command is fully seeded; identical configuration and seed produce
// byte-identical output files regardless of --threads.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lwlab/amend.hpp"
#include "lwlab/csv.hpp"
#include "lwlab/decoder.hpp"
#include "lwlab/dynlab.hpp"
#include "lwlab/gf2.hpp"
#include "lwlab/lowweight.hpp"
#include "lwlab/model.hpp"

namespace fs = std::filesystem;
using namespace lwlab;

namespace {

unsigned effective_threads(unsigned requested) {
    return requested ? requested : std::max(1u, std::thread::hardware_concurrency());
}

struct RelayFlags {
    std::uint32_t max_legs = 200;
    std::uint32_t iters_per_leg = 25;
    std::uint32_t warmup_iters = 25;
    std::uint32_t cap = 5000;
    double gamma_min = -0.24;
    double gamma_max = 0.66;
    double scale = 0.9;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-legs", max_legs, "relay legs after the warm-up leg");
        cmd->add_option("--iters-per-leg", iters_per_leg, "BP iterations per relay leg");
        cmd->add_option("--warmup-iters", warmup_iters, "iterations of the zero-memory warm-up leg");
        cmd->add_option("--cap", cap, "global BP iteration cap (clamped to the leg budget)");
        cmd->add_option("--gamma-min", gamma_min, "lower bound of the memory-strength interval");
        cmd->add_option("--gamma-max", gamma_max, "upper bound of the memory-strength interval");
        cmd->add_option("--scale", scale, "min-sum normalization factor");
    }

    RelayConfig to_config(std::uint64_t seed) const {
        RelayConfig cfg;
        cfg.max_legs = max_legs;
        cfg.iters_per_leg = iters_per_leg;
        cfg.warmup_iters = warmup_iters;
        const std::uint64_t budget =
            static_cast<std::uint64_t>(max_legs) * iters_per_leg + warmup_iters;
        cfg.global_iteration_cap = static_cast<std::uint32_t>(
            std::min<std::uint64_t>(cap, budget));
        cfg.gamma_min = gamma_min;
        cfg.gamma_max = gamma_max;
        cfg.min_sum_scale = scale;
        cfg.seed = seed;
        cfg.validate();
        return cfg;
    }

    void canonical(std::ostringstream& ss) const {
        ss << "max_legs=" << max_legs << "\niters_per_leg=" << iters_per_leg
           << "\nwarmup_iters=" << warmup_iters << "\ncap=" << cap
           << "\ngamma_min=" << csv::fmt(gamma_min) << "\ngamma_max=" << csv::fmt(gamma_max)
           << "\nscale=" << csv::fmt(scale) << "\n";
    }
};

struct FilterFlags {
    std::uint32_t pair_nc = 2;
    std::vector<std::uint32_t> total_nc = {8};
    std::vector<std::string> relaxed;  // "pair_nc:t1,t2"

    void attach(CLI::App* cmd) {
        cmd->add_option("--pair-nc", pair_nc, "required canceled checks within each column pair");
        cmd->add_option("--total-nc", total_nc, "admissible total canceled checks")
            ->delimiter(',');
        cmd->add_option("--relaxed", relaxed,
                        "additional rule 'pair_nc:total1,total2' (repeatable)");
    }

    FilterSpec to_spec() const {
        FilterSpec spec;
        spec.primary.pair_nc = pair_nc;
        spec.primary.total_nc = total_nc;
        for (const std::string& s : relaxed) {
            const auto colon = s.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("--relaxed expects 'pair_nc:total1,total2', got '" + s + "'");
            FilterRule rule;
            rule.pair_nc = static_cast<std::uint32_t>(std::stoul(s.substr(0, colon)));
            rule.total_nc.clear();
            std::istringstream ss(s.substr(colon + 1));
            std::string tok;
            while (std::getline(ss, tok, ','))
                rule.total_nc.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
            spec.relaxed.push_back(rule);
        }
        return spec;
    }

    void canonical(std::ostringstream& ss) const {
        ss << "pair_nc=" << pair_nc << "\ntotal_nc=";
        for (std::size_t i = 0; i < total_nc.size(); ++i) ss << (i ? "," : "") << total_nc[i];
        ss << "\n";
        for (const auto& r : relaxed) ss << "relaxed=" << r << "\n";
    }
};

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> parse_monomials(const std::string& s) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    std::istringstream terms(s);
    std::string term;
    while (std::getline(terms, term, ';')) {
        const auto comma = term.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("monomial list expects 'xp,yq;xp,yq;...', got '" + s + "'");
        out.emplace_back(static_cast<std::uint32_t>(std::stoul(term.substr(0, comma))),
                         static_cast<std::uint32_t>(std::stoul(term.substr(comma + 1))));
    }
    return out;
}

// ---------------------------------------------------------------- gen-model

struct GenModelOpts {
    std::string kind = "random";
    std::string out;
    std::uint32_t checks = 20, faults = 40, max_col_wt = 6, max_row_wt = 35;
    std::uint64_t seed = 0;
    std::uint32_t l = 12, m = 6;
    std::string a_poly = "3,0;0,1;0,2";
    std::string b_poly = "0,3;1,0;2,0";
    std::string block = "hx";
};

void run_gen_model(const GenModelOpts& o) {
    DecodingModel model;
    if (o.kind == "random") {
        model = generate_random_model(o.checks, o.faults, o.max_col_wt, o.max_row_wt, o.seed);
    } else if (o.kind == "bb") {
        model = generate_bb_code_capacity(o.l, o.m, parse_monomials(o.a_poly),
                                          parse_monomials(o.b_poly),
                                          o.block == "hz" ? BbBlock::hz : BbBlock::hx);
    } else {
        throw std::invalid_argument("--kind must be 'random' or 'bb'");
    }
    save_model(model, o.out);
    std::cout << "wrote " << o.out << ": checks=" << model.n_checks()
              << " faults=" << model.n_faults() << " observables=" << model.n_observables()
              << " groups=" << model.n_groups() << "\n";
}

// --------------------------------------------------------------------- pairs

struct PairsOpts {
    std::string model;
    std::string out_dir = ".";
    std::uint32_t group = 0;
    bool all_rows = false;
};

void run_pairs(const PairsOpts& o) {
    const DecodingModel model = load_model(o.model);
    const auto scope = o.all_rows ? model.all_rows() : model.group_rows(o.group);
    const PairStats stats = shared_column_counts(model, scope);

    std::ostringstream cfg;
    cfg << "cmd=pairs\nmodel=" << o.model << "\ngroup="
        << (o.all_rows ? std::string("all") : std::to_string(o.group)) << "\n";
    const std::uint64_t hash = csv::fnv1a64(cfg.str());

    const fs::path dir = ensure_out_dir(o.out_dir);
    csv::write_pair_stats(dir / "pairs.csv", hash, stats);
    csv::write_shared_freq(dir / "freq.csv", hash, stats);
    std::cout << "wrote " << (dir / "pairs.csv").string() << " and freq.csv; scope="
              << stats.scope_size() << " checks, max n_s=" << stats.max_n_s() << "\n";
}

// ----------------------------------------------------------------- enumerate

struct EnumerateOpts {
    std::vector<std::string> models;
    std::vector<std::uint32_t> groups;
    std::string out_dir = ".";
    FilterFlags filter;
    unsigned threads = 0;
};

void run_enumerate(const EnumerateOpts& o) {
    if (o.models.empty() || o.models.size() > 2)
        throw std::invalid_argument("enumerate expects one or two --model files");
    std::vector<std::uint32_t> groups = o.groups;
    if (groups.empty()) {
        groups.push_back(0);
        if (o.models.size() == 2) groups.push_back(1);  // Z first cycle, X second cycle
    }
    if (groups.size() != o.models.size())
        throw std::invalid_argument("need one --group per --model");

    const FilterSpec spec = o.filter.to_spec();

    std::ostringstream cfg;
    cfg << "cmd=enumerate\n";
    for (std::size_t i = 0; i < o.models.size(); ++i)
        cfg << "model=" << o.models[i] << "\ngroup=" << groups[i] << "\n";
    o.filter.canonical(cfg);
    const std::uint64_t hash = csv::fnv1a64(cfg.str());

    const fs::path dir = ensure_out_dir(o.out_dir);
    auto out = csv::open_csv(dir / "combos.csv", hash);
    csv::write_combos_header(out);

    std::vector<ErrorCombo> pooled;
    struct Summary {
        std::string name;
        std::size_t constructed, filtered, pairs, decomps;
    };
    std::vector<Summary> summaries;

    std::ostringstream body;
    for (std::size_t i = 0; i < o.models.size(); ++i) {
        const DecodingModel model = load_model(o.models[i]);
        const std::string name = fs::path(o.models[i]).stem().string();
        const auto pairs = max_shared_pairs(model, groups[i]);
        const auto all = enumerate_weight4_all(model, pairs, effective_threads(o.threads));
        const auto filtered = filter_hard_errors(all, spec);

        // both lists are sorted by fault_ids; walk them together for the flag
        std::size_t fi = 0;
        for (const auto& c : all) {
            while (fi < filtered.size() && filtered[fi].fault_ids < c.fault_ids) ++fi;
            const bool is_filtered =
                fi < filtered.size() && filtered[fi].fault_ids == c.fault_ids;
            csv::write_combo_row(out, name, is_filtered ? filtered[fi] : c, is_filtered);
        }
        summaries.push_back({name, all.size(), filtered.size(),
                             distinct_contributing_pairs(filtered),
                             count_decompositions(filtered)});
        for (const auto& c : all) pooled.push_back(c);
    }
    out.close();

    csv::write_nc_distribution(dir / "ncdist.csv", hash, pooled);

    std::size_t constructed = 0, filtered_n = 0;
    for (const auto& s : summaries) {
        std::cout << s.name << ": constructed=" << s.constructed << " filtered=" << s.filtered
                  << " contributing_pairs=" << s.pairs << " decompositions=" << s.decomps << "\n";
        constructed += s.constructed;
        filtered_n += s.filtered;
    }
    std::cout << "total constructed=" << constructed << " filtered=" << filtered_n << "\n";
    std::cout << "wrote " << (dir / "combos.csv").string() << " and ncdist.csv\n";
}

// ------------------------------------------------------------------ dynamics

struct DynamicsOpts {
    std::string model;
    std::string combos;
    std::string model_name;  // empty: rows from any model
    bool all_combos = false;
    std::uint32_t trials = 50;
    std::uint64_t seed = 0;
    std::string decoder = "relay";
    std::uint32_t bin_width = 100;
    std::uint32_t weight5 = 0;
    std::uint32_t weight5_limit = 500;
    std::uint32_t weight5_trials = 0;
    RelayFlags relay;
    unsigned threads = 0;
    std::string out_dir = ".";
};

void run_dynamics(const DynamicsOpts& o) {
    const DecodingModel model = load_model(o.model);
    const std::string name = o.model_name.empty() ? fs::path(o.model).stem().string() : o.model_name;
    const auto combos = csv::read_combos(o.combos, model, name, !o.all_combos);
    const DecoderKind kind = o.decoder == "bp_osd" ? DecoderKind::bp_osd : DecoderKind::relay;
    const RelayConfig cfg = o.relay.to_config(o.seed);

    std::ostringstream c;
    c << "cmd=dynamics\nmodel=" << o.model << "\ncombos=" << o.combos << "\nmodel_name=" << name
      << "\nall_combos=" << o.all_combos << "\ntrials=" << o.trials << "\nseed=" << o.seed
      << "\ndecoder=" << o.decoder << "\nbin_width=" << o.bin_width << "\nweight5=" << o.weight5
      << "\nweight5_limit=" << o.weight5_limit << "\nweight5_trials=" << o.weight5_trials << "\n";
    o.relay.canonical(c);
    const std::uint64_t hash = csv::fnv1a64(c.str());

    const auto records =
        run_trials(model, combos, cfg, o.trials, o.seed, kind, effective_threads(o.threads));

    const fs::path dir = ensure_out_dir(o.out_dir);
    csv::write_trials(dir / "trials.csv", hash, records);
    csv::write_histogram(dir / "hist.csv", hash, iteration_histogram(records, o.bin_width));
    csv::write_histograms_by_weight(dir / "hist_by_w.csv", hash,
                                    iteration_histograms_by_weight(records, combos, o.bin_width));
    if (!records.empty())
        csv::write_survival(dir / "survival.csv", hash, survival_curve(records));
    else
        csv::write_survival(dir / "survival.csv", hash, SurvivalCurve{});

    std::vector<std::pair<std::uint64_t, RateFit>> fits;
    for (std::size_t i = 0; i < combos.size(); ++i) {
        const auto recs = std::span(records).subspan(i * o.trials, o.trials);
        try {
            fits.emplace_back(combos[i].id(), fit_exponential_rate(recs, cfg.global_iteration_cap));
        } catch (const std::runtime_error&) {
            // all trials censored for this error: no estimate
        }
    }
    csv::write_rate_fits(dir / "expfits.csv", hash, fits);

    if (o.weight5 > 0) {
        const std::uint32_t w5_trials = o.weight5_trials ? o.weight5_trials : o.trials;
        std::vector<std::pair<ErrorCombo, Weight5Spread>> spreads;
        for (std::size_t i = 0; i < combos.size() && i < o.weight5; ++i)
            spreads.emplace_back(combos[i],
                                 weight5_spread(model, combos[i], cfg, w5_trials, o.seed,
                                                o.weight5_limit, effective_threads(o.threads)));
        csv::write_weight5(dir / "weight5.csv", hash, spreads);
    }

    std::uint64_t nonconv = 0;
    for (const auto& r : records) nonconv += r.converged ? 0 : 1;
    std::cout << "decoded " << combos.size() << " errors x " << o.trials
              << " trials: mean_iterations=" << csv::fmt(mean_iterations(records))
              << " nonconverged=" << nonconv << "\n";
    std::cout << "wrote outputs under " << dir.string() << "\n";
}

// --------------------------------------------------------------------- amend

struct AmendOpts {
    std::string model;
    std::string combos;
    std::string model_name;
    bool all_combos = false;
    std::vector<double> fractions;
    std::uint32_t trials = 50;
    std::uint64_t seed = 0;
    std::string decoder = "both";
    RelayFlags relay;
    unsigned threads = 0;
    std::string out_dir = ".";
};

void run_amend(const AmendOpts& o) {
    const DecodingModel model = load_model(o.model);
    const std::string name = o.model_name.empty() ? fs::path(o.model).stem().string() : o.model_name;
    const auto combos = csv::read_combos(o.combos, model, name, !o.all_combos);
    const RelayConfig cfg = o.relay.to_config(o.seed);

    std::ostringstream c;
    c << "cmd=amend\nmodel=" << o.model << "\ncombos=" << o.combos << "\nmodel_name=" << name
      << "\nall_combos=" << o.all_combos << "\ntrials=" << o.trials << "\nseed=" << o.seed
      << "\ndecoder=" << o.decoder << "\nfractions=";
    for (std::size_t i = 0; i < o.fractions.size(); ++i)
        c << (i ? "," : "") << csv::fmt(o.fractions[i]);
    c << "\n";
    o.relay.canonical(c);
    const std::uint64_t hash = csv::fnv1a64(c.str());

    std::vector<SweepPoint> points;
    const unsigned threads = effective_threads(o.threads);
    if (o.decoder == "relay" || o.decoder == "both") {
        const auto p = sweep_fraction(model, combos, o.fractions, cfg, o.trials, o.seed,
                                      DecoderKind::relay, threads);
        points.insert(points.end(), p.begin(), p.end());
    }
    if (o.decoder == "bp_osd" || o.decoder == "both") {
        const auto p = sweep_fraction(model, combos, o.fractions, cfg, o.trials, o.seed,
                                      DecoderKind::bp_osd, threads);
        points.insert(points.end(), p.begin(), p.end());
    }

    const fs::path dir = ensure_out_dir(o.out_dir);
    csv::write_sweep(dir / "sweep.csv", hash, points);
    for (const auto& p : points)
        std::cout << csv::decoder_name(p.decoder) << " fraction=" << csv::fmt(p.fraction)
                  << " mean_iterations=" << csv::fmt(p.mean_iterations)
                  << " logical_error_prob=" << csv::fmt(p.logical_error_prob) << "\n";
    std::cout << "wrote " << (dir / "sweep.csv").string() << "\n";
}

// --------------------------------------------------------------------- trace

struct TraceOpts {
    std::string model;
    std::vector<std::uint32_t> faults;
    std::uint64_t seed = 0;
    std::uint32_t top_k = 121;
    RelayFlags relay;
    std::string out_dir = ".";
};

void run_trace(const TraceOpts& o) {
    const DecodingModel model = load_model(o.model);
    const ErrorCombo combo = make_combo(model, o.faults);
    RelayConfig cfg = o.relay.to_config(o.seed);
    cfg.record_trace = true;

    std::ostringstream c;
    c << "cmd=trace\nmodel=" << o.model << "\nfaults=" << csv::join_ids(combo.fault_ids)
      << "\nseed=" << o.seed << "\ntop_k=" << o.top_k << "\n";
    o.relay.canonical(c);
    const std::uint64_t hash = csv::fnv1a64(c.str());

    const DecodeResult result = relay_decode(model, combo.syndrome, cfg);
    const TraceExport trace = export_trace(result, o.top_k);

    const fs::path dir = ensure_out_dir(o.out_dir);
    csv::write_trace(dir / "trace.csv", hash, trace);
    std::cout << "decode: converged=" << result.converged << " iterations=" << result.iterations
              << " legs=" << result.legs << " w(s)=" << combo.metrics.w
              << " n_c=" << combo.metrics.n_c << "\n";
    std::cout << "wrote " << (dir / "trace.csv").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-weight syndrome error laboratory for BP decoding"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI configuration file, one section per subcommand");

    GenModelOpts gen;
    auto* cmd_gen = app.add_subcommand("gen-model", "generate a synthetic decoding model");
    cmd_gen->add_option("--kind", gen.kind, "random | bb")->check(CLI::IsMember({"random", "bb"}));
    cmd_gen->add_option("--out", gen.out, "output model file")->required();
    cmd_gen->add_option("--checks", gen.checks, "random: number of checks");
    cmd_gen->add_option("--faults", gen.faults, "random: number of fault columns");
    cmd_gen->add_option("--max-col-wt", gen.max_col_wt, "random: max column weight");
    cmd_gen->add_option("--max-row-wt", gen.max_row_wt, "random: max row weight");
    cmd_gen->add_option("--seed", gen.seed, "random: generator seed")->required();
    cmd_gen->add_option("--l", gen.l, "bb: cyclic dimension l");
    cmd_gen->add_option("--m", gen.m, "bb: cyclic dimension m");
    cmd_gen->add_option("--a-poly", gen.a_poly, "bb: A monomials 'xp,yq;...'");
    cmd_gen->add_option("--b-poly", gen.b_poly, "bb: B monomials 'xp,yq;...'");
    cmd_gen->add_option("--block", gen.block, "bb: hx | hz")->check(CLI::IsMember({"hx", "hz"}));
    cmd_gen->callback([&]() { run_gen_model(gen); });

    PairsOpts pairs;
    auto* cmd_pairs = app.add_subcommand("pairs", "shared-column statistics of check pairs");
    cmd_pairs->add_option("--model", pairs.model, "decoding model file")->required();
    cmd_pairs->add_option("--group", pairs.group, "cycle group index (default 0)");
    cmd_pairs->add_flag("--all-rows", pairs.all_rows, "use every check, not one group");
    cmd_pairs->add_option("--out", pairs.out_dir, "output directory");
    cmd_pairs->callback([&]() { run_pairs(pairs); });

    EnumerateOpts enu;
    auto* cmd_enum = app.add_subcommand("enumerate", "construct and filter weight-four errors");
    cmd_enum->add_option("--model", enu.models, "decoding model file (repeat for a second basis)")
        ->required();
    cmd_enum->add_option("--group", enu.groups, "cycle group per model (defaults 0, then 1)");
    cmd_enum->add_option("--out", enu.out_dir, "output directory");
    cmd_enum->add_option("--threads", enu.threads, "worker threads (0 = hardware)");
    enu.filter.attach(cmd_enum);
    cmd_enum->callback([&]() { run_enumerate(enu); });

    DynamicsOpts dyn;
    auto* cmd_dyn = app.add_subcommand("dynamics", "stochastic decoding trials and statistics");
    cmd_dyn->add_option("--model", dyn.model, "decoding model file")->required();
    cmd_dyn->add_option("--combos", dyn.combos, "combos CSV from 'enumerate'")->required();
    cmd_dyn->add_option("--model-name", dyn.model_name, "combos rows to use (default: model stem)");
    cmd_dyn->add_flag("--all-combos", dyn.all_combos, "use unfiltered rows too");
    cmd_dyn->add_option("--trials", dyn.trials, "trials per error");
    cmd_dyn->add_option("--seed", dyn.seed, "base seed")->required();
    cmd_dyn->add_option("--decoder", dyn.decoder, "relay | bp_osd")
        ->check(CLI::IsMember({"relay", "bp_osd"}));
    cmd_dyn->add_option("--bin-width", dyn.bin_width, "histogram bin width");
    cmd_dyn->add_option("--weight5", dyn.weight5, "weight-five spread for the first N errors");
    cmd_dyn->add_option("--weight5-limit", dyn.weight5_limit, "max extensions per error");
    cmd_dyn->add_option("--weight5-trials", dyn.weight5_trials, "trials per extension (default --trials)");
    cmd_dyn->add_option("--threads", dyn.threads, "worker threads (0 = hardware)");
    cmd_dyn->add_option("--out", dyn.out_dir, "output directory");
    dyn.relay.attach(cmd_dyn);
    cmd_dyn->callback([&]() { run_dynamics(dyn); });

    AmendOpts amd;
    auto* cmd_amend = app.add_subcommand("amend", "decoding-matrix amendment sweep");
    cmd_amend->add_option("--model", amd.model, "decoding model file")->required();
    cmd_amend->add_option("--combos", amd.combos, "combos CSV from 'enumerate'")->required();
    cmd_amend->add_option("--model-name", amd.model_name, "combos rows to use (default: model stem)");
    cmd_amend->add_flag("--all-combos", amd.all_combos, "use unfiltered rows too");
    cmd_amend->add_option("--fractions", amd.fractions, "added fractions, e.g. 0,0.5,1")
        ->required()
        ->delimiter(',');
    cmd_amend->add_option("--trials", amd.trials, "trials per error per fraction");
    cmd_amend->add_option("--seed", amd.seed, "base seed")->required();
    cmd_amend->add_option("--decoder", amd.decoder, "relay | bp_osd | both")
        ->check(CLI::IsMember({"relay", "bp_osd", "both"}));
    cmd_amend->add_option("--threads", amd.threads, "worker threads (0 = hardware)");
    cmd_amend->add_option("--out", amd.out_dir, "output directory");
    amd.relay.attach(cmd_amend);
    cmd_amend->callback([&]() { run_amend(amd); });

    TraceOpts trc;
    auto* cmd_trace = app.add_subcommand("trace", "record one decode's hard-decision trace");
    cmd_trace->add_option("--model", trc.model, "decoding model file")->required();
    cmd_trace->add_option("--faults", trc.faults, "fault column indices, e.g. 3,17,40,91")
        ->required()
        ->delimiter(',');
    cmd_trace->add_option("--seed", trc.seed, "decoder seed")->required();
    cmd_trace->add_option("--top-k", trc.top_k, "rows kept in the exported trace");
    cmd_trace->add_option("--out", trc.out_dir, "output directory");
    trc.relay.attach(cmd_trace);
    cmd_trace->callback([&]() { run_trace(trc); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const ModelParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ModelValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
