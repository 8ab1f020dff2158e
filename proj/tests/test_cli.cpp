#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lwlab/csv.hpp"
#include "lwlab/lowweight.hpp"
#include "lwlab/model.hpp"
#include "test_util.hpp"

using namespace lwlab;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return LWLAB_CLI_PATH; }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("lwlab_cli_" + tag + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t data_rows(const std::string& csv) {
    std::istringstream ss(csv);
    std::string line;
    std::size_t rows = 0;
    bool saw_header = false;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

fs::path write_toy_model(const fs::path& dir) {
    const auto toy = testutil::toy_lowweight_model();
    const fs::path p = dir / "toy.model";
    save_model(toy, p);
    return p;
}

}  // namespace

TEST_CASE("cli: gen-model writes a loadable model, deterministically") {
    const auto dir = fresh_dir("gen");
    const auto out = (dir / "m.model").string();
    REQUIRE(run_cli("gen-model --kind random --checks 15 --faults 30 --max-col-wt 4 "
                    "--max-row-wt 10 --seed 5 --out " + out) == 0);
    const auto m = load_model(out);
    REQUIRE(m.n_checks() == 15);
    REQUIRE(m.n_faults() == 30);
    REQUIRE(m == generate_random_model(15, 30, 4, 10, 5));

    const auto out2 = (dir / "bb.model").string();
    REQUIRE(run_cli("gen-model --kind bb --l 3 --m 3 --a-poly '1,0;0,1' --b-poly 0,0 --seed 1 "
                    "--block hz --out " + out2) == 0);
    REQUIRE(load_model(out2).n_faults() == 18);
}

TEST_CASE("cli: pairs writes provenance-stamped CSVs and reruns byte-identically") {
    const auto dir = fresh_dir("pairs");
    const auto model = write_toy_model(dir);
    const auto out1 = dir / "run1";
    const auto out2 = dir / "run2";
    REQUIRE(run_cli("pairs --model " + model.string() + " --group 0 --out " + out1.string()) == 0);
    REQUIRE(run_cli("pairs --model " + model.string() + " --group 0 --out " + out2.string()) == 0);

    const auto pairs1 = slurp(out1 / "pairs.csv");
    REQUIRE(pairs1.rfind("# config-hash=", 0) == 0);
    REQUIRE(pairs1.find("row,col,n_s") != std::string::npos);
    REQUIRE(pairs1 == slurp(out2 / "pairs.csv"));
    REQUIRE(slurp(out1 / "freq.csv") == slurp(out2 / "freq.csv"));

    // empty scope: a model with zero-check group is impossible, but an
    // all-rows scope on a model with no shared columns still yields rows with
    // n_s = 0 only; the CSV keeps its header either way
    REQUIRE(data_rows(pairs1) > 0);
}

TEST_CASE("cli: enumerate emits combos matching the library and is rerun-stable") {
    const auto dir = fresh_dir("enum");
    const auto model_path = write_toy_model(dir);
    const auto out1 = dir / "e1";
    const auto out2 = dir / "e2";
    REQUIRE(run_cli("enumerate --model " + model_path.string() + " --group 0 --out " +
                    out1.string() + " --threads 2") == 0);
    REQUIRE(run_cli("enumerate --model " + model_path.string() + " --group 0 --out " +
                    out2.string() + " --threads 1") == 0);
    REQUIRE(slurp(out1 / "combos.csv") == slurp(out2 / "combos.csv"));
    REQUIRE(slurp(out1 / "ncdist.csv") == slurp(out2 / "ncdist.csv"));

    const auto toy = testutil::toy_lowweight_model();
    const auto pairs = max_shared_pairs(toy, 0);
    const auto all = enumerate_weight4_all(toy, pairs, 1);
    const auto filtered = filter_hard_errors(all, FilterSpec{});
    REQUIRE(data_rows(slurp(out1 / "combos.csv")) == all.size());

    const auto loaded_all = csv::read_combos(out1 / "combos.csv", toy, "toy", false);
    REQUIRE(loaded_all.size() == all.size());
    const auto loaded_filtered = csv::read_combos(out1 / "combos.csv", toy, "toy", true);
    REQUIRE(loaded_filtered.size() == filtered.size());
    for (std::size_t i = 0; i < loaded_filtered.size(); ++i) {
        REQUIRE(loaded_filtered[i].fault_ids == filtered[i].fault_ids);
        REQUIRE(loaded_filtered[i].metrics == filtered[i].metrics);
    }

    // n_c distribution sums to the constructed count
    const auto dist = slurp(out1 / "ncdist.csv");
    std::istringstream ss(dist);
    std::string line;
    std::size_t sum = 0;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n_c", 0) == 0) continue;
        sum += std::stoul(line.substr(line.find(',') + 1));
    }
    REQUIRE(sum == all.size());
}

TEST_CASE("cli: pairs handles the full-matrix scope and an empty scope") {
    const auto dir = fresh_dir("pairscope");
    const auto model = write_toy_model(dir);
    const auto out = dir / "all";
    REQUIRE(run_cli("pairs --model " + model.string() + " --all-rows --out " + out.string()) == 0);
    REQUIRE(data_rows(slurp(out / "pairs.csv")) > 0);

    // zero-check model: header-only outputs, still exit 0
    const fs::path empty_model = dir / "empty.model";
    {
        std::ofstream f(empty_model);
        f << "DECODING_MODEL v1\n"
          << "checks 0 faults 0 observables 0 groups 1\n"
          << "group_size 0\n";
    }
    const auto out2 = dir / "empty";
    REQUIRE(run_cli("pairs --model " + empty_model.string() + " --group 0 --out " +
                    out2.string()) == 0);
    const auto pairs_csv = slurp(out2 / "pairs.csv");
    REQUIRE(pairs_csv.rfind("# config-hash=", 0) == 0);
    REQUIRE(pairs_csv.find("row,col,n_s") != std::string::npos);
    REQUIRE(data_rows(pairs_csv) == 0);
}

TEST_CASE("cli: enumerate pools two models into one labeled combos file") {
    const auto dir = fresh_dir("enum2");
    const auto toy_path = write_toy_model(dir);
    const auto toy2 = testutil::toy_disjoint_pairs_model();
    const fs::path toy2_path = dir / "toy2.model";
    save_model(toy2, toy2_path);

    const auto out = dir / "e";
    REQUIRE(run_cli("enumerate --model " + toy_path.string() + " --model " + toy2_path.string() +
                    " --group 0 --group 0 --out " + out.string()) == 0);

    const auto toy = testutil::toy_lowweight_model();
    const auto n1 = enumerate_weight4_all(toy, max_shared_pairs(toy, 0), 1).size();
    const auto n2 = enumerate_weight4_all(toy2, max_shared_pairs(toy2, 0), 1).size();
    REQUIRE(data_rows(slurp(out / "combos.csv")) == n1 + n2);

    REQUIRE(csv::read_combos(out / "combos.csv", toy, "toy", false).size() == n1);
    REQUIRE(csv::read_combos(out / "combos.csv", toy2, "toy2", false).size() == n2);
}

TEST_CASE("cli: dynamics with zero matching combos writes empty outputs") {
    const auto dir = fresh_dir("dynzero");
    const auto model = write_toy_model(dir);
    const auto edir = dir / "e";
    REQUIRE(run_cli("enumerate --model " + model.string() + " --group 0 --out " + edir.string()) ==
            0);
    const auto ddir = dir / "d";
    REQUIRE(run_cli("dynamics --model " + model.string() + " --combos " +
                    (edir / "combos.csv").string() +
                    " --model-name nomatch --trials 2 --seed 3 --max-legs 3 --iters-per-leg 5 "
                    "--warmup-iters 5 --cap 20 --out " + ddir.string()) == 0);
    REQUIRE(data_rows(slurp(ddir / "trials.csv")) == 0);
    REQUIRE(data_rows(slurp(ddir / "survival.csv")) == 0);
}

TEST_CASE("cli: enumerate on a model without maximal pairs yields empty outputs") {
    const auto dir = fresh_dir("nopairs");
    const fs::path model = dir / "cc.model";
    REQUIRE(run_cli("gen-model --kind bb --l 6 --m 6 --a-poly '3,0;0,1;0,2' "
                    "--b-poly '0,3;1,0;2,0' --seed 1 --block hz --out " + model.string()) == 0);
    const auto out = dir / "e";
    REQUIRE(run_cli("enumerate --model " + model.string() + " --group 0 --out " + out.string()) ==
            0);
    REQUIRE(data_rows(slurp(out / "combos.csv")) == 0);
}

TEST_CASE("cli: impossible filters still succeed with zero filtered rows") {
    const auto dir = fresh_dir("impossible");
    const auto model_path = write_toy_model(dir);
    const auto out = dir / "e";
    REQUIRE(run_cli("enumerate --model " + model_path.string() + " --group 0 --pair-nc 9 "
                    "--total-nc 10 --out " + out.string()) == 0);
    const auto toy = testutil::toy_lowweight_model();
    REQUIRE(csv::read_combos(out / "combos.csv", toy, "toy", true).empty());
}

TEST_CASE("cli: dynamics produces the full output set and is seed-deterministic") {
    const auto dir = fresh_dir("dyn");
    const auto model_path = write_toy_model(dir);
    const auto edir = dir / "e";
    REQUIRE(run_cli("enumerate --model " + model_path.string() + " --group 0 --out " +
                    edir.string()) == 0);

    const std::string common = "dynamics --model " + model_path.string() + " --combos " +
                               (edir / "combos.csv").string() +
                               " --trials 2 --seed 17 --max-legs 3 --iters-per-leg 5 "
                               "--warmup-iters 5 --cap 20 --bin-width 5 --weight5 1 "
                               "--weight5-limit 3 ";
    const auto d1 = dir / "d1";
    const auto d2 = dir / "d2";
    REQUIRE(run_cli(common + "--threads 2 --out " + d1.string()) == 0);
    REQUIRE(run_cli(common + "--threads 1 --out " + d2.string()) == 0);

    for (const char* name : {"trials.csv", "hist.csv", "hist_by_w.csv", "survival.csv",
                             "expfits.csv", "weight5.csv"})
        REQUIRE(slurp(d1 / name) == slurp(d2 / name));

    const auto toy = testutil::toy_lowweight_model();
    const auto filtered = csv::read_combos(edir / "combos.csv", toy, "toy", true);
    REQUIRE(data_rows(slurp(d1 / "trials.csv")) == filtered.size() * 2);
}

TEST_CASE("cli: amend sweep writes one row per fraction per decoder") {
    const auto dir = fresh_dir("amend");
    const auto model_path = write_toy_model(dir);
    const auto edir = dir / "e";
    REQUIRE(run_cli("enumerate --model " + model_path.string() + " --group 0 --out " +
                    edir.string()) == 0);
    const std::string common = "amend --model " + model_path.string() + " --combos " +
                               (edir / "combos.csv").string() +
                               " --fractions 0,1 --trials 2 --seed 23 --max-legs 3 "
                               "--iters-per-leg 5 --warmup-iters 5 --cap 20 --decoder both ";
    const auto adir = dir / "a";
    REQUIRE(run_cli(common + "--threads 2 --out " + adir.string()) == 0);
    const auto sweep = slurp(adir / "sweep.csv");
    REQUIRE(data_rows(sweep) == 4);
    REQUIRE(sweep.find("relay") != std::string::npos);
    REQUIRE(sweep.find("bp_osd") != std::string::npos);

    // thread count never changes the bytes
    const auto adir2 = dir / "a2";
    REQUIRE(run_cli(common + "--threads 1 --out " + adir2.string()) == 0);
    REQUIRE(slurp(adir2 / "sweep.csv") == sweep);
}

TEST_CASE("cli: relaxed filter rules widen the filtered set") {
    const auto dir = fresh_dir("relaxed");
    const auto model_path = write_toy_model(dir);
    const auto strict_dir = dir / "strict";
    const auto relaxed_dir = dir / "relaxed";
    REQUIRE(run_cli("enumerate --model " + model_path.string() + " --group 0 --out " +
                    strict_dir.string()) == 0);
    REQUIRE(run_cli("enumerate --model " + model_path.string() + " --group 0 "
                    "--relaxed 2:6,7 --out " + relaxed_dir.string()) == 0);
    const auto toy = testutil::toy_lowweight_model();
    const auto strict = csv::read_combos(strict_dir / "combos.csv", toy, "toy", true);
    const auto wide = csv::read_combos(relaxed_dir / "combos.csv", toy, "toy", true);
    REQUIRE(wide.size() >= strict.size());
    for (const auto& c : wide) {
        const bool ok = c.metrics.n_c == 8 || c.metrics.n_c == 6 || c.metrics.n_c == 7;
        REQUIRE(ok);
    }
}

TEST_CASE("cli: trace decodes a fault set and exports the trace") {
    const auto dir = fresh_dir("trace");
    const auto model_path = write_toy_model(dir);
    const auto tdir = dir / "t";
    REQUIRE(run_cli("trace --model " + model_path.string() +
                    " --faults 0,1,8,9 --seed 31 --max-legs 3 --iters-per-leg 5 "
                    "--warmup-iters 5 --cap 20 --top-k 8 --out " + tdir.string()) == 0);
    const auto trace = slurp(tdir / "trace.csv");
    REQUIRE(trace.rfind("# config-hash=", 0) == 0);
    REQUIRE(trace.find("fault_id,iter,bit") != std::string::npos);
}

TEST_CASE("cli: exit codes distinguish usage, data, and success") {
    const auto dir = fresh_dir("codes");
    REQUIRE(run_cli("--help") == 0);
    REQUIRE(run_cli("definitely-not-a-command") == 1);
    REQUIRE(run_cli("pairs --model " + (dir / "missing.model").string() + " --out " +
                    dir.string()) == 2);
    // flag with a bad value
    REQUIRE(run_cli("gen-model --kind nonsense --seed 1 --out " + (dir / "x.model").string()) == 1);
}

TEST_CASE("cli: config files feed defaults and flags win") {
    const auto dir = fresh_dir("config");
    const auto model_path = write_toy_model(dir);
    const auto edir = dir / "e";
    REQUIRE(run_cli("enumerate --model " + model_path.string() + " --group 0 --out " +
                    edir.string()) == 0);

    const fs::path cfg = dir / "run.ini";
    {
        std::ofstream out(cfg);
        out << "[dynamics]\n"
            << "model=" << model_path.string() << "\n"
            << "combos=" << (edir / "combos.csv").string() << "\n"
            << "trials=3\n"
            << "seed=17\n"
            << "max-legs=3\niters-per-leg=5\nwarmup-iters=5\ncap=20\n";
    }
    const auto d1 = dir / "cfgout";
    REQUIRE(run_cli("--config " + cfg.string() + " dynamics --out " + d1.string()) == 0);
    const auto toy = testutil::toy_lowweight_model();
    const auto filtered = csv::read_combos(edir / "combos.csv", toy, "toy", true);
    REQUIRE(data_rows(slurp(d1 / "trials.csv")) == filtered.size() * 3);

    // a command-line flag overrides the config file value
    const auto d2 = dir / "cfgout2";
    REQUIRE(run_cli("--config " + cfg.string() + " dynamics --trials 1 --out " + d2.string()) == 0);
    REQUIRE(data_rows(slurp(d2 / "trials.csv")) == filtered.size() * 1);
}
