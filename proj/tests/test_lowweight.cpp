#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "lwlab/lowweight.hpp"
#include "test_util.hpp"

using namespace lwlab;
using namespace testutil;

TEST_CASE("shared_column_counts on the worked example") {
    SparseBitMatrix h(3, 3, {{0, 1}, {0, 1}, {0, 2}});
    const auto model = wrap_model(std::move(h));
    const auto stats = shared_column_counts(model, model.all_rows());
    REQUIRE(stats.n_s(0, 1) == 2);
    REQUIRE(stats.n_s(0, 2) == 1);
    REQUIRE(stats.n_s(1, 2) == 0);
    REQUIRE(stats.max_n_s() == 2);
}

TEST_CASE("shared_column_counts: empty scope gives empty stats") {
    const auto model = toy_lowweight_model();
    const auto stats = shared_column_counts(model, std::vector<std::uint32_t>{});
    REQUIRE(stats.scope_size() == 0);
}

TEST_CASE("shared_column_counts matches the nested-loop oracle on random models") {
    std::mt19937 rng(21);
    for (int rep = 0; rep < 30; ++rep) {
        const auto model = random_model(rng, 4 + rng() % 16, 10 + rng() % 40, 0, 5);
        const auto d = to_dense(model.h());
        const auto stats = shared_column_counts(model, model.all_rows());
        for (std::uint32_t a = 0; a < model.n_checks(); ++a)
            for (std::uint32_t b = a + 1; b < model.n_checks(); ++b) {
                std::uint32_t shared = 0;
                for (std::size_t j = 0; j < d.cols; ++j) shared += d.at(a, j) & d.at(b, j);
                REQUIRE(stats.n_s(a, b) == shared);
            }
    }
}

TEST_CASE("shared_count_frequency basics") {
    const auto disjoint = toy_disjoint_pairs_model();
    const auto stats = shared_column_counts(disjoint, disjoint.all_rows());
    const auto freq = shared_count_frequency(stats, 0);
    // peers: check 1 at n_s=8; checks 2,3 at n_s=0
    REQUIRE(freq.size() == 9);
    REQUIRE(freq[0] == 2);
    REQUIRE(freq[8] == 1);

    // a model where one check shares nothing: all peer mass at n_s = 0
    SparseBitMatrix h(3, 2, {{0}, {1, 2}});
    const auto lonely = wrap_model(std::move(h));
    const auto s2 = shared_column_counts(lonely, lonely.all_rows());
    const auto f2 = shared_count_frequency(s2, 0);
    REQUIRE(f2 == std::vector<std::uint64_t>{2});
}

TEST_CASE("max_shared_pairs finds all and only the n_s = 8 pairs") {
    // all columns have weight 1: no pair shares anything
    SparseBitMatrix h(4, 6, {{0}, {1}, {2}, {3}, {0}, {2}});
    const auto singles = wrap_model(std::move(h));
    REQUIRE(max_shared_pairs(singles, 0).empty());

    const auto toy = toy_lowweight_model();
    const auto pairs = max_shared_pairs(toy, 0);
    REQUIRE(pairs == std::vector<CheckPair>{{0, 1}, {2, 3}, {4, 5}});

    // oracle re-derivation on random models, sweeping the threshold
    std::mt19937 rng(22);
    for (int rep = 0; rep < 20; ++rep) {
        const auto model = random_model(rng, 6 + rng() % 10, 20 + rng() % 30, 1, 5);
        const auto d = to_dense(model.h());
        for (std::uint32_t req = 1; req <= 4; ++req)
            REQUIRE(max_shared_pairs(model, 0, req) == oracle_max_pairs(d, req));
    }
}

TEST_CASE("enumerate_weight4 rejects anchors without exactly 8 shared columns") {
    const auto toy = toy_lowweight_model();
    const auto pairs = max_shared_pairs(toy, 0);
    REQUIRE_THROWS_AS(enumerate_weight4(toy, CheckPair{0, 2}, pairs), std::invalid_argument);

    // a partner pair that is not maximal is rejected too
    auto bad_pairs = pairs;
    bad_pairs.push_back(CheckPair{0, 2});
    REQUIRE_THROWS_AS(enumerate_weight4(toy, pairs[0], bad_pairs), std::invalid_argument);
}

TEST_CASE("enumerate_weight4 on disjoint pairs: every combo has pair n_c 2 and total 4") {
    const auto model = toy_disjoint_pairs_model();
    const auto pairs = max_shared_pairs(model, 0);
    REQUIRE(pairs.size() == 2);
    const auto combos = enumerate_weight4(model, pairs[0], pairs);
    REQUIRE(combos.size() == 28 * 28);
    for (const auto& c : combos) {
        REQUIRE(c.fault_ids.size() == 4);
        REQUIRE(c.decompositions.size() == 1);
        REQUIRE(c.decompositions[0].first.n_c == 2);
        REQUIRE(c.decompositions[0].second.n_c == 2);
        REQUIRE(c.metrics.n_c == 4);
        REQUIRE(c.metrics.w == 0);  // everything cancels in this toy
    }
}

TEST_CASE("enumeration is independent of the pair iteration order") {
    const auto toy = toy_lowweight_model();
    auto pairs = max_shared_pairs(toy, 0);
    const auto a = enumerate_weight4(toy, pairs[0], pairs);
    std::reverse(pairs.begin(), pairs.end());
    const auto b = enumerate_weight4(toy, pairs[2], pairs);  // same anchor (0,1) after reverse
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].fault_ids == b[i].fault_ids);
        REQUIRE(a[i].decompositions == b[i].decompositions);
    }
}

TEST_CASE("enumerate_weight4_all equals the exhaustive 4-subset oracle on toys") {
    for (const auto& model : {toy_disjoint_pairs_model(), toy_lowweight_model()}) {
        const auto pairs = max_shared_pairs(model, 0);
        const auto got = enumerate_weight4_all(model, pairs, 2);
        const auto want = oracle_enumerate_weight4(model);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i].fault_ids == want[i].fault_ids);
            REQUIRE(got[i].syndrome == want[i].syndrome);
            REQUIRE(got[i].metrics == want[i].metrics);
            REQUIRE(got[i].decompositions == want[i].decompositions);
        }
    }
}

TEST_CASE("filter_hard_errors keeps exactly the 2+2 -> total rule matches") {
    const auto toy = toy_lowweight_model();
    const auto pairs = max_shared_pairs(toy, 0);
    const auto all = enumerate_weight4_all(toy, pairs, 2);
    const auto filtered = filter_hard_errors(all, FilterSpec{});

    REQUIRE(!filtered.empty());
    for (const auto& c : filtered) {
        REQUIRE(c.metrics.n_c == 8);
        REQUIRE(!c.decompositions.empty());
        for (const auto& d : c.decompositions) {
            REQUIRE(d.first.n_c == 2);
            REQUIRE(d.second.n_c == 2);
        }
        // recomputed metrics match the cached ones
        REQUIRE(canceled_checks(toy.h(), c.fault_ids) == c.metrics);
        REQUIRE(xor_columns(toy.h(), c.fault_ids) == c.syndrome);
    }

    // the engineered hard pattern is found: columns {0,1,8,9}
    const std::vector<std::uint32_t> hard = {0, 1, 8, 9};
    REQUIRE(std::any_of(filtered.begin(), filtered.end(),
                        [&](const ErrorCombo& c) { return c.fault_ids == hard; }));

    // filtered is a subset of all, deduplicated, and filtering is idempotent
    for (const auto& c : filtered)
        REQUIRE(std::any_of(all.begin(), all.end(),
                            [&](const ErrorCombo& a) { return a.fault_ids == c.fault_ids; }));
    for (std::size_t i = 1; i < filtered.size(); ++i)
        REQUIRE(filtered[i - 1].fault_ids < filtered[i].fault_ids);
    const auto twice = filter_hard_errors(filtered, FilterSpec{});
    REQUIRE(twice.size() == filtered.size());
}

TEST_CASE("impossible filters yield nothing; relaxed rules widen the set") {
    const auto toy = toy_lowweight_model();
    const auto pairs = max_shared_pairs(toy, 0);
    const auto all = enumerate_weight4_all(toy, pairs, 1);

    FilterSpec impossible;
    impossible.primary.total_nc = {10};
    impossible.primary.pair_nc = 5;
    REQUIRE(filter_hard_errors(all, impossible).empty());

    // beyond the attainable [0, 10] range: a legal query matching nothing
    FilterSpec spec11;
    spec11.primary.total_nc = {11};
    REQUIRE(filter_hard_errors(all, spec11).empty());

    FilterSpec relaxed;
    relaxed.relaxed.push_back({2, {6, 7}});
    const auto strict = filter_hard_errors(all, FilterSpec{});
    const auto wide = filter_hard_errors(all, relaxed);
    REQUIRE(wide.size() >= strict.size());
    for (const auto& c : wide) {
        const bool total_ok = c.metrics.n_c == 8 || c.metrics.n_c == 6 || c.metrics.n_c == 7;
        REQUIRE(total_ok);
    }
}

TEST_CASE("decomposition statistics count distinct pairs and constructions") {
    const auto model = toy_disjoint_pairs_model();
    const auto pairs = max_shared_pairs(model, 0);
    const auto all = enumerate_weight4_all(model, pairs, 1);
    // every construction here satisfies pair n_c = 2 but total is 4, so the
    // default filter drops everything
    REQUIRE(filter_hard_errors(all, FilterSpec{}).empty());
    FilterSpec spec4;
    spec4.primary.total_nc = {4};
    const auto kept = filter_hard_errors(all, spec4);
    REQUIRE(kept.size() == 784);
    REQUIRE(count_decompositions(kept) == 784);
    REQUIRE(distinct_contributing_pairs(kept) == 56);  // 28 column pairs per side
}

TEST_CASE("shared columns of an n_s = 8 pair cancel both checks in any XOR of two") {
    const auto toy = toy_lowweight_model();
    const auto row_adj = toy.h().row_adjacency();
    for (const auto& p : max_shared_pairs(toy, 0)) {
        std::vector<std::uint32_t> shared;
        std::set_intersection(row_adj[p.a].begin(), row_adj[p.a].end(), row_adj[p.b].begin(),
                              row_adj[p.b].end(), std::back_inserter(shared));
        REQUIRE(shared.size() == 8);
        for (std::size_t x = 0; x < shared.size(); ++x)
            for (std::size_t y = x + 1; y < shared.size(); ++y) {
                const auto s =
                    xor_columns(toy.h(), std::vector<std::uint32_t>{shared[x], shared[y]});
                REQUIRE(!s.test(p.a));
                REQUIRE(!s.test(p.b));
            }
    }
}

TEST_CASE("combo_structure lays out within-pair rows before cross rows") {
    const auto toy = toy_lowweight_model();
    const auto pairs = max_shared_pairs(toy, 0);
    const auto all = enumerate_weight4_all(toy, pairs, 1);
    const auto filtered = filter_hard_errors(all, FilterSpec{});

    const auto hard = std::find_if(filtered.begin(), filtered.end(), [](const ErrorCombo& c) {
        return c.fault_ids == std::vector<std::uint32_t>{0, 1, 8, 9};
    });
    REQUIRE(hard != filtered.end());
    const auto table = combo_structure(toy, *hard);
    REQUIRE(table.rows.size() == 8);
    // first two rows: canceled within the first pair; next two: within the second
    for (int i = 0; i < 2; ++i) {
        REQUIRE(table.rows[i].in_col == std::array<bool, 4>{true, true, false, false});
        REQUIRE(table.rows[2 + i].in_col == std::array<bool, 4>{false, false, true, true});
    }
    for (int i = 4; i < 8; ++i) {
        int cnt = 0;
        for (bool b : table.rows[i].in_col) cnt += b ? 1 : 0;
        REQUIRE(cnt == 2);
        // cross rows touch one column of each pair
        REQUIRE((table.rows[i].in_col[0] || table.rows[i].in_col[1]));
        REQUIRE((table.rows[i].in_col[2] || table.rows[i].in_col[3]));
    }

    // incidence agrees with a dense row scan on arbitrary combos
    std::mt19937 rng(23);
    const auto d = to_dense(toy.h());
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<std::uint32_t> ids;
        while (ids.size() < 4) {
            const auto j = rng() % toy.n_faults();
            if (std::find(ids.begin(), ids.end(), j) == ids.end()) ids.push_back(j);
        }
        const auto combo = make_combo(toy, ids);
        const auto t = combo_structure(toy, combo);
        std::size_t canceled = 0;
        for (std::uint32_t r = 0; r < toy.n_checks(); ++r) {
            int cnt = 0;
            for (auto c : t.cols) cnt += d.at(r, c);
            if (cnt > 0 && cnt % 2 == 0) ++canceled;
        }
        REQUIRE(t.rows.size() == canceled);
        for (const auto& row : t.rows)
            for (int k = 0; k < 4; ++k)
                REQUIRE(row.in_col[k] == static_cast<bool>(d.at(row.check, t.cols[k])));
    }
}

TEST_CASE("extend_weight5 respects the neighborhood and the limit") {
    // no other column touches the combo's checks: no extensions
    SparseBitMatrix h(4, 6, {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {2}, {3}});
    const auto isolated = wrap_model(std::move(h));
    const auto combo = make_combo(isolated, {0, 1, 2, 3});
    REQUIRE(extend_weight5(isolated, combo, 100).empty());
    REQUIRE(extend_weight5(isolated, combo, 0).empty());

    const auto toy = toy_lowweight_model();
    const auto pairs = max_shared_pairs(toy, 0);
    const auto filtered = filter_hard_errors(enumerate_weight4_all(toy, pairs, 1), FilterSpec{});
    const auto& base = filtered.front();
    const auto exts = extend_weight5(toy, base, 1000);

    // full-column scan oracle for the candidate set
    std::vector<std::uint32_t> expect;
    const auto d = to_dense(toy.h());
    for (std::uint32_t j = 0; j < toy.n_faults(); ++j) {
        if (std::binary_search(base.fault_ids.begin(), base.fault_ids.end(), j)) continue;
        bool touches = false;
        for (std::uint32_t b : base.fault_ids)
            for (std::uint32_t r = 0; r < toy.n_checks(); ++r)
                if (d.at(r, j) && d.at(r, b)) touches = true;
        if (touches) expect.push_back(j);
    }
    REQUIRE(exts.size() == expect.size());
    for (std::size_t i = 0; i < exts.size(); ++i) {
        REQUIRE(exts[i].fault_ids.size() == 5);
        std::vector<std::uint32_t> added;
        std::set_difference(exts[i].fault_ids.begin(), exts[i].fault_ids.end(),
                            base.fault_ids.begin(), base.fault_ids.end(),
                            std::back_inserter(added));
        REQUIRE(added == std::vector<std::uint32_t>{expect[i]});
        REQUIRE(exts[i].metrics == canceled_checks(toy.h(), exts[i].fault_ids));
        REQUIRE(exts[i].syndrome == xor_columns(toy.h(), exts[i].fault_ids));
    }

    const auto limited = extend_weight5(toy, base, 3);
    REQUIRE(limited.size() == std::min<std::size_t>(3, expect.size()));
}

TEST_CASE("combo ids are stable functions of the fault set") {
    const auto toy = toy_lowweight_model();
    const auto a = make_combo(toy, {0, 1, 8, 9});
    const auto b = make_combo(toy, {9, 8, 1, 0});
    REQUIRE(a.id() == b.id());
    const auto c = make_combo(toy, {0, 1, 8, 10});
    REQUIRE(a.id() != c.id());
}
