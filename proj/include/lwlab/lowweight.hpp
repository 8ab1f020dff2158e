#pragma once

// Pair shared-column statistics, weight-four error construction from pairs of
// checks sharing n_s = 8 fault columns, canceled-check filters, structure
// tables, and weight-five neighborhood extensions.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

#include "lwlab/gf2.hpp"
#include "lwlab/model.hpp"
#include "lwlab/rng.hpp"

namespace lwlab {

struct CheckPair {
    std::uint32_t a = 0;
    std::uint32_t b = 0;  // a < b

    bool operator==(const CheckPair&) const = default;
    auto operator<=>(const CheckPair&) const = default;
};

// Symmetric n_s counts over a scope of checks.
class PairStats {
public:
    PairStats() = default;
    PairStats(std::vector<std::uint32_t> scope, std::vector<std::uint32_t> counts)
        : scope_(std::move(scope)), counts_(std::move(counts)) {}

    const std::vector<std::uint32_t>& scope() const { return scope_; }
    std::size_t scope_size() const { return scope_.size(); }

    std::size_t index_of(std::uint32_t check) const {
        const auto it = std::lower_bound(scope_.begin(), scope_.end(), check);
        if (it == scope_.end() || *it != check)
            throw std::invalid_argument("check " + std::to_string(check) + " not in scope");
        return static_cast<std::size_t>(it - scope_.begin());
    }

    std::uint32_t at_pos(std::size_t i, std::size_t j) const {
        return counts_[i * scope_.size() + j];
    }

    std::uint32_t n_s(std::uint32_t check_a, std::uint32_t check_b) const {
        if (check_a == check_b) throw std::invalid_argument("n_s undefined on the diagonal");
        return at_pos(index_of(check_a), index_of(check_b));
    }

    std::uint32_t max_n_s() const {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < scope_.size(); ++i)
            for (std::size_t j = i + 1; j < scope_.size(); ++j) m = std::max(m, at_pos(i, j));
        return m;
    }

private:
    std::vector<std::uint32_t> scope_;   // sorted distinct check ids
    std::vector<std::uint32_t> counts_;  // scope_size^2, symmetric, diagonal zero
};

// n_s(c_i, c_j) = number of fault columns nonzero at both checks, for all
// pairs within the scope.
inline PairStats shared_column_counts(const DecodingModel& model,
                                      std::span<const std::uint32_t> check_scope) {
    std::vector<std::uint32_t> scope(check_scope.begin(), check_scope.end());
    std::sort(scope.begin(), scope.end());
    if (std::adjacent_find(scope.begin(), scope.end()) != scope.end())
        throw std::invalid_argument("duplicate check in scope");
    for (std::uint32_t c : scope)
        if (c >= model.n_checks())
            throw std::invalid_argument("check " + std::to_string(c) + " out of range");

    const std::size_t k = scope.size();
    std::vector<std::uint32_t> counts(k * k, 0);
    std::vector<std::int64_t> pos(model.n_checks(), -1);
    for (std::size_t i = 0; i < k; ++i) pos[scope[i]] = static_cast<std::int64_t>(i);

    std::vector<std::uint32_t> hit;
    for (std::uint32_t j = 0; j < model.n_faults(); ++j) {
        hit.clear();
        for (std::uint32_t r : model.h().col(j))
            if (pos[r] >= 0) hit.push_back(static_cast<std::uint32_t>(pos[r]));
        for (std::size_t x = 0; x < hit.size(); ++x)
            for (std::size_t y = x + 1; y < hit.size(); ++y) {
                ++counts[hit[x] * k + hit[y]];
                ++counts[hit[y] * k + hit[x]];
            }
    }
    return PairStats(std::move(scope), std::move(counts));
}

// Frequency of n_s(check, c_i) over the peers c_i != check in the scope;
// index v holds the number of peers with n_s == v.
inline std::vector<std::uint64_t> shared_count_frequency(const PairStats& stats,
                                                         std::uint32_t check) {
    const std::size_t i = stats.index_of(check);
    std::vector<std::uint64_t> freq;
    for (std::size_t j = 0; j < stats.scope_size(); ++j) {
        if (j == i) continue;
        const std::uint32_t v = stats.at_pos(i, j);
        if (freq.size() <= v) freq.resize(v + 1, 0);
        ++freq[v];
    }
    return freq;
}

// All check pairs within a cycle group attaining the given shared-column
// count (the maximal n_s = 8 for the circuit-level matrices of interest).
inline std::vector<CheckPair> max_shared_pairs(const DecodingModel& model, std::uint32_t group,
                                               std::uint32_t n_s_required = 8) {
    const auto rows = model.group_rows(group);
    const PairStats stats = shared_column_counts(model, rows);
    std::vector<CheckPair> pairs;
    for (std::size_t i = 0; i < stats.scope_size(); ++i)
        for (std::size_t j = i + 1; j < stats.scope_size(); ++j)
            if (stats.at_pos(i, j) == n_s_required)
                pairs.push_back({stats.scope()[i], stats.scope()[j]});
    return pairs;
}

// One half of a weight-four construction: a check pair plus two of its shared
// columns, with the canceled-check count of that column pair.
struct PairChoice {
    CheckPair checks;
    std::array<std::uint32_t, 2> cols{};  // ascending
    std::uint32_t n_c = 0;

    auto key() const { return std::tuple(cols[0], cols[1], checks.a, checks.b); }
    bool operator==(const PairChoice&) const = default;
};

struct Decomposition {
    PairChoice first, second;  // ordered by key()

    auto key() const { return std::tuple(first.key(), second.key()); }
    bool operator==(const Decomposition&) const = default;
};

inline Decomposition make_decomposition(PairChoice x, PairChoice y) {
    if (y.key() < x.key()) std::swap(x, y);
    return Decomposition{x, y};
}

struct ErrorCombo {
    std::vector<std::uint32_t> fault_ids;  // sorted distinct column indices
    Syndrome syndrome;
    ComboMetrics metrics;
    // every distinct pair-of-pairs construction that produced this fault set
    std::vector<Decomposition> decompositions;

    // stable identifier derived from the fault set only
    std::uint64_t id() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint32_t f : fault_ids) h = hash_mix(h, f + 1);
        return h;
    }
};

inline ErrorCombo make_combo(const DecodingModel& model, std::vector<std::uint32_t> fault_ids) {
    std::sort(fault_ids.begin(), fault_ids.end());
    ErrorCombo c;
    c.syndrome = xor_columns(model.h(), fault_ids);
    c.metrics = canceled_checks(model.h(), fault_ids);
    c.fault_ids = std::move(fault_ids);
    return c;
}

namespace detail {

inline std::vector<std::uint32_t> shared_cols_of_pair(
    const std::vector<std::vector<std::uint32_t>>& row_adj, const CheckPair& p) {
    std::vector<std::uint32_t> out;
    std::set_intersection(row_adj[p.a].begin(), row_adj[p.a].end(), row_adj[p.b].begin(),
                          row_adj[p.b].end(), std::back_inserter(out));
    return out;
}

inline std::vector<PairChoice> column_pair_choices(const DecodingModel& model, const CheckPair& p,
                                                   std::span<const std::uint32_t> shared) {
    std::vector<PairChoice> out;
    out.reserve(shared.size() * (shared.size() - 1) / 2);
    for (std::size_t x = 0; x < shared.size(); ++x)
        for (std::size_t y = x + 1; y < shared.size(); ++y) {
            PairChoice pc;
            pc.checks = p;
            pc.cols = {shared[x], shared[y]};
            const std::array<std::uint32_t, 2> ids = pc.cols;
            pc.n_c = canceled_checks(model.h(), ids).n_c;
            out.push_back(pc);
        }
    return out;
}

inline void insert_decomposition(std::vector<Decomposition>& decomps, const Decomposition& d) {
    const auto it = std::lower_bound(
        decomps.begin(), decomps.end(), d,
        [](const Decomposition& u, const Decomposition& v) { return u.key() < v.key(); });
    if (it == decomps.end() || !(*it == d)) decomps.insert(it, d);
}

}  // namespace detail

// Merge combo lists, deduplicating on fault_ids and unioning decompositions.
// Output is sorted by fault_ids, so the result is independent of input order.
inline std::vector<ErrorCombo> dedup_merge(std::vector<ErrorCombo> combos) {
    std::sort(combos.begin(), combos.end(),
              [](const ErrorCombo& a, const ErrorCombo& b) { return a.fault_ids < b.fault_ids; });
    std::vector<ErrorCombo> out;
    for (auto& c : combos) {
        if (!out.empty() && out.back().fault_ids == c.fault_ids) {
            for (const auto& d : c.decompositions)
                detail::insert_decomposition(out.back().decompositions, d);
        } else {
            std::sort(c.decompositions.begin(), c.decompositions.end(),
                      [](const Decomposition& u, const Decomposition& v) { return u.key() < v.key(); });
            out.push_back(std::move(c));
        }
    }
    return out;
}

// Weight-four errors anchored at p0: two of p0's eight shared columns plus
// two shared columns of every other n_s = 8 pair. Constructions collapsing to
// fewer than four distinct columns are dropped; output is deduplicated on the
// fault set and sorted.
inline std::vector<ErrorCombo> enumerate_weight4(const DecodingModel& model,
                                                 const CheckPair& anchor_pair_p0,
                                                 std::span<const CheckPair> all_pairs) {
    const auto row_adj = model.h().row_adjacency();
    const auto shared0 = detail::shared_cols_of_pair(row_adj, anchor_pair_p0);
    if (shared0.size() != 8)
        throw std::invalid_argument("anchor pair does not share exactly 8 columns (n_s=" +
                                    std::to_string(shared0.size()) + ")");

    std::vector<CheckPair> others(all_pairs.begin(), all_pairs.end());
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());

    const auto choices0 = detail::column_pair_choices(model, anchor_pair_p0, shared0);

    std::vector<ErrorCombo> raw;
    std::vector<std::uint32_t> ids;
    for (const CheckPair& p1 : others) {
        if (p1 == anchor_pair_p0) continue;
        const auto shared1 = detail::shared_cols_of_pair(row_adj, p1);
        if (shared1.size() != 8)
            throw std::invalid_argument("pair (" + std::to_string(p1.a) + "," +
                                        std::to_string(p1.b) + ") does not share exactly 8 columns");
        const auto choices1 = detail::column_pair_choices(model, p1, shared1);
        for (const auto& c0 : choices0) {
            for (const auto& c1 : choices1) {
                ids = {c0.cols[0], c0.cols[1], c1.cols[0], c1.cols[1]};
                std::sort(ids.begin(), ids.end());
                ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
                if (ids.size() < 4) continue;  // collapsed constructions are ignored
                ErrorCombo combo = make_combo(model, ids);
                combo.decompositions.push_back(make_decomposition(c0, c1));
                raw.push_back(std::move(combo));
            }
        }
    }
    return dedup_merge(std::move(raw));
}

// Full sweep: anchors every pair in turn and merges. Anchors are processed in
// waves, each wave parallel over its anchors and folded into the accumulated
// result, so peak memory stays near the deduplicated size. The canonical
// merge makes the result independent of thread count and wave layout.
inline std::vector<ErrorCombo> enumerate_weight4_all(const DecodingModel& model,
                                                     std::span<const CheckPair> pairs,
                                                     unsigned n_threads = 1) {
    std::vector<CheckPair> anchors(pairs.begin(), pairs.end());
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
    if (n_threads == 0) n_threads = 1;

    std::vector<ErrorCombo> merged;
    const std::size_t wave = std::max<std::size_t>(n_threads, 4);
    for (std::size_t base = 0; base < anchors.size(); base += wave) {
        const std::size_t count = std::min(wave, anchors.size() - base);
        std::vector<std::vector<ErrorCombo>> parts(count);
        if (n_threads <= 1) {
            for (std::size_t i = 0; i < count; ++i)
                parts[i] = enumerate_weight4(model, anchors[base + i], anchors);
        } else {
            std::atomic<std::size_t> next{0};
            auto work = [&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count) break;
                    parts[i] = enumerate_weight4(model, anchors[base + i], anchors);
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }
        for (auto& p : parts)
            for (auto& c : p) merged.push_back(std::move(c));
        merged = dedup_merge(std::move(merged));
    }
    return merged;
}

// Condition rules on the canceled-check counts: a rule demands the per-pair
// count on both halves of a decomposition and a set of admissible total
// counts. Attainable values on the weight-four populations lie in [0, 10];
// rules outside that range are legal queries that simply match nothing.
struct FilterRule {
    std::uint32_t pair_nc = 2;
    std::vector<std::uint32_t> total_nc = {8};
};

struct FilterSpec {
    FilterRule primary{};
    std::vector<FilterRule> relaxed{};
};

// Keep combos admitting a decomposition that satisfies the primary rule or
// any relaxed rule; the kept combo's decomposition list is restricted to the
// satisfying constructions.
inline std::vector<ErrorCombo> filter_hard_errors(std::span<const ErrorCombo> combos,
                                                  const FilterSpec& spec) {
    std::vector<const FilterRule*> rules;
    rules.push_back(&spec.primary);
    for (const auto& r : spec.relaxed) rules.push_back(&r);

    std::vector<ErrorCombo> out;
    for (const ErrorCombo& c : combos) {
        std::vector<Decomposition> kept;
        for (const FilterRule* rule : rules) {
            if (std::find(rule->total_nc.begin(), rule->total_nc.end(), c.metrics.n_c) ==
                rule->total_nc.end())
                continue;
            for (const Decomposition& d : c.decompositions)
                if (d.first.n_c == rule->pair_nc && d.second.n_c == rule->pair_nc)
                    detail::insert_decomposition(kept, d);
        }
        if (!kept.empty()) {
            ErrorCombo copy = c;
            copy.decompositions = std::move(kept);
            out.push_back(std::move(copy));
        }
    }
    return out;
}

// Distinct column pairs appearing as a half of any kept decomposition.
inline std::size_t distinct_contributing_pairs(std::span<const ErrorCombo> combos) {
    std::vector<std::array<std::uint32_t, 2>> pairs;
    for (const auto& c : combos)
        for (const auto& d : c.decompositions) {
            pairs.push_back(d.first.cols);
            pairs.push_back(d.second.cols);
        }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs.size();
}

// Total distinct (fault set, pair-of-pairs) constructions across the list.
inline std::size_t count_decompositions(std::span<const ErrorCombo> combos) {
    std::size_t n = 0;
    for (const auto& c : combos) n += c.decompositions.size();
    return n;
}

// Incidence of the canceled checks over the four columns, in the layout of
// the structure table: within-pair rows first, cross rows after.
struct StructureRow {
    std::uint32_t check = 0;
    std::array<bool, 4> in_col{};
};

struct StructureTable {
    std::array<std::uint32_t, 4> cols{};
    std::vector<StructureRow> rows;
};

inline StructureTable combo_structure(const DecodingModel& model, const ErrorCombo& combo) {
    if (combo.fault_ids.size() != 4)
        throw std::invalid_argument("combo_structure expects a weight-four combo");
    StructureTable table;
    if (!combo.decompositions.empty()) {
        const auto& d = combo.decompositions.front();
        table.cols = {d.first.cols[0], d.first.cols[1], d.second.cols[0], d.second.cols[1]};
    } else {
        table.cols = {combo.fault_ids[0], combo.fault_ids[1], combo.fault_ids[2],
                      combo.fault_ids[3]};
    }

    std::map<std::uint32_t, std::array<bool, 4>> incidence;
    for (std::size_t k = 0; k < 4; ++k)
        for (std::uint32_t r : model.h().col(table.cols[k])) incidence[r][k] = true;

    auto mask_of = [](const std::array<bool, 4>& f) {
        unsigned m = 0;
        for (std::size_t k = 0; k < 4; ++k)
            if (f[k]) m |= 1u << k;
        return m;
    };
    auto rank_of = [&](unsigned m) {
        if (m == 0b0011u) return 0;  // internal to the first pair
        if (m == 0b1100u) return 1;  // internal to the second pair
        return 2;                    // cross-shared
    };

    for (const auto& [check, flags] : incidence) {
        const int count = static_cast<int>(flags[0]) + flags[1] + flags[2] + flags[3];
        if (count > 0 && count % 2 == 0) table.rows.push_back({check, flags});
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [&](const StructureRow& x, const StructureRow& y) {
                  const unsigned mx = mask_of(x.in_col), my = mask_of(y.in_col);
                  return std::tuple(rank_of(mx), mx, x.check) <
                         std::tuple(rank_of(my), my, y.check);
              });
    return table;
}

// Weight-five extensions: add one new column whose checks intersect the
// checks of the original four faults. Candidates are taken in ascending
// column order, at most `limit` of them.
inline std::vector<ErrorCombo> extend_weight5(const DecodingModel& model, const ErrorCombo& combo,
                                              std::size_t limit) {
    if (combo.fault_ids.size() != 4)
        throw std::invalid_argument("extend_weight5 expects a weight-four combo");
    BitVec touched(model.n_checks());
    for (std::uint32_t j : combo.fault_ids)
        for (std::uint32_t r : model.h().col(j)) touched.set(r);

    std::vector<ErrorCombo> out;
    for (std::uint32_t j = 0; j < model.n_faults() && out.size() < limit; ++j) {
        if (std::binary_search(combo.fault_ids.begin(), combo.fault_ids.end(), j)) continue;
        bool intersects = false;
        for (std::uint32_t r : model.h().col(j))
            if (touched.test(r)) {
                intersects = true;
                break;
            }
        if (!intersects) continue;
        std::vector<std::uint32_t> ids = combo.fault_ids;
        ids.push_back(j);
        ErrorCombo ext = make_combo(model, std::move(ids));
        ext.decompositions = combo.decompositions;
        out.push_back(std::move(ext));
    }
    return out;
}

}  // namespace lwlab
