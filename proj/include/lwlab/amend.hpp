#pragma once

// Decoding-matrix amendment: append selected error syndromes as composite
// columns (with matching composite observable columns) and sweep the added
// fraction, measuring mean iterations and logical error probability.

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "lwlab/dynlab.hpp"
#include "lwlab/lowweight.hpp"
#include "lwlab/model.hpp"
#include "lwlab/rng.hpp"

namespace lwlab {

struct AddedColumn {
    std::vector<std::uint32_t> check_rows;
    std::vector<std::uint32_t> obs_rows;
    double prior = 0.0;
    std::uint64_t source_combo = 0;
};

struct AmendedModel {
    DecodingModel model;           // base columns first, added columns after
    std::uint32_t n_base_cols = 0;
    std::vector<AddedColumn> added;
    std::uint32_t collisions = 0;  // added columns identical to a pre-existing H column
};

// Appends round(fraction * |combos|) combos chosen uniformly without
// replacement. Each appended H column carries the combo syndrome; the matching
// L column is the XOR of the constituent faults' observable columns, so
// selecting the composite column is logically equivalent to selecting the
// faults. Duplicate columns are appended verbatim and counted as collisions.
inline AmendedModel amend_model(const DecodingModel& model, std::span<const ErrorCombo> combos,
                                double subset_fraction, std::optional<double> prior_value,
                                std::uint64_t seed) {
    if (!(subset_fraction >= 0.0 && subset_fraction <= 1.0))
        throw std::invalid_argument("amend_model: fraction outside [0, 1]");
    if (prior_value && !(*prior_value > 0.0 && *prior_value <= 0.5))
        throw std::invalid_argument("amend_model: prior outside (0, 0.5]");

    const std::size_t k = static_cast<std::size_t>(
        std::llround(subset_fraction * static_cast<double>(combos.size())));
    std::vector<std::size_t> index(combos.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    SplitRng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(index.size() - i));
        std::swap(index[i], index[j]);
    }
    index.resize(k);
    std::sort(index.begin(), index.end());

    auto h_cols = model.h().columns();
    auto l_cols = model.l().columns();
    std::vector<double> priors = model.priors();

    std::set<std::vector<std::uint32_t>> existing(h_cols.begin(), h_cols.end());

    AmendedModel out;
    out.n_base_cols = model.n_faults();
    for (std::size_t i : index) {
        const ErrorCombo& combo = combos[i];
        AddedColumn add;
        add.check_rows = combo.syndrome.nonzero_indices();
        add.obs_rows = xor_columns(model.l(), combo.fault_ids).nonzero_indices();
        add.source_combo = combo.id();
        if (prior_value) {
            add.prior = *prior_value;
        } else {
            double p = 1.0;
            for (std::uint32_t f : combo.fault_ids) p *= model.priors()[f];
            add.prior = std::min(0.5, std::max(p, 1e-300));
        }
        if (!existing.insert(add.check_rows).second) ++out.collisions;
        h_cols.push_back(add.check_rows);
        l_cols.push_back(add.obs_rows);
        priors.push_back(add.prior);
        out.added.push_back(std::move(add));
    }

    const auto n_cols = static_cast<std::uint32_t>(h_cols.size());
    ModelMeta meta = model.meta();
    meta.name += "+amended";
    out.model = DecodingModel(SparseBitMatrix(model.n_checks(), n_cols, std::move(h_cols)),
                              std::move(priors),
                              SparseBitMatrix(model.n_observables(), n_cols, std::move(l_cols)),
                              model.n_groups(), std::move(meta));
    return out;
}

struct SweepPoint {
    double fraction = 0.0;
    DecoderKind decoder = DecoderKind::relay;
    double mean_iterations = 0.0;
    double logical_error_prob = 0.0;
    std::uint64_t n_trials = 0;
};

// Per fraction: amend (selection seeded by the fraction's position), then run
// the full combo population against the amended model. The trial seed stream
// is shared across fractions, so a zero-addition point reproduces the
// baseline bit for bit.
inline std::vector<SweepPoint> sweep_fraction(const DecodingModel& model,
                                              std::span<const ErrorCombo> combos,
                                              std::span<const double> fractions,
                                              const RelayConfig& relay_cfg, std::uint32_t trials,
                                              std::uint64_t base_seed, DecoderKind decoder_kind,
                                              unsigned n_threads = 0) {
    std::vector<SweepPoint> curve;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const AmendedModel amended = amend_model(model, combos, fractions[i], std::nullopt,
                                                 hash_mix(base_seed, 0x616D656EULL, i));
        const auto records =
            run_trials(amended.model, combos, relay_cfg, trials, base_seed, decoder_kind, n_threads);
        SweepPoint pt;
        pt.fraction = fractions[i];
        pt.decoder = decoder_kind;
        pt.n_trials = records.size();
        pt.mean_iterations = mean_iterations(records);
        std::uint64_t flips = 0;
        for (const auto& r : records) flips += r.logical_error ? 1 : 0;
        pt.logical_error_prob =
            records.empty() ? 0.0 : static_cast<double>(flips) / static_cast<double>(records.size());
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace lwlab
