#pragma once

// Stochastic decoding experiment harness: seeded trial batches, iteration
// histograms, empirical survival curves, censored exponential rate fits,
// weight-five spread tables, and hard-decision trace export.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lwlab/decoder.hpp"
#include "lwlab/lowweight.hpp"
#include "lwlab/model.hpp"
#include "lwlab/rng.hpp"

namespace lwlab {

enum class DecoderKind { relay, bp_osd };

struct TrialRecord {
    std::uint64_t combo_id = 0;
    std::uint32_t trial = 0;
    std::uint64_t trial_seed = 0;
    std::uint32_t iterations = 0;
    bool converged = false;
    bool logical_error = false;
    DecoderKind decoder = DecoderKind::relay;
};

// One decode per (combo, trial index). Trial seeds are hash(base_seed,
// combo id, trial), so the record set is a pure function of the inputs and
// identical under any thread count. Trace recording is always off here.
inline std::vector<TrialRecord> run_trials(const DecodingModel& model,
                                           std::span<const ErrorCombo> combos,
                                           const RelayConfig& relay_cfg,
                                           std::uint32_t trials_per_combo,
                                           std::uint64_t base_seed,
                                           DecoderKind kind = DecoderKind::relay,
                                           unsigned n_threads = 0) {
    relay_cfg.validate();
    std::vector<TrialRecord> records(combos.size() * trials_per_combo);
    if (records.empty()) return records;
    if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        MinSumEngine eng(model, relay_cfg.min_sum_scale);
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= combos.size()) break;
            const ErrorCombo& combo = combos[i];
            const BitVec e_true = BitVec::from_indices(model.n_faults(), combo.fault_ids);
            const std::uint64_t combo_id = combo.id();
            for (std::uint32_t t = 0; t < trials_per_combo; ++t) {
                RelayConfig cfg = relay_cfg;
                cfg.seed = hash_mix(base_seed, combo_id, t);
                cfg.record_trace = false;
                DecodeResult res;
                if (kind == DecoderKind::relay)
                    res = relay_decode(eng, model, combo.syndrome, cfg);
                else
                    res = bp_osd_decode(eng, model, combo.syndrome, cfg.global_iteration_cap,
                                        cfg.min_sum_scale);
                TrialRecord rec;
                rec.combo_id = combo_id;
                rec.trial = t;
                rec.trial_seed = cfg.seed;
                rec.iterations = res.iterations;
                rec.converged = res.converged;
                rec.logical_error = !logical_flip(model, e_true, res.estimate).none();
                rec.decoder = kind;
                records[i * trials_per_combo + t] = rec;
            }
        }
    };
    if (n_threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return records;
}

struct Histogram {
    std::uint32_t bin_width = 1;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    std::uint64_t bin_lo(std::size_t i) const { return static_cast<std::uint64_t>(i) * bin_width; }
    std::uint64_t bin_hi(std::size_t i) const { return bin_lo(i) + bin_width; }

    std::vector<double> density() const {
        std::vector<double> d(counts.size(), 0.0);
        if (total == 0) return d;
        for (std::size_t i = 0; i < counts.size(); ++i)
            d[i] = static_cast<double>(counts[i]) /
                   (static_cast<double>(total) * static_cast<double>(bin_width));
        return d;
    }
};

inline Histogram iteration_histogram(std::span<const TrialRecord> records,
                                     std::uint32_t bin_width) {
    if (bin_width == 0) throw std::invalid_argument("iteration_histogram: bin_width must be >= 1");
    Histogram h;
    h.bin_width = bin_width;
    for (const auto& r : records) {
        const std::size_t bin = r.iterations / bin_width;
        if (h.counts.size() <= bin) h.counts.resize(bin + 1, 0);
        ++h.counts[bin];
        ++h.total;
    }
    return h;
}

// Stratified by the syndrome weight w(s) of each record's combo.
inline std::map<std::uint32_t, Histogram> iteration_histograms_by_weight(
    std::span<const TrialRecord> records, std::span<const ErrorCombo> combos,
    std::uint32_t bin_width) {
    std::map<std::uint64_t, std::uint32_t> weight_of;
    for (const auto& c : combos) weight_of[c.id()] = c.metrics.w;
    std::map<std::uint32_t, std::vector<TrialRecord>> strata;
    for (const auto& r : records) {
        const auto it = weight_of.find(r.combo_id);
        if (it == weight_of.end())
            throw std::invalid_argument("iteration_histograms_by_weight: unknown combo id");
        strata[it->second].push_back(r);
    }
    std::map<std::uint32_t, Histogram> out;
    for (const auto& [w, recs] : strata) out[w] = iteration_histogram(recs, bin_width);
    return out;
}

struct SurvivalCurve {
    std::vector<std::uint32_t> edges;  // distinct iteration counts, ascending
    std::vector<double> survival;      // survival[i] = P(N > edges[i])
};

inline SurvivalCurve survival_curve(std::span<const TrialRecord> records) {
    if (records.empty()) throw std::invalid_argument("survival_curve: no records");
    std::vector<std::uint32_t> values;
    values.reserve(records.size());
    for (const auto& r : records) values.push_back(r.iterations);
    std::sort(values.begin(), values.end());

    SurvivalCurve c;
    const double n = static_cast<double>(values.size());
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        c.edges.push_back(values[i]);
        c.survival.push_back(static_cast<double>(values.size() - j) / n);
        i = j;
    }
    return c;
}

struct RateFit {
    double rate = 0.0;
    double stderr_ = 0.0;
    std::size_t n_uncensored = 0;
    std::size_t n_censored = 0;
};

// Censored MLE for an exponential escape rate: converged records contribute
// their iteration counts, non-converged records are right-censored at their
// recorded stopping time (the iteration cap for full runs).
inline RateFit fit_exponential_rate(std::span<const TrialRecord> records, std::uint32_t cap) {
    RateFit fit;
    double exposure = 0.0;
    for (const auto& r : records) {
        if (r.iterations > cap)
            throw std::invalid_argument("fit_exponential_rate: record exceeds cap");
        exposure += static_cast<double>(r.iterations);
        if (r.converged)
            ++fit.n_uncensored;
        else
            ++fit.n_censored;
    }
    if (fit.n_uncensored == 0)
        throw std::runtime_error("fit_exponential_rate: all records censored, no estimate");
    if (exposure <= 0.0)
        throw std::runtime_error("fit_exponential_rate: zero total exposure, no estimate");
    fit.rate = static_cast<double>(fit.n_uncensored) / exposure;
    fit.stderr_ = fit.rate / std::sqrt(static_cast<double>(fit.n_uncensored));
    return fit;
}

struct Weight5Spread {
    double base_mean = 0.0;  // mean BP iterations of the weight-four error itself
    struct Row {
        std::uint64_t combo_id = 0;
        std::uint32_t fifth_column = 0;
        double mean_iterations = 0.0;
    };
    std::vector<Row> rows;
    Histogram binned;  // rows binned by mean iterations (1,000-wide bins)
};

inline double mean_iterations(std::span<const TrialRecord> records) {
    if (records.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : records) s += static_cast<double>(r.iterations);
    return s / static_cast<double>(records.size());
}

inline Weight5Spread weight5_spread(const DecodingModel& model, const ErrorCombo& combo,
                                    const RelayConfig& relay_cfg, std::uint32_t trials,
                                    std::uint64_t base_seed, std::size_t limit,
                                    unsigned n_threads = 0) {
    if (combo.fault_ids.size() != 4)
        throw std::invalid_argument("weight5_spread expects a weight-four combo");
    Weight5Spread out;
    const ErrorCombo base[] = {combo};
    out.base_mean = mean_iterations(
        run_trials(model, base, relay_cfg, trials, base_seed, DecoderKind::relay, n_threads));

    const auto extensions = extend_weight5(model, combo, limit);
    const auto records =
        run_trials(model, extensions, relay_cfg, trials, base_seed, DecoderKind::relay, n_threads);

    out.binned.bin_width = 1000;
    for (std::size_t i = 0; i < extensions.size(); ++i) {
        const auto recs =
            std::span(records).subspan(i * trials, trials);
        Weight5Spread::Row row;
        row.combo_id = extensions[i].id();
        for (std::uint32_t f : extensions[i].fault_ids)
            if (!std::binary_search(combo.fault_ids.begin(), combo.fault_ids.end(), f))
                row.fifth_column = f;
        row.mean_iterations = mean_iterations(recs);
        out.rows.push_back(row);

        const std::size_t bin = static_cast<std::size_t>(row.mean_iterations) / out.binned.bin_width;
        if (out.binned.counts.size() <= bin) out.binned.counts.resize(bin + 1, 0);
        ++out.binned.counts[bin];
        ++out.binned.total;
    }
    return out;
}

struct TraceExport {
    std::vector<std::uint32_t> fault_ids;         // descending integrated brightness
    std::vector<std::uint32_t> leg_starts;
    std::uint32_t n_iterations = 0;
    std::vector<std::vector<std::uint8_t>> bits;  // [row][iteration]
};

// Order faults by total (integrated) hard-decision sum, ties by fault index,
// truncated to the top_k brightest rows.
inline TraceExport export_trace(const DecodeResult& result, std::size_t top_k) {
    if (!result.trace) throw std::invalid_argument("export_trace: result carries no trace");
    const IterationTrace& tr = *result.trace;
    TraceExport out;
    out.leg_starts = tr.leg_starts;
    out.n_iterations = static_cast<std::uint32_t>(tr.hard_decisions.size());
    if (out.n_iterations == 0) return out;

    std::vector<std::uint64_t> brightness(tr.n_faults, 0);
    for (const BitVec& h : tr.hard_decisions)
        for (std::uint32_t f : h.nonzero_indices()) ++brightness[f];

    std::vector<std::uint32_t> order(tr.n_faults);
    for (std::uint32_t f = 0; f < tr.n_faults; ++f) order[f] = f;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (brightness[a] != brightness[b]) return brightness[a] > brightness[b];
        return a < b;
    });
    if (order.size() > top_k) order.resize(top_k);

    out.fault_ids = order;
    out.bits.resize(order.size(), std::vector<std::uint8_t>(out.n_iterations, 0));
    for (std::size_t row = 0; row < order.size(); ++row)
        for (std::uint32_t t = 0; t < out.n_iterations; ++t)
            out.bits[row][t] = tr.hard_decisions[t].test(order[row]) ? 1 : 0;
    return out;
}

}  // namespace lwlab
