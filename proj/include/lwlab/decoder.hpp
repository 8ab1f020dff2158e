#pragma once

// Normalized min-sum BP with per-variable memory (disordered-memory BP),
// Relay-BP on top of it, OSD-0 post-processing, and logical-flip evaluation.
//
// One Relay-BP execution runs a warm-up leg with zero memory strength, then
// up to max_legs legs whose per-variable memory strengths are redrawn
// uniformly from [gamma_min, gamma_max] at each leg start. Message state is
// carried across legs (the warm start); only the strengths change. The hard
// decision is tested for syndrome compatibility before the first iteration
// and after every sweep.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lwlab/gf2.hpp"
#include "lwlab/model.hpp"
#include "lwlab/rng.hpp"

namespace lwlab {

struct RelayConfig {
    std::uint32_t max_legs = 200;       // randomized legs after the warm-up leg
    std::uint32_t iters_per_leg = 25;
    std::uint32_t warmup_iters = 25;
    double gamma_min = -0.24;
    double gamma_max = 0.66;
    double min_sum_scale = 0.9;
    bool stop_on_first_valid = true;
    std::uint32_t global_iteration_cap = 5000;
    std::uint64_t seed = 0;
    bool record_trace = false;

    void validate() const {
        if (gamma_min > gamma_max)
            throw std::invalid_argument("RelayConfig: gamma_min > gamma_max");
        if (!(min_sum_scale > 0.0 && min_sum_scale <= 1.0))
            throw std::invalid_argument("RelayConfig: min_sum_scale outside (0, 1]");
        const std::uint64_t budget =
            static_cast<std::uint64_t>(max_legs) * iters_per_leg + warmup_iters;
        if (global_iteration_cap > budget)
            throw std::invalid_argument("RelayConfig: global_iteration_cap exceeds leg budget");
    }
};

struct IterationTrace {
    std::uint32_t n_faults = 0;
    std::vector<BitVec> hard_decisions;      // one snapshot per executed iteration
    std::vector<std::uint32_t> leg_starts;   // iteration index at which each leg began
};

struct DecodeResult {
    BitVec estimate;
    bool converged = false;
    std::uint32_t iterations = 0;  // min-sum sweeps executed, all legs included
    std::uint32_t legs = 0;        // randomized legs entered (warm-up not counted)
    BitVec logical_flip;           // L * estimate; callers with a known true error
                                   // evaluate logical_flip() on the residual instead
    std::optional<IterationTrace> trace;
};

// Tanner-graph message-passing engine bound to one model. Holds all scratch
// state for a decode call; reusable across calls via prepare(). Not shareable
// between threads; the model itself is.
class MinSumEngine {
public:
    explicit MinSumEngine(const DecodingModel& model, double min_sum_scale = 0.9)
        : n_checks_(model.n_checks()), n_vars_(model.n_faults()), scale_(min_sum_scale) {
        const auto rows = model.h().row_adjacency();
        row_ptr_.assign(n_checks_ + 1, 0);
        for (std::uint32_t c = 0; c < n_checks_; ++c)
            row_ptr_[c + 1] = row_ptr_[c] + static_cast<std::uint32_t>(rows[c].size());
        const std::uint32_t n_edges = row_ptr_[n_checks_];
        edge_var_.resize(n_edges);
        csc_of_csr_.resize(n_edges);
        csr_of_csc_.resize(n_edges);

        var_ptr_.assign(n_vars_ + 1, 0);
        for (std::uint32_t j = 0; j < n_vars_; ++j)
            var_ptr_[j + 1] = var_ptr_[j] + model.h().col_weight(j);
        std::vector<std::uint32_t> fill = var_ptr_;
        std::uint32_t e = 0;
        for (std::uint32_t c = 0; c < n_checks_; ++c) {
            for (std::uint32_t j : rows[c]) {
                edge_var_[e] = j;
                csc_of_csr_[e] = fill[j];
                csr_of_csc_[fill[j]] = e;
                ++fill[j];
                ++e;
            }
        }

        llr0_.resize(n_vars_);
        for (std::uint32_t j = 0; j < n_vars_; ++j) {
            double p = model.priors()[j];
            if (p < 1e-15) p = 1e-15;
            llr0_[j] = std::log((1.0 - p) / p);
        }

        q_.resize(n_edges);
        r_.resize(n_edges);
        posteriors_.resize(n_vars_);
        gammas_.assign(n_vars_, 0.0);
        synd_.assign(n_checks_, 0);
        hard_ = BitVec(n_vars_);
    }

    std::uint32_t n_checks() const { return n_checks_; }
    std::uint32_t n_vars() const { return n_vars_; }

    void set_scale(double s) { scale_ = s; }

    // Reset all message state for a fresh decode of `syndrome`.
    void prepare(const Syndrome& syndrome) {
        if (syndrome.size() != n_checks_)
            throw std::invalid_argument("syndrome length != H.n_rows");
        for (std::uint32_t c = 0; c < n_checks_; ++c) synd_[c] = syndrome.test(c) ? 1 : 0;
        posteriors_ = llr0_;
        for (std::uint32_t e = 0; e < edge_var_.size(); ++e) q_[e] = llr0_[edge_var_[e]];
        std::fill(r_.begin(), r_.end(), 0.0);
        std::fill(gammas_.begin(), gammas_.end(), 0.0);
        refresh_hard();
    }

    void set_gammas(std::span<const double> gammas) {
        if (gammas.size() != n_vars_)
            throw std::invalid_argument("memory strength length != n_faults");
        gammas_.assign(gammas.begin(), gammas.end());
    }

    void set_gammas_uniform(double g) { std::fill(gammas_.begin(), gammas_.end(), g); }

    void randomize_gammas(SplitRng& rng, double lo, double hi) {
        for (double& g : gammas_) g = rng.next_in(lo, hi);
    }

    void set_posteriors(std::span<const double> posteriors) {
        if (posteriors.size() != n_vars_)
            throw std::invalid_argument("posterior length != n_faults");
        posteriors_.assign(posteriors.begin(), posteriors.end());
        refresh_hard();
    }

    // One flooding min-sum sweep followed by the hard-decision syndrome test.
    void sweep() {
        for (std::uint32_t c = 0; c < n_checks_; ++c) {
            const std::uint32_t begin = row_ptr_[c], end = row_ptr_[c + 1];
            if (begin == end) continue;
            double min1 = std::numeric_limits<double>::infinity();
            double min2 = min1;
            std::uint32_t min_edge = begin;
            int sign_all = synd_[c] ? -1 : 1;
            for (std::uint32_t e = begin; e < end; ++e) {
                const double v = q_[e];
                const double a = std::fabs(v);
                if (v < 0.0) sign_all = -sign_all;
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    min_edge = e;
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (std::uint32_t e = begin; e < end; ++e) {
                const int sign = (q_[e] < 0.0) ? -sign_all : sign_all;
                const double mag = (e == min_edge) ? min2 : min1;
                r_[csc_of_csr_[e]] = clamp_llr(scale_ * sign * mag);
            }
        }
        for (std::uint32_t v = 0; v < n_vars_; ++v) {
            const double eff = (1.0 - gammas_[v]) * llr0_[v] + gammas_[v] * posteriors_[v];
            double sum = 0.0;
            const std::uint32_t begin = var_ptr_[v], end = var_ptr_[v + 1];
            for (std::uint32_t k = begin; k < end; ++k) sum += r_[k];
            const double post = clamp_llr(eff + sum);
            posteriors_[v] = post;
            hard_.assign(v, post < 0.0);
            for (std::uint32_t k = begin; k < end; ++k)
                q_[csr_of_csc_[k]] = clamp_llr(post - r_[k]);
        }
        check_valid();
    }

    bool valid() const { return valid_; }
    const BitVec& hard() const { return hard_; }
    const std::vector<double>& posteriors() const { return posteriors_; }

private:
    static double clamp_llr(double v) {
        if (v > 50.0) return 50.0;
        if (v < -50.0) return -50.0;
        return v;
    }

    void refresh_hard() {
        for (std::uint32_t v = 0; v < n_vars_; ++v) hard_.assign(v, posteriors_[v] < 0.0);
        check_valid();
    }

    void check_valid() {
        for (std::uint32_t c = 0; c < n_checks_; ++c) {
            int par = 0;
            for (std::uint32_t e = row_ptr_[c]; e < row_ptr_[c + 1]; ++e)
                par ^= hard_.test(edge_var_[e]) ? 1 : 0;
            if (par != synd_[c]) {
                valid_ = false;
                return;
            }
        }
        valid_ = true;
    }

    std::uint32_t n_checks_ = 0;
    std::uint32_t n_vars_ = 0;
    double scale_ = 0.9;

    std::vector<std::uint32_t> row_ptr_;      // CSR over checks
    std::vector<std::uint32_t> edge_var_;     // variable of each CSR edge
    std::vector<std::uint32_t> var_ptr_;      // CSC over variables
    std::vector<std::uint32_t> csc_of_csr_;   // edge index maps between the two orders
    std::vector<std::uint32_t> csr_of_csc_;

    std::vector<double> llr0_;
    std::vector<double> q_;   // variable-to-check, CSR-aligned
    std::vector<double> r_;   // check-to-variable, CSC-aligned
    std::vector<double> posteriors_;
    std::vector<double> gammas_;
    std::vector<std::uint8_t> synd_;
    BitVec hard_;
    bool valid_ = false;
};

struct BpOutcome {
    DecodeResult result;
    std::vector<double> posteriors;
};

// Plain (fixed-memory) min-sum BP. memory_strengths gives gamma per fault;
// initial_posteriors, when nonempty, seeds the memory term of the first sweep.
inline BpOutcome bp_min_sum(const DecodingModel& model, const Syndrome& syndrome,
                            std::uint32_t n_iters, std::span<const double> memory_strengths,
                            std::span<const double> initial_posteriors = {},
                            double scale = 0.9) {
    MinSumEngine eng(model, scale);
    eng.prepare(syndrome);
    eng.set_gammas(memory_strengths);
    if (!initial_posteriors.empty()) eng.set_posteriors(initial_posteriors);

    std::uint32_t iters = 0;
    while (!eng.valid() && iters < n_iters) {
        eng.sweep();
        ++iters;
    }

    BpOutcome out;
    out.result.estimate = eng.hard();
    out.result.converged = eng.valid();
    out.result.iterations = iters;
    out.result.legs = 0;
    out.result.logical_flip = mat_vec_mod2(model.l(), out.result.estimate);
    out.posteriors = eng.posteriors();
    return out;
}

// Relay-BP against a caller-owned engine (reusable across calls).
inline DecodeResult relay_decode(MinSumEngine& eng, const DecodingModel& model,
                                 const Syndrome& syndrome, const RelayConfig& cfg) {
    cfg.validate();
    eng.set_scale(cfg.min_sum_scale);
    eng.prepare(syndrome);

    IterationTrace trace;
    trace.n_faults = eng.n_vars();

    std::uint32_t total = 0;
    std::uint32_t legs = 0;
    bool found = false;
    BitVec best;
    std::size_t best_weight = 0;

    auto note_valid = [&]() {
        const std::size_t w = eng.hard().popcount();
        if (!found || w < best_weight) {
            best = eng.hard();
            best_weight = w;
            found = true;
        }
    };

    auto finish = [&]() {
        DecodeResult res;
        res.iterations = total;
        res.legs = legs;
        if (found && !cfg.stop_on_first_valid) {
            res.converged = true;
            res.estimate = best;
        } else {
            res.converged = eng.valid();
            res.estimate = eng.hard();
        }
        res.logical_flip = mat_vec_mod2(model.l(), res.estimate);
        if (cfg.record_trace) res.trace = std::move(trace);
        return res;
    };

    // pre-iteration check: the channel-prior hard decision (all zero) may
    // already match the syndrome
    if (eng.valid()) return finish();

    // returns true when decoding is done
    auto run_leg = [&](std::uint32_t leg_iters) {
        for (std::uint32_t i = 0; i < leg_iters && total < cfg.global_iteration_cap; ++i) {
            eng.sweep();
            ++total;
            if (cfg.record_trace) trace.hard_decisions.push_back(eng.hard());
            if (eng.valid()) {
                if (cfg.stop_on_first_valid) return true;
                note_valid();
            }
        }
        return false;
    };

    eng.set_gammas_uniform(0.0);  // warm-up leg: no memory
    if (cfg.record_trace) trace.leg_starts.push_back(total);
    bool stop = run_leg(cfg.warmup_iters);

    for (std::uint32_t leg = 1; !stop && leg <= cfg.max_legs && total < cfg.global_iteration_cap;
         ++leg) {
        SplitRng rng(hash_mix(cfg.seed, leg));
        eng.randomize_gammas(rng, cfg.gamma_min, cfg.gamma_max);
        ++legs;
        if (cfg.record_trace) trace.leg_starts.push_back(total);
        stop = run_leg(cfg.iters_per_leg);
    }
    return finish();
}

inline DecodeResult relay_decode(const DecodingModel& model, const Syndrome& syndrome,
                                 const RelayConfig& cfg) {
    MinSumEngine eng(model, cfg.min_sum_scale);
    return relay_decode(eng, model, syndrome, cfg);
}

// OSD-0: rank the columns by reliability (most likely error first), pick a
// greedy information set by GF(2) elimination, and solve on it. Returns
// converged == false when the syndrome is outside the column space.
inline DecodeResult osd0(const DecodingModel& model, const Syndrome& syndrome,
                         std::span<const double> soft_outputs) {
    if (soft_outputs.size() != model.n_faults())
        throw std::invalid_argument("osd0: soft output length != n_faults");
    if (syndrome.size() != model.n_checks())
        throw std::invalid_argument("osd0: syndrome length != H.n_rows");

    const std::uint32_t n = model.n_faults();
    const std::uint32_t r = model.n_checks();

    std::vector<std::uint32_t> order(n);
    for (std::uint32_t j = 0; j < n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (soft_outputs[a] != soft_outputs[b]) return soft_outputs[a] < soft_outputs[b];
        return a < b;
    });

    std::vector<BitVec> pivot_vec(r);
    std::vector<BitVec> pivot_combo(r);
    std::vector<std::uint8_t> used(r, 0);
    std::uint32_t rank = 0;

    for (std::uint32_t j : order) {
        if (rank == r) break;
        BitVec v(r);
        for (std::uint32_t row : model.h().col(j)) v.set(row);
        BitVec combo(n);
        combo.set(j);
        while (true) {
            const std::size_t lead = v.lowest_set();
            if (lead == v.size()) break;  // linearly dependent; skip
            if (!used[lead]) {
                used[lead] = 1;
                pivot_vec[lead] = std::move(v);
                pivot_combo[lead] = std::move(combo);
                ++rank;
                break;
            }
            v.xor_with(pivot_vec[lead]);
            combo.xor_with(pivot_combo[lead]);
        }
    }

    DecodeResult res;
    res.estimate = BitVec(n);
    BitVec u = syndrome;
    while (true) {
        const std::size_t lead = u.lowest_set();
        if (lead == u.size()) break;
        if (!used[lead]) {
            // syndrome not in the column space: inconsistent, no estimate
            res.converged = false;
            res.estimate = BitVec(n);
            res.logical_flip = BitVec(model.n_observables());
            return res;
        }
        u.xor_with(pivot_vec[lead]);
        res.estimate.xor_with(pivot_combo[lead]);
    }
    res.converged = true;
    res.logical_flip = mat_vec_mod2(model.l(), res.estimate);
    return res;
}

// L * (e_true XOR estimate); all-zero means no logical error.
inline BitVec logical_flip(const DecodingModel& model, const BitVec& e_true,
                           const BitVec& estimate) {
    if (e_true.size() != model.n_faults() || estimate.size() != model.n_faults())
        throw std::invalid_argument("logical_flip: vector length != n_faults");
    BitVec residual = e_true;
    residual.xor_with(estimate);
    return mat_vec_mod2(model.l(), residual);
}

// Plain BP with an OSD-0 fallback on non-convergence. iterations reports the
// BP sweeps executed; the OSD step adds none.
inline DecodeResult bp_osd_decode(MinSumEngine& eng, const DecodingModel& model,
                                  const Syndrome& syndrome, std::uint32_t max_iters,
                                  double scale = 0.9) {
    eng.set_scale(scale);
    eng.prepare(syndrome);

    std::uint32_t iters = 0;
    while (!eng.valid() && iters < max_iters) {
        eng.sweep();
        ++iters;
    }

    DecodeResult res;
    res.iterations = iters;
    if (eng.valid()) {
        res.converged = true;
        res.estimate = eng.hard();
        res.logical_flip = mat_vec_mod2(model.l(), res.estimate);
        return res;
    }
    DecodeResult osd = osd0(model, syndrome, eng.posteriors());
    osd.iterations = iters;
    return osd;
}

}  // namespace lwlab
