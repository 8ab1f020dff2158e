#pragma once

// Fixed CSV schemas for every exported artifact. Each file carries a
// `# config-hash=<h>` provenance comment followed by a header row; numeric
// output uses shortest round-trip decimal form, so reruns are byte-stable.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lwlab/amend.hpp"
#include "lwlab/dynlab.hpp"
#include "lwlab/lowweight.hpp"
#include "lwlab/model.hpp"

namespace lwlab::csv {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

inline std::string fmt(double v) { return detail::format_double(v); }

inline std::string join_ids(std::span<const std::uint32_t> ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(ids[i]);
    }
    return s;
}

inline const char* decoder_name(DecoderKind k) {
    return k == DecoderKind::relay ? "relay" : "bp_osd";
}

inline std::ofstream open_csv(const std::filesystem::path& path, std::uint64_t config_hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "# config-hash=" << hex16(config_hash) << "\n";
    return out;
}

inline void write_pair_stats(const std::filesystem::path& path, std::uint64_t config_hash,
                             const PairStats& stats) {
    auto out = open_csv(path, config_hash);
    out << "row,col,n_s\n";
    for (std::size_t i = 0; i < stats.scope_size(); ++i)
        for (std::size_t j = i + 1; j < stats.scope_size(); ++j)
            out << stats.scope()[i] << ',' << stats.scope()[j] << ',' << stats.at_pos(i, j) << "\n";
}

inline void write_shared_freq(const std::filesystem::path& path, std::uint64_t config_hash,
                              const PairStats& stats) {
    auto out = open_csv(path, config_hash);
    out << "check,n_s,count\n";
    for (std::uint32_t check : stats.scope()) {
        const auto freq = shared_count_frequency(stats, check);
        for (std::size_t v = 0; v < freq.size(); ++v)
            if (freq[v] > 0) out << check << ',' << v << ',' << freq[v] << "\n";
    }
}

inline void write_combo_row(std::ofstream& out, const std::string& model_name,
                            const ErrorCombo& c, bool filtered) {
    out << model_name << ',' << c.id() << ',' << '"' << join_ids(c.fault_ids) << '"' << ','
        << c.metrics.w << ',' << c.metrics.n_u << ',' << c.metrics.n_c << ',';
    if (!c.decompositions.empty()) {
        const Decomposition& d = c.decompositions.front();
        out << '"' << d.first.checks.a << ' ' << d.first.checks.b << '"' << ',' << '"'
            << join_ids(d.first.cols) << '"' << ',' << d.first.n_c << ',' << '"'
            << d.second.checks.a << ' ' << d.second.checks.b << '"' << ',' << '"'
            << join_ids(d.second.cols) << '"' << ',' << d.second.n_c << ','
            << c.decompositions.size() << ',';
    } else {
        out << ",,,,,,0,";
    }
    out << (filtered ? 1 : 0) << "\n";
}

inline void write_combos_header(std::ofstream& out) {
    out << "model,combo_id,fault_ids,w,n_u,n_c,p0_checks,p0_cols,p0_nc,p1_checks,p1_cols,p1_nc,"
           "n_decomps,filtered\n";
}

inline void write_nc_distribution(const std::filesystem::path& path, std::uint64_t config_hash,
                                  std::span<const ErrorCombo> combos) {
    std::map<std::uint32_t, std::uint64_t> dist;
    for (const auto& c : combos) ++dist[c.metrics.n_c];
    auto out = open_csv(path, config_hash);
    out << "n_c,count\n";
    const std::uint32_t top = dist.empty() ? 0 : dist.rbegin()->first;
    for (std::uint32_t v = 0; v <= top && !dist.empty(); ++v) {
        const auto it = dist.find(v);
        out << v << ',' << (it == dist.end() ? 0 : it->second) << "\n";
    }
}

inline void write_trials(const std::filesystem::path& path, std::uint64_t config_hash,
                         std::span<const TrialRecord> records) {
    auto out = open_csv(path, config_hash);
    out << "combo_id,trial,iterations,converged,logical_error\n";
    for (const auto& r : records)
        out << r.combo_id << ',' << r.trial << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
            << ',' << (r.logical_error ? 1 : 0) << "\n";
}

inline void write_histogram(const std::filesystem::path& path, std::uint64_t config_hash,
                            const Histogram& h) {
    auto out = open_csv(path, config_hash);
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out << h.bin_lo(i) << ',' << h.bin_hi(i) << ',' << h.counts[i] << "\n";
}

inline void write_histograms_by_weight(const std::filesystem::path& path,
                                       std::uint64_t config_hash,
                                       const std::map<std::uint32_t, Histogram>& strata) {
    auto out = open_csv(path, config_hash);
    out << "w,bin_lo,bin_hi,count\n";
    for (const auto& [w, h] : strata)
        for (std::size_t i = 0; i < h.counts.size(); ++i)
            out << w << ',' << h.bin_lo(i) << ',' << h.bin_hi(i) << ',' << h.counts[i] << "\n";
}

// The terminal zero-survival points are omitted (they carry no information on
// a log scale).
inline void write_survival(const std::filesystem::path& path, std::uint64_t config_hash,
                           const SurvivalCurve& curve) {
    auto out = open_csv(path, config_hash);
    out << "n,survival\n";
    for (std::size_t i = 0; i < curve.edges.size(); ++i)
        if (curve.survival[i] > 0.0)
            out << curve.edges[i] << ',' << fmt(curve.survival[i]) << "\n";
}

inline void write_rate_fits(const std::filesystem::path& path, std::uint64_t config_hash,
                            std::span<const std::pair<std::uint64_t, RateFit>> fits) {
    auto out = open_csv(path, config_hash);
    out << "combo_id,rate,stderr,n_uncensored,n_censored\n";
    for (const auto& [id, fit] : fits)
        out << id << ',' << fmt(fit.rate) << ',' << fmt(fit.stderr_) << ',' << fit.n_uncensored
            << ',' << fit.n_censored << "\n";
}

inline void write_trace(const std::filesystem::path& path, std::uint64_t config_hash,
                        const TraceExport& trace) {
    auto out = open_csv(path, config_hash);
    for (std::uint32_t s : trace.leg_starts) out << "# leg-start=" << s << "\n";
    out << "fault_id,iter,bit\n";
    for (std::size_t row = 0; row < trace.fault_ids.size(); ++row)
        for (std::uint32_t t = 0; t < trace.n_iterations; ++t)
            out << trace.fault_ids[row] << ',' << t << ','
                << static_cast<int>(trace.bits[row][t]) << "\n";
}

inline void write_sweep(const std::filesystem::path& path, std::uint64_t config_hash,
                        std::span<const SweepPoint> points) {
    auto out = open_csv(path, config_hash);
    out << "fraction,decoder,mean_iterations,logical_error_prob,n_trials\n";
    for (const auto& p : points)
        out << fmt(p.fraction) << ',' << decoder_name(p.decoder) << ',' << fmt(p.mean_iterations)
            << ',' << fmt(p.logical_error_prob) << ',' << p.n_trials << "\n";
}

inline void write_weight5(const std::filesystem::path& path, std::uint64_t config_hash,
                          std::span<const std::pair<ErrorCombo, Weight5Spread>> spreads) {
    auto out = open_csv(path, config_hash);
    out << "base_combo_id,base_mean,ext_combo_id,fifth_column,mean_iterations\n";
    for (const auto& [base, spread] : spreads)
        for (const auto& row : spread.rows)
            out << base.id() << ',' << fmt(spread.base_mean) << ',' << row.combo_id << ','
                << row.fifth_column << ',' << fmt(row.mean_iterations) << "\n";
}

// --- combos CSV reading (for the dynamics/amend commands) ---

namespace detail_csv {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline std::vector<std::uint32_t> parse_id_list(const std::string& s) {
    std::vector<std::uint32_t> ids;
    std::istringstream ss(s);
    std::uint64_t v;
    while (ss >> v) ids.push_back(static_cast<std::uint32_t>(v));
    return ids;
}

}  // namespace detail_csv

// Reads back a combos CSV written by write_combo_row. Syndrome and metrics
// are recomputed from the model and cross-checked against the stored values;
// only the primary decomposition is recovered.
inline std::vector<ErrorCombo> read_combos(const std::filesystem::path& path,
                                           const DecodingModel& model,
                                           const std::string& model_name, bool filtered_only) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<ErrorCombo> out;
    std::string line;
    bool saw_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        const auto f = detail_csv::split_csv_line(line);
        if (f.size() != 14)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 14 fields, got " + std::to_string(f.size()));
        if (!model_name.empty() && f[0] != model_name) continue;
        if (filtered_only && f[13] != "1") continue;
        ErrorCombo combo = make_combo(model, detail_csv::parse_id_list(f[2]));
        if (std::to_string(combo.metrics.w) != f[3] || std::to_string(combo.metrics.n_u) != f[4] ||
            std::to_string(combo.metrics.n_c) != f[5])
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": stored metrics disagree with the model");
        if (!f[6].empty()) {
            const auto p0c = detail_csv::parse_id_list(f[6]);
            const auto p0s = detail_csv::parse_id_list(f[7]);
            const auto p1c = detail_csv::parse_id_list(f[9]);
            const auto p1s = detail_csv::parse_id_list(f[10]);
            if (p0c.size() == 2 && p0s.size() == 2 && p1c.size() == 2 && p1s.size() == 2) {
                PairChoice a{{p0c[0], p0c[1]}, {p0s[0], p0s[1]},
                             static_cast<std::uint32_t>(std::stoul(f[8]))};
                PairChoice b{{p1c[0], p1c[1]}, {p1s[0], p1s[1]},
                             static_cast<std::uint32_t>(std::stoul(f[11]))};
                combo.decompositions.push_back(make_decomposition(a, b));
            }
        }
        out.push_back(std::move(combo));
    }
    return out;
}

}  // namespace lwlab::csv
