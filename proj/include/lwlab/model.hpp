#pragma once

// DecodingModel: decoding matrix H, per-fault priors, logical observable
// matrix L, and the partition of checks into equal-size cycle groups.
// On-disk format (UTF-8, line oriented, '#' comments):
//
//   DECODING_MODEL v1
//   checks <R> faults <C> observables <K> groups <G>
//   group_size <R/G>
//   col <j> prior <p> checks <i1 i2 ...> obs <k1 k2 ...>
//
// Columns are written ascending with ascending index lists, so a canonical
// file round-trips byte-for-byte.

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lwlab/gf2.hpp"
#include "lwlab/rng.hpp"

namespace lwlab {

class ModelParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModelValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Descriptive metadata only. Distance-style figures of an instance (circuit
// distance bounds and the implied correctable weight) are documentation that
// travels with a model's provenance; nothing here computes them.
struct ModelMeta {
    enum class Basis { x_errors, z_errors, generic };

    std::string name;
    Basis basis = Basis::generic;
    std::uint32_t n_cycles = 1;  // == number of check groups
};

class DecodingModel {
public:
    DecodingModel() = default;

    DecodingModel(SparseBitMatrix h, std::vector<double> priors, SparseBitMatrix l,
                  std::uint32_t n_groups, ModelMeta meta = {})
        : h_(std::move(h)), priors_(std::move(priors)), l_(std::move(l)),
          n_groups_(n_groups), meta_(std::move(meta)) {
        if (h_.n_cols() != priors_.size())
            throw ModelValidationError("invariant violated: H.n_cols == length(priors)");
        if (l_.n_cols() != h_.n_cols())
            throw ModelValidationError("invariant violated: H.n_cols == L.n_cols");
        for (double p : priors_)
            if (!(p > 0.0 && p <= 0.5))
                throw ModelValidationError("invariant violated: every prior in (0, 0.5]");
        if (n_groups_ == 0)
            throw ModelValidationError("invariant violated: at least one check group");
        if (h_.n_rows() % n_groups_ != 0)
            throw ModelValidationError("invariant violated: check groups of equal size");
        meta_.n_cycles = n_groups_;
    }

    const SparseBitMatrix& h() const { return h_; }
    const std::vector<double>& priors() const { return priors_; }
    const SparseBitMatrix& l() const { return l_; }

    std::uint32_t n_checks() const { return h_.n_rows(); }
    std::uint32_t n_faults() const { return h_.n_cols(); }
    std::uint32_t n_observables() const { return l_.n_rows(); }

    std::uint32_t n_groups() const { return n_groups_; }
    std::uint32_t group_size() const { return n_groups_ ? h_.n_rows() / n_groups_ : 0; }

    std::vector<std::uint32_t> group_rows(std::uint32_t g) const {
        if (g >= n_groups_) throw std::invalid_argument("group index out of range");
        std::vector<std::uint32_t> rows(group_size());
        for (std::uint32_t i = 0; i < rows.size(); ++i) rows[i] = g * group_size() + i;
        return rows;
    }

    std::vector<std::uint32_t> all_rows() const {
        std::vector<std::uint32_t> rows(h_.n_rows());
        for (std::uint32_t i = 0; i < rows.size(); ++i) rows[i] = i;
        return rows;
    }

    const ModelMeta& meta() const { return meta_; }
    ModelMeta& meta() { return meta_; }

    // structural equality; metadata is not part of the on-disk format
    bool operator==(const DecodingModel& o) const {
        return h_ == o.h_ && priors_ == o.priors_ && l_ == o.l_ && n_groups_ == o.n_groups_;
    }

private:
    SparseBitMatrix h_;
    std::vector<double> priors_;
    SparseBitMatrix l_;
    std::uint32_t n_groups_ = 1;
    ModelMeta meta_;
};

namespace detail {

inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

template <typename T>
inline T parse_number(const std::string& tok, std::size_t line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ModelParseError("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    return value;
}

}  // namespace detail

inline void save_model(const DecodingModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "DECODING_MODEL v1\n";
    out << "checks " << model.n_checks() << " faults " << model.n_faults() << " observables "
        << model.n_observables() << " groups " << model.n_groups() << "\n";
    out << "group_size " << model.group_size() << "\n";
    const auto l_rows = model.l().row_adjacency();
    // invert L to per-column observable lists
    std::vector<std::vector<std::uint32_t>> obs_of_col(model.n_faults());
    for (std::uint32_t k = 0; k < model.n_observables(); ++k)
        for (std::uint32_t j : l_rows[k]) obs_of_col[j].push_back(k);
    for (std::uint32_t j = 0; j < model.n_faults(); ++j) {
        out << "col " << j << " prior " << detail::format_double(model.priors()[j]) << " checks";
        for (std::uint32_t r : model.h().col(j)) out << ' ' << r;
        out << " obs";
        for (std::uint32_t k : obs_of_col[j]) out << ' ' << k;
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

inline DecodingModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&](bool required) -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            return true;
        }
        if (required) throw ModelParseError("unexpected end of file at line " + std::to_string(line_no));
        return false;
    };

    auto tokens_of = [&]() {
        std::istringstream ss(line);
        std::vector<std::string> toks;
        std::string t;
        while (ss >> t) toks.push_back(t);
        return toks;
    };

    next_line(true);
    if (line != "DECODING_MODEL v1")
        throw ModelParseError("line " + std::to_string(line_no) + ": bad magic, expected 'DECODING_MODEL v1'");

    next_line(true);
    auto toks = tokens_of();
    if (toks.size() != 8 || toks[0] != "checks" || toks[2] != "faults" || toks[4] != "observables" ||
        toks[6] != "groups")
        throw ModelParseError("line " + std::to_string(line_no) + ": bad header line");
    const auto n_checks = detail::parse_number<std::uint32_t>(toks[1], line_no);
    const auto n_faults = detail::parse_number<std::uint32_t>(toks[3], line_no);
    const auto n_obs = detail::parse_number<std::uint32_t>(toks[5], line_no);
    const auto n_groups = detail::parse_number<std::uint32_t>(toks[7], line_no);

    next_line(true);
    toks = tokens_of();
    if (toks.size() != 2 || toks[0] != "group_size")
        throw ModelParseError("line " + std::to_string(line_no) + ": bad group_size line");
    const auto group_size = detail::parse_number<std::uint32_t>(toks[1], line_no);
    if (n_groups == 0 || n_checks % n_groups != 0 || group_size != n_checks / n_groups)
        throw ModelValidationError("invariant violated: check groups of equal size (group_size " +
                                   std::to_string(group_size) + " vs checks " + std::to_string(n_checks) +
                                   " / groups " + std::to_string(n_groups) + ")");

    std::vector<std::vector<std::uint32_t>> h_cols(n_faults);
    std::vector<std::vector<std::uint32_t>> l_cols_rows(n_obs);
    std::vector<double> priors(n_faults, 0.0);

    for (std::uint32_t j = 0; j < n_faults; ++j) {
        next_line(true);
        toks = tokens_of();
        if (toks.size() < 5 || toks[0] != "col" || toks[2] != "prior" || toks[4] != "checks")
            throw ModelParseError("line " + std::to_string(line_no) + ": bad column line");
        const auto col_idx = detail::parse_number<std::uint32_t>(toks[1], line_no);
        if (col_idx != j)
            throw ModelParseError("line " + std::to_string(line_no) + ": expected column " +
                                  std::to_string(j) + ", got " + std::to_string(col_idx));
        priors[j] = detail::parse_number<double>(toks[3], line_no);
        std::size_t k = 5;
        while (k < toks.size() && toks[k] != "obs")
            h_cols[j].push_back(detail::parse_number<std::uint32_t>(toks[k++], line_no));
        if (k == toks.size())
            throw ModelParseError("line " + std::to_string(line_no) + ": missing 'obs' keyword");
        for (++k; k < toks.size(); ++k) {
            const auto obs_idx = detail::parse_number<std::uint32_t>(toks[k], line_no);
            if (obs_idx >= n_obs)
                throw ModelValidationError("invariant violated: observable index " +
                                           std::to_string(obs_idx) + " out of range at line " +
                                           std::to_string(line_no));
            l_cols_rows[obs_idx].push_back(j);
        }
    }
    if (next_line(false))
        throw ModelParseError("line " + std::to_string(line_no) + ": trailing content after last column");

    try {
        SparseBitMatrix h(n_checks, n_faults, std::move(h_cols));
        // l_cols_rows currently holds per-observable column lists; convert to columns of L
        std::vector<std::vector<std::uint32_t>> l_cols(n_faults);
        for (std::uint32_t k2 = 0; k2 < n_obs; ++k2)
            for (std::uint32_t j : l_cols_rows[k2]) l_cols[j].push_back(k2);
        for (auto& c : l_cols) std::sort(c.begin(), c.end());
        SparseBitMatrix l(n_obs, n_faults, std::move(l_cols));
        ModelMeta meta;
        meta.name = path.stem().string();
        return DecodingModel(std::move(h), std::move(priors), std::move(l), n_groups, std::move(meta));
    } catch (const std::invalid_argument& e) {
        throw ModelValidationError(std::string("invariant violated: ") + e.what());
    }
}

// Deterministic random sparse model with degree bounds and uniform priors.
inline DecodingModel generate_random_model(std::uint32_t n_checks, std::uint32_t n_faults,
                                           std::uint32_t max_col_wt, std::uint32_t max_row_wt,
                                           std::uint64_t seed) {
    if (n_checks == 0) throw std::invalid_argument("generate_random_model: n_checks must be > 0");
    if (n_faults > 0 && (max_col_wt == 0 || max_col_wt > n_checks))
        throw std::invalid_argument("generate_random_model: max_col_wt infeasible");
    if (n_faults > 0 && max_row_wt == 0)
        throw std::invalid_argument("generate_random_model: max_row_wt infeasible");
    if (static_cast<std::uint64_t>(n_faults) >
        static_cast<std::uint64_t>(n_checks) * max_row_wt)
        throw std::invalid_argument("generate_random_model: row capacity below column demand");

    SplitRng rng(seed);
    std::vector<std::uint32_t> row_load(n_checks, 0);
    std::vector<std::vector<std::uint32_t>> cols(n_faults);
    for (std::uint32_t j = 0; j < n_faults; ++j) {
        std::vector<std::uint32_t> avail;
        for (std::uint32_t r = 0; r < n_checks; ++r)
            if (row_load[r] < max_row_wt) avail.push_back(r);
        if (avail.empty())
            throw std::invalid_argument("generate_random_model: row capacity exhausted");
        std::uint32_t w = 1 + static_cast<std::uint32_t>(rng.next_below(max_col_wt));
        w = std::min<std::uint32_t>(w, static_cast<std::uint32_t>(avail.size()));
        for (std::uint32_t t = 0; t < w; ++t) {
            const auto pick = t + static_cast<std::uint32_t>(rng.next_below(avail.size() - t));
            std::swap(avail[t], avail[pick]);
            cols[j].push_back(avail[t]);
            ++row_load[avail[t]];
        }
        std::sort(cols[j].begin(), cols[j].end());
    }
    std::vector<double> priors(n_faults, 0.001);
    SparseBitMatrix l(0, n_faults, std::vector<std::vector<std::uint32_t>>(n_faults));
    ModelMeta meta;
    meta.name = "random";
    return DecodingModel(SparseBitMatrix(n_checks, n_faults, std::move(cols)), std::move(priors),
                         std::move(l), 1, std::move(meta));
}

// Bivariate-bicycle code-capacity matrices. A and B are sums of monomials
// x^p y^q in the commuting cyclic shifts x (order l) and y (order m);
// H_X = [A | B], H_Z = [B^T | A^T], n = 2lm columns.
enum class BbBlock { hx, hz };

inline DecodingModel generate_bb_code_capacity(std::uint32_t l, std::uint32_t m,
                                               std::vector<std::pair<std::uint32_t, std::uint32_t>> a_exps,
                                               std::vector<std::pair<std::uint32_t, std::uint32_t>> b_exps,
                                               BbBlock block, double prior = 0.001) {
    if (l == 0 || m == 0) throw std::invalid_argument("generate_bb_code_capacity: l, m must be >= 1");
    auto reduce = [&](std::vector<std::pair<std::uint32_t, std::uint32_t>>& exps, const char* which) {
        if (exps.empty())
            throw std::invalid_argument(std::string("generate_bb_code_capacity: empty exponent list for ") + which);
        for (auto& [p, q] : exps) {
            p %= l;
            q %= m;
        }
        auto sorted = exps;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument(std::string("generate_bb_code_capacity: duplicate monomial in ") + which);
    };
    reduce(a_exps, "A");
    reduce(b_exps, "B");

    const std::uint32_t lm = l * m;
    // image / preimage of basis index under x^p y^q
    auto shift = [&](std::uint32_t idx, std::uint32_t p, std::uint32_t q) {
        const std::uint32_t i = idx / m, j = idx % m;
        return ((i + p) % l) * m + (j + q) % m;
    };
    auto unshift = [&](std::uint32_t idx, std::uint32_t p, std::uint32_t q) {
        const std::uint32_t i = idx / m, j = idx % m;
        return ((i + l - p) % l) * m + (j + m - q) % m;
    };

    std::vector<std::vector<std::uint32_t>> cols(2 * lm);
    for (std::uint32_t c = 0; c < lm; ++c) {
        for (std::uint32_t j = 0; j < 2; ++j) {
            auto& exps = (j == 0) ? a_exps : b_exps;
            auto& col = cols[j * lm + c];
            for (const auto& [p, q] : exps)
                col.push_back(block == BbBlock::hx ? shift(c, p, q) : unshift(c, p, q));
            std::sort(col.begin(), col.end());
        }
    }
    if (block == BbBlock::hz) {
        // H_Z = [B^T | A^T]: the transpose swaps which polynomial feeds which block
        for (std::uint32_t c = 0; c < lm; ++c) std::swap(cols[c], cols[lm + c]);
    }

    std::vector<double> priors(2 * lm, prior);
    SparseBitMatrix lmat(0, 2 * lm, std::vector<std::vector<std::uint32_t>>(2 * lm));
    ModelMeta meta;
    meta.name = block == BbBlock::hx ? "bb-hx" : "bb-hz";
    meta.basis = block == BbBlock::hx ? ModelMeta::Basis::x_errors : ModelMeta::Basis::z_errors;
    return DecodingModel(SparseBitMatrix(lm, 2 * lm, std::move(cols)), std::move(priors),
                         std::move(lmat), 1, std::move(meta));
}

}  // namespace lwlab
