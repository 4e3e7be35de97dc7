#include "gamsparse/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace gamsparse {

namespace {

bool parse_double(const std::string& token, double& out) {
    if (token.empty()) return false;
    const char* begin = token.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end != begin + token.size() || errno == ERANGE) return false;
    out = v;
    return true;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_line(const std::string& line, const CsvOptions& opt) {
    std::vector<std::string> fields;
    if (opt.whitespace) {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) fields.push_back(tok);
    } else {
        std::string cur;
        for (char c : line) {
            if (c == opt.delimiter) {
                fields.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        fields.push_back(cur);
    }
    return fields;
}

}  // namespace

Dataset::Dataset(std::vector<Column> features, std::vector<double> target)
    : features_(std::move(features)), target_(std::move(target)), n_rows_(target_.size()) {
    std::unordered_set<std::string> seen;
    for (const auto& col : features_) {
        if (col.name.empty()) throw std::invalid_argument("dataset: empty column name");
        if (!seen.insert(col.name).second)
            throw std::invalid_argument("dataset: duplicate column name '" + col.name + "'");
        if (col.size() != n_rows_)
            throw std::invalid_argument("dataset: column '" + col.name + "' has " +
                                        std::to_string(col.size()) + " rows, expected " +
                                        std::to_string(n_rows_));
        if (col.kind == ColumnKind::Categorical && col.missing.size() != n_rows_)
            throw std::invalid_argument("dataset: column '" + col.name +
                                        "' missing mask size mismatch");
    }
}

std::optional<std::size_t> Dataset::find_feature(const std::string& name) const {
    for (std::size_t j = 0; j < features_.size(); ++j)
        if (features_[j].name == name) return j;
    return std::nullopt;
}

Dataset Dataset::select(const std::vector<std::string>& names) const {
    std::vector<Column> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
        auto idx = find_feature(name);
        if (!idx) throw std::invalid_argument("dataset: missing feature column '" + name + "'");
        cols.push_back(features_[*idx]);
    }
    return Dataset(std::move(cols), target_);
}

Dataset Dataset::take_rows(const std::vector<uint8_t>& keep) const {
    if (keep.size() != n_rows_)
        throw std::invalid_argument("dataset: row mask size mismatch");
    std::vector<Column> cols;
    cols.reserve(features_.size());
    for (const auto& col : features_) {
        Column out;
        out.name = col.name;
        out.kind = col.kind;
        for (std::size_t i = 0; i < n_rows_; ++i) {
            if (!keep[i]) continue;
            if (col.kind == ColumnKind::Continuous) {
                out.numeric.push_back(col.numeric[i]);
            } else {
                out.labels.push_back(col.labels[i]);
                out.missing.push_back(col.missing[i]);
            }
        }
        cols.push_back(std::move(out));
    }
    std::vector<double> y;
    for (std::size_t i = 0; i < n_rows_; ++i)
        if (keep[i]) y.push_back(target_[i]);
    return Dataset(std::move(cols), std::move(y));
}

Dataset ingest_csv(const std::string& path, const std::string& target,
                   const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("ingest_csv: '" + path + "' is empty");
    const std::vector<std::string> header = split_line(line, options);
    if (header.empty()) throw std::runtime_error("ingest_csv: empty header row");

    std::size_t target_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == target) target_idx = j;
    if (target_idx == header.size())
        throw std::runtime_error("ingest_csv: target column '" + target + "' not found");

    const std::unordered_set<std::string> missing_tokens(options.missing_tokens.begin(),
                                                         options.missing_tokens.end());

    std::vector<std::vector<std::string>> cells(header.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() && options.whitespace) continue;
        auto fields = split_line(line, options);
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
        ++row;
        if (fields.size() != header.size())
            throw std::runtime_error("ingest_csv: row " + std::to_string(row) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        for (std::size_t j = 0; j < header.size(); ++j)
            cells[j].push_back(std::move(fields[j]));
    }
    const std::size_t n = row;

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& tok = cells[target_idx][i];
        if (missing_tokens.count(tok))
            throw std::runtime_error("ingest_csv: missing target value at row " +
                                     std::to_string(i + 1));
        if (!parse_double(tok, y[i]))
            throw std::runtime_error("ingest_csv: non-numeric target '" + tok + "' at row " +
                                     std::to_string(i + 1));
        if (options.require_binary_target && y[i] != 0.0 && y[i] != 1.0)
            throw std::runtime_error("ingest_csv: binomial target must be 0 or 1, got '" +
                                     tok + "' at row " + std::to_string(i + 1));
    }

    std::vector<Column> cols;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j == target_idx) continue;
        bool all_numeric = true;
        for (const auto& tok : cells[j]) {
            if (missing_tokens.count(tok)) continue;
            double v;
            if (!parse_double(tok, v)) {
                all_numeric = false;
                break;
            }
        }
        Column col;
        col.name = header[j];
        if (all_numeric) {
            col.kind = ColumnKind::Continuous;
            col.numeric.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto& tok = cells[j][i];
                if (missing_tokens.count(tok)) {
                    col.numeric[i] = std::numeric_limits<double>::quiet_NaN();
                } else {
                    parse_double(tok, col.numeric[i]);
                }
            }
        } else {
            col.kind = ColumnKind::Categorical;
            col.labels.resize(n);
            col.missing.resize(n, 0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto& tok = cells[j][i];
                if (missing_tokens.count(tok)) {
                    col.missing[i] = 1;
                } else {
                    col.labels[i] = tok;
                }
            }
        }
        cols.push_back(std::move(col));
    }
    return Dataset(std::move(cols), std::move(y));
}

namespace {

// Indicator truthiness; nullopt when the value is not boolean-like.
std::optional<bool> bool_of_label(const std::string& raw) {
    const std::string s = lower(raw);
    if (s == "true" || s == "t" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "f" || s == "0" || s == "no") return false;
    return std::nullopt;
}

}  // namespace

std::pair<Dataset, Dataset> split_by_indicator(const Dataset& data,
                                               const std::string& indicator) {
    auto idx = data.find_feature(indicator);
    if (!idx)
        throw std::invalid_argument("split_by_indicator: column '" + indicator + "' not found");
    const Column& col = data.feature(*idx);

    std::vector<uint8_t> is_test(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        std::optional<bool> b;
        if (col.kind == ColumnKind::Continuous) {
            double v = col.numeric[i];
            if (v == 0.0) b = false;
            else if (v == 1.0) b = true;
        } else if (!col.missing[i]) {
            b = bool_of_label(col.labels[i]);
        }
        if (!b)
            throw std::invalid_argument("split_by_indicator: column '" + indicator +
                                        "' is not boolean-like at row " + std::to_string(i + 1));
        is_test[i] = *b ? 1 : 0;
    }

    std::vector<std::string> keep_names;
    for (const auto& f : data.features())
        if (f.name != indicator) keep_names.push_back(f.name);
    Dataset without = data.select(keep_names);

    std::vector<uint8_t> train_mask(data.n_rows()), test_mask(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        train_mask[i] = !is_test[i];
        test_mask[i] = is_test[i];
    }
    Dataset train = without.take_rows(train_mask);
    Dataset test = without.take_rows(test_mask);
    if (train.n_rows() == 0 || test.n_rows() == 0)
        throw std::invalid_argument("split_by_indicator: partition is degenerate (" +
                                    std::to_string(train.n_rows()) + " train / " +
                                    std::to_string(test.n_rows()) + " test rows)");
    return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split_by_fraction(const Dataset& data, double test_fraction,
                                              uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("split_by_fraction: fraction must be in (0,1)");
    const std::size_t n = data.n_rows();
    std::size_t n_test = static_cast<std::size_t>(std::lround(test_fraction * double(n)));
    n_test = std::min(std::max<std::size_t>(n_test, 1), n - 1);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<uint8_t> test_mask(n, 0);
    for (std::size_t i = 0; i < n_test; ++i) test_mask[order[i]] = 1;
    std::vector<uint8_t> train_mask(n);
    for (std::size_t i = 0; i < n; ++i) train_mask[i] = !test_mask[i];
    return {data.take_rows(train_mask), data.take_rows(test_mask)};
}

std::optional<std::size_t> BinSpec::find_feature(const std::string& name) const {
    for (std::size_t j = 0; j < features.size(); ++j)
        if (features[j].name == name) return j;
    return std::nullopt;
}

BinnedMatrix::BinnedMatrix(std::size_t n_rows, std::shared_ptr<const BinSpec> spec)
    : bins_(n_rows * spec->n_features(), 0), n_rows_(n_rows), spec_(std::move(spec)) {}

BinSpec build_bins(const Dataset& data, std::size_t max_bins) {
    if (max_bins < 2) throw std::invalid_argument("build_bins: max_bins must be >= 2");
    BinSpec spec;
    spec.features.reserve(data.n_features());
    for (const auto& col : data.features()) {
        FeatureBins fb;
        fb.name = col.name;
        fb.kind = col.kind;
        if (col.kind == ColumnKind::Continuous) {
            std::vector<double> vals;
            vals.reserve(col.numeric.size());
            for (double v : col.numeric)
                if (!std::isnan(v)) vals.push_back(v);
            std::sort(vals.begin(), vals.end());
            const std::size_t n = vals.size();
            if (n >= 2) {
                // Cut between the sorted neighbors flanking each quantile
                // position; equal neighbors yield no cut (collapsed).
                for (std::size_t k = 1; k < max_bins; ++k) {
                    std::size_t pos = k * n / max_bins;
                    if (pos == 0 || pos >= n) continue;
                    double lo = vals[pos - 1], hi = vals[pos];
                    if (lo < hi) {
                        double cut = lo + (hi - lo) / 2.0;
                        if (fb.cuts.empty() || cut > fb.cuts.back()) fb.cuts.push_back(cut);
                    }
                }
            }
        } else {
            std::unordered_set<std::string> seen;
            for (std::size_t i = 0; i < col.labels.size(); ++i) {
                if (col.missing[i]) continue;
                if (seen.insert(col.labels[i]).second) fb.categories.push_back(col.labels[i]);
                if (fb.categories.size() >= max_bins) {
                    // Level cap: later unseen levels fall into the unseen slot.
                    bool complete = seen.size() == fb.categories.size();
                    if (!complete) break;
                }
            }
            if (fb.categories.size() > max_bins) fb.categories.resize(max_bins);
        }
        spec.features.push_back(std::move(fb));
    }
    return spec;
}

uint16_t bin_continuous(const FeatureBins& fb, double value) {
    if (std::isnan(value)) return static_cast<uint16_t>(fb.missing_bin());
    // Values <= cut stay in the lower bin; index = count of cuts strictly below.
    auto it = std::lower_bound(fb.cuts.begin(), fb.cuts.end(), value);
    return static_cast<uint16_t>(it - fb.cuts.begin());
}

BinnedMatrix apply_bins(const Dataset& data, std::shared_ptr<const BinSpec> spec) {
    // Restrict the spec to data's features (same object when schemas align).
    bool aligned = spec->n_features() == data.n_features();
    if (aligned)
        for (std::size_t j = 0; j < data.n_features(); ++j)
            if (spec->features[j].name != data.feature(j).name) { aligned = false; break; }

    std::shared_ptr<const BinSpec> use;
    if (aligned) {
        use = spec;
    } else {
        auto restricted = std::make_shared<BinSpec>();
        for (const auto& col : data.features()) {
            auto idx = spec->find_feature(col.name);
            if (!idx)
                throw std::invalid_argument("apply_bins: feature '" + col.name +
                                            "' absent from bin spec");
            restricted->features.push_back(spec->features[*idx]);
        }
        use = restricted;
    }

    BinnedMatrix out(data.n_rows(), use);
    for (std::size_t j = 0; j < data.n_features(); ++j) {
        const Column& col = data.feature(j);
        const FeatureBins& fb = use->features[j];
        if (fb.kind != col.kind)
            throw std::invalid_argument("apply_bins: feature '" + col.name +
                                        "' kind differs from bin spec");
        if (col.kind == ColumnKind::Continuous) {
            for (std::size_t i = 0; i < data.n_rows(); ++i)
                out.set(i, j, bin_continuous(fb, col.numeric[i]));
        } else {
            std::unordered_map<std::string, uint16_t> level;
            for (std::size_t b = 0; b < fb.categories.size(); ++b)
                level[fb.categories[b]] = static_cast<uint16_t>(b);
            for (std::size_t i = 0; i < data.n_rows(); ++i) {
                uint16_t b;
                if (col.missing[i]) {
                    b = static_cast<uint16_t>(fb.missing_bin());
                } else {
                    auto it = level.find(col.labels[i]);
                    b = it != level.end() ? it->second
                                          : static_cast<uint16_t>(fb.unseen_bin());
                }
                out.set(i, j, b);
            }
        }
    }
    return out;
}

}  // namespace gamsparse
