#pragma once

// Columnar tabular data, quantile binning and train/test splitting.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gamsparse {

enum class ColumnKind { Continuous, Categorical };

// One named feature column. Continuous columns store doubles with NaN for
// missing entries; categorical columns store string labels with a parallel
// missing mask.
struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Continuous;
    std::vector<double> numeric;       // kind == Continuous
    std::vector<std::string> labels;   // kind == Categorical
    std::vector<uint8_t> missing;      // kind == Categorical (1 = missing)

    std::size_t size() const {
        return kind == ColumnKind::Continuous ? numeric.size() : labels.size();
    }
};

// Feature matrix plus target vector. Immutable after construction.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Column> features, std::vector<double> target);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_features() const { return features_.size(); }
    const std::vector<Column>& features() const { return features_; }
    const std::vector<double>& target() const { return target_; }

    const Column& feature(std::size_t j) const { return features_.at(j); }
    // Index of the named feature, or nullopt.
    std::optional<std::size_t> find_feature(const std::string& name) const;

    // Projection onto the named features, in the given order. Throws if a
    // name is absent.
    Dataset select(const std::vector<std::string>& names) const;

    // Rows for which keep[i] is true, all columns and the target included.
    Dataset take_rows(const std::vector<uint8_t>& keep) const;

private:
    std::vector<Column> features_;
    std::vector<double> target_;
    std::size_t n_rows_ = 0;
};

struct CsvOptions {
    char delimiter = ',';
    bool whitespace = false;  // any run of spaces/tabs separates fields
    std::vector<std::string> missing_tokens = {"", "NA"};
    bool require_binary_target = false;  // binomial family: target must be {0,1}
};

// Read a CSV with a header row; `target` names the response column, which is
// removed from the feature set. Columns whose non-missing entries all parse
// as numbers become continuous, everything else categorical.
Dataset ingest_csv(const std::string& path, const std::string& target,
                   const CsvOptions& options = {});

// Partition rows by a boolean-like column (true rows -> second result). The
// indicator column is removed from both parts. Throws if either part would
// be empty or the column is not boolean-like.
std::pair<Dataset, Dataset> split_by_indicator(const Dataset& data,
                                               const std::string& indicator);

// Seeded random row partition; `test_fraction` of rows (rounded) go to the
// second result.
std::pair<Dataset, Dataset> split_by_fraction(const Dataset& data,
                                              double test_fraction,
                                              uint64_t seed);

// Per-feature discretization. Continuous features get strictly increasing
// cut points; bin b holds values v with cuts[b-1] < v <= cuts[b], so a value
// equal to a cut falls in the lower bin. Categorical features map each level
// to its own bin. Layout of a score table for a feature:
//   continuous:  [0 .. n_cuts]  value bins, then the missing slot
//   categorical: [0 .. n_cat-1] level bins, then unseen, then missing
struct FeatureBins {
    std::string name;
    ColumnKind kind = ColumnKind::Continuous;
    std::vector<double> cuts;                // continuous
    std::vector<std::string> categories;     // categorical, first-appearance order

    std::size_t value_bins() const {
        return kind == ColumnKind::Continuous ? cuts.size() + 1 : categories.size();
    }
    std::size_t unseen_bin() const { return categories.size(); }  // categorical only
    std::size_t missing_bin() const {
        return kind == ColumnKind::Continuous ? cuts.size() + 1 : categories.size() + 1;
    }
    std::size_t total_bins() const { return missing_bin() + 1; }
};

struct BinSpec {
    std::vector<FeatureBins> features;

    std::size_t n_features() const { return features.size(); }
    std::optional<std::size_t> find_feature(const std::string& name) const;
};

// Bin indices, column-major. Column j covers spec feature j.
class BinnedMatrix {
public:
    BinnedMatrix() = default;
    BinnedMatrix(std::size_t n_rows, std::shared_ptr<const BinSpec> spec);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_features() const { return spec_ ? spec_->n_features() : 0; }
    const BinSpec& spec() const { return *spec_; }
    std::shared_ptr<const BinSpec> spec_ptr() const { return spec_; }

    uint16_t at(std::size_t row, std::size_t feature) const {
        return bins_[feature * n_rows_ + row];
    }
    void set(std::size_t row, std::size_t feature, uint16_t bin) {
        bins_[feature * n_rows_ + row] = bin;
    }
    const uint16_t* column(std::size_t feature) const {
        return bins_.data() + feature * n_rows_;
    }
    const std::vector<uint16_t>& raw() const { return bins_; }

private:
    std::vector<uint16_t> bins_;
    std::size_t n_rows_ = 0;
    std::shared_ptr<const BinSpec> spec_;
};

// Quantile bins for every feature; at most `max_bins` value bins each
// (duplicate cuts collapsed, so possibly fewer). Deterministic.
BinSpec build_bins(const Dataset& data, std::size_t max_bins);

// Bin every cell of `data`; every feature of `data` must appear in `spec`.
// Missing values land in the missing slot, unseen categories in the unseen
// slot. Matrix columns follow data order; the matrix's spec is `spec`
// restricted to data's features (identical to `spec` when the schemas match).
BinnedMatrix apply_bins(const Dataset& data, std::shared_ptr<const BinSpec> spec);

// Bin index for one raw continuous value under the feature's cuts.
uint16_t bin_continuous(const FeatureBins& fb, double value);

}  // namespace gamsparse
