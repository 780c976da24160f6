#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "adago/linalg/matrix.hpp"
#include "adago/models/model.hpp"

namespace adago::data {

using linalg::Matrix;

enum class DatasetKind { grf_regression, linear_regression, gaussian_blobs };

DatasetKind parse_dataset_kind(std::string_view name);
std::string_view to_string(DatasetKind kind);

struct DatasetSpec {
    DatasetKind kind = DatasetKind::grf_regression;
    std::size_t n_samples = 2000;
    std::size_t d_in = 20;
    std::size_t d_out = 20;    // output dim, or class count for blobs
    std::uint64_t seed = 0;
    double kernel_lengthscale = 0.0; // 0 ⇒ √d_in
    std::size_t n_features = 512;
    double test_fraction = 0.1;
    double blob_separation = 3.0;

    void validate() const;
    double lengthscale() const;
    /// Held-out count: round(n·test_fraction) clamped to [1, n − 1]. For
    /// linear_regression the test points are drawn in addition to the n
    /// training points.
    std::size_t n_test() const;
    std::size_t n_train() const;
};

struct SplitDataset {
    models::Batch train;
    models::Batch test;
    DatasetSpec spec;
};

/// Export with a one-line JSON header (the spec echo), then a CSV table
/// `split,x0..x{d-1},y0..y{k-1}` (or `label` for classification). Doubles are
/// written with 17 significant digits so import is exact.
void write_dataset_csv(std::ostream& out, const SplitDataset& ds);
SplitDataset read_dataset_csv(std::istream& in);

std::string spec_to_json(const DatasetSpec& spec);
DatasetSpec spec_from_json(std::string_view json);

} // namespace adago::data
