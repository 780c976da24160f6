#include "adago/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "adago/errors.hpp"

namespace adago::data {

using nlohmann::json;

DatasetKind parse_dataset_kind(std::string_view name) {
    if (name == "grf_regression" || name == "grf") return DatasetKind::grf_regression;
    if (name == "linear_regression" || name == "linear") return DatasetKind::linear_regression;
    if (name == "gaussian_blobs" || name == "blobs") return DatasetKind::gaussian_blobs;
    throw ConfigError("unknown dataset kind '" + std::string(name) + "'");
}

std::string_view to_string(DatasetKind kind) {
    switch (kind) {
    case DatasetKind::linear_regression: return "linear_regression";
    case DatasetKind::gaussian_blobs: return "gaussian_blobs";
    case DatasetKind::grf_regression: break;
    }
    return "grf_regression";
}

void DatasetSpec::validate() const {
    if (n_samples < 1) throw ConfigError("dataset: n_samples must be at least 1");
    if (d_in < 1 || d_out < 1) throw ConfigError("dataset: dimensions must be positive");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("dataset: test_fraction must lie in (0, 1)");
    if (kernel_lengthscale < 0.0 || !std::isfinite(kernel_lengthscale))
        throw ConfigError("dataset: kernel_lengthscale must be positive (0 selects the default)");
    if (kind == DatasetKind::grf_regression && n_features < 1) throw ConfigError("dataset: n_features must be positive");
    if (kind != DatasetKind::linear_regression && n_samples < 2)
        throw ConfigError("dataset: need at least two samples to hold one out");
}

double DatasetSpec::lengthscale() const {
    return kernel_lengthscale > 0.0 ? kernel_lengthscale : std::sqrt(static_cast<double>(d_in));
}

std::size_t DatasetSpec::n_test() const {
    const auto raw = static_cast<std::size_t>(std::llround(static_cast<double>(n_samples) * test_fraction));
    if (kind == DatasetKind::linear_regression) return std::max<std::size_t>(raw, 1);
    return std::clamp<std::size_t>(raw, 1, n_samples - 1);
}

std::size_t DatasetSpec::n_train() const {
    return kind == DatasetKind::linear_regression ? n_samples : n_samples - n_test();
}

namespace {

json spec_json(const DatasetSpec& s) {
    return json{{"kind", to_string(s.kind)},
                {"n_samples", s.n_samples},
                {"d_in", s.d_in},
                {"d_out", s.d_out},
                {"seed", s.seed},
                {"kernel_lengthscale", s.kernel_lengthscale},
                {"n_features", s.n_features},
                {"test_fraction", s.test_fraction},
                {"blob_separation", s.blob_separation}};
}

void write_rows(std::ostream& out, const char* split, const models::Batch& b, bool classify) {
    char buf[32];
    for (std::size_t i = 0; i < b.size(); ++i) {
        out << split;
        for (double x : b.inputs.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << ',' << buf;
        }
        if (classify) {
            out << ',' << b.labels[i];
        } else {
            for (double y : b.targets.row(i)) {
                std::snprintf(buf, sizeof buf, "%.17g", y);
                out << ',' << buf;
            }
        }
        out << '\n';
    }
}

} // namespace

std::string spec_to_json(const DatasetSpec& spec) { return spec_json(spec).dump(); }

DatasetSpec spec_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        DatasetSpec s;
        s.kind = parse_dataset_kind(j.at("kind").get<std::string>());
        s.n_samples = j.at("n_samples").get<std::size_t>();
        s.d_in = j.at("d_in").get<std::size_t>();
        s.d_out = j.at("d_out").get<std::size_t>();
        s.seed = j.at("seed").get<std::uint64_t>();
        s.kernel_lengthscale = j.value("kernel_lengthscale", 0.0);
        s.n_features = j.value("n_features", std::size_t{512});
        s.test_fraction = j.at("test_fraction").get<double>();
        s.blob_separation = j.value("blob_separation", 3.0);
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("dataset spec JSON: ") + e.what());
    }
}

void write_dataset_csv(std::ostream& out, const SplitDataset& ds) {
    const bool classify = ds.spec.kind == DatasetKind::gaussian_blobs;
    out << spec_to_json(ds.spec) << '\n';
    out << "split";
    for (std::size_t j = 0; j < ds.spec.d_in; ++j) out << ",x" << j;
    if (classify) {
        out << ",label";
    } else {
        for (std::size_t k = 0; k < ds.spec.d_out; ++k) out << ",y" << k;
    }
    out << '\n';
    write_rows(out, "train", ds.train, classify);
    write_rows(out, "test", ds.test, classify);
}

SplitDataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("dataset CSV: missing JSON header");
    SplitDataset ds;
    ds.spec = spec_from_json(line);
    if (!std::getline(in, line)) throw InvalidInput("dataset CSV: missing column header");

    const bool classify = ds.spec.kind == DatasetKind::gaussian_blobs;
    const std::size_t d_in = ds.spec.d_in;
    const std::size_t width = classify ? 1 : ds.spec.d_out;
    std::vector<double> xs[2], ys[2];
    std::vector<int> labels[2];
    std::size_t counts[2] = {0, 0};

    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        std::getline(fields, cell, ',');
        int which;
        if (cell == "train") which = 0;
        else if (cell == "test") which = 1;
        else throw InvalidInput("dataset CSV: bad split on line " + std::to_string(line_no));
        std::vector<double> values;
        while (std::getline(fields, cell, ',')) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InvalidInput("dataset CSV: bad number on line " + std::to_string(line_no));
            }
        }
        if (values.size() != d_in + width)
            throw InvalidInput("dataset CSV: wrong column count on line " + std::to_string(line_no));
        xs[which].insert(xs[which].end(), values.begin(), values.begin() + static_cast<std::ptrdiff_t>(d_in));
        if (classify) labels[which].push_back(static_cast<int>(values.back()));
        else ys[which].insert(ys[which].end(), values.begin() + static_cast<std::ptrdiff_t>(d_in), values.end());
        ++counts[which];
    }
    models::Batch* parts[2] = {&ds.train, &ds.test};
    for (int w = 0; w < 2; ++w) {
        parts[w]->inputs = Matrix(counts[w], d_in, std::move(xs[w]));
        if (classify) parts[w]->labels = std::move(labels[w]);
        else parts[w]->targets = Matrix(counts[w], width, std::move(ys[w]));
    }
    return ds;
}

} // namespace adago::data
