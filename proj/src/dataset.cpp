// Copyright 2026 The qhybrid Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qhybrid/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "qhybrid/errors.hpp"
#include "qhybrid/random.hpp"
#include "qhybrid/tensor_file.hpp"

namespace qhybrid {

namespace {

using nlohmann::json;

template <class T> T manifest_field(const json &doc, const char *key) {
    if (!doc.contains(key)) {
        throw ManifestError(std::string("manifest is missing \"") + key + "\"");
    }
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ManifestError(std::string("manifest field \"") + key + "\": " + e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

template <class T> void shuffle(std::vector<T> &v, Rng &rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng.index(i)]);
    }
}

std::size_t held_out(std::size_t count, double train_fraction) {
    const auto n = static_cast<std::size_t>(std::llround((1.0 - train_fraction) * static_cast<double>(count)));
    return std::clamp<std::size_t>(n, 1, count - 1);
}

void check_fraction(double f) {
    if (!(f > 0.0 && f < 1.0)) {
        throw SplitError("train fraction must be in (0, 1)");
    }
}

} // namespace

DatasetManifest read_manifest(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ManifestError("cannot open manifest " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception &e) {
        throw ManifestError("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    DatasetManifest m;
    m.name = manifest_field<std::string>(doc, "name");
    m.modality = doc.value("modality", std::string{});
    m.channels = manifest_field<std::size_t>(doc, "channels");
    m.time = manifest_field<std::size_t>(doc, "time");
    m.num_classes = manifest_field<std::size_t>(doc, "num_classes");
    m.subjects = manifest_field<std::size_t>(doc, "subjects");
    for (const json &f : manifest_field<json>(doc, "files")) {
        m.files.push_back({manifest_field<std::string>(f, "tensor"), manifest_field<std::string>(f, "labels"),
                           manifest_field<int>(f, "subject")});
    }
    if (m.channels == 0 || m.time == 0 || m.num_classes < 2 || m.files.empty()) {
        throw ManifestError("manifest needs positive channels/time, num_classes >= 2 and at least one file");
    }
    return m;
}

void write_manifest(const std::filesystem::path &path, const DatasetManifest &m) {
    json files = json::array();
    for (const ManifestEntry &e : m.files) {
        files.push_back({{"tensor", e.tensor}, {"labels", e.labels}, {"subject", e.subject}});
    }
    const json doc = {{"name", m.name},         {"modality", m.modality},       {"channels", m.channels},
                      {"time", m.time},         {"num_classes", m.num_classes}, {"subjects", m.subjects},
                      {"files", std::move(files)}};
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write manifest " + path.string());
    }
    out << doc.dump(2) << '\n';
}

Tensor Dataset::gather(std::span<const std::size_t> indices) const {
    const std::size_t c = signals.dim(1), t = signals.dim(2);
    Tensor out({indices.size(), c, t});
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = signals.row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

std::vector<int> Dataset::gather_labels(std::span<const std::size_t> indices) const {
    std::vector<int> out(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out[i] = labels[indices[i]];
    }
    return out;
}

Dataset load_dataset(const std::filesystem::path &manifest_path) {
    Dataset ds;
    ds.manifest = read_manifest(manifest_path);
    const DatasetManifest &m = ds.manifest;
    const std::filesystem::path base = manifest_path.parent_path();

    std::vector<double> signal;
    for (const ManifestEntry &e : m.files) {
        const RawTensor x = read_tensor_file(resolve(base, e.tensor));
        const RawTensor y = read_tensor_file(resolve(base, e.labels));
        if (x.shape.size() != 3 || x.shape[1] != m.channels || x.shape[2] != m.time) {
            throw ManifestError(e.tensor + ": expected [trials, " + std::to_string(m.channels) + ", " +
                                std::to_string(m.time) + "]");
        }
        if (y.shape.size() != 1 || y.shape[0] != x.shape[0]) {
            throw ManifestError(e.labels + ": expected one label per trial");
        }
        for (const float v : x.data) {
            if (!std::isfinite(v)) {
                throw ManifestError(e.tensor + ": non-finite sample");
            }
        }
        for (const float v : y.data) {
            if (v != std::floor(v) || v < 0.0F || v >= static_cast<float>(m.num_classes)) {
                throw ManifestError(e.labels + ": label " + std::to_string(v) + " outside [0, " +
                                    std::to_string(m.num_classes) + ")");
            }
            ds.labels.push_back(static_cast<int>(v));
            ds.subjects.push_back(e.subject);
        }
        signal.insert(signal.end(), x.data.begin(), x.data.end());
    }
    ds.signals = Tensor({ds.labels.size(), m.channels, m.time}, std::move(signal));
    return ds;
}

void write_dataset(const std::filesystem::path &dir, const std::string &stem, const Dataset &dataset) {
    std::filesystem::create_directories(dir);
    DatasetManifest m = dataset.manifest;
    m.files.clear();
    std::map<int, std::vector<std::size_t>> by_subject;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        by_subject[dataset.subjects[i]].push_back(i);
    }
    for (const auto &[subject, idx] : by_subject) {
        const std::string tensor = stem + "_s" + std::to_string(subject) + ".qtns";
        const std::string labels = stem + "_s" + std::to_string(subject) + "_labels.qtns";
        write_tensor_file(dir / tensor, to_raw(dataset.gather(idx)));
        RawTensor y{{idx.size()}, {}};
        for (const std::size_t i : idx) {
            y.data.push_back(static_cast<float>(dataset.labels[i]));
        }
        write_tensor_file(dir / labels, y);
        m.files.push_back({tensor, labels, subject});
    }
    m.subjects = by_subject.size();
    write_manifest(dir / (stem + ".json"), m);
}

Split stratified_split(std::span<const int> labels, double train_fraction, std::uint64_t seed) {
    check_fraction(train_fraction);
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    Rng rng(seed);
    Split split;
    for (auto &[label, idx] : by_class) {
        if (idx.size() < 2) {
            throw SplitError("class " + std::to_string(label) + " has fewer than 2 trials");
        }
        shuffle(idx, rng);
        const std::size_t n_test = held_out(idx.size(), train_fraction);
        split.test.insert(split.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
        split.train.insert(split.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

Split split_dataset(const Dataset &dataset, const SplitOptions &options) {
    check_fraction(options.train_fraction);
    Split split;
    if (options.cross_subject) {
        std::vector<int> ids(dataset.subjects.begin(), dataset.subjects.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (ids.size() < 2) {
            throw SplitError("cross-subject split needs at least 2 subjects");
        }
        Rng rng(options.seed);
        shuffle(ids, rng);
        const std::set<int> test_ids(ids.begin(),
                                     ids.begin() + static_cast<std::ptrdiff_t>(held_out(ids.size(), options.train_fraction)));
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            (test_ids.contains(dataset.subjects[i]) ? split.test : split.train).push_back(i);
        }
    } else if (options.stratified) {
        split = stratified_split(dataset.labels, options.train_fraction, options.seed);
    } else {
        if (dataset.size() < 2) {
            throw SplitError("need at least 2 trials to split");
        }
        std::vector<std::size_t> idx(dataset.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            idx[i] = i;
        }
        Rng rng(options.seed);
        shuffle(idx, rng);
        const std::size_t n_test = held_out(idx.size(), options.train_fraction);
        split.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
        split.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
        std::sort(split.train.begin(), split.train.end());
        std::sort(split.test.begin(), split.test.end());
    }
    check_split(split, dataset.size());
    return split;
}

void check_split(const Split &split, std::size_t n) {
    std::vector<unsigned char> seen(n, 0);
    for (const auto *part : {&split.train, &split.test}) {
        for (const std::size_t i : *part) {
            if (i >= n || seen[i] != 0) {
                throw SplitError("train/test index sets overlap or contain an out-of-range index");
            }
            seen[i] = 1;
        }
    }
    if (split.train.size() + split.test.size() != n) {
        throw SplitError("train/test index sets do not cover the dataset");
    }
}

} // namespace qhybrid
