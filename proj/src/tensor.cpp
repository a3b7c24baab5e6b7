#include "scidyn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "scidyn/error.hpp"

namespace scidyn {

namespace {

void validate_axes(const std::vector<Axis>& axes) {
    if (axes.empty()) {
        throw Error(ErrorCode::InvalidArgument, "a tensor needs at least one axis");
    }
    std::set<std::string> names;
    for (const auto& axis : axes) {
        if (!names.insert(axis.name).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate axis name '" + axis.name + "'");
        }
        if (axis.categories.empty()) {
            throw Error(ErrorCode::InvalidArgument, "axis '" + axis.name + "' has no categories");
        }
        std::set<std::string> labels(axis.categories.begin(), axis.categories.end());
        if (labels.size() != axis.categories.size()) {
            throw Error(ErrorCode::InvalidArgument,
                        "duplicate category label on axis '" + axis.name + "'");
        }
    }
}

std::size_t product_of_sizes(const std::vector<Axis>& axes) {
    std::size_t n = 1;
    for (const auto& axis : axes) n *= axis.size();
    return n;
}

}  // namespace

std::size_t Axis::index_of(const std::string& category) const {
    auto it = std::find(categories.begin(), categories.end(), category);
    if (it == categories.end()) {
        throw Error(ErrorCode::InvalidArgument,
                    "category '" + category + "' not on axis '" + name + "'");
    }
    return static_cast<std::size_t>(it - categories.begin());
}

std::vector<std::string> numbered_labels(std::size_t count, const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) labels.push_back(prefix + std::to_string(i));
    return labels;
}

// CellStore

CellStore::CellStore(std::size_t cell_count, bool sparse) : cell_count_(cell_count) {
    if (sparse) {
        cells_ = Sparse{};
    } else {
        cells_ = Dense(cell_count, 0.0);
    }
}

double CellStore::get(std::size_t linear) const {
    if (linear >= cell_count_) throw Error(ErrorCode::InvalidArgument, "cell index out of range");
    if (const auto* dense = std::get_if<Dense>(&cells_)) return (*dense)[linear];
    const auto& sparse = std::get<Sparse>(cells_);
    auto it = sparse.find(linear);
    return it == sparse.end() ? 0.0 : it->second;
}

void CellStore::set(std::size_t linear, double value) {
    if (linear >= cell_count_) throw Error(ErrorCode::InvalidArgument, "cell index out of range");
    if (auto* dense = std::get_if<Dense>(&cells_)) {
        (*dense)[linear] = value;
        return;
    }
    auto& sparse = std::get<Sparse>(cells_);
    if (value == 0.0) {
        sparse.erase(linear);
    } else {
        sparse[linear] = value;
    }
}

void CellStore::add(std::size_t linear, double value) { set(linear, get(linear) + value); }

void CellStore::for_each_nonzero(const std::function<void(std::size_t, double)>& fn) const {
    if (const auto* dense = std::get_if<Dense>(&cells_)) {
        for (std::size_t i = 0; i < dense->size(); ++i) {
            if ((*dense)[i] != 0.0) fn(i, (*dense)[i]);
        }
        return;
    }
    for (const auto& [linear, value] : std::get<Sparse>(cells_)) fn(linear, value);
}

bool operator==(const CellStore& a, const CellStore& b) {
    if (a.cell_count_ != b.cell_count_) return false;
    std::vector<std::pair<std::size_t, double>> lhs;
    std::vector<std::pair<std::size_t, double>> rhs;
    a.for_each_nonzero([&](std::size_t i, double v) { lhs.emplace_back(i, v); });
    b.for_each_nonzero([&](std::size_t i, double v) { rhs.emplace_back(i, v); });
    return lhs == rhs;
}

// LabeledTensor

LabeledTensor::LabeledTensor(std::vector<Axis> axes, CellStore store)
    : axes_(std::move(axes)), strides_(axes_.size(), 1), store_(std::move(store)) {
    for (std::size_t k = axes_.size(); k-- > 1;) {
        strides_[k - 1] = strides_[k] * axes_[k].size();
    }
}

std::size_t LabeledTensor::axis_index(const std::string& name) const {
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        if (axes_[k].name == name) return k;
    }
    throw Error(ErrorCode::UnknownAxis, "no axis named '" + name + "'");
}

std::size_t LabeledTensor::linear_index(std::span<const std::size_t> index) const {
    if (index.size() != axes_.size()) {
        throw Error(ErrorCode::InvalidArgument, "index tuple needs one entry per axis");
    }
    std::size_t linear = 0;
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (index[k] >= axes_[k].size()) {
            throw Error(ErrorCode::InvalidArgument, "index out of range on axis '" + axes_[k].name + "'");
        }
        linear += index[k] * strides_[k];
    }
    return linear;
}

std::vector<std::size_t> LabeledTensor::unravel(std::size_t linear) const {
    std::vector<std::size_t> index(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        index[k] = linear / strides_[k];
        linear %= strides_[k];
    }
    return index;
}

double LabeledTensor::at(std::span<const std::size_t> index) const {
    return store_.get(linear_index(index));
}

double LabeledTensor::total() const {
    // Neumaier-compensated sum.
    double sum = 0.0;
    double compensation = 0.0;
    store_.for_each_nonzero([&](std::size_t, double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    });
    return sum + compensation;
}

std::vector<double> LabeledTensor::values() const {
    std::vector<double> out(cell_count(), 0.0);
    store_.for_each_nonzero([&](std::size_t i, double v) { out[i] = v; });
    return out;
}

// ContingencyTensor

ContingencyTensor ContingencyTensor::dense(std::vector<Axis> axes, std::vector<double> values,
                                           TensorOptions options) {
    validate_axes(axes);
    const std::size_t n = product_of_sizes(axes);
    if (values.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(n) + " cell values, got " +
                                                    std::to_string(values.size()));
    }
    CellStore store(n, n > options.dense_cell_limit);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
            throw Error(ErrorCode::NegativeCount, "cell " + std::to_string(i) + " is negative or not finite");
        }
        if (values[i] != 0.0) store.set(i, values[i]);
    }
    return ContingencyTensor(std::move(axes), std::move(store));
}

ContingencyTensor ContingencyTensor::from_cells(std::vector<Axis> axes, std::span<const Cell> cells,
                                                TensorOptions options) {
    validate_axes(axes);
    const std::size_t n = product_of_sizes(axes);
    ContingencyTensor tensor(std::move(axes), CellStore(n, n > options.dense_cell_limit));
    for (const auto& cell : cells) {
        if (!(cell.value >= 0.0) || !std::isfinite(cell.value)) {
            throw Error(ErrorCode::NegativeCount, "cell value is negative or not finite");
        }
        tensor.store_.add(tensor.linear_index(cell.index), cell.value);
    }
    return tensor;
}

// ProbabilityDistribution

ProbabilityDistribution::ProbabilityDistribution(std::vector<Axis> axes, CellStore store,
                                                 Provenance provenance)
    : LabeledTensor(std::move(axes), std::move(store)), provenance_(provenance) {}

ProbabilityDistribution ProbabilityDistribution::from_probabilities(std::vector<Axis> axes,
                                                                    std::vector<double> values,
                                                                    TensorOptions options) {
    validate_axes(axes);
    const std::size_t n = product_of_sizes(axes);
    if (values.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(n) + " probabilities, got " +
                                                    std::to_string(values.size()));
    }
    CellStore store(n, n > options.dense_cell_limit);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "probability outside [0, 1] at cell " + std::to_string(i));
        }
        sum += values[i];
        if (values[i] != 0.0) store.set(i, values[i]);
    }
    if (std::abs(sum - 1.0) > sum_tolerance) {
        throw Error(ErrorCode::InvalidArgument, "probabilities sum to " + std::to_string(sum));
    }
    return ProbabilityDistribution(std::move(axes), std::move(store), Provenance::Raw);
}

ProbabilityDistribution ProbabilityDistribution::vector(std::vector<double> values,
                                                        const std::string& axis_name) {
    std::vector<Axis> axes{{axis_name, numbered_labels(values.size())}};
    return from_probabilities(std::move(axes), std::move(values));
}

ProbabilityDistribution normalize(const ContingencyTensor& tensor) {
    const double mass = tensor.total();
    if (!(mass > 0.0)) throw Error(ErrorCode::ZeroMass, "tensor has zero total mass");
    CellStore store(tensor.cell_count(), tensor.is_sparse());
    tensor.for_each_nonzero([&](std::size_t i, double v) { store.set(i, v / mass); });
    return ProbabilityDistribution(tensor.axes(), std::move(store), Provenance::NormalizedFromCounts);
}

ProbabilityDistribution marginalize(const ProbabilityDistribution& dist,
                                    std::span<const std::string> keep_axes) {
    if (keep_axes.empty()) {
        throw Error(ErrorCode::InvalidArgument, "marginalize needs at least one axis to keep");
    }
    std::vector<bool> keep(dist.rank(), false);
    for (const auto& name : keep_axes) {
        const std::size_t k = dist.axis_index(name);
        if (keep[k]) throw Error(ErrorCode::InvalidArgument, "axis '" + name + "' listed twice");
        keep[k] = true;
    }

    std::vector<Axis> kept;
    std::vector<std::size_t> kept_positions;
    for (std::size_t k = 0; k < dist.rank(); ++k) {
        if (keep[k]) {
            kept.push_back(dist.axes()[k]);
            kept_positions.push_back(k);
        }
    }
    std::vector<std::size_t> out_strides(kept.size(), 1);
    for (std::size_t k = kept.size(); k-- > 1;) out_strides[k - 1] = out_strides[k] * kept[k].size();
    const std::size_t n = product_of_sizes(kept);

    TensorOptions defaults;
    CellStore store(n, dist.is_sparse() && n > defaults.dense_cell_limit);
    dist.for_each_nonzero([&](std::size_t linear, double v) {
        const auto index = dist.unravel(linear);
        std::size_t out = 0;
        for (std::size_t k = 0; k < kept_positions.size(); ++k) {
            out += index[kept_positions[k]] * out_strides[k];
        }
        store.add(out, v);
    });
    return ProbabilityDistribution(std::move(kept), std::move(store), dist.provenance());
}

}  // namespace scidyn
