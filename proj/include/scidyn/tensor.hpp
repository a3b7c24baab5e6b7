#pragma once

// Labeled multidimensional tensors: raw counts (ContingencyTensor) and their
// normalized form (ProbabilityDistribution).
//
// Cells are addressed by a full index tuple (one category index per axis) or
// by the row-major linear offset of that tuple. Storage is dense up to a
// configurable cell count and a sparse ordered map above it; both layouts
// expose the same interface and keep zero cells part of the shape, so the
// cardinality of every axis is stable regardless of the data.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace scidyn {

struct Axis {
    std::string name;
    std::vector<std::string> categories;

    std::size_t size() const noexcept { return categories.size(); }
    std::size_t index_of(const std::string& category) const;  // throws InvalidArgument

    friend bool operator==(const Axis&, const Axis&) = default;
};

struct TensorOptions {
    /// Tensors with more cells than this are stored sparsely.
    std::size_t dense_cell_limit = 1'000'000;
};

/// Row-major cell storage, either dense or sparse.
class CellStore {
  public:
    CellStore() = default;
    CellStore(std::size_t cell_count, bool sparse);

    std::size_t cell_count() const noexcept { return cell_count_; }
    bool sparse() const noexcept { return std::holds_alternative<Sparse>(cells_); }

    double get(std::size_t linear) const;
    void set(std::size_t linear, double value);
    void add(std::size_t linear, double value);

    /// Visits every cell whose value is non-zero, in increasing linear order.
    void for_each_nonzero(const std::function<void(std::size_t, double)>& fn) const;

    friend bool operator==(const CellStore& a, const CellStore& b);

  private:
    using Dense = std::vector<double>;
    using Sparse = std::map<std::size_t, double>;

    std::size_t cell_count_ = 0;
    std::variant<Dense, Sparse> cells_;
};

/// Shape + values shared by counts and probabilities. Not constructed directly
/// by users; see ContingencyTensor and ProbabilityDistribution.
class LabeledTensor {
  public:
    const std::vector<Axis>& axes() const noexcept { return axes_; }
    std::size_t rank() const noexcept { return axes_.size(); }
    std::size_t cell_count() const noexcept { return store_.cell_count(); }
    bool is_sparse() const noexcept { return store_.sparse(); }

    /// Position of the named axis; throws UnknownAxis.
    std::size_t axis_index(const std::string& name) const;

    double at(std::span<const std::size_t> index) const;
    double at_linear(std::size_t linear) const { return store_.get(linear); }
    double total() const;

    std::size_t linear_index(std::span<const std::size_t> index) const;
    std::vector<std::size_t> unravel(std::size_t linear) const;

    void for_each_nonzero(const std::function<void(std::size_t, double)>& fn) const {
        store_.for_each_nonzero(fn);
    }

    /// All cell values in row-major order (zeros included).
    std::vector<double> values() const;

    bool same_shape(const LabeledTensor& other) const { return axes_ == other.axes_; }

    friend bool operator==(const LabeledTensor&, const LabeledTensor&) = default;

  protected:
    LabeledTensor(std::vector<Axis> axes, CellStore store);

    std::vector<Axis> axes_;
    std::vector<std::size_t> strides_;
    CellStore store_;
};

/// One (index tuple, value) pair used to build tensors cell by cell.
struct Cell {
    std::vector<std::size_t> index;
    double value = 0.0;
};

class ContingencyTensor : public LabeledTensor {
  public:
    /// Builds from row-major values. Throws InvalidArgument on a shape
    /// mismatch or duplicate labels and NegativeCount on a negative cell.
    static ContingencyTensor dense(std::vector<Axis> axes, std::vector<double> values,
                                   TensorOptions options = {});

    /// Builds from an explicit cell list; duplicate index tuples are summed.
    static ContingencyTensor from_cells(std::vector<Axis> axes, std::span<const Cell> cells,
                                        TensorOptions options = {});

  private:
    using LabeledTensor::LabeledTensor;
};

enum class Provenance { Raw, NormalizedFromCounts };

class ProbabilityDistribution : public LabeledTensor {
  public:
    static constexpr double sum_tolerance = 1e-9;

    /// Wraps explicit probabilities; throws InvalidArgument unless every cell
    /// is in [0, 1] and the cells sum to 1 within sum_tolerance.
    static ProbabilityDistribution from_probabilities(std::vector<Axis> axes,
                                                      std::vector<double> values,
                                                      TensorOptions options = {});

    /// Convenience for one-axis distributions with generated labels c0, c1, ...
    static ProbabilityDistribution vector(std::vector<double> values,
                                          const std::string& axis_name = "x");

    Provenance provenance() const noexcept { return provenance_; }

  private:
    ProbabilityDistribution(std::vector<Axis> axes, CellStore store, Provenance provenance);

    Provenance provenance_ = Provenance::Raw;

    friend ProbabilityDistribution normalize(const ContingencyTensor& tensor);
    friend ProbabilityDistribution marginalize(const ProbabilityDistribution& dist,
                                               std::span<const std::string> keep_axes);
};

/// Divides every cell by the total mass. Throws ZeroMass when the total is 0.
ProbabilityDistribution normalize(const ContingencyTensor& tensor);

/// Sums out every axis not listed in keep_axes. The result keeps the kept axes
/// in their original order. Throws UnknownAxis / InvalidArgument.
ProbabilityDistribution marginalize(const ProbabilityDistribution& dist,
                                    std::span<const std::string> keep_axes);

/// Generates labels "<prefix>0", "<prefix>1", ...
std::vector<std::string> numbered_labels(std::size_t count, const std::string& prefix = "c");

}  // namespace scidyn
