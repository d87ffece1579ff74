#pragma once

// Type-threshold functions: symmetric functions of a symbol multiset that
// depend only on the per-symbol occurrence counts clipped at a threshold
// vector theta. The reducer is an explicit table over the clipped box
// prod_l [0:theta_l], so two functions are equal iff their tables are.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ttcomp {

// Occurrence counts of each alphabet symbol in a realization.
struct TypeVector {
    std::vector<int> counts;  // counts[v] = #{i : s_i = v}, length q

    bool operator==(const TypeVector&) const = default;
};

// Output of the average-of-top-values family: an unreduced (sum, count) pair.
struct SumCount {
    std::int64_t sum{0};
    std::int64_t count{0};

    auto operator<=>(const SumCount&) const = default;
};

// Function outputs: an integer, a subset of the alphabet (sorted), or a
// (sum, count) pair.
using Label = std::variant<std::int64_t, std::vector<int>, SumCount>;

std::string label_to_string(const Label& label);

enum class StandardKind {
    maximum,              // theta = (0,1,...,1)
    distinct_count,       // theta = (1,...,1)
    avg_top,              // theta = (0,L,...,L); param = L
    frequency_indicator,  // theta = e_l; param = l
    heavy_hitters,        // theta = (T,...,T); param = T
};

class TypeThresholdFunction {
  public:
    // table is indexed over the clipped box in mixed-radix order with
    // coordinate 0 fastest: index(c) = sum_l c_l * prod_{j<l} (theta_j + 1).
    // Its length must equal prod_l (theta_l + 1), which must not exceed
    // table_cap.
    TypeThresholdFunction(int q, std::vector<int> theta, std::vector<Label> table,
                          std::size_t table_cap = kDefaultTableCap);

    static constexpr std::size_t kDefaultTableCap = std::size_t(1) << 20;

    int q() const { return q_; }
    const std::vector<int>& theta() const { return theta_; }
    const std::vector<Label>& table() const { return table_; }

    // Size of the clipped box.
    std::size_t box_size() const { return table_.size(); }

    // Mixed-radix index of a clipped count vector.
    std::size_t box_index(std::span<const int> clipped) const;

    // Decode an index back to a clipped count vector.
    std::vector<int> box_point(std::size_t index) const;

    // Look up the label of a clipped count vector.
    const Label& reduce(std::span<const int> clipped) const;

    // min(theta_v, counts_v) per coordinate.
    std::vector<int> clip(const TypeVector& type) const;

  private:
    int q_;
    std::vector<int> theta_;
    std::vector<std::size_t> stride_;
    std::vector<Label> table_;
};

// Occurrence counts of each symbol of [0:q-1] in the realization.
TypeVector type_vector(std::span<const int> symbols, int q);

// Function value on a full realization: clip(type_vector(s)) fed through the
// reducer table.
Label evaluate(const TypeThresholdFunction& f, std::span<const int> symbols);

// Builds the named function. param carries L for avg_top, the symbol for
// frequency_indicator, and T for heavy_hitters; it is ignored otherwise.
TypeThresholdFunction standard_function(StandardKind kind, int q, int param = 0,
                                        std::size_t table_cap = TypeThresholdFunction::kDefaultTableCap);

}  // namespace ttcomp
