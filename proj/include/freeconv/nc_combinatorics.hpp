#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "freeconv/measure.hpp"

namespace freeconv {

__extension__ using BigCount = unsigned __int128;

std::string to_string(BigCount value);

inline constexpr int kMaxEnumerationOrder = 14;
inline constexpr int kMaxRecursionOrder = 32;
inline constexpr int kMaxNarayanaOrder = 60;

/// Partition of {1..n}. Stored as restricted-growth block labels: labels[i] is
/// the block index of element i + 1, blocks numbered by their smallest element.
class NcPartition {
public:
    explicit NcPartition(std::vector<std::uint8_t> labels);

    int size() const noexcept { return static_cast<int>(labels_.size()); }
    int block_count() const noexcept { return block_count_; }
    const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

    /// Blocks as sorted lists of 1-based elements, ordered by first element.
    std::vector<std::vector<int>> blocks() const;
    std::vector<int> block_sizes() const;

    bool is_non_crossing() const;

    friend bool operator==(const NcPartition&, const NcPartition&) = default;

private:
    std::vector<std::uint8_t> labels_;
    int block_count_ = 0;
};

struct CumulantVector {
    std::vector<double> values;  // alpha_1 .. alpha_K
    int order() const noexcept { return static_cast<int>(values.size()); }
};

/// Visits every non-crossing partition of {1..n} exactly once.
void for_each_nc(int n, const std::function<void(const NcPartition&)>& visit);
std::vector<NcPartition> enumerate_nc(int n);

/// Narayana number: non-crossing partitions of {1..n} with exactly s blocks.
BigCount count_nc_blocks(int n, int s);
BigCount catalan(int n);

enum class CumulantMethod { Recursion, Enumeration };

/// m_n = sum over NC(n) of the product of alpha_{|V|} over blocks V.
MomentVector cumulants_to_moments(const CumulantVector& alpha,
                                  CumulantMethod method = CumulantMethod::Recursion);
CumulantVector moments_to_cumulants(const MomentVector& m);

}  // namespace freeconv
