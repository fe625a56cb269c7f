#include "freeconv/nc_combinatorics.hpp"

#include <algorithm>

#include "freeconv/error.hpp"

namespace freeconv {

std::string to_string(BigCount value) {
    if (value == 0) return "0";
    std::string digits;
    while (value > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

NcPartition::NcPartition(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
    int next = 0;
    for (auto label : labels_) {
        if (label > next) throw Error(ErrorCode::InvalidArgument, "labels are not a restricted growth string");
        if (label == next) ++next;
    }
    block_count_ = next;
}

std::vector<std::vector<int>> NcPartition::blocks() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(block_count_));
    for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(static_cast<int>(i) + 1);
    return out;
}

std::vector<int> NcPartition::block_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(block_count_), 0);
    for (auto label : labels_) ++sizes[label];
    return sizes;
}

bool NcPartition::is_non_crossing() const {
    const int n = size();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                if (labels_[a] != labels_[c] || labels_[a] == labels_[b]) continue;
                for (int d = c + 1; d < n; ++d) {
                    if (labels_[d] == labels_[b]) return false;
                }
            }
    return true;
}

namespace {

// Blocks that element i may still join form a stack: joining a block closes
// every block opened after it, and opening a block pushes it.
void generate(int i, int n, std::vector<std::uint8_t>& labels, std::vector<std::uint8_t>& stack,
              std::uint8_t blocks, const std::function<void(const NcPartition&)>& visit) {
    if (i == n) {
        visit(NcPartition(labels));
        return;
    }
    const std::vector<std::uint8_t> saved = stack;
    for (std::size_t p = 0; p < saved.size(); ++p) {
        labels[i] = saved[p];
        stack.assign(saved.begin(), saved.begin() + static_cast<std::ptrdiff_t>(p) + 1);
        generate(i + 1, n, labels, stack, blocks, visit);
    }
    labels[i] = blocks;
    stack = saved;
    stack.push_back(blocks);
    generate(i + 1, n, labels, stack, static_cast<std::uint8_t>(blocks + 1), visit);
    stack = saved;
}

BigCount binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigCount result = 1;
    for (int i = 1; i <= k; ++i) result = result * static_cast<BigCount>(n - k + i) / static_cast<BigCount>(i);
    return result;
}

}  // namespace

void for_each_nc(int n, const std::function<void(const NcPartition&)>& visit) {
    if (n < 1) throw Error(ErrorCode::OutOfRange, "partition size must be >= 1");
    if (n > kMaxEnumerationOrder) {
        throw Error(ErrorCode::NTooLarge, "enumeration limited to n <= " + std::to_string(kMaxEnumerationOrder));
    }
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> stack;
    generate(0, n, labels, stack, 0, visit);
}

std::vector<NcPartition> enumerate_nc(int n) {
    std::vector<NcPartition> out;
    if (n >= 1 && n <= kMaxEnumerationOrder) out.reserve(static_cast<std::size_t>(catalan(n)));
    for_each_nc(n, [&](const NcPartition& p) { out.push_back(p); });
    return out;
}

BigCount count_nc_blocks(int n, int s) {
    if (n < 1 || n > kMaxNarayanaOrder || s < 1 || s > n) {
        throw Error(ErrorCode::OutOfRange, "need 1 <= s <= n <= " + std::to_string(kMaxNarayanaOrder));
    }
    return binomial(n, s) * binomial(n, s - 1) / static_cast<BigCount>(n);
}

BigCount catalan(int n) {
    if (n < 0 || n > kMaxNarayanaOrder) throw Error(ErrorCode::OutOfRange, "catalan index out of range");
    BigCount c = 1;
    for (int k = 0; k < n; ++k) c = c * static_cast<BigCount>(2 * (2 * k + 1)) / static_cast<BigCount>(k + 2);
    return c;
}

namespace {

// Extended precision for the recursions: high moments are large and the
// inverse recursion cancels them down to O(1) cumulants.
using Wide = long double;

// compositions[s][j] = sum over i_1 + ... + i_s = j of m_{i_1} ... m_{i_s}, m_0 = 1.
std::vector<std::vector<Wide>> composition_sums(const std::vector<Wide>& m_with_zero, int max_s, int max_j) {
    std::vector<std::vector<Wide>> p(static_cast<std::size_t>(max_s) + 1,
                                     std::vector<Wide>(static_cast<std::size_t>(max_j) + 1, 0.0L));
    p[0][0] = 1.0L;
    for (int s = 1; s <= max_s; ++s) {
        for (int j = 0; j <= max_j; ++j) {
            Wide acc = 0.0L;
            for (int i = 0; i <= j; ++i) acc += p[s - 1][j - i] * m_with_zero[i];
            p[s][j] = acc;
        }
    }
    return p;
}

}  // namespace

MomentVector cumulants_to_moments(const CumulantVector& alpha, CumulantMethod method) {
    const int order = alpha.order();
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "empty cumulant vector");
    const int limit = method == CumulantMethod::Enumeration ? kMaxEnumerationOrder : kMaxRecursionOrder;
    if (order > limit) {
        throw Error(ErrorCode::OrderTooLarge, "order " + std::to_string(order) + " exceeds " + std::to_string(limit));
    }

    std::vector<Wide> m(static_cast<std::size_t>(order) + 1, 0.0L);
    m[0] = 1.0L;
    if (method == CumulantMethod::Enumeration) {
        for (int n = 1; n <= order; ++n) {
            double sum = 0.0;
            for_each_nc(n, [&](const NcPartition& part) {
                double prod = 1.0;
                for (int size : part.block_sizes()) prod *= alpha.values[size - 1];
                sum += prod;
            });
            m[n] = sum;
        }
    } else {
        // Group by the block containing 1: it has s elements and leaves s gaps,
        // each filled by an arbitrary non-crossing partition.
        for (int n = 1; n <= order; ++n) {
            const auto p = composition_sums(m, n, n - 1);
            Wide sum = 0.0L;
            for (int s = 1; s <= n; ++s) sum += Wide(alpha.values[s - 1]) * p[s][n - s];
            m[n] = sum;
        }
    }
    MomentVector out;
    for (int k = 1; k <= order; ++k) {
        out.values.push_back(static_cast<double>(m[k]));
        out.residuals.push_back(static_cast<double>(m[k] - Wide(out.values.back())));
    }
    return out;
}

CumulantVector moments_to_cumulants(const MomentVector& moments) {
    const int order = moments.order();
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "empty moment vector");
    if (order > kMaxRecursionOrder) {
        throw Error(ErrorCode::OrderTooLarge,
                    "order " + std::to_string(order) + " exceeds " + std::to_string(kMaxRecursionOrder));
    }
    std::vector<Wide> m(static_cast<std::size_t>(order) + 1);
    m[0] = 1.0L;
    const bool split = moments.residuals.size() == moments.values.size();
    for (int k = 1; k <= order; ++k) {
        m[k] = moments.values[k - 1];
        if (split) m[k] += moments.residuals[k - 1];
    }
    const auto p = composition_sums(m, order, order);
    std::vector<Wide> alpha(static_cast<std::size_t>(order));
    for (int n = 1; n <= order; ++n) {
        Wide rest = 0.0L;
        for (int s = 1; s < n; ++s) rest += alpha[s - 1] * p[s][n - s];
        alpha[n - 1] = m[n] - rest;
    }
    return CumulantVector{std::vector<double>(alpha.begin(), alpha.end())};
}

}  // namespace freeconv
