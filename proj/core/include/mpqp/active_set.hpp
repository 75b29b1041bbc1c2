#ifndef MPQP_ACTIVE_SET_HPP_
#define MPQP_ACTIVE_SET_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "mpqp/errors.hpp"

namespace mpqp {

/// A strictly increasing, duplicate-free set of constraint indices.
/// Indices are 0-based internally; serialization and human-facing output
/// use 1-based indices, converted at the boundary.
class ActiveSet {
public:
  ActiveSet() = default;

  explicit ActiveSet(std::vector<std::size_t> zero_based) : idx_(std::move(zero_based)) {
    for (std::size_t k = 0; k + 1 < idx_.size(); ++k)
      if (idx_[k] >= idx_[k + 1])
        throw InvalidInput("ActiveSet: indices must be strictly increasing");
  }

  static ActiveSet from_one_based(const std::vector<std::size_t>& one_based) {
    std::vector<std::size_t> z;
    z.reserve(one_based.size());
    for (std::size_t i : one_based) {
      if (i == 0) throw InvalidInput("ActiveSet: 1-based index cannot be zero");
      z.push_back(i - 1);
    }
    return ActiveSet(std::move(z));
  }

  const std::vector<std::size_t>& indices() const { return idx_; }

  std::vector<std::size_t> one_based() const {
    std::vector<std::size_t> o;
    o.reserve(idx_.size());
    for (std::size_t i : idx_) o.push_back(i + 1);
    return o;
  }

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }

  bool contains(std::size_t zero_based) const {
    for (std::size_t i : idx_)
      if (i == zero_based) return true;
    return false;
  }

  /// Indices in {0, ..., m-1} not in this set, ascending.
  std::vector<std::size_t> complement(std::size_t m) const {
    std::vector<std::size_t> out;
    out.reserve(m - idx_.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (k < idx_.size() && idx_[k] == i) {
        ++k;
      } else {
        out.push_back(i);
      }
    }
    return out;
  }

  /// 1-based rendering such as "{}", "{1}" or "{1,3}".
  std::string to_string(char sep = ',') const {
    std::string s = "{";
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      if (k > 0) s += sep;
      s += std::to_string(idx_[k] + 1);
    }
    s += "}";
    return s;
  }

  friend bool operator==(const ActiveSet&, const ActiveSet&) = default;

  /// Lexicographic order on the index sequences.
  friend bool operator<(const ActiveSet& a, const ActiveSet& b) { return a.idx_ < b.idx_; }

private:
  std::vector<std::size_t> idx_;
};

}  // namespace mpqp

#endif  // MPQP_ACTIVE_SET_HPP_
