// Upper-block-triangular dense matrices over pattern ids.
//
// Pairwise tables are only meaningful for end(row) < end(col), so row r stores
// columns [col_begin(r), P) where col_begin(r) is the first id of the next end
// block.  row(r) returns a virtual-origin pointer indexed by absolute column
// id, which keeps block loops free of per-access offset arithmetic.

#pragma once

#include <cstddef>
#include <vector>

#include "pgi/pattern.hpp"

namespace pgi {

template <typename T>
class TriMatrix {
 public:
  TriMatrix() = default;
  TriMatrix(const PatternIndex& index, T fill) {
    P_ = index.count();
    cb_.resize(P_);
    off_.resize(P_);
    std::size_t total = 0;
    for (int r = 0; r < P_; ++r) {
      cb_[r] = index.block_end(index.end_of(r));
      off_[r] = total;
      total += static_cast<std::size_t>(P_ - cb_[r]);
    }
    data_.assign(total, fill);
  }

  int ids() const { return P_; }
  int col_begin(int r) const { return cb_[r]; }
  std::size_t size() const { return data_.size(); }

  // Pointer to the row segment starting at column c0 (requires c0 >=
  // col_begin(r)); element t of the result is column c0 + t.
  T* row_from(int r, int c0) { return data_.data() + off_[r] + static_cast<std::size_t>(c0 - cb_[r]); }
  const T* row_from(int r, int c0) const {
    return data_.data() + off_[r] + static_cast<std::size_t>(c0 - cb_[r]);
  }

  T& at(int r, int c) { return data_[off_[r] + (c - cb_[r])]; }
  const T& at(int r, int c) const { return data_[off_[r] + (c - cb_[r])]; }

  void fill(T value) { data_.assign(data_.size(), value); }
  std::vector<T>& raw() { return data_; }
  const std::vector<T>& raw() const { return data_; }

 private:
  int P_ = 0;
  std::vector<int> cb_;
  std::vector<std::size_t> off_;
  std::vector<T> data_;
};

}  // namespace pgi
