#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

#include "singmat/arith.hpp"
#include "singmat/base.hpp"

namespace singmat {

// An integer vector in ambient dimension dim() with cached squared norm.
class IntVec {
 public:
  IntVec() = default;
  explicit IntVec(std::vector<Int> coords) : c_(std::move(coords)) {
    if (c_.empty()) throw std::invalid_argument("IntVec: dimension must be >= 1");
    Wide n = 0;
    for (Int x : c_) n += (Wide)x * x;
    norm_sq_ = (Int)n;
  }
  IntVec(std::initializer_list<Int> coords) : IntVec(std::vector<Int>(coords)) {}

  int dim() const { return int(c_.size()); }
  const std::vector<Int>& coords() const { return c_; }
  Int operator[](int i) const { return c_[size_t(i)]; }
  Int norm_sq() const { return norm_sq_; }

  bool is_zero() const { return norm_sq_ == 0; }
  bool is_primitive() const { return arith::gcd_vec(c_) == 1; }

  IntVec negated() const {
    std::vector<Int> r(c_);
    for (Int& x : r) x = -x;
    return IntVec(std::move(r));
  }

  std::string str() const {
    std::string s = "(";
    for (size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + ")";
  }

  bool operator==(const IntVec& o) const { return c_ == o.c_; }
  auto operator<=>(const IntVec& o) const { return c_ <=> o.c_; }

 private:
  std::vector<Int> c_;
  Int norm_sq_ = 0;
};

inline Int dot(const IntVec& a, const IntVec& b) {
  Wide s = 0;
  for (int i = 0; i < a.dim(); ++i) s += (Wide)a[i] * b[i];
  return (Int)s;
}

inline IntVec cross3(const IntVec& a, const IntVec& b) {
  return IntVec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace singmat
