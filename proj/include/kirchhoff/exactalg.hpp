#ifndef KIRCHHOFF_EXACTALG_HPP
#define KIRCHHOFF_EXACTALG_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kirchhoff {

using BigInt = boost::multiprecision::cpp_int;
// Always stored in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<std::int64_t>;

class AlgebraError : public std::runtime_error {
 public:
  enum class Kind {
    rank_deficient,
    parallel_columns,
    degenerate_shape,
    zero_row_in_c,
    not_row_form,
    length_mismatch,
    overflow,
  };

  AlgebraError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(AlgebraError::Kind kind);

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static RationalMatrix from_rows(
      std::initializer_list<std::initializer_list<Rational>> rows);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  bool operator==(const RationalMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

// Dense row-major integer matrix. Entries are checked to fit in 64 bits when
// produced from exact arithmetic.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::int64_t& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  IntVector row(std::size_t r) const;
  IntVector column(std::size_t c) const;
  std::vector<IntVector> row_list() const;

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> entries_;
};

struct RrefResult {
  RationalMatrix form;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

RrefResult rref(const RationalMatrix& m);

// The integer row matrix R = [qI | C] and null matrix N = [C / -qI] for a set
// of n edge vectors whose first k members form a basis of their span.
class RowSystem {
 public:
  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::int64_t q() const noexcept { return q_; }

  const IntMatrix& row_matrix() const noexcept { return r_; }
  const IntMatrix& coefficient_matrix() const noexcept { return c_; }
  const IntMatrix& null_matrix() const noexcept { return null_; }

  // Lattice displacement of edge vector i (column i of R).
  IntVector edge_vector(std::size_t i) const { return r_.column(i); }

  bool operator==(const RowSystem& other) const { return r_ == other.r_; }

  friend RowSystem build_row_system(const RationalMatrix& edge_matrix);
  friend RowSystem row_system_from_row_matrix(const RationalMatrix& r);

 private:
  RowSystem(std::int64_t q, IntMatrix c);

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::int64_t q_ = 1;
  IntMatrix r_;
  IntMatrix c_;
  IntMatrix null_;
};

// Edge-vector view: columns of edge_matrix are s_1..s_n, k = number of rows.
RowSystem build_row_system(const RationalMatrix& edge_matrix);

// Row-matrix view: r must already have the integer block form [qI | C].
RowSystem row_system_from_row_matrix(const RationalMatrix& r);

bool in_row_space(std::span<const std::int64_t> x, const RowSystem& sys);
bool in_null_space(std::span<const std::int64_t> x, const RowSystem& sys);

// All integer n-vectors in the rational row space with max-norm <= bound,
// including zero, sorted lexicographically.
std::vector<IntVector> enumerate_bounded_cuts(const RowSystem& sys, std::int64_t bound);

std::size_t span_rank(const std::vector<IntVector>& vectors);

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

}  // namespace kirchhoff

#endif  // KIRCHHOFF_EXACTALG_HPP
