#include "kirchhoff/exactalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace kirchhoff {

namespace {

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw AlgebraError(AlgebraError::Kind::overflow,
                       "matrix entry does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

bool columns_parallel(const RationalMatrix& m, std::size_t a, std::size_t b) {
  // Columns a and b are dependent iff every 2x2 minor vanishes.
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t s = r + 1; s < m.rows(); ++s) {
      if (m(r, a) * m(s, b) != m(s, a) * m(r, b)) return false;
    }
  }
  return true;
}

void check_shape(std::size_t k, std::size_t n) {
  if (k <= 1 || k >= n) {
    std::ostringstream os;
    os << "need 1 < k < n, got k=" << k << " n=" << n;
    throw AlgebraError(AlgebraError::Kind::degenerate_shape, os.str());
  }
}

void check_parallel(const RationalMatrix& m) {
  for (std::size_t a = 0; a < m.cols(); ++a) {
    for (std::size_t b = a + 1; b < m.cols(); ++b) {
      if (columns_parallel(m, a, b)) {
        std::ostringstream os;
        os << "edge vectors s" << a + 1 << " and s" << b + 1 << " are parallel";
        throw AlgebraError(AlgebraError::Kind::parallel_columns, os.str());
      }
    }
  }
}

void check_zero_rows(const IntMatrix& c) {
  for (std::size_t r = 0; r < c.rows(); ++r) {
    bool all_zero = true;
    for (std::size_t j = 0; j < c.cols(); ++j) all_zero = all_zero && c(r, j) == 0;
    if (all_zero) {
      std::ostringstream os;
      os << "row " << r + 1 << " of C is zero; the system is not vector 2-connected";
      throw AlgebraError(AlgebraError::Kind::zero_row_in_c, os.str());
    }
  }
}

}  // namespace

const char* to_string(AlgebraError::Kind kind) {
  switch (kind) {
    case AlgebraError::Kind::rank_deficient: return "RankDeficient";
    case AlgebraError::Kind::parallel_columns: return "ParallelColumns";
    case AlgebraError::Kind::degenerate_shape: return "DegenerateShape";
    case AlgebraError::Kind::zero_row_in_c: return "ZeroRowInC";
    case AlgebraError::Kind::not_row_form: return "NotRowForm";
    case AlgebraError::Kind::length_mismatch: return "LengthMismatch";
    case AlgebraError::Kind::overflow: return "Overflow";
  }
  return "Unknown";
}

RationalMatrix RationalMatrix::from_rows(
    std::initializer_list<std::initializer_list<Rational>> rows) {
  std::vector<std::vector<Rational>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v);
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RationalMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw AlgebraError(AlgebraError::Kind::length_mismatch, "ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::from_rows(
    std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  IntMatrix m(rows.size(), cols);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols) {
      throw AlgebraError(AlgebraError::Kind::length_mismatch, "ragged matrix rows");
    }
    std::size_t c = 0;
    for (auto v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<IntVector> IntMatrix::row_list() const {
  std::vector<IntVector> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

RrefResult rref(const RationalMatrix& m) {
  RrefResult result{m, {}, 0};
  RationalMatrix& a = result.form;
  std::size_t lead_row = 0;
  for (std::size_t col = 0; col < a.cols() && lead_row < a.rows(); ++col) {
    std::size_t pivot = lead_row;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != lead_row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(pivot, c), a(lead_row, c));
    }
    const Rational inv = 1 / a(lead_row, col);
    for (std::size_t c = col; c < a.cols(); ++c) a(lead_row, c) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == lead_row || a(r, col) == 0) continue;
      const Rational factor = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) a(r, c) -= factor * a(lead_row, c);
    }
    result.pivots.push_back(col);
    ++lead_row;
  }
  result.rank = result.pivots.size();
  return result;
}

RowSystem::RowSystem(std::int64_t q, IntMatrix c)
    : n_(c.rows() + c.cols()), k_(c.rows()), q_(q), c_(std::move(c)) {
  r_ = IntMatrix(k_, n_);
  null_ = IntMatrix(n_, n_ - k_);
  for (std::size_t i = 0; i < k_; ++i) {
    r_(i, i) = q_;
    for (std::size_t j = 0; j < n_ - k_; ++j) {
      r_(i, k_ + j) = c_(i, j);
      null_(i, j) = c_(i, j);
    }
  }
  for (std::size_t j = 0; j < n_ - k_; ++j) null_(k_ + j, j) = -q_;
}

RowSystem build_row_system(const RationalMatrix& edge_matrix) {
  const std::size_t k = edge_matrix.rows();
  const std::size_t n = edge_matrix.cols();
  check_shape(k, n);
  check_parallel(edge_matrix);

  // rref([B | S_rest]) = [I | B^-1 S_rest] = [I | C'] when B is invertible.
  const RrefResult reduced = rref(edge_matrix);
  for (std::size_t i = 0; i < k; ++i) {
    if (i >= reduced.pivots.size() || reduced.pivots[i] != i) {
      throw AlgebraError(AlgebraError::Kind::rank_deficient,
                         "the first k edge vectors are linearly dependent");
    }
  }

  BigInt q = 1;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = k; j < n; ++j) {
      const BigInt den = boost::multiprecision::denominator(reduced.form(i, j));
      q = boost::multiprecision::lcm(q, den);
    }
  }
  IntMatrix c(k, n - k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = k; j < n; ++j) {
      const Rational scaled = reduced.form(i, j) * q;
      c(i, j - k) = to_int64(boost::multiprecision::numerator(scaled));
    }
  }
  check_zero_rows(c);
  return RowSystem(to_int64(q), std::move(c));
}

RowSystem row_system_from_row_matrix(const RationalMatrix& r) {
  const std::size_t k = r.rows();
  const std::size_t n = r.cols();
  check_shape(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (boost::multiprecision::denominator(r(i, j)) != 1) {
        throw AlgebraError(AlgebraError::Kind::not_row_form,
                           "row matrix entries must be integers");
      }
    }
  }
  const Rational q = r(0, 0);
  if (q <= 0) {
    throw AlgebraError(AlgebraError::Kind::not_row_form, "leading block must be qI with q > 0");
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (r(i, j) != (i == j ? q : Rational(0))) {
        throw AlgebraError(AlgebraError::Kind::not_row_form,
                           "leading k x k block is not a multiple of the identity");
      }
    }
  }
  check_parallel(r);
  IntMatrix c(k, n - k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = k; j < n; ++j) {
      c(i, j - k) = to_int64(boost::multiprecision::numerator(r(i, j)));
    }
  }
  check_zero_rows(c);
  return RowSystem(to_int64(boost::multiprecision::numerator(q)), std::move(c));
}

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) {
    throw AlgebraError(AlgebraError::Kind::length_mismatch, "dot product length mismatch");
  }
  __int128 acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<__int128>(a[i]) * b[i];
  if (acc > std::numeric_limits<std::int64_t>::max() ||
      acc < std::numeric_limits<std::int64_t>::min()) {
    throw AlgebraError(AlgebraError::Kind::overflow, "dot product overflow");
  }
  return static_cast<std::int64_t>(acc);
}

bool in_row_space(std::span<const std::int64_t> x, const RowSystem& sys) {
  if (x.size() != sys.n()) {
    throw AlgebraError(AlgebraError::Kind::length_mismatch, "vector length differs from n");
  }
  // Row(R) is the orthogonal complement of the column space of N.
  const IntMatrix& nm = sys.null_matrix();
  for (std::size_t j = 0; j < nm.cols(); ++j) {
    __int128 acc = 0;
    for (std::size_t i = 0; i < nm.rows(); ++i) acc += static_cast<__int128>(nm(i, j)) * x[i];
    if (acc != 0) return false;
  }
  return true;
}

bool in_null_space(std::span<const std::int64_t> x, const RowSystem& sys) {
  if (x.size() != sys.n()) {
    throw AlgebraError(AlgebraError::Kind::length_mismatch, "vector length differs from n");
  }
  const IntMatrix& r = sys.row_matrix();
  for (std::size_t i = 0; i < r.rows(); ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < r.cols(); ++j) acc += static_cast<__int128>(r(i, j)) * x[j];
    if (acc != 0) return false;
  }
  return true;
}

std::vector<IntVector> enumerate_bounded_cuts(const RowSystem& sys, std::int64_t bound) {
  const std::size_t k = sys.k();
  const std::size_t n = sys.n();
  const IntMatrix& c = sys.coefficient_matrix();
  std::vector<IntVector> out;
  if (bound < 0) return out;

  // A row-space vector is fixed by its first k entries x_i = q a_i; the
  // remaining entries are sum_i a_i C_ij = (sum_i x_i C_ij) / q.
  IntVector head(k, -bound);
  while (true) {
    IntVector x(n, 0);
    std::copy(head.begin(), head.end(), x.begin());
    bool ok = true;
    for (std::size_t j = 0; ok && j < n - k; ++j) {
      __int128 acc = 0;
      for (std::size_t i = 0; i < k; ++i) acc += static_cast<__int128>(head[i]) * c(i, j);
      if (acc % sys.q() != 0) {
        ok = false;
        break;
      }
      const __int128 v = acc / sys.q();
      if (v > bound || v < -bound) ok = false;
      x[k + j] = static_cast<std::int64_t>(v);
    }
    if (ok) out.push_back(std::move(x));

    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (head[pos] < bound) {
        ++head[pos];
        break;
      }
      head[pos] = -bound;
      if (pos == 0) return out;
    }
  }
}

std::size_t span_rank(const std::vector<IntVector>& vectors) {
  if (vectors.empty()) return 0;
  const std::size_t n = vectors.front().size();
  RationalMatrix m(vectors.size(), n);
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    if (vectors[r].size() != n) {
      throw AlgebraError(AlgebraError::Kind::length_mismatch, "vectors differ in length");
    }
    for (std::size_t c = 0; c < n; ++c) m(r, c) = vectors[r][c];
  }
  if (n == 0) return 0;
  return rref(m).rank;
}

}  // namespace kirchhoff
