// Copyright 2026 The Desense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DESENSE_MATRIX_H_
#define DESENSE_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace desense {

// Dense row-major matrix of finite doubles.
class Matrix {
 public:
  Matrix() = default;
  // Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major `data`; rejects a size mismatch or any
  // non-finite entry.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix Identity(std::size_t n);
  static Matrix FromRows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> col(std::size_t c) const;

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& mutable_data() { return data_; }

  // Largest absolute entry; 0 for an empty matrix.
  double max_abs() const;
  double trace() const;

  // Rows listed in `indices`, in that order.
  Matrix select_rows(std::span<const std::size_t> indices) const;
  // Columns [begin, end).
  Matrix col_range(std::size_t begin, std::size_t end) const;

  std::string shape() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& a);

// C = A * B. Throws NumericalError on a dimension mismatch, naming both shapes.
Matrix matmul(const Matrix& a, const Matrix& b);

// A^T * A, exactly symmetric.
Matrix gram(const Matrix& a);

// Throws NumericalError naming `where` if any entry is NaN or infinite.
void check_finite(const Matrix& m, const char* where);

// (A + A^T) / 2.
Matrix symmetrize(const Matrix& a);

// max_ij |A_ij - B_ij|; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace desense

#endif  // DESENSE_MATRIX_H_
