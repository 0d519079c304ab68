#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "smoothdiv/operators.hpp"

namespace smoothdiv {

// Block-structured semidefinite program over complex Hermitian variable
// blocks and real scalars. All conic structure lives in constraints:
// variables themselves are free; PSD-ness is imposed by add_psd. The solver
// side embeds each complex Hermitian LMI into the real symmetric cone.
//
// A Hermitian variable of dimension n carries n^2 real parameters:
// n diagonal entries, then (Re, Im) for each upper-triangular pair.

enum class VarKind { scalar, hermitian };

struct VariableInfo {
  std::string name;
  VarKind kind;
  int dim;        // 1 for scalars
  int offset;     // first parameter index
  int num_params; // 1 or dim*dim
};

/// Real affine functional over program parameters.
struct LinearExpr {
  std::vector<std::pair<int, double>> terms; // (param, coefficient)
  double constant = 0.0;

  LinearExpr& add(int param, double coeff) {
    terms.emplace_back(param, coeff);
    return *this;
  }
  LinearExpr& operator+=(const LinearExpr& o);
  LinearExpr& operator*=(double s);
};

/// Affine Hermitian-matrix expression: constant + sum_k x_k * coeff_k.
struct MatrixExpr {
  int size = 0;
  Matrix constant;                             // size x size, Hermitian
  std::vector<std::pair<int, Matrix>> terms;   // (param, Hermitian coefficient)

  static MatrixExpr zero(int n);
  static MatrixExpr constant_matrix(const Matrix& m);
  MatrixExpr operator-() const;
  MatrixExpr& operator+=(const MatrixExpr& o);
  MatrixExpr& operator-=(const MatrixExpr& o);
  /// Apply a linear map (Hermitian -> Hermitian) to constant and coefficients.
  MatrixExpr mapped(int out_size, const std::function<Matrix(const Matrix&)>& f) const;
  /// Evaluate at a parameter vector.
  Matrix evaluate(const RealVector& x) const;
};

MatrixExpr operator+(MatrixExpr a, const MatrixExpr& b);
MatrixExpr operator-(MatrixExpr a, const MatrixExpr& b);

/// Assembles a Hermitian block matrix from affine sub-expressions. Diagonal
/// positions take the expression as-is; an off-diagonal (r,c) placement also
/// writes the adjoint at (c,r).
class BlockBuilder {
public:
  explicit BlockBuilder(std::vector<int> block_sizes);
  void set(int r, int c, const MatrixExpr& e);
  MatrixExpr build() const;

private:
  std::vector<int> sizes_;
  std::vector<int> starts_;
  int total_ = 0;
  MatrixExpr acc_;
};

enum class Sense { minimize, maximize };

class ConicProgram {
public:
  int add_scalar(const std::string& name);
  int add_hermitian(const std::string& name, int dim);

  // parameter lookup
  int param_diag(int var, int i) const;
  std::pair<int, int> param_pair(int var, int i, int j) const; // i<j -> (re, im)

  // expression builders
  MatrixExpr var_expr(int var) const;                       // whole Hermitian block
  MatrixExpr principal_subblock(int var, int r0, int n) const;
  MatrixExpr scalar_times(int var, const Matrix& coeff) const;
  LinearExpr trace_expr(int var) const;
  LinearExpr trace_principal_subblock(int var, int r0, int n) const;
  /// Re Tr of the (r0, c0) off-diagonal n x n sub-block, r0 < c0.
  LinearExpr re_trace_offdiag_subblock(int var, int r0, int c0, int n) const;
  /// <C, M> for Hermitian coefficient C.
  LinearExpr inner_product(int var, const Matrix& c) const;
  LinearExpr scalar_expr(int var) const;

  // constraints
  void add_psd(const MatrixExpr& e);
  void add_eq(const LinearExpr& e);              // e == 0
  void add_ge(const LinearExpr& e);              // e >= 0
  /// Pin the principal sub-block of a Hermitian variable to a constant.
  void pin_principal_subblock(int var, int r0, const Matrix& value);

  void set_objective(Sense sense, const LinearExpr& e);

  int num_params() const { return num_params_; }
  const std::vector<VariableInfo>& variables() const { return vars_; }
  const std::vector<MatrixExpr>& psd_constraints() const { return psd_; }
  const std::vector<LinearExpr>& eq_constraints() const { return eqs_; }
  const std::vector<LinearExpr>& ge_constraints() const { return ges_; }
  Sense sense() const { return sense_; }
  const LinearExpr& objective() const { return objective_; }

  /// Reassemble a variable's value from a parameter vector.
  Matrix variable_value(int var, const RealVector& x) const;
  double scalar_value(int var, const RealVector& x) const;
  const VariableInfo& info(int var) const { return vars_.at(var); }

  /// Self-describing JSON dump (names, dims, coefficient triplets).
  std::string dump_json() const;

private:
  Matrix basis_matrix(int var, int param_local) const;
  std::vector<VariableInfo> vars_;
  std::vector<MatrixExpr> psd_;
  std::vector<LinearExpr> eqs_;
  std::vector<LinearExpr> ges_;
  LinearExpr objective_;
  Sense sense_ = Sense::minimize;
  int num_params_ = 0;
};

} // namespace smoothdiv
