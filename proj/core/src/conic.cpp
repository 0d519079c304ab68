#include "smoothdiv/conic.hpp"

#include <sstream>

#include <json.hpp>

namespace smoothdiv {

LinearExpr& LinearExpr::operator+=(const LinearExpr& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  constant += o.constant;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double s) {
  for (auto& t : terms) t.second *= s;
  constant *= s;
  return *this;
}

MatrixExpr MatrixExpr::zero(int n) {
  MatrixExpr e;
  e.size = n;
  e.constant = Matrix::Zero(n, n);
  return e;
}

MatrixExpr MatrixExpr::constant_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw ModelError("MatrixExpr: constant must be square");
  MatrixExpr e;
  e.size = static_cast<int>(m.rows());
  e.constant = 0.5 * (m + m.adjoint().eval());
  return e;
}

MatrixExpr MatrixExpr::operator-() const {
  MatrixExpr e = *this;
  e.constant = -e.constant;
  for (auto& t : e.terms) t.second = -t.second;
  return e;
}

MatrixExpr& MatrixExpr::operator+=(const MatrixExpr& o) {
  if (size != o.size) throw ModelError("MatrixExpr: size mismatch in sum");
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

MatrixExpr& MatrixExpr::operator-=(const MatrixExpr& o) { return *this += -o; }

MatrixExpr operator+(MatrixExpr a, const MatrixExpr& b) { return a += b; }
MatrixExpr operator-(MatrixExpr a, const MatrixExpr& b) { return a -= b; }

MatrixExpr MatrixExpr::mapped(int out_size, const std::function<Matrix(const Matrix&)>& f) const {
  MatrixExpr e;
  e.size = out_size;
  e.constant = f(constant);
  for (const auto& [p, m] : terms) {
    Matrix fm = f(m);
    if (fm.cwiseAbs().maxCoeff() > 0) e.terms.emplace_back(p, fm);
  }
  return e;
}

Matrix MatrixExpr::evaluate(const RealVector& x) const {
  Matrix m = constant;
  for (const auto& [p, c] : terms) m += x(p) * c;
  return m;
}

BlockBuilder::BlockBuilder(std::vector<int> block_sizes) : sizes_(std::move(block_sizes)) {
  starts_.reserve(sizes_.size());
  for (int s : sizes_) {
    starts_.push_back(total_);
    total_ += s;
  }
  acc_ = MatrixExpr::zero(total_);
}

void BlockBuilder::set(int r, int c, const MatrixExpr& e) {
  const int r0 = starts_.at(r), c0 = starts_.at(c);
  if (e.size != sizes_.at(r) || e.size != sizes_.at(c))
    throw ModelError("BlockBuilder: sub-expression size mismatch");
  auto place = [&](Matrix& target, const Matrix& m) {
    target.block(r0, c0, e.size, e.size) += m;
    if (r != c) target.block(c0, r0, e.size, e.size) += m.adjoint();
  };
  place(acc_.constant, e.constant);
  for (const auto& [p, m] : e.terms) {
    Matrix coeff = Matrix::Zero(total_, total_);
    place(coeff, m);
    acc_.terms.emplace_back(p, coeff);
  }
}

MatrixExpr BlockBuilder::build() const { return acc_; }

int ConicProgram::add_scalar(const std::string& name) {
  vars_.push_back({name, VarKind::scalar, 1, num_params_, 1});
  num_params_ += 1;
  return static_cast<int>(vars_.size()) - 1;
}

int ConicProgram::add_hermitian(const std::string& name, int dim) {
  if (dim < 1) throw ModelError("add_hermitian: dim must be positive");
  vars_.push_back({name, VarKind::hermitian, dim, num_params_, dim * dim});
  num_params_ += dim * dim;
  return static_cast<int>(vars_.size()) - 1;
}

int ConicProgram::param_diag(int var, int i) const {
  const auto& v = vars_.at(var);
  if (v.kind != VarKind::hermitian || i < 0 || i >= v.dim) throw ModelError("param_diag: bad index");
  return v.offset + i;
}

std::pair<int, int> ConicProgram::param_pair(int var, int i, int j) const {
  const auto& v = vars_.at(var);
  if (v.kind != VarKind::hermitian || i < 0 || j <= i || j >= v.dim)
    throw ModelError("param_pair: need 0 <= i < j < dim");
  const int rank = i * v.dim - i * (i + 1) / 2 + (j - i - 1);
  const int base = v.offset + v.dim + 2 * rank;
  return {base, base + 1};
}

// Hermitian basis matrix for the local parameter index within a variable.
Matrix ConicProgram::basis_matrix(int var, int param_local) const {
  const auto& v = vars_.at(var);
  const int n = v.dim;
  Matrix b = Matrix::Zero(n, n);
  if (param_local < n) {
    b(param_local, param_local) = 1.0;
    return b;
  }
  const int rank = (param_local - n) / 2;
  const bool imag_part = ((param_local - n) % 2) == 1;
  // invert the pair ranking
  int i = 0, rem = rank;
  while (rem >= n - i - 1) {
    rem -= n - i - 1;
    ++i;
  }
  const int j = i + 1 + rem;
  if (!imag_part) {
    b(i, j) = 1.0;
    b(j, i) = 1.0;
  } else {
    b(i, j) = Complex(0, 1);
    b(j, i) = Complex(0, -1);
  }
  return b;
}

MatrixExpr ConicProgram::var_expr(int var) const {
  const auto& v = vars_.at(var);
  if (v.kind != VarKind::hermitian) throw ModelError("var_expr: not a Hermitian variable");
  MatrixExpr e = MatrixExpr::zero(v.dim);
  for (int k = 0; k < v.num_params; ++k) e.terms.emplace_back(v.offset + k, basis_matrix(var, k));
  return e;
}

MatrixExpr ConicProgram::principal_subblock(int var, int r0, int n) const {
  const auto& v = vars_.at(var);
  if (v.kind != VarKind::hermitian || r0 < 0 || r0 + n > v.dim)
    throw ModelError("principal_subblock: bad range");
  MatrixExpr e = MatrixExpr::zero(n);
  for (int k = 0; k < v.num_params; ++k) {
    Matrix sub = basis_matrix(var, k).block(r0, r0, n, n);
    if (sub.cwiseAbs().maxCoeff() > 0) e.terms.emplace_back(v.offset + k, sub);
  }
  return e;
}

MatrixExpr ConicProgram::scalar_times(int var, const Matrix& coeff) const {
  const auto& v = vars_.at(var);
  if (v.kind != VarKind::scalar) throw ModelError("scalar_times: not a scalar variable");
  MatrixExpr e = MatrixExpr::zero(static_cast<int>(coeff.rows()));
  e.terms.emplace_back(v.offset, 0.5 * (coeff + coeff.adjoint().eval()));
  return e;
}

LinearExpr ConicProgram::trace_expr(int var) const {
  return trace_principal_subblock(var, 0, vars_.at(var).dim);
}

LinearExpr ConicProgram::trace_principal_subblock(int var, int r0, int n) const {
  LinearExpr e;
  for (int i = 0; i < n; ++i) e.add(param_diag(var, r0 + i), 1.0);
  return e;
}

LinearExpr ConicProgram::re_trace_offdiag_subblock(int var, int r0, int c0, int n) const {
  if (r0 >= c0) throw ModelError("re_trace_offdiag_subblock: need r0 < c0");
  LinearExpr e;
  for (int i = 0; i < n; ++i) e.add(param_pair(var, r0 + i, c0 + i).first, 1.0);
  return e;
}

LinearExpr ConicProgram::inner_product(int var, const Matrix& c) const {
  const auto& v = vars_.at(var);
  if (v.kind != VarKind::hermitian) throw ModelError("inner_product: not a Hermitian variable");
  if (c.rows() != v.dim || c.cols() != v.dim) throw ModelError("inner_product: coefficient size");
  Matrix ch = 0.5 * (c + c.adjoint().eval());
  LinearExpr e;
  for (int i = 0; i < v.dim; ++i) {
    const double w = ch(i, i).real();
    if (w != 0.0) e.add(param_diag(var, i), w);
  }
  for (int i = 0; i < v.dim; ++i)
    for (int j = i + 1; j < v.dim; ++j) {
      auto [re, im] = param_pair(var, i, j);
      if (ch(i, j).real() != 0.0) e.add(re, 2.0 * ch(i, j).real());
      if (ch(i, j).imag() != 0.0) e.add(im, 2.0 * ch(i, j).imag());
    }
  return e;
}

LinearExpr ConicProgram::scalar_expr(int var) const {
  const auto& v = vars_.at(var);
  if (v.kind != VarKind::scalar) throw ModelError("scalar_expr: not a scalar variable");
  LinearExpr e;
  e.add(v.offset, 1.0);
  return e;
}

void ConicProgram::add_psd(const MatrixExpr& e) {
  if (e.size < 1) throw ModelError("add_psd: empty expression");
  psd_.push_back(e);
}

void ConicProgram::add_eq(const LinearExpr& e) { eqs_.push_back(e); }
void ConicProgram::add_ge(const LinearExpr& e) { ges_.push_back(e); }

void ConicProgram::pin_principal_subblock(int var, int r0, const Matrix& value) {
  const int n = static_cast<int>(value.rows());
  if (value.cols() != n) throw ModelError("pin_principal_subblock: value must be square");
  Matrix vh = 0.5 * (value + value.adjoint().eval());
  for (int i = 0; i < n; ++i) {
    LinearExpr e;
    e.add(param_diag(var, r0 + i), 1.0);
    e.constant = -vh(i, i).real();
    add_eq(e);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto [re, im] = param_pair(var, r0 + i, r0 + j);
      LinearExpr er;
      er.add(re, 1.0);
      er.constant = -vh(i, j).real();
      add_eq(er);
      LinearExpr ei;
      ei.add(im, 1.0);
      ei.constant = -vh(i, j).imag();
      add_eq(ei);
    }
}

void ConicProgram::set_objective(Sense sense, const LinearExpr& e) {
  sense_ = sense;
  objective_ = e;
}

Matrix ConicProgram::variable_value(int var, const RealVector& x) const {
  const auto& v = vars_.at(var);
  if (v.kind == VarKind::scalar) {
    Matrix m(1, 1);
    m(0, 0) = x(v.offset);
    return m;
  }
  Matrix m = Matrix::Zero(v.dim, v.dim);
  for (int k = 0; k < v.num_params; ++k) m += x(v.offset + k) * basis_matrix(var, k);
  return m;
}

double ConicProgram::scalar_value(int var, const RealVector& x) const {
  const auto& v = vars_.at(var);
  if (v.kind != VarKind::scalar) throw ModelError("scalar_value: not a scalar variable");
  return x(v.offset);
}

std::string ConicProgram::dump_json() const {
  using nlohmann::json;
  json j;
  j["sense"] = sense_ == Sense::minimize ? "min" : "max";
  j["num_params"] = num_params_;
  for (const auto& v : vars_)
    j["variables"].push_back({{"name", v.name},
                              {"kind", v.kind == VarKind::scalar ? "scalar" : "hermitian"},
                              {"dim", v.dim},
                              {"offset", v.offset}});
  auto lin_to_json = [](const LinearExpr& e) {
    json l;
    l["constant"] = e.constant;
    for (const auto& [p, c] : e.terms) l["terms"].push_back({{"param", p}, {"coeff", c}});
    return l;
  };
  auto mat_triplets = [](const Matrix& m) {
    json t = json::array();
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (m(r, c) != Complex(0, 0))
          t.push_back({{"row", r}, {"col", c}, {"re", m(r, c).real()}, {"im", m(r, c).imag()}});
    return t;
  };
  j["objective"] = lin_to_json(objective_);
  j["psd"] = json::array();
  for (const auto& e : psd_) {
    json c;
    c["size"] = e.size;
    c["constant"] = mat_triplets(e.constant);
    for (const auto& [p, m] : e.terms) c["terms"].push_back({{"param", p}, {"triplets", mat_triplets(m)}});
    j["psd"].push_back(c);
  }
  j["eq"] = json::array();
  for (const auto& e : eqs_) j["eq"].push_back(lin_to_json(e));
  j["ge"] = json::array();
  for (const auto& e : ges_) j["ge"].push_back(lin_to_json(e));
  return j.dump(2);
}

} // namespace smoothdiv
