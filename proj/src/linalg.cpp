// Copyright 2026 The qdec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdec/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qdec {

SystemLayout::SystemLayout(std::vector<std::string> labels_,
                           std::vector<Eigen::Index> dims_)
    : labels(std::move(labels_)), dims(std::move(dims_)) {
  if (labels.size() != dims.size())
    throw InvariantError("SystemLayout: labels/dims size mismatch");
  std::set<std::string> seen;
  for (const auto &l : labels)
    if (!seen.insert(l).second)
      throw InvariantError("SystemLayout: duplicate label '" + l + "'");
  for (auto d : dims)
    if (d < 1) throw InvariantError("SystemLayout: nonpositive dimension");
}

Eigen::Index SystemLayout::dim() const {
  Eigen::Index d = 1;
  for (auto x : dims) d *= x;
  return d;
}

std::size_t SystemLayout::index_of(const std::string &label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw InvariantError("SystemLayout: unknown label '" + label + "'");
}

bool SystemLayout::has_label(const std::string &label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

Eigen::Index SystemLayout::dim_of(const std::vector<std::string> &subset) const {
  Eigen::Index d = 1;
  for (const auto &l : subset) d *= dims[index_of(l)];
  return d;
}

SystemLayout SystemLayout::restricted(const std::vector<std::string> &keep) const {
  for (const auto &l : keep) (void)index_of(l);
  std::vector<std::string> ls;
  std::vector<Eigen::Index> ds;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (std::find(keep.begin(), keep.end(), labels[i]) != keep.end()) {
      ls.push_back(labels[i]);
      ds.push_back(dims[i]);
    }
  }
  return SystemLayout(std::move(ls), std::move(ds));
}

SystemLayout single_system(const std::string &label, Eigen::Index d) {
  return SystemLayout({label}, {d});
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix tensor_all(const std::vector<ComplexMatrix> &factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto &f : factors) out = tensor(out, f);
  return out;
}

namespace {

// Row-major strides for a dims list with the first subsystem most significant.
std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index> &dims) {
  std::vector<Eigen::Index> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

} // namespace

ComplexMatrix partial_trace_dims(const ComplexMatrix &m,
                                 const std::vector<Eigen::Index> &dims,
                                 const std::vector<std::size_t> &keep_indices) {
  Eigen::Index total = 1;
  for (auto d : dims) total *= d;
  if (m.rows() != total || m.cols() != total)
    throw InvariantError("partial_trace: matrix dimension does not match layout");
  for (std::size_t k : keep_indices)
    if (k >= dims.size()) throw InvariantError("partial_trace: bad subsystem index");

  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep_indices) kept[k] = true;

  const auto strides = strides_of(dims);
  Eigen::Index d_keep = 1, d_trace = 1;
  std::vector<std::size_t> keep_order, trace_order;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (kept[i]) {
      d_keep *= dims[i];
      keep_order.push_back(i);
    } else {
      d_trace *= dims[i];
      trace_order.push_back(i);
    }
  }

  // offset of each kept / traced multi-index in the full space
  auto offsets = [&](const std::vector<std::size_t> &order, Eigen::Index count) {
    std::vector<Eigen::Index> out(static_cast<std::size_t>(count), 0);
    for (Eigen::Index idx = 0; idx < count; ++idx) {
      Eigen::Index rem = idx, off = 0;
      for (std::size_t pos = order.size(); pos-- > 0;) {
        const std::size_t sys = order[pos];
        off += (rem % dims[sys]) * strides[sys];
        rem /= dims[sys];
      }
      out[static_cast<std::size_t>(idx)] = off;
    }
    return out;
  };
  const auto keep_off = offsets(keep_order, d_keep);
  const auto trace_off = offsets(trace_order, d_trace);

  ComplexMatrix out = ComplexMatrix::Zero(d_keep, d_keep);
  for (Eigen::Index r = 0; r < d_keep; ++r)
    for (Eigen::Index c = 0; c < d_keep; ++c) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index t = 0; t < d_trace; ++t)
        acc += m(keep_off[r] + trace_off[t], keep_off[c] + trace_off[t]);
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix &m, const SystemLayout &layout,
                            const std::vector<std::string> &keep) {
  std::vector<std::size_t> idx;
  idx.reserve(keep.size());
  for (const auto &l : keep) idx.push_back(layout.index_of(l));
  std::sort(idx.begin(), idx.end());
  return partial_trace_dims(m, layout.dims, idx);
}

namespace {

std::vector<Eigen::Index> permuted_index_map(const std::vector<Eigen::Index> &dims,
                                             const std::vector<std::size_t> &perm) {
  if (perm.size() != dims.size())
    throw InvariantError("permute_systems: permutation size mismatch");
  std::vector<bool> used(dims.size(), false);
  for (std::size_t p : perm) {
    if (p >= dims.size() || used[p])
      throw InvariantError("permute_systems: invalid permutation");
    used[p] = true;
  }
  Eigen::Index total = 1;
  for (auto d : dims) total *= d;
  const auto strides = strides_of(dims);
  std::vector<Eigen::Index> new_dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];
  const auto new_strides = strides_of(new_dims);

  // map[old_index] = new_index
  std::vector<Eigen::Index> map(static_cast<std::size_t>(total));
  std::vector<Eigen::Index> digits(dims.size());
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    for (std::size_t i = dims.size(); i-- > 0;) {
      digits[i] = rem % dims[i];
      rem /= dims[i];
    }
    Eigen::Index nidx = 0;
    for (std::size_t k = 0; k < perm.size(); ++k)
      nidx += digits[perm[k]] * new_strides[k];
    map[static_cast<std::size_t>(idx)] = nidx;
  }
  return map;
}

} // namespace

ComplexMatrix permute_systems(const ComplexMatrix &m,
                              const std::vector<Eigen::Index> &dims,
                              const std::vector<std::size_t> &perm) {
  const auto map = permuted_index_map(dims, perm);
  if (m.rows() != static_cast<Eigen::Index>(map.size()) || m.rows() != m.cols())
    throw InvariantError("permute_systems: matrix dimension does not match layout");
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = m(r, c);
  return out;
}

ComplexVector permute_systems_vec(const ComplexVector &v,
                                  const std::vector<Eigen::Index> &dims,
                                  const std::vector<std::size_t> &perm) {
  const auto map = permuted_index_map(dims, perm);
  if (v.size() != static_cast<Eigen::Index>(map.size()))
    throw InvariantError("permute_systems: vector dimension does not match layout");
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(map[static_cast<std::size_t>(i)]) = v(i);
  return out;
}

ComplexMatrix dagger(const ComplexMatrix &m) { return m.adjoint(); }

double hermiticity_residual(const ComplexMatrix &m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermEig herm_eig(const ComplexMatrix &m) {
  if (m.rows() != m.cols())
    throw InvariantError("herm_eig: matrix must be square");
  const double res = hermiticity_residual(m);
  if (res > kHermTol)
    throw InvariantError("herm_eig: hermiticity residual " + std::to_string(res) +
                         " exceeds tolerance");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw SolverError("herm_eig: eigendecomposition failed");
  return HermEig{es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix mat_pow_psd(const ComplexMatrix &m, double p) {
  const HermEig eig = herm_eig(m);
  const Eigen::Index n = eig.values.size();
  const double ev_max = n > 0 ? eig.values(n - 1) : 0.0;
  if (n > 0 && eig.values(0) < -kPsdTol)
    throw InvariantError("mat_pow_psd: matrix is not PSD (min eigenvalue " +
                         std::to_string(eig.values(0)) + ")");
  const double cut = kRankTolFactor * std::max(ev_max, 0.0);
  RealVector powered = RealVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.values(i) > cut && eig.values(i) > 0.0)
      powered(i) = std::pow(eig.values(i), p);
  return eig.vectors * powered.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix mat_sqrt_psd(const ComplexMatrix &m) { return mat_pow_psd(m, 0.5); }

double trace_norm(const ComplexMatrix &m) {
  if (m.rows() == m.cols() && hermiticity_residual(m) <= kHermTol)
    return herm_eig(m).values.cwiseAbs().sum();
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double two_norm(const ComplexMatrix &m) { return m.norm(); }

double op_norm(const ComplexMatrix &m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() == m.cols() && hermiticity_residual(m) <= kHermTol)
    return herm_eig(m).values.cwiseAbs().maxCoeff();
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix swap_operator(Eigen::Index d) {
  if (d < 1) throw InvariantError("swap_operator: dimension must be >= 1");
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  return f;
}

ComplexVector vec(const ComplexMatrix &m) {
  ComplexVector v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) v(k++) = m(r, c);
  return v;
}

ComplexMatrix unvec(const ComplexVector &v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw InvariantError("unvec: size mismatch");
  ComplexMatrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = v(k++);
  return m;
}

} // namespace qdec
