// Copyright 2026 The qdecon Authors
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

#include "qdecon/states.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "qdecon/errors.hpp"
#include "qdecon/random.hpp"

namespace qdecon {

namespace {

constexpr double kDensityTol = 1e-10;

void validate_density(const Operator& op) {
  if (op.dim() > kMaxDensityDim) {
    throw CapacityError("density dimension " + std::to_string(op.dim()) +
                        " exceeds cap " + std::to_string(kMaxDensityDim));
  }
  const double herm_dev = (op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kDensityTol) {
    throw NumericError("density deviates from Hermitian by " +
                       std::to_string(herm_dev));
  }
  const Complex tr = op.mat.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kDensityTol) {
    throw NumericError("density trace deviates from 1 by " +
                       std::to_string(std::abs(tr - Complex(1.0, 0.0))));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver((op.mat + op.mat.adjoint()) / 2.0,
                                               Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kDensityTol) {
    throw NumericError("density has eigenvalue " + std::to_string(min_eig));
  }
}

}  // namespace

DensityOperator::DensityOperator(Operator op) : op_(std::move(op)) {
  validate_density(op_);
}

DensityOperator::DensityOperator(SubsystemLayout layout, Matrix mat)
    : DensityOperator(Operator(std::move(layout), std::move(mat))) {}

DensityOperator DensityOperator::unchecked(Operator op) {
  DensityOperator out;
  out.op_ = std::move(op);
  return out;
}

PureState::PureState(SubsystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.total_dim()) {
    throw ShapeError("amplitude count " + std::to_string(amplitudes_.size()) +
                     " does not match layout dimension " +
                     std::to_string(layout_.total_dim()));
  }
  if (layout_.total_dim() > kMaxPureDim) {
    throw CapacityError("pure-state dimension " +
                        std::to_string(layout_.total_dim()) + " exceeds cap " +
                        std::to_string(kMaxPureDim));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw NumericError("pure-state norm deviates from 1 by " +
                       std::to_string(std::abs(norm - 1.0)));
  }
}

DensityOperator PureState::to_density() const {
  if (dim() > kMaxDensityDim) {
    throw CapacityError("outer product of dimension " + std::to_string(dim()) +
                        " exceeds density cap");
  }
  return DensityOperator::unchecked(
      Operator(layout_, amplitudes_ * amplitudes_.adjoint()));
}

DensityOperator maximally_mixed(const SubsystemLayout& layout) {
  const auto d = layout.total_dim();
  return DensityOperator::unchecked(
      Operator(layout, Matrix::Identity(d, d) / static_cast<double>(d)));
}

PureState purify(const DensityOperator& rho, const std::string& env_label) {
  if (rho.layout().has_label(env_label)) {
    throw LayoutError("environment label '" + env_label +
                      "' already present in the layout");
  }
  EigResult eig = eig_hermitian(rho.op());
  const double lambda_max = eig.eigenvalues.maxCoeff();
  const double cutoff = kSupportCutoff * lambda_max;

  // Descending order so the largest weight sits at environment index 0.
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = eig.eigenvalues.size(); i-- > 0;) {
    if (eig.eigenvalues(i) > cutoff) kept.push_back(i);
  }
  const std::int64_t rank = static_cast<std::int64_t>(kept.size());
  SubsystemLayout out_layout =
      rho.layout().concat(SubsystemLayout::single(env_label, rank));
  if (out_layout.total_dim() > kMaxPureDim) {
    throw CapacityError("purification dimension exceeds pure-state cap");
  }

  const std::int64_t d = rho.dim();
  Vector amps = Vector::Zero(d * rank);
  for (std::int64_t k = 0; k < rank; ++k) {
    const double w = std::sqrt(eig.eigenvalues(kept[k]));
    for (std::int64_t i = 0; i < d; ++i) {
      amps(i * rank + k) = w * eig.eigenvectors(i, kept[k]);
    }
  }
  amps /= amps.norm();  // absorb the discarded sub-cutoff mass
  return PureState(std::move(out_layout), std::move(amps));
}

std::vector<std::string> grouped_labels(const SubsystemLayout& layout, int n) {
  std::vector<std::string> out;
  for (const auto& f : layout.factors()) {
    out.push_back(f.label + "^" + std::to_string(n));
  }
  return out;
}

namespace {

std::string copy_label(const std::string& base, int copy) {
  return base + "#" + std::to_string(copy);
}

/// Layout of the n-fold power in copy-major order with per-copy labels.
SubsystemLayout copy_major_layout(const SubsystemLayout& layout, int n) {
  std::vector<Factor> factors;
  for (int c = 0; c < n; ++c) {
    for (const auto& f : layout.factors()) {
      factors.push_back(Factor{copy_label(f.label, c), f.dim});
    }
  }
  return SubsystemLayout(std::move(factors));
}

/// Grouped order: all copies of the first label, then of the second, ...
std::vector<std::string> grouped_copy_order(const SubsystemLayout& layout,
                                            int n) {
  std::vector<std::string> order;
  for (const auto& f : layout.factors()) {
    for (int c = 0; c < n; ++c) {
      order.push_back(copy_label(f.label, c));
    }
  }
  return order;
}

/// Final layout with each label group merged into one composite factor.
SubsystemLayout merged_layout(const SubsystemLayout& layout, int n) {
  std::vector<Factor> factors;
  for (const auto& f : layout.factors()) {
    std::int64_t dim = 1;
    for (int c = 0; c < n; ++c) dim *= f.dim;
    factors.push_back(Factor{f.label + "^" + std::to_string(n), dim});
  }
  return SubsystemLayout(std::move(factors));
}

std::int64_t checked_power(std::int64_t base, int n, std::int64_t cap,
                           const char* what) {
  std::int64_t out = 1;
  for (int i = 0; i < n; ++i) {
    if (out > cap / base) {
      throw CapacityError(std::string(what) + " for n = " + std::to_string(n) +
                          " exceeds the configured cap " + std::to_string(cap));
    }
    out *= base;
  }
  return out;
}

}  // namespace

DensityOperator n_copies_grouped(const DensityOperator& rho, int n) {
  if (n < 1) throw ConfigError("copy count must be >= 1");
  checked_power(rho.dim(), n, kMaxDensityDim, "density dimension");

  const SubsystemLayout cm = copy_major_layout(rho.layout(), n);
  Matrix power = rho.mat();
  for (int c = 1; c < n; ++c) {
    const std::int64_t da = power.rows();
    const std::int64_t db = rho.dim();
    Matrix next(da * db, da * db);
    for (std::int64_t i = 0; i < da; ++i) {
      for (std::int64_t j = 0; j < da; ++j) {
        next.block(i * db, j * db, db, db) = power(i, j) * rho.mat();
      }
    }
    power = std::move(next);
  }

  Operator grouped = permute_subsystems(Operator(cm, std::move(power)),
                                        grouped_copy_order(rho.layout(), n));
  return DensityOperator::unchecked(
      Operator(merged_layout(rho.layout(), n), std::move(grouped.mat)));
}

PureState n_copies_grouped(const PureState& psi, int n) {
  if (n < 1) throw ConfigError("copy count must be >= 1");
  checked_power(psi.dim(), n, kMaxPureDim, "pure-state dimension");

  Vector power = psi.amplitudes();
  for (int c = 1; c < n; ++c) {
    const std::int64_t da = power.size();
    const std::int64_t db = psi.dim();
    Vector next(da * db);
    for (std::int64_t i = 0; i < da; ++i) {
      next.segment(i * db, db) = power(i) * psi.amplitudes();
    }
    power = std::move(next);
  }

  const SubsystemLayout cm = copy_major_layout(psi.layout(), n);
  const auto map = permutation_index_map(cm, grouped_copy_order(psi.layout(), n));
  Vector out(power.size());
  for (std::int64_t i = 0; i < power.size(); ++i) out(map[i]) = power(i);
  return PureState(merged_layout(psi.layout(), n), std::move(out));
}

DensityOperator random_density(const SubsystemLayout& layout,
                               std::int64_t rank, std::uint64_t seed) {
  const std::int64_t d = layout.total_dim();
  if (rank < 1 || rank > d) {
    throw ConfigError("rank " + std::to_string(rank) +
                      " out of range [1, " + std::to_string(d) + "]");
  }
  Matrix m = ginibre_matrix(d, rank, seed);
  m /= m.norm();  // Frobenius-normalize so m m^dag has trace 1
  return DensityOperator(Operator(layout, m * m.adjoint()));
}

PureState random_pure(const SubsystemLayout& layout, std::uint64_t seed) {
  return PureState(layout, random_unit_vector(layout.total_dim(), seed));
}

PureState kron(const PureState& a, const PureState& b) {
  SubsystemLayout layout = a.layout().concat(b.layout());
  const std::int64_t da = a.dim();
  const std::int64_t db = b.dim();
  Vector out(da * db);
  for (std::int64_t i = 0; i < da; ++i) {
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  }
  return PureState(std::move(layout), std::move(out));
}

PureState permute_subsystems(const PureState& psi,
                             const std::vector<std::string>& new_order) {
  const auto map = permutation_index_map(psi.layout(), new_order);
  std::vector<Factor> new_factors;
  for (const auto& l : new_order) {
    new_factors.push_back(psi.layout().factors()[psi.layout().index_of(l)]);
  }
  Vector out(psi.dim());
  for (std::int64_t i = 0; i < psi.dim(); ++i) {
    out(map[i]) = psi.amplitudes()(i);
  }
  return PureState(SubsystemLayout(std::move(new_factors)), std::move(out));
}

namespace {

/// Order with `front` labels first (in the given order) and the remaining
/// labels after them in original relative order.
std::vector<std::string> front_order(const SubsystemLayout& layout,
                                     const std::vector<std::string>& front) {
  std::vector<std::string> order = front;
  for (const auto& f : layout.factors()) {
    bool in_front = false;
    for (const auto& l : front) {
      if (l == f.label) in_front = true;
    }
    if (!in_front) order.push_back(f.label);
  }
  return order;
}

}  // namespace

Matrix as_matrix(const PureState& psi, const std::vector<std::string>& front) {
  PureState p = permute_subsystems(psi, front_order(psi.layout(), front));
  std::int64_t df = 1;
  for (const auto& l : front) df *= psi.layout().dim_of(l);
  const std::int64_t dr = psi.dim() / df;
  using RowMajor =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(p.amplitudes().data(), df, dr);
}

DensityOperator marginal(const PureState& psi,
                         const std::vector<std::string>& keep) {
  // Keep labels in original relative order, matching partial_trace.
  std::vector<std::string> ordered;
  for (const auto& f : psi.layout().factors()) {
    for (const auto& l : keep) {
      if (l == f.label) ordered.push_back(l);
    }
  }
  if (ordered.size() != keep.size()) {
    throw LayoutError("marginal: unknown or repeated label in keep set");
  }
  Matrix m = as_matrix(psi, ordered);
  if (m.rows() > kMaxDensityDim) {
    throw CapacityError("marginal dimension " + std::to_string(m.rows()) +
                        " exceeds density cap");
  }
  return DensityOperator::unchecked(
      Operator(psi.layout().sublayout(ordered), m * m.adjoint()));
}

// --- Serialization ---------------------------------------------------------

namespace {

std::string hex_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

double parse_hex_double(const std::string& s, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError("line " + std::to_string(line_no) +
                      ": cannot parse float '" + s + "'");
  }
  return v;
}

void write_header(std::ostream& out, const char* kind,
                  const SubsystemLayout& layout, std::int64_t entries) {
  out << "qdecon-state v1\n";
  out << "kind " << kind << "\n";
  out << "layout";
  for (const auto& f : layout.factors()) {
    if (f.label.empty() ||
        f.label.find_first_of(" \t:") != std::string::npos) {
      throw ConfigError("label '" + f.label +
                        "' cannot be serialized (empty or contains "
                        "whitespace/colon)");
    }
    out << ' ' << f.label << ':' << f.dim;
  }
  out << "\n";
  out << "entries " << entries << "\n";
}

void write_entry(std::ostream& out, Complex z) {
  out << hex_double(z.real()) << ',' << hex_double(z.imag()) << "\n";
}

std::string next_line(std::istream& in, int& line_no) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("unexpected end of state file at line " +
                      std::to_string(line_no + 1));
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

Complex parse_entry(const std::string& line, int line_no) {
  const auto comma = line.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("line " + std::to_string(line_no) +
                      ": expected 're,im' pair");
  }
  return Complex(parse_hex_double(line.substr(0, comma), line_no),
                 parse_hex_double(line.substr(comma + 1), line_no));
}

}  // namespace

void save_state(std::ostream& out, const DensityOperator& rho) {
  const std::int64_t d = rho.dim();
  write_header(out, "density", rho.layout(), d * d);
  for (std::int64_t i = 0; i < d; ++i) {
    for (std::int64_t j = 0; j < d; ++j) {
      write_entry(out, rho.mat()(i, j));
    }
  }
}

void save_state(std::ostream& out, const PureState& psi) {
  write_header(out, "pure", psi.layout(), psi.dim());
  for (std::int64_t i = 0; i < psi.dim(); ++i) {
    write_entry(out, psi.amplitudes()(i));
  }
}

StateVariant load_state(std::istream& in) {
  int line_no = 0;
  const std::string magic = next_line(in, line_no);
  if (magic != "qdecon-state v1") {
    throw ConfigError("not a qdecon state file (bad magic line)");
  }

  const std::string kind_line = next_line(in, line_no);
  std::string kind;
  {
    std::istringstream ss(kind_line);
    std::string tag;
    ss >> tag >> kind;
    if (tag != "kind" || (kind != "density" && kind != "pure")) {
      throw ConfigError("line 2: expected 'kind density' or 'kind pure'");
    }
  }

  const std::string layout_line = next_line(in, line_no);
  std::vector<Factor> factors;
  {
    std::istringstream ss(layout_line);
    std::string tag;
    ss >> tag;
    if (tag != "layout") throw ConfigError("line 3: expected 'layout ...'");
    std::string tok;
    while (ss >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0) {
        throw ConfigError("line 3: bad layout token '" + tok + "'");
      }
      factors.push_back(
          Factor{tok.substr(0, colon), std::stoll(tok.substr(colon + 1))});
    }
  }
  SubsystemLayout layout(std::move(factors));

  std::int64_t entries = 0;
  {
    const std::string entries_line = next_line(in, line_no);
    std::istringstream ss(entries_line);
    std::string tag;
    ss >> tag >> entries;
    if (tag != "entries") throw ConfigError("line 4: expected 'entries N'");
  }

  const std::int64_t d = layout.total_dim();
  if (kind == "density") {
    if (entries != d * d) {
      throw ConfigError("entry count " + std::to_string(entries) +
                        " does not match layout dimension " +
                        std::to_string(d) + " squared");
    }
    Matrix mat(d, d);
    for (std::int64_t i = 0; i < d; ++i) {
      for (std::int64_t j = 0; j < d; ++j) {
        mat(i, j) = parse_entry(next_line(in, line_no), line_no);
      }
    }
    return DensityOperator(Operator(std::move(layout), std::move(mat)));
  }

  if (entries != d) {
    throw ConfigError("entry count " + std::to_string(entries) +
                      " does not match layout dimension " + std::to_string(d));
  }
  Vector amps(d);
  for (std::int64_t i = 0; i < d; ++i) {
    amps(i) = parse_entry(next_line(in, line_no), line_no);
  }
  return PureState(std::move(layout), std::move(amps));
}

DensityOperator load_density(std::istream& in) {
  StateVariant v = load_state(in);
  if (std::holds_alternative<DensityOperator>(v)) {
    return std::get<DensityOperator>(std::move(v));
  }
  return std::get<PureState>(v).to_density();
}

}  // namespace qdecon
