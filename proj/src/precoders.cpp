// Copyright (c) 2026 The rsapa Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "rsapa/precoders.hpp"

#include <cmath>
#include <string>

#include "rsapa/errors.hpp"

namespace rsapa {

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kZeroTolerance = 1e-300;

void check_estimate(const CMatrix& estimate) {
  if (estimate.rows() == 0 || estimate.cols() == 0) throw DomainError("precoder: empty channel estimate");
}

}  // namespace

std::string_view to_string(PrecoderKind kind) {
  switch (kind) {
    case PrecoderKind::mf:
      return "mf";
    case PrecoderKind::zf:
      return "zf";
    case PrecoderKind::mmse:
      return "mmse";
  }
  return "unknown";
}

PrecoderKind parse_precoder_kind(std::string_view name) {
  if (name == "mf") return PrecoderKind::mf;
  if (name == "zf") return PrecoderKind::zf;
  if (name == "mmse") return PrecoderKind::mmse;
  throw ConfigError("unknown precoder '" + std::string(name) + "' (expected mf, zf or mmse)");
}

CMatrix PrecoderSet::stacked() const {
  CMatrix all(priv.rows(), priv.cols() + 1);
  all.col(0) = common;
  all.rightCols(priv.cols()) = priv;
  return all;
}

void normalize_column(Eigen::Ref<CVector> column) {
  const double norm = column.norm();
  if (!(norm > kZeroTolerance)) throw DomainError("precoder: cannot normalize a zero column");
  column /= norm;
  // Largest-magnitude entry decides what counts as "nonzero" so that roundoff
  // dust in leading entries does not pick the reference phase.
  const double floor = column.cwiseAbs().maxCoeff() * 1e-12;
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    if (std::abs(column(i)) > floor) {
      const cplx rotation = std::conj(column(i)) / std::abs(column(i));
      column *= rotation;
      column(i) = cplx(std::abs(column(i)), 0.0);
      break;
    }
  }
}

CMatrix raw_private_precoder(PrecoderKind kind, const CMatrix& estimate, double noise_var, double total_power) {
  check_estimate(estimate);
  const Eigen::Index streams = estimate.rows();
  const CMatrix hh = estimate.adjoint();
  if (kind == PrecoderKind::mf) return hh;

  CMatrix gram = estimate * hh;
  if (kind == PrecoderKind::zf) {
    if (streams > estimate.cols()) throw SingularityError("ZF precoder: more streams than transmit antennas");
    Eigen::JacobiSVD<CMatrix> svd(estimate);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(sv.size() - 1) / sv(0) < kRankTolerance) {
      throw SingularityError("ZF precoder: channel estimate is rank deficient");
    }
  } else {
    if (!(noise_var > 0.0) || !(total_power > 0.0)) {
      throw DomainError("MMSE precoder: noise variance and total power must be positive");
    }
    gram.diagonal().array() += static_cast<double>(streams) * noise_var / total_power;
  }
  Eigen::LDLT<CMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw SingularityError("precoder: Gram matrix factorization failed");
  // H^H G^{-1} = (G^{-1} H)^H since G is Hermitian.
  return ldlt.solve(estimate).adjoint();
}

CMatrix make_private_precoder(PrecoderKind kind, const CMatrix& estimate, double noise_var, double total_power) {
  CMatrix p = raw_private_precoder(kind, estimate, noise_var, total_power);
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    const double norm = p.col(j).norm();
    if (!(norm > kZeroTolerance)) throw SingularityError("precoder: zero column");
    p.col(j) /= norm;
  }
  return p;
}

CVector make_common_precoder(const CMatrix& estimate) {
  check_estimate(estimate);
  if (estimate.cwiseAbs().maxCoeff() <= kZeroTolerance) throw DomainError("common precoder: zero channel estimate");
  Eigen::JacobiSVD<CMatrix> svd(estimate, Eigen::ComputeFullV);
  CVector pc = svd.matrixV().col(0);
  normalize_column(pc);
  const cplx combined = (estimate.colwise().sum() * pc)(0);
  if (std::abs(combined) > kRankTolerance * estimate.norm()) pc *= std::conj(combined) / std::abs(combined);
  return pc;
}

PrecoderSet make_precoders(PrecoderKind kind, const CMatrix& estimate, double noise_var, double total_power) {
  PrecoderSet set;
  set.kind = kind;
  set.priv = make_private_precoder(kind, estimate, noise_var, total_power);
  set.common = make_common_precoder(estimate);
  return set;
}

}  // namespace rsapa
