// SPDX-License-Identifier: Apache-2.0
//
// dpris - dual-polarized RIS-aided ISAC simulation and optimization toolkit
// Copyright (C) 2026 The dpris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include "dpris/metrics.hpp"
#include "dpris/wmmse.hpp"

#include <vector>

namespace dpris::risopt {

/// Phase-dependent aggregates of the WMMSE objective at fixed (F, U, W):
///   fbar = sum_k H_r,k^H U_k W_k U_k^H H_r,k
///   c    = G (sum_k F_k F_k^H) G^H
///   p    = sum_k (G (sum_i F_i F_i^H) H_d,k^H U_k W_k U_k^H H_r,k - G F_k W_k U_k^H H_r,k)
/// so that sum_k tr(W_k E_k) = tr(fbar Phi c Phi^H) + 2 Re tr(Phi p) + const_terms.
struct PhaseAggregates {
  cmat fbar;
  cmat c;
  cmat p;
  double const_terms = 0.0;
};

PhaseAggregates phase_aggregates(const ChannelSet& channels, const PrecoderSet& precoders,
                                 const std::vector<cmat>& u, const std::vector<cmat>& w, double sigma2);

/// f(phi) = phi^H quad phi + 2 Re(phi^H lin) + const_terms
struct PhaseQuadraticForm {
  PhaseLayout layout = PhaseLayout::dual_polarized;
  Eigen::Index elements = 0;
  cmat quad;  // Hermitian PSD, 4L x 4L (or L x L)
  cvec lin;
  double const_terms = 0.0;
};

/// Maps (fbar, c, p) to the quadratic form in the stacked phase vector.
///
/// Dual-polarized layout: block (s', s) of quad is the Hadamard product
/// fbar_{r(s'), r(s)} .* transpose(c_{c(s), c(s')}), with r(s) = s & 1 and
/// c(s) = s >> 1 the block row/column of phase segment s, and
/// lin_j = conj(p(col_j, row_j)). Diagonal layout: quad = fbar .* c^T.
PhaseQuadraticForm assemble_quadratic_form(const cmat& fbar, const cmat& c, const cmat& p, PhaseLayout layout,
                                           Eigen::Index elements, double const_terms = 0.0);

PhaseQuadraticForm build_quadratic_form(const ChannelSet& channels, const PrecoderSet& precoders,
                                        const std::vector<cmat>& u, const std::vector<cmat>& w, double sigma2);

/// phi^H quad phi + 2 Re(phi^H lin), without const_terms.
double objective(const PhaseQuadraticForm& form, const cvec& phi);

/// Largest eigenvalue of a Hermitian matrix.
double lambda_max(const cmat& quad);

/// MM surrogate of phi^H quad phi around phi_t:
/// lam |phi|^2 - 2 Re(phi^H (lam I - quad) phi_t) + phi_t^H (lam I - quad) phi_t.
double surrogate(const PhaseQuadraticForm& form, double lam, const cvec& phi, const cvec& phi_t);

/// One MM update: q = (lam I - quad) phi - lin, phi_next = exp(j arg q).
/// Entries with q_j == 0 keep their previous phase.
cvec mm_step(const cvec& phi, const PhaseQuadraticForm& form, double lam);

struct MmResult {
  RisPhase phase;
  std::vector<double> trace;  // f after every step (without const_terms)
  int iterations = 0;
  bool converged = false;
};

/// Iterates mm_step until |f_t - f_{t-1}| <= tol (1 + |f_t|) or max_iter steps.
MmResult optimize_phase(const RisPhase& init, const PhaseQuadraticForm& form, double tol = 1e-6,
                        int max_iter = 200);

/// Nearest member of {2 pi m / 2^bits} under circular distance, ties to the
/// smaller m. Throws std::domain_error for bits == 0.
double quantize_angle(double angle, int bits);

RisPhase quantize_phase(const RisPhase& phase, int bits);

}  // namespace dpris::risopt
