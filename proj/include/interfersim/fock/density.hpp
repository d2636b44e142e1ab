// Copyright 2026 The interfersim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "interfersim/fock/state.hpp"

namespace interfersim {

/// Reduced density operator over modes plus a kept subset of ancillas,
/// expressed in the basis of configs that actually occur. In the reduced
/// configs the kept ancilla bits are repacked to positions 0..k-1 following
/// the order of `kept_ancillas()`.
class DensityOperator {
  public:
    DensityOperator(std::vector<BasisConfig> basis, Eigen::MatrixXcd matrix,
                    std::vector<AncillaId> kept)
        : basis_(std::move(basis)), matrix_(std::move(matrix)), kept_(std::move(kept)) {
        if (matrix_.rows() != matrix_.cols() ||
            static_cast<size_t>(matrix_.rows()) != basis_.size()) {
            throw std::invalid_argument("density matrix shape does not match basis");
        }
    }

    size_t dimension() const { return basis_.size(); }
    const std::vector<BasisConfig>& basis() const { return basis_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    const std::vector<AncillaId>& kept_ancillas() const { return kept_; }

    double trace_value() const { return matrix_.trace().real(); }

    double purity() const { return (matrix_ * matrix_).trace().real(); }

    bool is_hermitian(double tol = kTol) const {
        return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
            0.5 * (matrix_ + matrix_.adjoint()));
        return solver.eigenvalues().minCoeff();
    }

    std::complex<double> element(const BasisConfig& row, const BasisConfig& col) const {
        const auto r = find(row);
        const auto c = find(col);
        if (r < 0 || c < 0) return {0.0, 0.0};
        return matrix_(r, c);
    }

  private:
    long find(const BasisConfig& c) const {
        auto it = std::lower_bound(basis_.begin(), basis_.end(), c);
        if (it == basis_.end() || *it != c) return -1;
        return static_cast<long>(it - basis_.begin());
    }

    std::vector<BasisConfig> basis_;
    Eigen::MatrixXcd matrix_;
    std::vector<AncillaId> kept_;
};

/// Traces out every ancilla not in `keep`, returning the reduced operator
/// over modes tensor kept ancillas. Trace 1 and Hermitian by construction.
inline DensityOperator partial_trace_ancillas(const StateVector& s,
                                              const std::vector<AncillaId>& keep) {
    uint64_t keep_mask = 0;
    for (const auto id : keep) {
        s.space().require_ancilla(id);
        const uint64_t bit = uint64_t{1} << id.value;
        if (keep_mask & bit) throw std::invalid_argument("duplicate ancilla in keep set");
        keep_mask |= bit;
    }
    std::vector<AncillaId> kept_sorted = keep;
    std::sort(kept_sorted.begin(), kept_sorted.end());

    const auto compress = [&](uint64_t ancilla_bits) {
        uint64_t packed = 0;
        for (size_t k = 0; k < kept_sorted.size(); ++k) {
            if (ancilla_bits & (uint64_t{1} << kept_sorted[k].value)) packed |= uint64_t{1} << k;
        }
        return packed;
    };

    const double nn = s.squared_norm();
    if (nn <= 0.0) throw std::invalid_argument("cannot reduce the zero vector");

    // group amplitudes by traced-out assignment
    std::map<uint64_t, std::vector<std::pair<BasisConfig, Amplitude>>> groups;
    std::vector<BasisConfig> basis;
    for (const auto& [config, amp] : s.amplitudes()) {
        const BasisConfig reduced{config.mode_bits, compress(config.ancilla_bits)};
        basis.push_back(reduced);
        groups[config.ancilla_bits & ~keep_mask].emplace_back(reduced, amp);
    }
    std::sort(basis.begin(), basis.end());
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());

    const auto row_of = [&](const BasisConfig& c) {
        return static_cast<long>(std::lower_bound(basis.begin(), basis.end(), c) - basis.begin());
    };

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<long>(basis.size()),
                                                  static_cast<long>(basis.size()));
    for (const auto& [traced, terms] : groups) {
        for (const auto& [ci, ai] : terms) {
            for (const auto& [cj, aj] : terms) {
                rho(row_of(ci), row_of(cj)) += ai * std::conj(aj) / nn;
            }
        }
    }
    return DensityOperator(std::move(basis), std::move(rho), std::move(kept_sorted));
}

}  // namespace interfersim
