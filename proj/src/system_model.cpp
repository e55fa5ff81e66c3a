#include "rpsim/system_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace rpsim {

std::string to_string(ReactionModel m) {
  switch (m) {
    case ReactionModel::hamiltonian_only: return "hamiltonian_only";
    case ReactionModel::haberkorn: return "haberkorn";
    case ReactionModel::kominis: return "kominis";
    case ReactionModel::jones_hore: return "jones_hore";
    case ReactionModel::custom_dephasing: return "custom_dephasing";
  }
  return "?";
}

void SpinSystemSpec::validate() const {
  if (nuclei.size() > 4)
    throw ConfigError("at most 4 nuclei supported, got " + std::to_string(nuclei.size()));
  for (const auto& n : nuclei) {
    if (n.attached_electron != 1 && n.attached_electron != 2)
      throw ConfigError("nucleus must attach to electron 1 or 2");
  }
  if (k_singlet < 0.0 || k_triplet < 0.0)
    throw ConfigError("recombination rates must be non-negative");
  if (model == ReactionModel::hamiltonian_only && (k_singlet != 0.0 || k_triplet != 0.0))
    throw ConfigError("hamiltonian_only requires k_S = k_T = 0");
  if (model == ReactionModel::custom_dephasing && custom_eta < 0.0)
    throw ConfigError("custom dephasing rate eta must be non-negative");
}

Layout SpinSystemSpec::layout() const {
  Layout l{2, 2};
  l.insert(l.end(), nuclei.size(), 2);
  return l;
}

OperatorMatrix build_hamiltonian(const SpinSystemSpec& spec) {
  spec.validate();
  const Layout lay = spec.layout();
  const int dim = total_dim(lay);
  const SpinOps s = spin_half_operators();
  OperatorMatrix h = OperatorMatrix::Zero(dim, dim);
  h += spec.larmor_omega * (embed(s.z, 0, lay) + embed(s.z, 1, lay));
  for (std::size_t i = 0; i < spec.nuclei.size(); ++i) {
    const std::size_t e_slot = spec.nuclei[i].attached_electron == 1 ? 0 : 1;
    const std::size_t n_slot = 2 + i;
    const double a = spec.nuclei[i].coupling_A;
    h += a * (embed(s.x, n_slot, lay) * embed(s.x, e_slot, lay) +
              embed(s.y, n_slot, lay) * embed(s.y, e_slot, lay) +
              embed(s.z, n_slot, lay) * embed(s.z, e_slot, lay));
  }
  return h;
}

DensityMatrix initial_state(const SpinSystemSpec& spec) {
  const OperatorMatrix qs = singlet_projector(spec.layout());
  DensityMatrix rho{qs / qs.trace().real()};
  return rho;
}

OperatorMatrix total_nuclear_z(const SpinSystemSpec& spec) {
  const Layout lay = spec.layout();
  const int dim = total_dim(lay);
  const SpinOps s = spin_half_operators();
  OperatorMatrix iz = OperatorMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < spec.nuclei.size(); ++i)
    iz += embed(s.z, 2 + i, lay);
  return iz;
}

OperatorMatrix total_jz(const SpinSystemSpec& spec) {
  const Layout lay = spec.layout();
  const SpinOps s = spin_half_operators();
  return embed(s.z, 0, lay) + embed(s.z, 1, lay) + total_nuclear_z(spec);
}

std::vector<SpectrumLine> st_spectrum_analysis(const SpinSystemSpec& spec) {
  spec.validate();
  const OperatorMatrix h = build_hamiltonian(spec);
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericError("st_spectrum_analysis: eigendecomposition failed");
  const Eigen::VectorXd w = es.eigenvalues();
  const OperatorMatrix qs_eig = es.eigenvectors().adjoint() *
                                singlet_projector(spec.layout()) * es.eigenvectors();

  // Group degenerate eigenvalues into blocks; eigenvectors are ambiguous
  // inside a block, eigenvalues are not.
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  std::vector<std::pair<int, int>> blocks; // [begin, end) index ranges
  for (int i = 0; i < w.size();) {
    int j = i + 1;
    while (j < w.size() && w[j] - w[i] < NumericPolicy::degeneracy_tol * scale) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }

  std::vector<SpectrumLine> lines;
  for (std::size_t bm = 0; bm < blocks.size(); ++bm) {
    for (std::size_t bn = bm + 1; bn < blocks.size(); ++bn) {
      double weight = 0.0;
      for (int m = blocks[bm].first; m < blocks[bm].second; ++m)
        for (int n = blocks[bn].first; n < blocks[bn].second; ++n)
          weight += std::abs(qs_eig(m, n));
      if (weight <= NumericPolicy::spectrum_weight_cut) continue;
      SpectrumLine line;
      line.m = static_cast<int>(bm);
      line.n = static_cast<int>(bn);
      line.freq = w[blocks[bm].first] - w[blocks[bn].first];
      line.weight = weight;
      lines.push_back(line);
    }
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const SpectrumLine& a, const SpectrumLine& b) { return a.weight > b.weight; });
  return lines;
}

}  // namespace rpsim
