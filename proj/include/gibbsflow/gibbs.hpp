#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gibbsflow/core.hpp"

namespace gibbsflow {

/// One interaction term: a finite set of sites and a total energy table
/// over their joint states. Site k is the k-th (least significant) digit
/// of the table index.
struct InteractionTerm {
  std::vector<Site> sites;
  std::vector<double> table;

  double energy(const std::vector<std::uint8_t>& digits) const {
    std::size_t idx = 0, base = 1;
    for (std::size_t k = 0; k < digits.size(); ++k) {
      idx += base * digits[k];
      base *= table.size() / base / 1;  // unused; see Potential
    }
    return table[idx];
  }
};

/// Finite-range potential: a list of interaction terms over absolute sites.
class Potential {
 public:
  Potential(int q, std::vector<InteractionTerm> terms);

  int q() const { return q_; }
  const std::vector<InteractionTerm>& terms() const { return terms_; }
  /// Maximum Chebyshev diameter of a term.
  int range() const { return range_; }

 private:
  int q_;
  std::vector<InteractionTerm> terms_;
  int range_ = 0;
};

/// Nearest-neighbour Ising pair potential on the box's edges, spins
/// mapped {1 -> -1, 2 -> +1}, energy -s_a s_b per edge.
Potential ising_potential(const Box& box);
/// Nearest-neighbour Potts potential, energy -1 on equal states.
Potential potts_potential(const Box& box, int q);
/// Preset lookup: "ising1d", "ising2d", "potts1d(q)", "potts2d(q)".
Potential potential_preset(const std::string& name, const Box& box);

Potential potential_from_json(const std::string& json_text);
std::string potential_to_json(const Potential& pot);

/// Upper bounds on single-site conditional oscillations delta_y gamma_x.
struct OscillationTable {
  int truncation_radius = 0;
  std::size_t n_sites = 0;
  std::vector<double> values;  // row x, column y

  double at(int x, int y) const { return values[static_cast<std::size_t>(x) * n_sites + y]; }
};

/// Boltzmann specification for a potential at inverse temperature beta on a
/// fixed box. Kernels are computed from shifted log-weights, so large beta
/// does not overflow. Immutable and safe to share between threads.
class Specification {
 public:
  Specification(BoxPtr box, Potential potential, double beta);

  const BoxPtr& box() const { return box_; }
  int q() const { return potential_.q(); }
  double beta() const { return beta_; }
  const Potential& potential() const { return potential_; }
  int range() const { return potential_.range(); }

  /// Total energy of a full-box configuration (fixed-boundary terms included).
  double energy(const Configuration& cfg) const;
  /// Energy change from setting site x to new_state.
  double energy_delta(const Configuration& cfg, int x_index, int new_state) const;

  /// gamma_Lambda(. | tau): probability vector over the states of `lambda`
  /// given the rest of the box (and the exterior convention) read from tau.
  FiniteMeasure kernel(const BoxPtr& lambda, const Configuration& tau) const;

  /// Single-site kernel gamma_x(. | cfg off x); out must hold q doubles.
  void single_site_kernel(const Configuration& cfg, int x_index, double* out) const;

  /// Normalized Boltzmann measure on the full box. Satisfies the
  /// finite-volume consistency equations by construction.
  FiniteMeasure gibbs_measure() const;

  /// Non-nullness constant: the exact infimum of single-site conditional
  /// probabilities over all sites and local patterns.
  double non_nullness() const;

  /// delta_y gamma_x: how much the conditional law at x can move when the
  /// state at y changes; exactly 0 beyond the interaction range.
  double oscillation_gamma(int x_index, int y_index) const;

  OscillationTable oscillation_table(int trunc) const;

  /// sum_y |y| sup_x delta_{x+y} gamma_x over displacements up to trunc;
  /// exact once trunc covers the potential range.
  double s3_sum(int trunc) const;

  /// Interior sites (excluding x itself) that share a term with x.
  const std::vector<int>& coupled_sites(int x_index) const;

 private:
  struct Slot {
    int box_pos;      // >= 0: read from the configuration
    int fixed_digit;  // used when box_pos < 0
  };
  struct TermPlan {
    const InteractionTerm* term;
    std::vector<Slot> slots;
  };

  double term_energy(const TermPlan& plan, const std::vector<std::uint8_t>& digits) const;
  double term_energy_override(const TermPlan& plan, const std::vector<std::uint8_t>& digits,
                              int x_index, std::uint8_t x_digit) const;

  BoxPtr box_;
  Potential potential_;
  double beta_;
  std::vector<TermPlan> plans_;
  std::vector<std::vector<int>> terms_by_site_;   // term indices touching each box site
  std::vector<std::vector<int>> coupled_sites_;   // interior neighbours per site
};

}  // namespace gibbsflow
