#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gibbsflow {

/// Raised when a request exceeds the dense-engine state caps.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Single-site state space {1, ..., q}.
struct LocalStateSpace {
  int q;
  explicit LocalStateSpace(int q_in) : q(q_in) {
    if (q < 2) throw std::invalid_argument("local state space requires q >= 2");
  }
};

/// Lattice site. 1D boxes keep y == 0.
struct Site {
  int x = 0;
  int y = 0;
  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;
};

enum class Boundary { Periodic, Fixed, Free };

std::string to_string(Boundary b);

class Box;
using BoxPtr = std::shared_ptr<const Box>;

/// Finite volume: an ordered set of sites plus an exterior convention.
/// Sites are kept in lexicographic (x, y) order; that order defines the
/// base-q encoding of configurations. Boxes are immutable once built.
class Box {
 public:
  static BoxPtr ring(int length);                      // 1D periodic, sites 0..L-1
  static BoxPtr torus(int width, int height);          // 2D periodic
  static BoxPtr interval(int radius, Boundary b = Boundary::Free);  // 1D [-n, n]
  static BoxPtr square(int radius, Boundary b = Boundary::Free);    // 2D [-n, n]^2
  static BoxPtr from_sites(int dim, std::vector<Site> sites, Boundary b = Boundary::Free);

  /// Fixed-boundary variant: exterior sites read from `states`, with an
  /// optional default used for sites not listed.
  static BoxPtr with_fixed_exterior(const Box& base, std::map<Site, int> states,
                                    std::optional<int> default_state = std::nullopt);

  int dim() const { return dim_; }
  std::size_t size() const { return sites_.size(); }
  const std::vector<Site>& sites() const { return sites_; }
  Site site(std::size_t i) const { return sites_[i]; }
  Boundary boundary() const { return boundary_; }

  bool contains(Site s) const { return index_of(s) >= 0; }
  /// Position in the canonical site order, or -1.
  int index_of(Site s) const;

  /// Periodic boxes fold a site back into the fundamental rectangle;
  /// other boundaries return the site unchanged.
  Site wrap(Site s) const;

  /// Euclidean distance, minimal-image for periodic boxes.
  double distance(Site a, Site b) const;

  bool is_subset_of(const Box& other) const;

  /// Sub-volume of all member sites within Chebyshev radius of `center`
  /// (no wrapping; used for nested-volume ledgers).
  BoxPtr sub_window(Site center, int radius) const;
  BoxPtr sub_from_indices(const std::vector<int>& indices) const;

  /// State of an exterior site under a fixed boundary. Throws for
  /// free/periodic boundaries or when the site is not specified.
  int exterior_state(Site s) const;
  std::optional<int> try_exterior_state(Site s) const;

  /// True when the sites form a full axis-aligned rectangle.
  bool is_rectangle() const { return is_rect_; }
  int x_min() const { return x0_; }
  int x_max() const { return x1_; }
  int y_min() const { return y0_; }
  int y_max() const { return y1_; }

  std::string describe() const;

 private:
  Box() = default;

  int dim_ = 1;
  std::vector<Site> sites_;
  Boundary boundary_ = Boundary::Free;
  std::map<Site, int> site_index_;
  bool is_rect_ = false;
  int x0_ = 0, x1_ = -1, y0_ = 0, y1_ = -1;
  std::map<Site, int> fixed_states_;
  std::optional<int> fixed_default_;
};

/// q^{|box|} with an overflow check against `cap`.
std::uint64_t state_count(const Box& box, int q, std::uint64_t cap);

/// Dense probability vectors are limited to this many states by default.
inline constexpr std::uint64_t kMeasureStateCap = 1ull << 24;

/// One point of {1..q}^box. States are exposed 1-based; internally they are
/// the 0-based digits of the base-q encoding (site order = box order).
class Configuration {
 public:
  Configuration(BoxPtr box, int q, const std::vector<int>& states_one_based);
  static Configuration constant(BoxPtr box, int q, int state);
  static Configuration from_digits(BoxPtr box, int q, std::vector<std::uint8_t> digits);
  static Configuration decode(std::uint64_t index, BoxPtr box, int q);

  std::uint64_t encode() const;

  int q() const { return q_; }
  const BoxPtr& box() const { return box_; }
  /// State in 1..q at the given site position.
  int state(std::size_t site_index) const { return digits_[site_index] + 1; }
  int state_at(Site s) const;
  const std::vector<std::uint8_t>& digits() const { return digits_; }

  /// Copy with the state at one site replaced; flipping back restores the
  /// original configuration.
  Configuration flipped(std::size_t site_index, int new_state) const;
  Configuration flipped_at(Site s, int new_state) const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.q_ == b.q_ && a.digits_ == b.digits_ &&
           a.box_->sites() == b.box_->sites();
  }

 private:
  Configuration() = default;

  BoxPtr box_;
  int q_ = 2;
  std::vector<std::uint8_t> digits_;
};

/// flip(cfg, x, i): the configuration equal to cfg except at x, where it is i.
Configuration flip(const Configuration& cfg, Site x, int state);

/// Dense probability vector over {1..q}^box, indexed by Configuration::encode.
class FiniteMeasure {
 public:
  FiniteMeasure(BoxPtr box, int q, std::vector<double> weights, bool renormalize = false);
  static FiniteMeasure uniform(BoxPtr box, int q);
  static FiniteMeasure point_mass(const Configuration& cfg);

  const BoxPtr& box() const { return box_; }
  int q() const { return q_; }
  std::uint64_t size() const { return weights_.size(); }
  double operator[](std::uint64_t index) const { return weights_[index]; }
  const std::vector<double>& weights() const { return weights_; }

  double mass_of(const Configuration& cfg) const { return weights_[cfg.encode()]; }

 private:
  BoxPtr box_;
  int q_;
  std::vector<double> weights_;
};

/// Sum of weights over the coordinates outside `sub`; requires sub ⊂ m.box.
FiniteMeasure marginal(const FiniteMeasure& m, const BoxPtr& sub);

double total_variation(const FiniteMeasure& a, const FiniteMeasure& b);

/// For each full-box index, the index of its restriction to `sub`.
std::vector<std::uint32_t> cylinder_index_map(const Box& big, const Box& sub, int q);

/// Positions of the sites of `sub` inside `big`.
std::vector<int> site_positions(const Box& sub, const Box& big);

/// Base-q odometer over all configurations of a box; digit k is the state
/// (0-based) of site k. Advances in encoding order 0, 1, ..., q^n - 1.
class DigitOdometer {
 public:
  DigitOdometer(std::size_t n_sites, int q) : q_(q), digits_(n_sites, 0) {}
  const std::vector<std::uint8_t>& digits() const { return digits_; }
  bool advance() {
    for (std::size_t k = 0; k < digits_.size(); ++k) {
      if (++digits_[k] < q_) return true;
      digits_[k] = 0;
    }
    return false;  // wrapped around to all zeros
  }

 private:
  int q_;
  std::vector<std::uint8_t> digits_;
};

/// Compensated (Neumaier) accumulation; the entropy functionals need the
/// extra digits near their zero crossings.
class KahanSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace gibbsflow
