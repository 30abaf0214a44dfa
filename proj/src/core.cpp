#include "gibbsflow/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gibbsflow {

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Periodic: return "periodic";
    case Boundary::Fixed: return "fixed";
    case Boundary::Free: return "free";
  }
  return "?";
}

namespace {

BoxPtr finish(Box&& b) { return std::make_shared<const Box>(std::move(b)); }

}  // namespace

BoxPtr Box::from_sites(int dim, std::vector<Site> sites, Boundary b) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("box dimension must be 1 or 2");
  if (sites.empty()) throw std::invalid_argument("box must be nonempty");
  if (dim == 1) {
    for (const Site& s : sites)
      if (s.y != 0) throw std::invalid_argument("1D box sites must have y == 0");
  }
  std::sort(sites.begin(), sites.end());
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
    throw std::invalid_argument("box has duplicate sites");

  Box box;
  box.dim_ = dim;
  box.boundary_ = b;
  box.sites_ = std::move(sites);
  for (std::size_t i = 0; i < box.sites_.size(); ++i)
    box.site_index_[box.sites_[i]] = static_cast<int>(i);

  box.x0_ = box.sites_.front().x;
  box.x1_ = box.sites_.back().x;
  box.y0_ = box.sites_.front().y;
  box.y1_ = box.sites_.front().y;
  for (const Site& s : box.sites_) {
    box.x0_ = std::min(box.x0_, s.x);
    box.x1_ = std::max(box.x1_, s.x);
    box.y0_ = std::min(box.y0_, s.y);
    box.y1_ = std::max(box.y1_, s.y);
  }
  std::uint64_t rect_size =
      static_cast<std::uint64_t>(box.x1_ - box.x0_ + 1) * static_cast<std::uint64_t>(box.y1_ - box.y0_ + 1);
  box.is_rect_ = rect_size == box.sites_.size();

  if (b == Boundary::Periodic && !box.is_rect_)
    throw std::invalid_argument("periodic boundary requires a full rectangle of sites");
  return finish(std::move(box));
}

BoxPtr Box::ring(int length) {
  if (length < 2) throw std::invalid_argument("ring length must be >= 2");
  std::vector<Site> sites;
  for (int i = 0; i < length; ++i) sites.push_back({i, 0});
  return from_sites(1, std::move(sites), Boundary::Periodic);
}

BoxPtr Box::torus(int width, int height) {
  if (width < 2 || height < 1) throw std::invalid_argument("torus needs width >= 2, height >= 1");
  std::vector<Site> sites;
  for (int x = 0; x < width; ++x)
    for (int y = 0; y < height; ++y) sites.push_back({x, y});
  return from_sites(2, std::move(sites), Boundary::Periodic);
}

BoxPtr Box::interval(int radius, Boundary b) {
  if (radius < 0) throw std::invalid_argument("interval radius must be >= 0");
  std::vector<Site> sites;
  for (int x = -radius; x <= radius; ++x) sites.push_back({x, 0});
  return from_sites(1, std::move(sites), b);
}

BoxPtr Box::square(int radius, Boundary b) {
  if (radius < 0) throw std::invalid_argument("square radius must be >= 0");
  std::vector<Site> sites;
  for (int x = -radius; x <= radius; ++x)
    for (int y = -radius; y <= radius; ++y) sites.push_back({x, y});
  return from_sites(2, std::move(sites), b);
}

BoxPtr Box::with_fixed_exterior(const Box& base, std::map<Site, int> states,
                                std::optional<int> default_state) {
  Box box = base;
  box.boundary_ = Boundary::Fixed;
  box.fixed_states_ = std::move(states);
  box.fixed_default_ = default_state;
  return finish(std::move(box));
}

int Box::index_of(Site s) const {
  auto it = site_index_.find(s);
  return it == site_index_.end() ? -1 : it->second;
}

namespace {
int mod_floor(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}
}  // namespace

Site Box::wrap(Site s) const {
  if (boundary_ != Boundary::Periodic) return s;
  int w = x1_ - x0_ + 1;
  int h = y1_ - y0_ + 1;
  return {x0_ + mod_floor(s.x - x0_, w), y0_ + mod_floor(s.y - y0_, h)};
}

double Box::distance(Site a, Site b) const {
  int dx = std::abs(a.x - b.x);
  int dy = std::abs(a.y - b.y);
  if (boundary_ == Boundary::Periodic) {
    int w = x1_ - x0_ + 1;
    int h = y1_ - y0_ + 1;
    dx = std::min(dx, w - dx);
    dy = std::min(dy, h - dy);
  }
  return std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy);
}

bool Box::is_subset_of(const Box& other) const {
  for (const Site& s : sites_)
    if (!other.contains(s)) return false;
  return true;
}

BoxPtr Box::sub_window(Site center, int radius) const {
  std::vector<Site> sub;
  for (const Site& s : sites_) {
    if (std::abs(s.x - center.x) <= radius && std::abs(s.y - center.y) <= radius)
      sub.push_back(s);
  }
  return from_sites(dim_, std::move(sub), Boundary::Free);
}

BoxPtr Box::sub_from_indices(const std::vector<int>& indices) const {
  std::vector<Site> sub;
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= sites_.size())
      throw std::out_of_range("site index outside box");
    sub.push_back(sites_[i]);
  }
  return from_sites(dim_, std::move(sub), Boundary::Free);
}

std::optional<int> Box::try_exterior_state(Site s) const {
  if (boundary_ != Boundary::Fixed) return std::nullopt;
  auto it = fixed_states_.find(s);
  if (it != fixed_states_.end()) return it->second;
  return fixed_default_;
}

int Box::exterior_state(Site s) const {
  auto st = try_exterior_state(s);
  if (!st) {
    std::ostringstream msg;
    msg << "missing boundary state for exterior site (" << s.x << "," << s.y << ")";
    throw std::invalid_argument(msg.str());
  }
  return *st;
}

std::string Box::describe() const {
  std::ostringstream os;
  os << dim_ << "d/" << sites_.size() << "sites/" << to_string(boundary_);
  return os.str();
}

std::uint64_t state_count(const Box& box, int q, std::uint64_t cap) {
  LocalStateSpace space(q);
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (n > cap / static_cast<std::uint64_t>(q)) {
      std::ostringstream msg;
      msg << "state space q^" << box.size() << " exceeds the dense cap of " << cap << " states";
      throw ResourceLimitError(msg.str());
    }
    n *= static_cast<std::uint64_t>(q);
  }
  if (n > cap) {
    std::ostringstream msg;
    msg << "state space of " << n << " states exceeds the dense cap of " << cap;
    throw ResourceLimitError(msg.str());
  }
  return n;
}

Configuration::Configuration(BoxPtr box, int q, const std::vector<int>& states_one_based)
    : box_(std::move(box)), q_(LocalStateSpace(q).q) {
  if (states_one_based.size() != box_->size())
    throw std::invalid_argument("configuration needs one state per site");
  digits_.reserve(states_one_based.size());
  for (int s : states_one_based) {
    if (s < 1 || s > q_) throw std::invalid_argument("state out of range 1..q");
    digits_.push_back(static_cast<std::uint8_t>(s - 1));
  }
}

Configuration Configuration::constant(BoxPtr box, int q, int state) {
  std::vector<int> states(box->size(), state);
  return Configuration(std::move(box), q, states);
}

Configuration Configuration::from_digits(BoxPtr box, int q, std::vector<std::uint8_t> digits) {
  Configuration cfg;
  cfg.box_ = std::move(box);
  cfg.q_ = LocalStateSpace(q).q;
  if (digits.size() != cfg.box_->size())
    throw std::invalid_argument("configuration needs one state per site");
  for (std::uint8_t d : digits)
    if (d >= q) throw std::invalid_argument("digit out of range");
  cfg.digits_ = std::move(digits);
  return cfg;
}

Configuration Configuration::decode(std::uint64_t index, BoxPtr box, int q) {
  std::uint64_t n = state_count(*box, q, kMeasureStateCap);
  if (index >= n) throw std::out_of_range("configuration index out of range");
  std::vector<std::uint8_t> digits(box->size());
  for (std::size_t k = 0; k < digits.size(); ++k) {
    digits[k] = static_cast<std::uint8_t>(index % q);
    index /= q;
  }
  return from_digits(std::move(box), q, std::move(digits));
}

std::uint64_t Configuration::encode() const {
  std::uint64_t index = 0;
  std::uint64_t base = 1;
  for (std::size_t k = 0; k < digits_.size(); ++k) {
    index += base * digits_[k];
    base *= static_cast<std::uint64_t>(q_);
  }
  return index;
}

int Configuration::state_at(Site s) const {
  int i = box_->index_of(s);
  if (i < 0) throw std::invalid_argument("site outside box");
  return state(static_cast<std::size_t>(i));
}

Configuration Configuration::flipped(std::size_t site_index, int new_state) const {
  if (site_index >= digits_.size()) throw std::invalid_argument("site outside box");
  if (new_state < 1 || new_state > q_) throw std::invalid_argument("state out of range 1..q");
  Configuration out = *this;
  out.digits_[site_index] = static_cast<std::uint8_t>(new_state - 1);
  return out;
}

Configuration Configuration::flipped_at(Site s, int new_state) const {
  int i = box_->index_of(s);
  if (i < 0) throw std::invalid_argument("site outside box");
  return flipped(static_cast<std::size_t>(i), new_state);
}

Configuration flip(const Configuration& cfg, Site x, int state) {
  return cfg.flipped_at(x, state);
}

FiniteMeasure::FiniteMeasure(BoxPtr box, int q, std::vector<double> weights, bool renormalize)
    : box_(std::move(box)), q_(LocalStateSpace(q).q), weights_(std::move(weights)) {
  std::uint64_t n = state_count(*box_, q_, kMeasureStateCap);
  if (weights_.size() != n) throw std::invalid_argument("weight vector has wrong length");
  KahanSum total;
  for (double& w : weights_) {
    if (std::isnan(w)) throw std::invalid_argument("measure weight is NaN");
    if (w < 0) {
      if (w < -1e-12) throw std::invalid_argument("measure weight is negative");
      w = 0.0;  // clamp roundoff-scale negatives
    }
    total.add(w);
  }
  double mass = total.value();
  if (renormalize) {
    if (mass <= 0) throw std::invalid_argument("cannot normalize a zero measure");
    for (double& w : weights_) w /= mass;
  } else if (std::abs(mass - 1.0) > 1e-12) {
    throw std::invalid_argument("measure weights must sum to 1 within 1e-12");
  }
}

FiniteMeasure FiniteMeasure::uniform(BoxPtr box, int q) {
  std::uint64_t n = state_count(*box, q, kMeasureStateCap);
  return FiniteMeasure(std::move(box), q,
                       std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteMeasure FiniteMeasure::point_mass(const Configuration& cfg) {
  std::uint64_t n = state_count(*cfg.box(), cfg.q(), kMeasureStateCap);
  std::vector<double> w(n, 0.0);
  w[cfg.encode()] = 1.0;
  return FiniteMeasure(cfg.box(), cfg.q(), std::move(w));
}

std::vector<int> site_positions(const Box& sub, const Box& big) {
  std::vector<int> pos;
  pos.reserve(sub.size());
  for (const Site& s : sub.sites()) {
    int i = big.index_of(s);
    if (i < 0) throw std::invalid_argument("sub-box is not contained in the box");
    pos.push_back(i);
  }
  return pos;
}

std::vector<std::uint32_t> cylinder_index_map(const Box& big, const Box& sub, int q) {
  std::uint64_t n = state_count(big, q, kMeasureStateCap);
  std::vector<int> pos = site_positions(sub, big);
  std::vector<std::uint32_t> map(n);
  DigitOdometer odo(big.size(), q);
  std::uint64_t idx = 0;
  do {
    std::uint32_t sub_idx = 0;
    std::uint32_t base = 1;
    const auto& d = odo.digits();
    for (int p : pos) {
      sub_idx += base * d[static_cast<std::size_t>(p)];
      base *= static_cast<std::uint32_t>(q);
    }
    map[idx++] = sub_idx;
  } while (odo.advance());
  return map;
}

FiniteMeasure marginal(const FiniteMeasure& m, const BoxPtr& sub) {
  if (!sub->is_subset_of(*m.box()))
    throw std::invalid_argument("marginal target is not contained in the measure's box");
  std::uint64_t n_sub = state_count(*sub, m.q(), kMeasureStateCap);
  std::vector<std::uint32_t> map = cylinder_index_map(*m.box(), *sub, m.q());
  std::vector<double> w(n_sub, 0.0);
  for (std::uint64_t i = 0; i < m.size(); ++i) w[map[i]] += m[i];
  return FiniteMeasure(sub, m.q(), std::move(w), /*renormalize=*/true);
}

double total_variation(const FiniteMeasure& a, const FiniteMeasure& b) {
  if (a.q() != b.q() || a.box()->sites() != b.box()->sites())
    throw std::invalid_argument("total variation requires measures on the same box");
  KahanSum s;
  for (std::uint64_t i = 0; i < a.size(); ++i) s.add(std::abs(a[i] - b[i]));
  return 0.5 * s.value();
}

}  // namespace gibbsflow
