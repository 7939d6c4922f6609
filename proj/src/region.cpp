#include "sloc/region.hpp"

#include <cmath>
#include <cstdlib>

namespace sloc {

Shape parse_shape(const std::string& s) {
  if (s == "disc") return Shape::Disc;
  if (s == "square") return Shape::Square;
  throw ConfigError("unknown region shape '" + s + "'");
}

std::string to_string(Shape s) { return s == Shape::Disc ? "disc" : "square"; }

Region::Region(Shape shape, double radius) : shape_(shape), radius_(radius) {
  if (!(radius >= 1.0) || !std::isfinite(radius))
    throw DomainError("region radius must be >= 1, got " + std::to_string(radius));
  extent_ = static_cast<int>(std::floor(radius + 1e-12));
  const int w = 2 * extent_ + 1;
  lookup_.assign(static_cast<size_t>(w) * w, -1);
  const double r2 = radius * radius * (1.0 + 1e-14);
  for (int x = -extent_; x <= extent_; ++x) {
    for (int y = -extent_; y <= extent_; ++y) {
      const bool in = shape == Shape::Square || double(x) * x + double(y) * y <= r2;
      if (!in) continue;
      lookup_[static_cast<size_t>(x + extent_) * w + (y + extent_)] = size();
      sites_.push_back({x, y});
    }
  }
}

Index Region::index(int x, int y) const {
  if (std::abs(x) > extent_ || std::abs(y) > extent_) return -1;
  const int w = 2 * extent_ + 1;
  return lookup_[static_cast<size_t>(x + extent_) * w + (y + extent_)];
}

bool Region::contains(const Region& other) const {
  for (const auto& s : other.sites_)
    if (!contains(s.x, s.y)) return false;
  return true;
}

int Region::boundary_distance(Index i) const {
  const Site& s = site(i);
  for (int d = 1; d <= 2 * extent_ + 2; ++d) {
    for (int dx = -d; dx <= d; ++dx) {
      for (int dy = -d; dy <= d; ++dy) {
        if (std::max(std::abs(dx), std::abs(dy)) != d) continue;
        if (!contains(s.x + dx, s.y + dy)) return d;
      }
    }
  }
  return 2 * extent_ + 2;
}

bool Region::same_sites(const Region& other) const { return sites_ == other.sites_; }

RegionPtr make_region(Shape shape, double radius) {
  return std::make_shared<const Region>(shape, radius);
}

}  // namespace sloc
