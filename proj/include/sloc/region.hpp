#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sloc/types.hpp"

namespace sloc {

enum class Shape { Disc, Square };

Shape parse_shape(const std::string& s);
std::string to_string(Shape s);

struct Site {
  int x = 0;
  int y = 0;
  bool operator==(const Site&) const = default;
};

// Finite set of lattice sites {n : |n| <= radius}, Euclidean for discs and
// max-norm for squares, ordered lexicographically in (x, y).
class Region {
 public:
  Region(Shape shape, double radius);

  Shape shape() const { return shape_; }
  double radius() const { return radius_; }
  int extent() const { return extent_; }
  Index size() const { return static_cast<Index>(sites_.size()); }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& site(Index i) const { return sites_[static_cast<size_t>(i)]; }

  // Position of (x, y) in the site list, or -1.
  Index index(int x, int y) const;
  bool contains(int x, int y) const { return index(x, y) >= 0; }
  bool contains(const Region& other) const;

  // Lattice distance of a site to the complement, in max-norm steps.
  int boundary_distance(Index i) const;

  bool same_sites(const Region& other) const;

 private:
  Shape shape_;
  double radius_;
  int extent_;
  std::vector<Site> sites_;
  std::vector<Index> lookup_;
};

using RegionPtr = std::shared_ptr<const Region>;

RegionPtr make_region(Shape shape, double radius);

}  // namespace sloc
