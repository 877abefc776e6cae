#include "leoscale/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "leoscale/random.hpp"

namespace leoscale {

void ConstellationGeometry::validate() const {
  if (sats_per_plane < 3 || planes < 3) {
    throw std::invalid_argument(
        "ConstellationGeometry: need M >= 3 and P >= 3, got M=" +
        std::to_string(sats_per_plane) + " P=" + std::to_string(planes));
  }
  if (phasing < 0 || phasing >= planes) {
    throw std::invalid_argument("ConstellationGeometry: phasing outside [0, P)");
  }
}

ConstellationGeometry ConstellationGeometry::square(int n) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) {
    throw std::invalid_argument("ConstellationGeometry::square: n=" +
                                std::to_string(n) + " is not a perfect square");
  }
  ConstellationGeometry g;
  g.planes = side;
  g.sats_per_plane = side;
  g.validate();
  return g;
}

TorusTopology::TorusTopology(const ConstellationGeometry& geometry)
    : geometry_(geometry), n_(geometry.satellite_count()) {
  geometry_.validate();
  state_.assign(static_cast<std::size_t>(2 * n_), 1);
}

std::pair<int, int> TorusTopology::link_endpoints(int link) const {
  const int sat = link / 2;
  const int M = geometry_.sats_per_plane;
  const int P = geometry_.planes;
  const int x = sat / M;
  const int y = sat % M;
  if (link % 2 == kEast) {
    return {sat, satellite_index((x + 1) % P, y)};
  }
  return {sat, satellite_index(x, (y + 1) % M)};
}

std::array<TorusTopology::Neighbor, 4> TorusTopology::neighbors(int satellite) const {
  const int M = geometry_.sats_per_plane;
  const int P = geometry_.planes;
  const int x = satellite / M;
  const int y = satellite % M;
  const int east = satellite_index((x + 1) % P, y);
  const int west = satellite_index((x + P - 1) % P, y);
  const int north = satellite_index(x, (y + 1) % M);
  const int south = satellite_index(x, (y + M - 1) % M);
  return {{{east, link_index(satellite, kEast)},
           {west, link_index(west, kEast)},
           {north, link_index(satellite, kNorth)},
           {south, link_index(south, kNorth)}}};
}

void TorusTopology::set_all(bool on) {
  std::fill(state_.begin(), state_.end(), on ? 1 : 0);
}

void TorusTopology::step(const LinkDynamics& dyn, std::mt19937_64& rng) {
  const double alpha = dyn.alpha();
  const double beta = dyn.beta();
  for (auto& s : state_) {
    const double u = uniform_double(rng);
    if (s) {
      if (u < alpha) s = 0;
    } else {
      if (u < beta) s = 1;
    }
  }
}

int TorusTopology::on_link_count() const {
  return static_cast<int>(std::count(state_.begin(), state_.end(), 1));
}

namespace {

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

double TorusTopology::connectivity() const {
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> size(static_cast<std::size_t>(n_), 1);
  for (int link = 0; link < 2 * n_; ++link) {
    if (!state_[link]) continue;
    auto [u, v] = link_endpoints(link);
    int ru = find_root(parent, u);
    int rv = find_root(parent, v);
    if (ru == rv) continue;
    if (size[ru] < size[rv]) std::swap(ru, rv);
    parent[rv] = ru;
    size[ru] += size[rv];
  }
  const int largest = *std::max_element(size.begin(), size.end());
  // size[] is only valid at roots, but a non-root's stale size never
  // exceeds its root's size, so the max is attained at a root.
  return static_cast<double>(largest) / static_cast<double>(n_);
}

}  // namespace leoscale
