#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "leoscale/link_dynamics.hpp"

namespace leoscale {

/// M x P wraparound grid. Inclination and phasing are carried as metadata
/// only; no formula in this library consumes them.
struct ConstellationGeometry {
  int planes = 0;          // P
  int sats_per_plane = 0;  // M
  double inclination_deg = 53.0;
  int phasing = 0;  // F in {0, ..., P-1}

  int satellite_count() const { return planes * sats_per_plane; }
  bool is_square() const { return planes == sats_per_plane; }
  void validate() const;  // throws std::invalid_argument if M < 3 or P < 3

  /// Square n-satellite torus (n a perfect square, side >= 3).
  static ConstellationGeometry square(int n);
};

/// Torus constellation with a per-link ON/OFF field. Each satellite owns
/// two canonical undirected links, "east" (next plane, same slot) and
/// "north" (same plane, next slot), for 2n links total.
///
/// step() mutates the instance and must not race with reads on the same
/// object; distinct instances are independent.
class TorusTopology {
 public:
  enum Direction { kEast = 0, kNorth = 1 };

  explicit TorusTopology(const ConstellationGeometry& geometry);

  const ConstellationGeometry& geometry() const { return geometry_; }
  int satellite_count() const { return n_; }
  int link_count() const { return 2 * n_; }

  int satellite_index(int plane, int slot) const {
    return plane * geometry_.sats_per_plane + slot;
  }
  int link_index(int satellite, Direction dir) const {
    return satellite * 2 + dir;
  }
  /// Endpoints (owning satellite, neighbor) of an undirected link.
  std::pair<int, int> link_endpoints(int link) const;

  bool link_on(int link) const { return state_[link] != 0; }
  void set_link(int link, bool on) { state_[link] = on ? 1 : 0; }
  void set_all(bool on);
  const std::vector<std::uint8_t>& link_states() const { return state_; }

  /// The four neighbors of a satellite with the connecting link index.
  struct Neighbor {
    int satellite;
    int link;
  };
  std::array<Neighbor, 4> neighbors(int satellite) const;

  /// One slot of Markov evolution: every ON link fails w.p. alpha, every
  /// OFF link recovers w.p. beta. Draws are consumed in ascending link
  /// index order, so (engine state, link states) determines the successor.
  void step(const LinkDynamics& dyn, std::mt19937_64& rng);

  int on_link_count() const;

  /// Fraction of satellites in the largest connected component of the
  /// ON-link graph (union-find). Isolated satellites count as components.
  double connectivity() const;

 private:
  ConstellationGeometry geometry_;
  int n_;
  std::vector<std::uint8_t> state_;
};

}  // namespace leoscale
