#include "fstsp/instance.hpp"

#include <cmath>
#include <fmt/format.h>

namespace fstsp {

bool Instance::slow_is_eligible(NodeId k) const {
  if (k < 1 || k > n) return false;
  for (NodeId e : eligible)
    if (e == k) return true;
  return false;
}

void Instance::validate() {
  if (n < 1) throw DataError(fmt::format("n must be >= 1, got {}", n));
  auto check_matrix = [&](const Matrix& m, const char* field) {
    if (m.dim() != n + 1)
      throw DataError(fmt::format("{} must be {}x{}, got {}x{}", field, n + 1,
                                  n + 1, m.dim(), m.dim()));
    for (NodeId i = 0; i <= n; ++i)
      for (NodeId j = 0; j <= n; ++j) {
        double v = m(i, j);
        if (!(v >= 0.0) || std::isnan(v))
          throw DataError(
              fmt::format("{}[{}][{}] must be >= 0, got {}", field, i, j, v));
      }
  };
  check_matrix(tau, "tau");
  check_matrix(tau_d, "tauD");
  if (std::isnan(endurance) || endurance < 0.0)
    throw DataError(fmt::format("e must be >= 0 or inf, got {}", endurance));
  if (!(setup_launch >= 0.0))
    throw DataError(fmt::format("sL must be >= 0, got {}", setup_launch));
  if (!(setup_return >= 0.0))
    throw DataError(fmt::format("sR must be >= 0, got {}", setup_return));
  NodeId prev = 0;
  for (NodeId k : eligible) {
    if (k < 1 || k > n)
      throw DataError(fmt::format("eligible entry {} out of range 1..{}", k, n));
    if (k <= prev)
      throw DataError("eligible must be strictly increasing (sorted, unique)");
    prev = k;
  }
  if (!(variant.alpha > 0.0))
    throw DataError(fmt::format("alpha must be > 0, got {}", variant.alpha));
  eligible_bits_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (NodeId k : eligible) eligible_bits_[k] = 1;
}

bool sortie_allowed(const Instance& inst, NodeId launch, NodeId customer,
                    NodeId ret) {
  if (launch < 0 || launch > inst.n || ret < 0 || ret > inst.n) return false;
  if (!inst.is_eligible(customer)) return false;
  if (launch == customer || customer == ret) return false;
  if (launch == ret && !inst.variant.allow_launch_equals_return) return false;
  double legs = inst.tau_d(launch, customer) + inst.tau_d(customer, ret);
  return legs <= inst.endurance + kFeasTol;
}

SortieCatalog enumerate_sorties(const Instance& inst) {
  SortieCatalog cat;
  for (NodeId launch = 0; launch <= inst.n; ++launch)
    for (NodeId customer : inst.eligible)
      for (NodeId ret = 0; ret <= inst.n; ++ret)
        if (sortie_allowed(inst, launch, customer, ret))
          cat.triples.push_back({launch, customer, ret});
  return cat;
}

void build_matrices(const std::vector<Coord>& coords, TruckMetric truck_metric,
                    DroneMetric, double truck_speed_kmh,
                    double drone_speed_kmh, Matrix& tau, Matrix& tau_d) {
  if (coords.size() < 2)
    throw DataError("build_matrices needs at least depot plus one customer");
  if (!(truck_speed_kmh > 0.0) || !(drone_speed_kmh > 0.0))
    throw DataError("speeds must be > 0");
  int dim = static_cast<int>(coords.size());
  tau = Matrix(dim);
  tau_d = Matrix(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double dx = coords[i].x - coords[j].x;
      double dy = coords[i].y - coords[j].y;
      double truck_km = truck_metric == TruckMetric::Manhattan
                            ? std::abs(dx) + std::abs(dy)
                            : std::hypot(dx, dy);
      double drone_km = std::hypot(dx, dy);
      tau(i, j) = truck_km / truck_speed_kmh * 60.0;
      tau_d(i, j) = drone_km / drone_speed_kmh * 60.0;
    }
}

}  // namespace fstsp
