#include "spacelog/commodity.hpp"

#include <algorithm>
#include <cmath>

#include "spacelog/error.hpp"

namespace spacelog {

CommoditySpace::CommoditySpace(std::vector<Commodity> commodities)
    : commodities_(std::move(commodities)) {
  for (std::size_t i = 0; i < commodities_.size(); ++i) {
    if (!index_.emplace(commodities_[i].id, static_cast<int>(i)).second) {
      throw Error(Errc::kDuplicateId, "commodity '" + commodities_[i].id + "'");
    }
  }
}

int CommoditySpace::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

int CommoditySpace::require(const std::string& id) const {
  const int i = index_of(id);
  if (i < 0) throw Error(Errc::kMissingCommodity, "commodity '" + id + "' is not declared");
  return i;
}

double propellant_mass_fraction(double delta_v_kms, double isp_s) {
  if (!(isp_s > 0.0)) throw Error(Errc::kNonPositiveIsp, "isp must be positive");
  return -std::expm1(-delta_v_kms * 1000.0 / (isp_s * kStandardGravity));
}

Matrix burn_matrix(const VehicleSpec& vehicle, double delta_v_kms, const CommoditySpace& space) {
  const auto r = static_cast<Eigen::Index>(space.size());
  Matrix f = Matrix::Identity(r, r);
  const int vcol = space.require(vehicle.id);
  const double phi = propellant_mass_fraction(delta_v_kms, vehicle.isp);
  if (phi == 0.0) {
    for (const auto& pc : vehicle.propellant_components) space.require(pc.commodity);
    return f;
  }
  for (const auto& pc : vehicle.propellant_components) {
    const int row = space.require(pc.commodity);
    const double share = pc.fraction * phi;
    for (Eigen::Index u = 0; u < r; ++u) {
      if (space[static_cast<std::size_t>(u)].is_massed()) f(row, u) -= share;
    }
    f(row, vcol) -= share * vehicle.structure_mass;
  }
  return f;
}

namespace {

bool is_internal(const std::string& id, std::span<const std::string> internal) {
  return std::find(internal.begin(), internal.end(), id) != internal.end();
}

double operating_hours(const IsruCatalogEntry& e, double hours, double solar_day_hours) {
  return hours * e.operating_hours_per_solar_day / solar_day_hours;
}

}  // namespace

Matrix production_matrix(std::span<const IsruCatalogEntry> entries, double hours,
                         const CommoditySpace& space, double solar_day_hours,
                         std::span<const std::string> internal_resources) {
  if (hours < 0.0) throw Error(Errc::kNegativeDuration, "production over negative hours");
  const auto r = static_cast<Eigen::Index>(space.size());
  Matrix f = Matrix::Identity(r, r);
  for (const IsruCatalogEntry& e : entries) {
    const int plant = space.require(e.id);
    const double h = operating_hours(e, hours, solar_day_hours);
    for (const auto& [out, alpha] : e.production) {
      if (is_internal(out, internal_resources)) continue;
      f(space.require(out), plant) += alpha * h;
    }
    for (const auto& [in, beta] : e.consumption) {
      if (is_internal(in, internal_resources)) continue;
      f(space.require(in), plant) -= beta * h;
    }
  }
  return f;
}

Matrix internal_balance_rows(std::span<const IsruCatalogEntry> entries, double hours,
                             const CommoditySpace& space, double solar_day_hours,
                             std::span<const std::string> internal_resources) {
  if (hours < 0.0) throw Error(Errc::kNegativeDuration, "production over negative hours");
  const auto r = static_cast<Eigen::Index>(space.size());
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(internal_resources.size()), r);
  for (std::size_t k = 0; k < internal_resources.size(); ++k) {
    const std::string& res = internal_resources[k];
    for (const IsruCatalogEntry& e : entries) {
      const double hrs = operating_hours(e, hours, solar_day_hours);
      double net = 0.0;
      if (auto it = e.consumption.find(res); it != e.consumption.end()) net += it->second;
      if (auto it = e.production.find(res); it != e.production.end()) net -= it->second;
      if (net != 0.0) h(static_cast<Eigen::Index>(k), space.require(e.id)) += net * hrs;
    }
  }
  return h;
}

double maintenance_coefficient(double rate_per_year, double step_days) {
  return -rate_per_year * (step_days / 365.0);
}

void apply_maintenance(Matrix& f, int spare_index, std::span<const int> plant_indices,
                       double coefficient) {
  if (coefficient == 0.0) return;
  for (int p : plant_indices) f(spare_index, p) += coefficient;
}

Matrix capacity_rows(const VehicleSpec& vehicle, const CommoditySpace& space) {
  const auto r = static_cast<Eigen::Index>(space.size());
  Matrix h = Matrix::Zero(2, r);
  const int vcol = space.require(vehicle.id);
  std::vector<int> own;
  for (const auto& pc : vehicle.propellant_components) own.push_back(space.require(pc.commodity));
  for (Eigen::Index u = 0; u < r; ++u) {
    if (!space[static_cast<std::size_t>(u)].is_massed()) continue;
    const bool is_own = std::find(own.begin(), own.end(), static_cast<int>(u)) != own.end();
    h(is_own ? 1 : 0, u) = 1.0;
  }
  h(0, vcol) = -vehicle.payload_capacity;
  h(1, vcol) = -vehicle.propellant_capacity;
  return h;
}

Matrix power_supply_row(std::span<const IsruCatalogEntry> infrastructure,
                        const PowerCatalogEntry& power, double output_kw_per_kg,
                        double storage_efficiency, const CommoditySpace& space) {
  const double qp = power.working_hours_per_solar_day;
  if (!(qp > 0.0)) {
    throw Error(Errc::kZeroPowerWorkingTime, "power system '" + power.id + "' never works");
  }
  Matrix h = Matrix::Zero(1, static_cast<Eigen::Index>(space.size()));
  for (const IsruCatalogEntry& e : infrastructure) {
    const double surcharge = (e.operating_hours_per_solar_day - qp) / (storage_efficiency * qp);
    h(0, space.require(e.id)) += e.power_per_kg() * (1.0 + surcharge);
  }
  h(0, space.require(power.id)) -= output_kw_per_kg;
  return h;
}

Matrix energy_storage_row(std::span<const IsruCatalogEntry> infrastructure,
                          const PowerCatalogEntry& power, double output_kw_per_kg,
                          const EnergyStorageEntry& storage, const CommoditySpace& space) {
  const double qp = power.working_hours_per_solar_day;
  if (!(qp > 0.0)) {
    throw Error(Errc::kZeroPowerWorkingTime, "power system '" + power.id + "' never works");
  }
  Matrix h = Matrix::Zero(1, static_cast<Eigen::Index>(space.size()));
  for (const IsruCatalogEntry& e : infrastructure) h(0, space.require(e.id)) -= e.power_per_kg();
  h(0, space.require(power.id)) += output_kw_per_kg;
  h(0, space.require(storage.id)) -=
      storage.specific_energy_kwh_per_kg / (storage.efficiency * qp);
  return h;
}

Matrix storage_capacity_rows(std::span<const IsruCatalogEntry> tanks, const Matrix& f,
                             const CommoditySpace& space) {
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(tanks.size()), f.cols());
  for (std::size_t k = 0; k < tanks.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    h.row(row) = f.row(space.require(tanks[k].reference_product));
    h(row, space.require(tanks[k].id)) -= tanks[k].storage_per_kg();
  }
  return h;
}

Matrix nonneg_inflow_rows(const Matrix& f) { return -f; }

double degraded_output(const PowerCatalogEntry& power, double elapsed_days,
                       double solar_day_hours) {
  const double p0 = power.output_kw_per_kg();
  if (power.degradation_rate == 0.0 || elapsed_days <= 0.0) return p0;
  const double period_days =
      power.degradation_period == DegradationPeriod::kYear ? 365.0 : solar_day_hours / 24.0;
  return p0 * std::pow(1.0 - power.degradation_rate, elapsed_days / period_days);
}

bool stoichiometry_holds(const IsruCatalogEntry& entry) {
  double out = 0.0;
  double in = 0.0;
  for (const auto& [id, a] : entry.production) out += a;
  for (const auto& [id, b] : entry.consumption) in += b;
  return out <= in * (1.0 + 1e-12);
}

bool is_trivial_nonneg_row(const Matrix& h, Eigen::Index r) {
  int nonzeros = 0;
  bool negative = true;
  for (Eigen::Index u = 0; u < h.cols(); ++u) {
    if (h(r, u) != 0.0) {
      ++nonzeros;
      negative = h(r, u) < 0.0;
    }
  }
  return nonzeros <= 1 && negative;
}

}  // namespace spacelog
