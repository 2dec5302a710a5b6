#pragma once
// Commodity space and the coefficient blocks of the network-flow model:
// transformation matrices (flight burns, in-situ production, maintenance)
// and concurrency rows (capacities, power, energy storage, storage tanks).

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spacelog/network.hpp"

namespace spacelog {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

enum class CommodityKind { kContinuous, kDiscrete };

enum class CommodityCategory {
  kPayload,
  kPropellantComponent,
  kResource,
  kVehicle,
  kInfrastructureSubsystem,
  kPower,
  kEnergyStorage,
  kSpare,
};

struct Commodity {
  std::string id;
  CommodityKind kind = CommodityKind::kContinuous;
  std::string unit = "kg";  // "kg" or "count"
  CommodityCategory category = CommodityCategory::kPayload;

  bool is_massed() const { return kind == CommodityKind::kContinuous && unit == "kg"; }
  bool is_infrastructure() const {
    return category == CommodityCategory::kInfrastructureSubsystem ||
           category == CommodityCategory::kPower || category == CommodityCategory::kEnergyStorage;
  }
  bool operator==(const Commodity&) const = default;
};

class CommoditySpace {
 public:
  CommoditySpace() = default;
  explicit CommoditySpace(std::vector<Commodity> commodities);

  std::size_t size() const { return commodities_.size(); }
  const Commodity& operator[](std::size_t i) const { return commodities_[i]; }
  const std::vector<Commodity>& all() const { return commodities_; }
  int index_of(const std::string& id) const;  // -1 when absent
  /// Like index_of but throws Error(kMissingCommodity).
  int require(const std::string& id) const;

 private:
  std::vector<Commodity> commodities_;
  std::map<std::string, int> index_;
};

using Matrix = Eigen::MatrixXd;

enum class IsruRole { kReactor, kExcavator, kStorage };

/// One row of the in-situ plant catalog. Reactors and excavators are sized per
/// kg/hr of their reference product; storage per kg of resource held.
struct IsruCatalogEntry {
  std::string id;  // the plant's commodity id
  IsruRole role = IsruRole::kReactor;
  std::string reference_product;
  double specific_mass = 1.0;   // kg plant per kg/hr of product (or per kg stored)
  double specific_power = 0.0;  // kW per kg/hr of product (or per kg stored)
  std::map<std::string, double> production;   // alpha, kg/hr per kg plant
  std::map<std::string, double> consumption;  // beta, kg/hr per kg plant
  double operating_hours_per_solar_day = 708.0;  // Q_I
  bool electrolysis = false;

  double power_per_kg() const { return specific_power / specific_mass; }  // P_I, kW/kg
  double storage_per_kg() const { return 1.0 / specific_mass; }           // kg held per kg tank
  bool operator==(const IsruCatalogEntry&) const = default;
};

enum class PowerKind { kPV, kFSPS, kRPS };
enum class DegradationPeriod { kYear, kSol };

struct PowerCatalogEntry {
  std::string id;
  PowerKind kind = PowerKind::kFSPS;
  double specific_mass_kg_per_kw = 1.0;
  double working_hours_per_solar_day = 708.0;  // Q_p
  double degradation_rate = 0.0;               // fraction lost per period
  DegradationPeriod degradation_period = DegradationPeriod::kYear;

  double output_kw_per_kg() const { return 1.0 / specific_mass_kg_per_kw; }  // P_0
  bool operator==(const PowerCatalogEntry&) const = default;
};

struct EnergyStorageEntry {
  std::string id;
  double specific_energy_kwh_per_kg = 1.0;  // gamma
  double efficiency = 1.0;                  // epsilon, (0, 1]

  bool operator==(const EnergyStorageEntry&) const = default;
};

/// phi = 1 - exp(-dV / (Isp g0)); delta_v in km/s.
double propellant_mass_fraction(double delta_v_kms, double isp_s);

/// Impulsive burn for one vehicle type. Each propellant component row takes
/// its share of phi times the departing mass (every massed commodity plus
/// S_v per vehicle); every other row is identity.
Matrix burn_matrix(const VehicleSpec& vehicle, double delta_v_kms, const CommoditySpace& space);

/// Identity plus alpha*h in (output, plant) and -beta*h in (input, plant),
/// where h = hours * Q_I / solar_day_hours is the plant's operating time.
/// Flows named in `internal_resources` are balanced by concurrency rows
/// instead (see internal_balance_rows) and never become matrix entries.
Matrix production_matrix(std::span<const IsruCatalogEntry> entries, double hours,
                         const CommoditySpace& space, double solar_day_hours,
                         std::span<const std::string> internal_resources = {});

/// One row per internal resource: net consumption over the arc must not exceed
/// what the site's own plants produce on the same arc.
Matrix internal_balance_rows(std::span<const IsruCatalogEntry> entries, double hours,
                             const CommoditySpace& space, double solar_day_hours,
                             std::span<const std::string> internal_resources);

/// Adds -rate * (step_days / 365) to (spare, plant) for every plant column.
void apply_maintenance(Matrix& f, int spare_index, std::span<const int> plant_indices,
                       double coefficient);

/// Per-holdover spare consumption per kg of plant.
double maintenance_coefficient(double rate_per_year, double step_days);

/// Payload row (non-propellant massed columns, -C_v) and propellant row
/// (the vehicle's components, -P_v).
Matrix capacity_rows(const VehicleSpec& vehicle, const CommoditySpace& space);

/// Loads on the site's power system, with storage surcharge for plants that
/// run longer than the power system works per solar day.
Matrix power_supply_row(std::span<const IsruCatalogEntry> infrastructure,
                        const PowerCatalogEntry& power, double output_kw_per_kg,
                        double storage_efficiency, const CommoditySpace& space);

Matrix energy_storage_row(std::span<const IsruCatalogEntry> infrastructure,
                          const PowerCatalogEntry& power, double output_kw_per_kg,
                          const EnergyStorageEntry& storage, const CommoditySpace& space);

/// Tank rows: resource inflow after the arc minus capacity of the tank mass.
Matrix storage_capacity_rows(std::span<const IsruCatalogEntry> tanks, const Matrix& f,
                             const CommoditySpace& space);

/// -F: keeps every commodity inflow non-negative.
Matrix nonneg_inflow_rows(const Matrix& f);

/// P_0 after `elapsed_days` of compounding degradation.
double degraded_output(const PowerCatalogEntry& power, double elapsed_days,
                       double solar_day_hours);

/// Sum of outputs never exceeds the input for electrolysis-type entries.
bool stoichiometry_holds(const IsruCatalogEntry& entry);

/// Whether row `r` of H is exactly the non-negativity of a single column
/// (equivalent to a variable bound).
bool is_trivial_nonneg_row(const Matrix& h, Eigen::Index r);

}  // namespace spacelog
