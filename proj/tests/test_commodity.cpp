#include <gtest/gtest.h>

#include <cmath>

#include "spacelog/commodity.hpp"
#include "spacelog/error.hpp"
#include "spacelog/scenario.hpp"

namespace spacelog {
namespace {

using C = CommodityCategory;

CommoditySpace cargo_space() {
  return CommoditySpace({{"cargo", CommodityKind::kContinuous, "kg", C::kPayload},
                         {"prop", CommodityKind::kContinuous, "kg", C::kPropellantComponent},
                         {"SC", CommodityKind::kDiscrete, "count", C::kVehicle}});
}

TEST(PropellantFraction, ClosedForm) {
  EXPECT_EQ(propellant_mass_fraction(0.0, 420), 0.0);
  const double half = 420 * kStandardGravity * std::log(2.0) / 1000.0;
  EXPECT_NEAR(half, 2.85493, 1e-5);
  EXPECT_DOUBLE_EQ(propellant_mass_fraction(half, 420), 0.5);
  // exp(-x) by its series, summed independently of the library path.
  const double x = 4000.0 / (350.0 * 9.80665);
  long double term = 1.0L, e = 1.0L;
  for (int k = 1; k < 60; ++k) {
    term *= -static_cast<long double>(x) / k;
    e += term;
  }
  EXPECT_NEAR(propellant_mass_fraction(4.0, 350), static_cast<double>(1.0L - e), 1e-15);
  EXPECT_THROW(propellant_mass_fraction(1.0, 0.0), Error);
}

TEST(BurnMatrix, RowsForHalfFraction) {
  const auto space = cargo_space();
  const double isp = 350;
  const double dv = isp * kStandardGravity * std::log(2.0) / 1000.0;
  VehicleSpec sc{"SC", 6560, 40737, 40000, isp, {{"prop", 1.0}}};
  const Matrix f = burn_matrix(sc, dv, space);
  EXPECT_NEAR(f(1, 0), -0.5, 1e-15);
  EXPECT_NEAR(f(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(f(1, 2), -3280.0, 1e-9);
  EXPECT_EQ(f.row(0), Eigen::RowVector3d(1, 0, 0));
  EXPECT_EQ(f.row(2), Eigen::RowVector3d(0, 0, 1));
  EXPECT_TRUE(burn_matrix(sc, 0.0, space).isIdentity());
}

TEST(NonnegRows, InsufficientPropellantIsInfeasible) {
  const auto space = cargo_space();
  const double dv = 350 * kStandardGravity * std::log(2.0) / 1000.0;
  VehicleSpec sc{"SC", 6560, 40737, 40000, 350, {{"prop", 1.0}}};
  const Matrix h = nonneg_inflow_rows(burn_matrix(sc, dv, space));
  EXPECT_TRUE(nonneg_inflow_rows(Matrix::Identity(3, 3)).isApprox(-Matrix::Identity(3, 3)));
  // (1-phi) r - phi c - phi S >= 0 needs r >= c + S at phi = 1/2.
  const Eigen::Vector3d short_flow(1000, 7000, 1), enough(1000, 7560, 1);
  EXPECT_GT((h * short_flow).maxCoeff(), 0.0);
  EXPECT_LE((h * enough).maxCoeff(), 1e-9);
}

CommoditySpace dwe_space() {
  return CommoditySpace({{"H2O", CommodityKind::kContinuous, "kg", C::kResource},
                         {"O2", CommodityKind::kContinuous, "kg", C::kPropellantComponent},
                         {"H2", CommodityKind::kContinuous, "kg", C::kPropellantComponent},
                         {"dwe", CommodityKind::kContinuous, "kg", C::kInfrastructureSubsystem}});
}

TEST(Production, Electrolysis) {
  const auto space = dwe_space();
  IsruCatalogEntry dwe{"dwe", IsruRole::kReactor, "O2", 1.0, 0.0, {{"O2", 8.0 / 9.0}, {"H2", 1.0 / 9.0}},
                       {{"H2O", 1.0}}, 708.0, true};
  std::vector<IsruCatalogEntry> cat{dwe};
  EXPECT_TRUE(production_matrix(cat, 0.0, space, 708.0).isIdentity());
  const Matrix f = production_matrix(cat, 1.0, space, 708.0);
  EXPECT_DOUBLE_EQ(f(1, 3), 8.0 / 9.0);
  EXPECT_DOUBLE_EQ(f(2, 3), 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(f(0, 3), -1.0);
  EXPECT_DOUBLE_EQ(f(3, 3), 1.0);
  EXPECT_TRUE(stoichiometry_holds(dwe));
  EXPECT_THROW(production_matrix(cat, -1.0, space, 708.0), Error);
  // Output stays non-negative: the produced rows only gain.
  const Eigen::Vector4d x(100, 0, 0, 1);
  EXPECT_GE((f * x)(1), 0.0);
}

TEST(Production, AlphaFromSpecificMass) {
  const auto s = bundled_lunar_scenario();
  const auto* dwe = s.find_isru("reactor_DWE");
  ASSERT_NE(dwe, nullptr);
  EXPECT_DOUBLE_EQ(dwe->production.at("O2"), 1.0 / 83.3);
}

TEST(Production, CatalogStoichiometry) {
  for (double p : {1.0, 1.25, 1.5}) {
    const auto s = bundled_lunar_scenario({3, 120, p, 1.0});
    for (const auto& e : s.isru_catalog) {
      if (e.electrolysis) EXPECT_TRUE(stoichiometry_holds(e)) << e.id;
    }
  }
  IsruCatalogEntry bad{"x", IsruRole::kReactor, "O2", 1, 0, {{"O2", 1.0}}, {{"H2O", 0.5}}, 708, true};
  EXPECT_FALSE(stoichiometry_holds(bad));
}

TEST(Capacity, Rows) {
  const auto s = bundled_lunar_scenario();
  const auto space = s.space();
  const Matrix h = capacity_rows(s.vehicles[0], space);
  const int sc1 = space.require("SC1");
  EXPECT_EQ(h(1, sc1), -68040.0);
  EXPECT_EQ(h(0, sc1), -40000.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.size()));
  x(sc1) = 1;
  x(space.require("payload_out")) = 40000.0;
  EXPECT_EQ((h * x)(0), 0.0);
  // Zero capacities force zero cargo and propellant.
  VehicleSpec empty = s.vehicles[0];
  empty.payload_capacity = empty.propellant_capacity = 0;
  const Matrix z = capacity_rows(empty, space);
  x(space.require("O2")) = 1.0;
  EXPECT_GT((z * x)(0), 0.0);
  EXPECT_GT((z * x)(1), 0.0);
}

CommoditySpace power_space() {
  return CommoditySpace({{"plant", CommodityKind::kContinuous, "kg", C::kInfrastructureSubsystem},
                         {"pw", CommodityKind::kContinuous, "kg", C::kPower},
                         {"es", CommodityKind::kContinuous, "kg", C::kEnergyStorage}});
}

TEST(Power, StorageSurcharge) {
  const auto space = power_space();
  PowerCatalogEntry pw{"pw", PowerKind::kPV, 1.0, 10.0, 0.0, DegradationPeriod::kYear};
  std::vector<IsruCatalogEntry> infra{{"plant", IsruRole::kReactor, "O2", 1.0, 1.0, {}, {}, 20.0, false}};
  const Matrix h = power_supply_row(infra, pw, 1.0, 0.95, space);
  EXPECT_NEAR(h(0, 0), 1.0 + 10.0 / (0.95 * 10.0), 1e-15);
  EXPECT_NEAR(h(0, 0), 2.0526315789473684, 1e-12);
  infra[0].operating_hours_per_solar_day = 10.0;
  EXPECT_DOUBLE_EQ(power_supply_row(infra, pw, 1.0, 0.95, space)(0, 0), 1.0);
  pw.working_hours_per_solar_day = 0.0;
  EXPECT_THROW(power_supply_row(infra, pw, 1.0, 0.95, space), Error);
}

TEST(Power, EnergyStorageCoefficient) {
  const auto space = power_space();
  PowerCatalogEntry pw{"pw", PowerKind::kPV, 1.0, 10.0, 0.0, DegradationPeriod::kYear};
  EnergyStorageEntry es{"es", 4.0, 0.95};
  std::vector<IsruCatalogEntry> infra{{"plant", IsruRole::kReactor, "O2", 2.0, 1.0, {}, {}, 20.0, false}};
  const Matrix h = energy_storage_row(infra, pw, 1.0, es, space);
  EXPECT_NEAR(h(0, 2), -4.0 / 9.5, 1e-15);
  // Homogeneous: scaling every mass keeps the sign of the row.
  const Eigen::Vector3d x(1.0, 3.0, 2.0);
  EXPECT_EQ((h * x)(0) <= 0, (h * (2.0 * x))(0) <= 0);
  const Matrix none = energy_storage_row({}, pw, 1.0, es, space);
  EXPECT_EQ((none * Eigen::Vector3d::Zero())(0), 0.0);
}

TEST(Maintenance, Coefficient) {
  EXPECT_EQ(maintenance_coefficient(0.0, 120), -0.0);
  EXPECT_DOUBLE_EQ(maintenance_coefficient(0.10, 365), -0.10);
  EXPECT_NEAR(maintenance_coefficient(0.10, 120), -0.032876712328767, 1e-14);
  Matrix f = Matrix::Identity(3, 3);
  std::vector<int> plants{0, 1};
  apply_maintenance(f, 2, plants, -0.5);
  EXPECT_EQ(f(2, 0), -0.5);
  EXPECT_EQ(f(2, 1), -0.5);
  EXPECT_EQ(f(2, 2), 1.0);
}

TEST(Degradation, Schedules) {
  PowerCatalogEntry rps{"rps", PowerKind::kRPS, 124.0, 708.0, 0.019, DegradationPeriod::kYear};
  EXPECT_EQ(degraded_output(rps, 0.0, 708.0), rps.output_kw_per_kg());
  EXPECT_NEAR(degraded_output(rps, 365.0, 708.0), rps.output_kw_per_kg() * 0.981, 1e-15);
  PowerCatalogEntry pv{"pv", PowerKind::kPV, 6.8, 354.0, 0.00014, DegradationPeriod::kSol};
  const double sol_days = 708.0 / 24.0;
  EXPECT_NEAR(degraded_output(pv, 100 * sol_days, 708.0),
              pv.output_kw_per_kg() * std::pow(1 - 0.00014, 100), 1e-14);
}

TEST(StorageRows, TankCapacity) {
  const auto space = CommoditySpace({{"O2", CommodityKind::kContinuous, "kg", C::kPropellantComponent},
                                     {"tank", CommodityKind::kContinuous, "kg", C::kInfrastructureSubsystem}});
  std::vector<IsruCatalogEntry> tanks{{"tank", IsruRole::kStorage, "O2", 5.0, 0.0, {}, {}, 708, false}};
  const Matrix h = storage_capacity_rows(tanks, Matrix::Identity(2, 2), space);
  EXPECT_EQ(h(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(h(0, 1), -0.2);
}

TEST(Space, Lookups) {
  const auto space = cargo_space();
  EXPECT_EQ(space.index_of("prop"), 1);
  EXPECT_EQ(space.index_of("nope"), -1);
  try {
    space.require("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMissingCommodity);
  }
  EXPECT_THROW(CommoditySpace({{"a"}, {"a"}}), Error);
}

TEST(TrivialRows, Detection) {
  Matrix h(3, 2);
  h << -1, 0, 1, 0, -1, -1;
  EXPECT_TRUE(is_trivial_nonneg_row(h, 0));
  EXPECT_FALSE(is_trivial_nonneg_row(h, 1));
  EXPECT_FALSE(is_trivial_nonneg_row(h, 2));
}

}  // namespace
}  // namespace spacelog
