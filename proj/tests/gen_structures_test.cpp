#include <gtest/gtest.h>

#include <cmath>

#include "genverify/errors.hpp"
#include "genverify/gen_structures.hpp"
#include "support.hpp"

namespace genverify {
namespace {

using testing::builtin_at;
using testing::builtin_points;
using testing::unit_vec;

JetVector dir(int i, int n) { return constant_vector(unit_vec(i, n), n); }

double max_covdiff_display_gap(const PointData& d, StructureKind kind, LiftKind lift) {
  const int n = d.h.dim();
  const GenOperator Jh = build_structure(kind, d.h, *d.J, 1.0, 1.0);
  const GenConnection D = GenConnection::lift(lift, d.nabla, d.h);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < 2 * n; ++a) {
      const Section t = basis_section(a, n);
      const Section direct = gen_covdiff(D, Jh, dir(i, n), constant_section(t, n));
      const Section shown = lift == LiftKind::hat ? covdiff_hat_display(Jh, d.nabla, d.h, *d.J, unit_vec(i, n), t)
                                                  : covdiff_dual_display(Jh, d.nabla, d.h, *d.J, unit_vec(i, n), t);
      worst = std::max(worst, max_abs_difference(direct, shown));
    }
  return worst;
}

TEST(Structures, SquareIdentities) {
  // golden J: J^2 = J + I
  for (const Point& x : builtin_points("golden-wave", 5)) {
    const PointData d = builtin_at("golden-wave", x);
    for (StructureKind k : {StructureKind::product, StructureKind::complex, StructureKind::metallic})
      EXPECT_LT(build_structure(k, d.h, *d.J, 1.0, 1.0).identity_defect(), 1e-13) << to_string(k);
  }
}

TEST(Structures, IdentitiesHoldForAnyHSymmetricJ) {
  const PointData d = builtin_at("exp-diag-shear", {0.3, 0.4});
  EXPECT_LT(h_symmetry_defect(d.h, *d.J), 1e-14);
  EXPECT_LT(build_structure(StructureKind::product, d.h, *d.J).identity_defect(), 1e-13);
  EXPECT_LT(build_structure(StructureKind::complex, d.h, *d.J).identity_defect(), 1e-13);
  // J itself is not metallic, the lifted operator still is
  EXPECT_GT(metallic_defect(*d.J, 1.0, 1.0), 1e-2);
  EXPECT_LT(build_structure(StructureKind::metallic, d.h, *d.J).identity_defect(), 1e-13);
}

TEST(Structures, MatrixMatchesApply) {
  const PointData d = builtin_at("golden-wave", {0.2, 0.1});
  const GenOperator J = build_structure(StructureKind::metallic, d.h, *d.J, 1.0, 1.0);
  const Matrix<double> m = J.matrix();
  for (int a = 0; a < 4; ++a) {
    const Section s = J.apply(basis_section(a, 2));
    for (int r = 0; r < 4; ++r) EXPECT_DOUBLE_EQ(m(r, a), r < 2 ? s.vec[r] : s.cov[r - 2]);
  }
}

TEST(Structures, RejectsJThatIsNotHSymmetric) {
  const FieldSpec h = FieldSpec::from_strings(2, 0, 2, {"1", "0", "0", "1"});
  const MetricAt g = metric_at(h, SymmetryKind::symmetric, std::vector<double>{0, 0});
  const JetMatrix J = eval_matrix_field(FieldSpec::from_strings(2, 1, 1, {"1", "1", "0", "1"}), std::vector<double>{0, 0});
  EXPECT_GT(h_symmetry_defect(g, J), 0.5);
  EXPECT_THROW(build_structure(StructureKind::product, g, J), ValidationError);
}

// With h = I and a flat connection, F is symmetric in its last two slots for
// every symmetric J, so C1 vanishes identically.
TEST(Nijenhuis, FlatIdentityMetricHasNoC1) {
  for (const Point& x : builtin_points("noncommuting-F", 10)) {
    const PointData d = builtin_at("noncommuting-F", x);
    const FConditions f = F_conditions(d.h, d.nabla, *d.J);
    EXPECT_LT(max_abs(Vec<double>(f.C1.data())), 1e-14);
    EXPECT_GT(max_abs(Vec<double>(f.dJ.data())), 0.0);
    for (StructureKind k : {StructureKind::product, StructureKind::complex})
      EXPECT_LT(nijenhuis_alpha_gap(build_structure(k, d.h, *d.J), d.nabla, d.h, 0.5).gap, 1e-12);
  }
}

TEST(Nijenhuis, ShearExampleHasGapAndC1) {
  const PointData d = builtin_at("exp-diag-shear", {0.3, 0.4});
  const FConditions f = F_conditions(d.h, d.nabla, *d.J);
  EXPECT_GT(max_abs(Vec<double>(f.C1.data())), 1e-2);
  for (StructureKind k : {StructureKind::product, StructureKind::complex}) {
    const GenOperator J = build_structure(k, d.h, *d.J);
    EXPECT_GT(nijenhuis_alpha_gap(J, d.nabla, d.h, 0.5).gap, 1e-3) << to_string(k);
    EXPECT_LT(nijenhuis_alpha_gap(J, d.nabla, d.h, 1.0).gap, 1e-12) << to_string(k);
  }
}

TEST(Nijenhuis, NoAlphaMeansBaseBracket) {
  const PointData d = builtin_at("exp-diag-shear", {0.3, 0.4});
  const GenOperator J = build_structure(StructureKind::product, d.h, *d.J);
  const std::vector<JetSection> secs = nijenhuis_test_sections(d.h);
  EXPECT_EQ(secs.size(), 6u);
  for (const JetSection& s : secs)
    for (const JetSection& t : secs) {
      const Section plain = nijenhuis(J, d.nabla, d.h, std::nullopt, s, t);
      const Section swapped = nijenhuis(J, d.nabla, d.h, std::nullopt, t, s);
      EXPECT_LT(max_abs_difference(plain, -1.0 * swapped), 1e-12);
    }
}

TEST(Covdiff, ParallelJGivesParallelStructures) {
  const PointData d = builtin_at("flat-euclid", {0.1, 0.2});
  for (StructureKind k : {StructureKind::product, StructureKind::complex, StructureKind::metallic}) {
    const GenOperator Jh = build_structure(k, d.h, *d.J, 1.0, 1.0);
    for (double a : {-1.0, 0.0, 2.0}) {
      const auto D = GenConnection::alpha(d.nabla, d.h, a);
      for (int i = 0; i < 2; ++i)
        for (int b = 0; b < 4; ++b)
          EXPECT_LT(max_abs(gen_covdiff(D, Jh, dir(i, 2), constant_section(basis_section(b, 2), 2))), 1e-14);
    }
  }
}

TEST(Covdiff, ProductAndComplexDisplaysMatch) {
  for (const char* name : {"exp-diag-shear", "twin-perturbed"}) {
    const PointData d = builtin_at(name, builtin_points(name, 1)[0]);
    for (StructureKind k : {StructureKind::product, StructureKind::complex})
      for (LiftKind l : {LiftKind::hat, LiftKind::dual})
        EXPECT_LT(max_covdiff_display_gap(d, k, l), 1e-12) << name << " " << to_string(k);
  }
}

// The metallic hat display has the opposite sign on its covector term; the
// dual display is right.
TEST(Covdiff, MetallicHatDisplayDisagreesWhenJMoves) {
  const PointData d = builtin_at("golden-wave", {0.5, 0.0});
  EXPECT_LT(max_covdiff_display_gap(d, StructureKind::metallic, LiftKind::dual), 1e-12);
  EXPECT_GT(max_covdiff_display_gap(d, StructureKind::metallic, LiftKind::hat), 1e-3);
}

TEST(FIdentities, ResidualsVanish) {
  for (const char* name : {"exp-diag-shear", "exp-diag-twisted", "twin-perturbed"}) {
    const PointData d = builtin_at(name, builtin_points(name, 1)[0]);
    EXPECT_LT(nabla_h_J_residual(d.h, d.nabla, *d.J), 1e-12) << name;
    EXPECT_LT(dual_nabla_J_residual(d.h, d.nabla, *d.J), 1e-12) << name;
  }
}

}  // namespace
}  // namespace genverify
