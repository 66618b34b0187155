#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "mislabel/linear_machine.hpp"
#include "mislabel/rng.hpp"
#include "test_util.hpp"

using namespace mislabel;
using testutil::numeric_dataset;

namespace {

using Point = std::array<double, 2>;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone-chain convex hull (collinear-tolerant, works for <3 points).
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

// Exact separating-axis oracle: two 2-D point sets are linearly separable
// iff their convex hulls are disjoint, and for disjoint convex polygons a
// separating axis exists among the edge normals. Every within-set point
// pair contributes a candidate axis, which covers all hull edges
// (degenerate hulls included).
bool linearly_separable(const std::vector<Point>& a,
                        const std::vector<Point>& b) {
  const auto hull_a = convex_hull(a);
  const auto hull_b = convex_hull(b);
  std::vector<Point> axes;
  const auto add_axes = [&](const std::vector<Point>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        axes.push_back({-(pts[j][1] - pts[i][1]), pts[j][0] - pts[i][0]});
      }
    }
  };
  add_axes(hull_a);
  add_axes(hull_b);
  // single-point hulls: the connecting direction is the only candidate
  axes.push_back({hull_b[0][0] - hull_a[0][0], hull_b[0][1] - hull_a[0][1]});

  for (const auto& axis : axes) {
    double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
    for (const auto& p : hull_a) {
      const double t = p[0] * axis[0] + p[1] * axis[1];
      amin = std::min(amin, t);
      amax = std::max(amax, t);
    }
    for (const auto& p : hull_b) {
      const double t = p[0] * axis[0] + p[1] * axis[1];
      bmin = std::min(bmin, t);
      bmax = std::max(bmax, t);
    }
    if (amax < bmin || bmax < amin) return true;
  }
  return false;
}

Dataset two_blobs(double gap, std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      rows.push_back({c * gap + rng.next_gaussian(),
                      c * gap + rng.next_gaussian()});
      labels.push_back(c);
    }
  }
  return numeric_dataset(rows, labels, 2);
}

}  // namespace

TEST_CASE("separable blobs are fit exactly") {
  const Dataset ds = two_blobs(12.0, 25, 77);
  // independent separability certificate for the fixture
  std::vector<Point> a, b;
  for (const auto& inst : ds.instances) {
    (inst.label == 0 ? a : b)
        .push_back({inst.features[0], inst.features[1]});
  }
  REQUIRE(linearly_separable(a, b));

  const LinearMachineModel model =
      lm_train(ds, LearnerSpec::linear_machine(), 5);
  std::size_t hits = 0;
  for (const auto& inst : ds.instances)
    hits += model.classify(inst) == inst.label;
  CHECK(hits == ds.size());
}

TEST_CASE("the separability oracle rejects overlapping sets") {
  CHECK_FALSE(linearly_separable({{0, 0}, {2, 2}}, {{1, 1}}));
  CHECK(linearly_separable({{0, 0}, {0, 1}}, {{3, 0}, {3, 1}}));
}

TEST_CASE("single-class data is predicted everywhere") {
  const auto ds = numeric_dataset({{1, 2}, {2, 1}, {1.5, 1.8}},
                                  {1, 1, 1}, 3);
  const LinearMachineModel model =
      lm_train(ds, LearnerSpec::linear_machine(), 3);
  for (const auto& inst : ds.instances)
    CHECK(model.classify(inst) == 1);
}

TEST_CASE("training is deterministic in (dataset, seed)") {
  const Dataset ds = two_blobs(4.0, 20, 13);
  const LinearMachineModel first =
      lm_train(ds, LearnerSpec::linear_machine(), 42);
  const LinearMachineModel second =
      lm_train(ds, LearnerSpec::linear_machine(), 42);
  CHECK(first.weights() == second.weights());
  const LinearMachineModel other =
      lm_train(ds, LearnerSpec::linear_machine(), 43);
  // different orderings virtually always move some weight
  CHECK(first.weights() != other.weights());
}

TEST_CASE("argmax ties resolve to the smaller class index") {
  const auto ds = numeric_dataset({{0.0}}, {0}, 3);
  const FeatureEncoder enc = FeatureEncoder::fit(ds, false);
  // discriminant values (0.2, 0.9, 0.1) at Y = (1, 0)
  LinearMachineModel model({{0.2, 0.0}, {0.9, 0.0}, {0.1, 0.0}}, enc);
  CHECK(model.classify({{0.0}, 0}) == 1);
  // g0 == g1 exactly
  LinearMachineModel tied({{0.7, 0.0}, {0.7, 0.0}, {0.1, 0.0}}, enc);
  CHECK(tied.classify({{0.0}, 0}) == 0);
  // all-zero weights: every discriminant ties at zero
  LinearMachineModel zeros({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, enc);
  CHECK(zeros.classify({{123.0}, 0}) == 0);
}

TEST_CASE("classification is invariant under positive weight scaling") {
  const Dataset ds = two_blobs(3.0, 15, 55);
  const LinearMachineModel model =
      lm_train(ds, LearnerSpec::linear_machine(), 9);
  auto scaled_weights = model.weights();
  for (auto& w : scaled_weights) {
    for (double& x : w) x *= 37.5;
  }
  const LinearMachineModel scaled(scaled_weights, model.encoder());
  Rng rng(91);
  for (int i = 0; i < 200; ++i) {
    const Instance probe{{rng.next_gaussian() * 4.0,
                          rng.next_gaussian() * 4.0},
                         0};
    CHECK(model.classify(probe) == scaled.classify(probe));
  }
}

TEST_CASE("encoder imputes means and expands categories") {
  Dataset ds;
  ds.schema.columns.push_back({"x", ColumnKind::numeric, {}, false});
  ds.schema.columns.push_back(
      {"c", ColumnKind::categorical, {"a", "b"}, false});
  ds.schema.columns.push_back(
      {"y", ColumnKind::categorical, {"n", "p"}, false});
  ds.schema.label_index = 2;
  ds.class_count = 2;
  ds.instances.push_back({{2.0, 0.0}, 0});
  ds.instances.push_back({{4.0, 1.0}, 1});
  ds.instances.push_back({{missing_value(), missing_value()}, 1});

  const FeatureEncoder enc = FeatureEncoder::fit(ds, false);
  // 1 constant + 1 numeric + (2 categories + missing slot)
  CHECK(enc.encoded_length() == 5);
  std::vector<double> y;
  enc.encode(ds.instances[2], y);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 3.0);  // mean of {2, 4}
  CHECK(y[2] == 0.0);
  CHECK(y[3] == 0.0);
  CHECK(y[4] == 1.0);  // missing slot
  enc.encode(ds.instances[0], y);
  CHECK(y[1] == 2.0);
  CHECK(y[2] == 1.0);
  CHECK(y[4] == 0.0);
}

TEST_CASE("prediction gain ratio rewards informative machines") {
  // perfect predictions on a balanced two-class sample: one full bit
  CHECK(prediction_gain_ratio({0, 0, 1, 1}, {0, 0, 1, 1}, 2) ==
        doctest::Approx(1.0));
  // constant predictions carry no information
  CHECK(prediction_gain_ratio({0, 0, 0, 0}, {0, 0, 1, 1}, 2) == 0.0);
  // uninformative split
  CHECK(prediction_gain_ratio({0, 1, 0, 1}, {0, 0, 1, 1}, 2) ==
        doctest::Approx(0.0));
}
