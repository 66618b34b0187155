#include <doctest.h>

#include <algorithm>
#include <set>

#include "mislabel/decision_tree.hpp"
#include "mislabel/filter.hpp"
#include "mislabel/nearest_neighbor.hpp"
#include "mislabel/rng.hpp"
#include "test_util.hpp"

using namespace mislabel;
using testutil::numeric_dataset;

namespace {

std::vector<LearnerSpec> three_detectors() {
  return {LearnerSpec::decision_tree(), LearnerSpec::nearest_neighbor(1),
          LearnerSpec::linear_machine()};
}

// Two tight, well-separated blobs centered on the origin.
Dataset clean_blobs(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      rows.push_back({(c * 20.0 - 10.0) + rng.next_gaussian(),
                      (c * 20.0 - 10.0) + rng.next_gaussian()});
      labels.push_back(c);
    }
  }
  return numeric_dataset(rows, labels, 2);
}

TagMatrix manual_tags(const std::vector<std::vector<bool>>& rows) {
  TagMatrix tags(rows.size(), three_detectors());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t d = 0; d < rows[t].size(); ++d)
      tags.set_verdict(t, d, rows[t][d]);
  }
  return tags;
}

class ConstantModel : public Model {
 public:
  explicit ConstantModel(int label) : label_(label) {}
  int classify(const Instance&) const override { return label_; }

 private:
  int label_;
};

}  // namespace

TEST_CASE("clean separable data is tagged correct everywhere") {
  const Dataset train = clean_blobs(20, 101);
  const TagMatrix tags = cv_tag(train, three_detectors(), 4, 7);
  for (std::size_t t = 0; t < tags.instance_count(); ++t) {
    for (std::size_t d = 0; d < tags.detector_count(); ++d)
      CHECK(tags.verdict(t, d));
  }
}

TEST_CASE("a flipped label is tagged wrong by every detector") {
  Dataset train = clean_blobs(20, 102);
  train.instances[5].label = 1;  // deep inside the class-0 blob
  const TagMatrix tags = cv_tag(train, three_detectors(), 4, 7);
  for (std::size_t d = 0; d < tags.detector_count(); ++d)
    CHECK_FALSE(tags.verdict(5, d));
}

TEST_CASE("leave-one-out tagging trains on all but the instance") {
  const Dataset train = clean_blobs(6, 103);
  const TagMatrix tags =
      cv_tag(train, {LearnerSpec::nearest_neighbor(1)},
             static_cast<int>(train.size()), 11);
  for (const auto& indices : tags.fold_training_indices)
    CHECK(indices.size() == train.size() - 1);
}

TEST_CASE("policy semantics on a three-detector row") {
  const TagMatrix tags = manual_tags({{false, false, true},
                                      {true, true, true},
                                      {false, false, false}});
  const auto majority = apply_filter(tags, FilterPolicy::majority(3));
  const auto consensus = apply_filter(tags, FilterPolicy::consensus(3));

  // (false,false,true): majority discards, consensus keeps
  CHECK(std::count(majority.discarded.begin(), majority.discarded.end(), 0) ==
        1);
  CHECK(std::count(consensus.kept.begin(), consensus.kept.end(), 0) == 1);

  // all-correct rows are kept by every policy
  for (std::size_t d = 0; d < 3; ++d) {
    const auto single = apply_filter(tags, FilterPolicy::single(d));
    CHECK(std::count(single.kept.begin(), single.kept.end(), 1) == 1);
    // all-wrong rows are discarded by single, majority and consensus alike
    CHECK(std::count(single.discarded.begin(), single.discarded.end(), 2) ==
          1);
  }
  CHECK(std::count(majority.kept.begin(), majority.kept.end(), 1) == 1);
  CHECK(std::count(consensus.kept.begin(), consensus.kept.end(), 1) == 1);
  CHECK(std::count(majority.discarded.begin(), majority.discarded.end(), 2) ==
        1);
  CHECK(
      std::count(consensus.discarded.begin(), consensus.discarded.end(), 2) ==
      1);

  CHECK_THROWS_AS(apply_filter(tags, FilterPolicy::single(3)), Error);
  CHECK_THROWS_AS(apply_filter(tags, FilterPolicy::threshold(4)), Error);
  CHECK_THROWS_AS(apply_filter(tags, FilterPolicy::threshold(0)), Error);
}

TEST_CASE("discard sets nest: consensus within majority within any-single") {
  Rng rng(201);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.next_below(50);
    std::vector<std::vector<bool>> rows(n, std::vector<bool>(3));
    for (auto& row : rows) {
      for (std::size_t d = 0; d < 3; ++d) row[d] = rng.next_unit() < 0.6;
    }
    const TagMatrix tags = manual_tags(rows);

    const auto to_set = [](const std::vector<std::size_t>& v) {
      return std::set<std::size_t>(v.begin(), v.end());
    };
    const auto consensus =
        to_set(apply_filter(tags, FilterPolicy::consensus(3)).discarded);
    const auto majority =
        to_set(apply_filter(tags, FilterPolicy::majority(3)).discarded);
    std::set<std::size_t> single_union;
    for (std::size_t d = 0; d < 3; ++d) {
      const auto single =
          to_set(apply_filter(tags, FilterPolicy::single(d)).discarded);
      single_union.insert(single.begin(), single.end());
    }
    CHECK(std::includes(majority.begin(), majority.end(), consensus.begin(),
                        consensus.end()));
    CHECK(std::includes(single_union.begin(), single_union.end(),
                        majority.begin(), majority.end()));

    // threshold(1) discards exactly the union of the single filters
    const auto any =
        to_set(apply_filter(tags, FilterPolicy::threshold(1)).discarded);
    CHECK(any == single_union);

    // every policy partitions the index set
    for (const auto& policy :
         {FilterPolicy::none(), FilterPolicy::single(1),
          FilterPolicy::majority(3), FilterPolicy::consensus(3)}) {
      const auto result = apply_filter(tags, policy);
      CHECK(result.kept.size() + result.discarded.size() == n);
    }
  }
}

TEST_CASE("no instance is tagged by a model trained on it") {
  const Dataset train = clean_blobs(100, 104);  // 200 instances
  const TagMatrix tags = cv_tag(train, three_detectors(), 4, 13);
  REQUIRE(tags.fold_training_indices.size() == 4);
  for (std::size_t t = 0; t < train.size(); ++t) {
    const auto fold = static_cast<std::size_t>(tags.fold_assignment[t]);
    const auto& trained_on = tags.fold_training_indices[fold];
    CHECK(std::find(trained_on.begin(), trained_on.end(), t) ==
          trained_on.end());
  }
}

TEST_CASE("parallel tagging equals serial tagging") {
  Dataset train = clean_blobs(30, 105);
  Rng noise(9);
  for (int i = 0; i < 8; ++i) {
    const std::size_t t = noise.next_below(train.size());
    train.instances[t].label = 1 - train.instances[t].label;
  }
  const TagMatrix serial = cv_tag(train, three_detectors(), 4, 3, 1);
  const TagMatrix parallel = cv_tag(train, three_detectors(), 4, 3, 4);
  CHECK(serial.fold_assignment == parallel.fold_assignment);
  for (std::size_t t = 0; t < serial.instance_count(); ++t) {
    for (std::size_t d = 0; d < serial.detector_count(); ++d)
      CHECK(serial.verdict(t, d) == parallel.verdict(t, d));
  }
  CHECK(serial.to_table() == parallel.to_table());
}

TEST_CASE("tag table lists one row per instance") {
  const TagMatrix tags = manual_tags({{true, false, true}, {true, true, true}});
  const std::string table = tags.to_table();
  CHECK(table ==
        "instance\tfold\ttree\t1-nn\tlm\n"
        "0\t-1\t1\t0\t1\n"
        "1\t-1\t1\t1\t1\n");
}

TEST_CASE("retraining composes filtering with the final learner") {
  Dataset train = clean_blobs(25, 106);
  train.instances[3].label = 1;
  train.instances[40].label = 0;
  const auto detectors = three_detectors();
  const TagMatrix tags = cv_tag(train, detectors, 4, 17);

  // a policy discarding nothing trains on the full set
  const ModelPtr unfiltered = filter_and_retrain(
      train, tags, FilterPolicy::none(), LearnerSpec::nearest_neighbor(1), 1);
  const NNModel direct = nn_train(train, LearnerSpec::nearest_neighbor(1));
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const Instance probe{{rng.next_unit() * 25.0, rng.next_unit() * 25.0}, 0};
    CHECK(unfiltered->classify(probe) == direct.classify(probe));
  }

  // the single-algorithm case equals filtering by that detector then
  // training the same algorithm
  const ModelPtr sf = filter_and_retrain(
      train, tags, FilterPolicy::single(0), LearnerSpec::decision_tree(), 1);
  const auto kept = apply_filter(tags, FilterPolicy::single(0)).kept;
  const TreeModel manual =
      dtree_train(subset(train, kept), LearnerSpec::decision_tree());
  for (int i = 0; i < 100; ++i) {
    const Instance probe{{rng.next_unit() * 25.0, rng.next_unit() * 25.0}, 0};
    CHECK(sf->classify(probe) == manual.classify(probe));
  }

  // all-wrong tags make consensus discard everything
  TagMatrix all_wrong(train.size(), detectors);
  const auto policy = FilterPolicy::consensus(3);
  CHECK_THROWS_AS(
      filter_and_retrain(train, all_wrong, policy,
                         LearnerSpec::nearest_neighbor(1), 1),
      Error);
}

TEST_CASE("filtered nearest neighbor recovers accuracy under noise") {
  // 20%-noise blobs, consensus filter: the filtered 1-NN should do at
  // least as well as the unfiltered one on a clean test set
  Rng rng(301);
  Dataset train = clean_blobs(60, 107);
  for (std::size_t t = 0; t < train.size(); ++t) {
    if (rng.next_unit() < 0.2)
      train.instances[t].label = 1 - train.instances[t].label;
  }
  const Dataset test = clean_blobs(40, 108);
  const TagMatrix tags = cv_tag(train, three_detectors(), 4, 19);
  const ModelPtr filtered =
      filter_and_retrain(train, tags, FilterPolicy::consensus(3),
                         LearnerSpec::nearest_neighbor(1), 1);
  const NNModel unfiltered = nn_train(train, LearnerSpec::nearest_neighbor(1));
  CHECK(accuracy(*filtered, test) >= accuracy(unfiltered, test));
}

TEST_CASE("majority vote classification") {
  const ConstantModel a0(0), b0(0), c1(1), d2(2);
  const Instance probe{{0.0}, 0};
  CHECK(majority_vote_classify({&a0, &b0, &c1}, probe, 3) == 0);
  // a full three-way tie goes to the smallest class index
  CHECK(majority_vote_classify({&a0, &c1, &d2}, probe, 3) == 0);
  CHECK(majority_vote_classify({&c1, &d2}, probe, 3) == 1);
  CHECK(majority_vote_classify({&d2}, probe, 3) == 2);
  CHECK_THROWS_AS(majority_vote_classify({}, probe, 3), Error);
}
