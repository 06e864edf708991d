// Copyright 2026 The curtailsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"

#include "curtail/trainer.hpp"

using namespace curtail;

namespace {

TrainerSpec unit_spec(unsigned dim) {
  TrainerSpec s;
  s.dim = dim;
  s.micro_batch_rows = 1;
  s.grad_accum = 1;
  s.local_ranks = 1;
  s.data_seed = 42;
  return s;
}

ShardAssignment all_shards(const ShardTable& t, const SiteId& site = "A") {
  ShardAssignment a{site, {}};
  for (ShardIndex j = 0; j < t.shard_count(); ++j) {
    if (!t.complete(j)) a.entries.push_back({j, t.progress(j)});
  }
  return a;
}

std::vector<double> random_point(std::mt19937_64& rng, unsigned dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(dim);
  for (auto& x : v) x = n(rng);
  return v;
}

// Reference SGD: walks the assignment row by row and steps on each batch.
std::vector<double> reference_sgd(std::vector<double> theta, const TrainerSpec& spec, const ShardAssignment& a,
                                  const ShardTable& t, std::uint64_t steps) {
  std::vector<std::pair<ShardIndex, RowCount>> order;
  for (const auto& e : a.entries) {
    for (RowCount r = e.start_row; r < t.size(e.shard); ++r) order.emplace_back(e.shard, r);
  }
  const RowCount per = spec.rows_per_step();
  for (std::uint64_t s = 0; s < steps && s * per < order.size(); ++s) {
    std::vector<Row> rows;
    for (RowCount k = s * per; k < std::min<RowCount>((s + 1) * per, order.size()); ++k) {
      rows.push_back(generate_row(spec.data_seed, order[k].first, order[k].second, spec.dim, spec.noise_scale));
    }
    const auto g = batch_gradient(theta, rows);
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= spec.learning_rate * g[k];
  }
  return theta;
}

}  // namespace

TEST_CASE("rows_per_step and validation") {
  TrainerSpec s;
  CHECK(s.rows_per_step() == 128);
  s.steps_per_second = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = TrainerSpec{};
  s.local_ranks = 0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("local_ranks"), ValidationError);
}

TEST_CASE("generate_row is deterministic and counter-distinct") {
  const Row a = generate_row(7, 0, 0, 8);
  const Row b = generate_row(7, 0, 0, 8);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(generate_row(7, 0, 1, 8).x != a.x);
  CHECK(generate_row(7, 1, 0, 8).x != a.x);
  CHECK(generate_row(8, 0, 0, 8).x != a.x);
}

TEST_CASE("noiseless rows satisfy y = <x, theta*>") {
  const auto truth = ground_truth(3, 5);
  for (RowCount r = 0; r < 50; ++r) {
    const Row row = generate_row(3, 2, r, 5);
    double y = 0.0;
    for (int k = 0; k < 5; ++k) y += row.x[k] * truth[k];
    CHECK(row.y == y);
  }
  const Row noisy = generate_row(3, 2, 0, 5, 0.5);
  CHECK(noisy.x == generate_row(3, 2, 0, 5).x);
  CHECK(noisy.y != generate_row(3, 2, 0, 5).y);
}

TEST_CASE("row features have zero mean and unit variance") {
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int r = 0; r < n; ++r) {
    const Row row = generate_row(1, 0, static_cast<RowCount>(r), 4);
    for (double v : row.x) {
      sum += v;
      sq += v * v;
      CHECK(std::abs(v) <= std::sqrt(3.0));
    }
  }
  const double m = sum / (4.0 * n);
  CHECK(std::abs(m) < 0.02);
  CHECK(sq / (4.0 * n) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(17);
  const unsigned dim = 32;
  std::vector<Row> rows;
  for (RowCount r = 0; r < 64; ++r) rows.push_back(generate_row(5, 0, r, dim, 0.1));
  for (int point = 0; point < 3; ++point) {
    const auto theta = random_point(rng, dim);
    const auto g = batch_gradient(theta, rows);
    const double h = 1e-5;
    for (unsigned k = 0; k < dim; ++k) {
      auto plus = theta, minus = theta;
      plus[k] += h;
      minus[k] -= h;
      const double fd = (batch_objective(plus, rows) - batch_objective(minus, rows)) / (2 * h);
      CHECK(std::abs(g[k] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("budget arithmetic") {
  TrainerSpec s;
  s.kind = TrainerKind::throughput;
  CHECK(steps_for_budget(s, 485) == 218);
  CHECK(steps_for_budget(s, 600) == 270);
  CHECK(steps_for_budget(s, 970) == 436);
  CHECK(steps_for_budget(s, 0) == 0);
  CHECK(steps_for_budget(s, 0.5) == 1);
  CHECK_THROWS_AS(steps_for_budget(s, -1), Error);
  CHECK(steps_to_exhaust(s, 0) == 0);
  CHECK(steps_to_exhaust(s, 1) == 1);
  CHECK(steps_to_exhaust(s, 128) == 1);
  CHECK(steps_to_exhaust(s, 129) == 2);
}

TEST_CASE("local_train: zero budget, throughput kind, work cap") {
  const ShardTable t = ShardTable::uniform(8, 4096);
  TrainerSpec s;
  const ModelState theta{{0.5, -1.0, 2.0, 0.0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 3};
  const SiteUpdate zero = local_train(theta, s, all_shards(t), t, 0);
  CHECK(zero.batches == 0);
  CHECK(zero.theta_s == theta);
  CHECK(zero.progress.empty());

  s.kind = TrainerKind::throughput;
  const SiteUpdate tp = local_train(theta, s, all_shards(t), t, 485);
  CHECK(tp.batches == 218);
  CHECK(tp.rows_consumed == 218 * 128);
  CHECK(tp.theta_s == theta);
  CHECK(tp.train_seconds == 485);
  CHECK(tp.progress == ProgressReport{{0, 4096}, {1, 4096}, {2, 4096}, {3, 4096},
                                      {4, 4096}, {5, 4096}, {6, 218 * 128 - 6 * 4096}});

  const ShardTable small = ShardTable::uniform(1, 300);
  const SiteUpdate capped = local_train(theta, s, all_shards(small), small, 485);
  CHECK(capped.batches == 3);
  CHECK(capped.rows_consumed == 300);
  CHECK(capped.progress == ProgressReport{{0, 300}});
  CHECK(capped.train_seconds == doctest::Approx(3 / 0.45));
}

TEST_CASE("local_train rejects bad input") {
  ShardTable t = ShardTable::uniform(2, 10);
  t.merge_progress({{0, 10}});
  const TrainerSpec s = unit_spec(2);
  CHECK_THROWS_AS(local_train(ModelState::zeros(2), s, ShardAssignment{"A", {{0, 10}}}, t, 10), Error);
  CHECK_THROWS_AS(local_train(ModelState::zeros(2), s, ShardAssignment{"A", {{7, 0}}}, t, 10), Error);
  CHECK_THROWS_AS(local_train(ModelState::zeros(2), s, all_shards(t), t, -1), Error);
}

TEST_CASE("one step on one row is a hand-evaluated gradient step") {
  TrainerSpec s = unit_spec(2);
  s.learning_rate = 0.1;
  s.steps_per_second = 1.0;
  const ShardTable t = ShardTable::uniform(1, 10);
  const SiteUpdate u = local_train(ModelState::zeros(2), s, all_shards(t), t, 1.0);
  REQUIRE(u.batches == 1);
  const Row r = generate_row(s.data_seed, 0, 0, 2);
  // f = (x.theta - y)^2 / 2 at theta = 0 has gradient -y x.
  const double expect0 = 0.1 * r.y * r.x[0];
  const double expect1 = 0.1 * r.y * r.x[1];
  CHECK(u.theta_s.params[0] == doctest::Approx(expect0).epsilon(1e-12));
  CHECK(u.theta_s.params[1] == doctest::Approx(expect1).epsilon(1e-12));
  CHECK(u.progress == ProgressReport{{0, 1}});
}

TEST_CASE("train_steps equals a reference SGD bitwise") {
  TrainerSpec s;
  s.dim = 6;
  s.micro_batch_rows = 3;
  s.grad_accum = 2;
  s.local_ranks = 2;
  s.learning_rate = 0.05;
  s.noise_scale = 0.1;
  ShardTable t(std::vector<RowCount>{50, 31, 77});
  t.merge_progress({{0, 13}, {2, 2}});
  const ShardAssignment a{"A", {{2, 2}, {0, 13}, {1, 0}}};
  for (std::uint64_t steps : {0, 1, 5, 14, 100}) {
    const SiteUpdate u = train_steps(ModelState::zeros(6), s, a, t, steps);
    CHECK(u.theta_s.params == reference_sgd(std::vector<double>(6, 0.0), s, a, t, steps));
  }
}

TEST_CASE("rank layout does not change the trajectory") {
  const ShardTable t = ShardTable::uniform(3, 1000);
  TrainerSpec four;
  four.dim = 8;
  four.micro_batch_rows = 8;
  four.local_ranks = 4;
  four.grad_accum = 1;
  TrainerSpec one = four;
  one.micro_batch_rows = 32;
  one.local_ranks = 1;
  const auto a = train_steps(ModelState::zeros(8), four, all_shards(t), t, 50);
  const auto b = train_steps(ModelState::zeros(8), one, all_shards(t), t, 50);
  CHECK(a.theta_s.params == b.theta_s.params);
  CHECK(a.progress == b.progress);
}

TEST_CASE("hook sees every row once, stride-partitioned over ranks") {
  TrainerSpec s;
  s.kind = TrainerKind::throughput;
  s.micro_batch_rows = 3;
  s.grad_accum = 1;
  s.local_ranks = 4;
  ShardTable t(std::vector<RowCount>{10, 7});
  std::map<std::pair<ShardIndex, RowCount>, int> seen;
  std::vector<std::pair<RowCount, unsigned>> first_step;
  std::size_t calls = 0;
  const auto hook = [&](ShardIndex j, RowCount r, unsigned rank) {
    ++seen[{j, r}];
    if (calls++ < 12) first_step.emplace_back(r, rank);
  };
  const SiteUpdate u = train_steps(ModelState::zeros(16), s, all_shards(t), t, 100, hook);
  CHECK(u.batches == 2);
  CHECK(seen.size() == 17);
  for (const auto& [k, n] : seen) CHECK(n == 1);
  // Step 0 rows 0..11: rank r gets positions r, r+4, r+8.
  CHECK(first_step[0] == std::pair<RowCount, unsigned>{0, 0});
  CHECK(first_step[1] == std::pair<RowCount, unsigned>{4, 0});
  CHECK(first_step[3] == std::pair<RowCount, unsigned>{1, 1});
}

TEST_CASE("sequential training consumes each row exactly once") {
  TrainerSpec s;
  s.kind = TrainerKind::throughput;
  ShardTable t = ShardTable::uniform(5, 1000);
  std::map<std::pair<ShardIndex, RowCount>, int> seen;
  const auto hook = [&](ShardIndex j, RowCount r, unsigned) { ++seen[{j, r}]; };
  std::mt19937_64 rng(4);
  while (t.remaining_rows() > 0) {
    const SiteUpdate u = local_train(ModelState::zeros(16), s, all_shards(t), t, static_cast<double>(rng() % 30), hook);
    t.merge_progress(u.progress);
  }
  CHECK(seen.size() == 5000);
  for (const auto& [k, n] : seen) CHECK(n == 1);
}

TEST_CASE("descent on the noiseless objective") {
  TrainerSpec s;
  s.dim = 16;
  s.learning_rate = 0.01;
  const ShardTable t = ShardTable::uniform(4, 4096);
  std::mt19937_64 rng(6);
  for (int iter = 0; iter < 10; ++iter) {
    ModelState theta{random_point(rng, 16), 0};
    const double before = evaluation_objective(theta.params, s);
    const SiteUpdate u = train_steps(theta, s, all_shards(t), t, 1 + rng() % 50);
    CHECK(evaluation_objective(u.theta_s.params, s) <= before);
  }
  CHECK(evaluation_objective(ground_truth(s.data_seed, 16), s) == doctest::Approx(0.0));
}
