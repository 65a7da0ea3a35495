#include "doctest.h"

#include <algorithm>
#include <random>

#include "nsd/core.hpp"
#include "support.hpp"

using namespace nsd;

TEST_SUITE("core") {

TEST_CASE("control examples") {
  CHECK(eval_control(T2Control::geometric(0.35), 1.0) == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(eval_control(T2Control::rational(), 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(eval_control(GControl{GControl::Family::MinConst, 0.2}, 7.0, 0.2) == 0.2);
  CHECK(eval_control(T1Control{T1Control::Family::Sqrt, 2.0}, 0.25) == doctest::Approx(1.0));
  CHECK(eval_control(GControl{GControl::Family::MaxConst, 0.1}, 5.0, 0.02) == 0.1);
  CHECK(eval_control(GControl::first_arg(), 3.0, 0.5) == 3.0);
}

TEST_CASE("controls reject non-positive arguments") {
  CHECK_THROWS_AS(eval_control(T1Control::linear(1.0), 0.0), DomainError);
  CHECK_THROWS_AS(eval_control(T2Control::geometric(0.35), -1.0), DomainError);
  CHECK_THROWS_AS(eval_control(GControl::second_arg(), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(eval_control(GControl::second_arg(), std::nan(""), 1.0), DomainError);
}

TEST_CASE("control properties on a grid") {
  std::vector<double> ts;
  for (int i = -12; i <= 6; ++i) ts.push_back(std::pow(10.0, i / 2.0));
  const T2Control t2s[] = {T2Control::geometric(0.35), T2Control::geometric(0.1), T2Control::rational()};
  for (const auto& t2 : t2s) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(t2(ts[i]) < ts[i]);
      if (i > 0) CHECK(t2(ts[i]) >= t2(ts[i - 1]));
    }
    double t = 1.0;
    for (int i = 0; i < 10000; ++i) t = t2(t);
    CHECK(t < 1e-3);
  }
  const T1Control t1s[] = {T1Control::linear(2.0), T1Control{T1Control::Family::Sqrt, 0.5}};
  for (const auto& t1 : t1s) {
    for (std::size_t i = 1; i < ts.size(); ++i) CHECK(t1(ts[i]) >= t1(ts[i - 1]));
    CHECK(t1(1e-300) < 1e-100);
  }
}

TEST_CASE("G families declare their property") {
  using F = GControl::Family;
  CHECK(GControl{F::SecondArg, 1}.property() == GControl::Property::B);
  CHECK(GControl{F::FirstArg, 1}.property() == GControl::Property::A);
  CHECK(GControl{F::ScaledSecond, 2}.property() == GControl::Property::B);
  CHECK(GControl{F::MaxConst, 0.1}.property() == GControl::Property::A);
  CHECK(GControl{F::MinConst, 0.1}.property() == GControl::Property::B);
  CHECK(GControl{F::Constant, 0.1}.property() == GControl::Property::A);

  // (a): G(x_k, y_k) -> 0 forces x_k -> 0 along sequences with y bounded
  for (auto g : {GControl{F::FirstArg, 1}, GControl{F::MaxConst, 0.1}, GControl{F::Constant, 0.1}}) {
    if (g.family == F::FirstArg) CHECK(g(1e-9, 5.0) == 1e-9);
    else CHECK(g(1e-9, 1e-9) >= 0.1);
  }
  // (b): for x > x0, small y, G(x, y) >= y
  for (auto g : {GControl{F::SecondArg, 1}, GControl{F::ScaledSecond, 3}, GControl{F::MinConst, 0.1}}) {
    for (double y : {1e-6, 1e-3, 0.05}) CHECK(g(2.0, y) >= y);
  }
}

TEST_CASE("variant defaults") {
  const Controls a = Controls::variant_a(0.9);
  CHECK(a.t1(0.9) == doctest::Approx(1.0));
  CHECK(a.t2(1.0) == doctest::Approx(0.35));
  CHECK(a.g(5.0, 0.7) == 0.7);
  const Controls b = Controls::variant_b();
  CHECK(b.t1(2.0) == doctest::Approx(1.0));
  CHECK(b.g(0.25, 3.0) == 0.25);
  Params p;
  CHECK(p.delta == 0.3);
  CHECK(p.delta_prime == 0.35);
  CHECK(p.bundle_m == 10);
  CHECK(p.eps_tol == 1e-12);
  CHECK(p.max_iterations == 1'000'000);
  CHECK(p.max_gradient_evals == 10'000'000);
  CHECK_NOTHROW(validate_params(p, a));
}

TEST_CASE("invalid configurations name every violation") {
  Params p;
  p.delta = 0.5;
  p.delta_prime = 0.4;
  try {
    validate_params(p, Controls::variant_a(1.0));
    FAIL("expected InvalidConfig");
  } catch (const InvalidConfig& e) {
    const auto& v = e.violations();
    CHECK(std::find(v.begin(), v.end(), "delta < delta_prime") != v.end());
  }

  Params q;
  Controls c = Controls::variant_a(1.0);
  c.t2 = T2Control::geometric(1.0);
  c.g = GControl{GControl::Family::ScaledSecond, 0.5};
  q.eps0 = -1.0;
  const auto v = check_params(q, c);
  CHECK(v.size() == 3);
  CHECK_THROWS_AS(validate_params(q, c), InvalidConfig);

  Params b;
  b.variant = Variant::B;
  Controls cb = Controls::variant_b();
  cb.t1 = T1Control::linear(1.0);
  CHECK(check_params(b, cb) == std::vector<std::string>{"variant B requires T1(x) < x"});
}

TEST_CASE("evaluator counts and enforces its budget") {
  auto f = test::squared_norm(2);
  test::CountingOracle counted(*f);
  Evaluator ev(counted, 3);
  const Point x{{1.0, 2.0}};
  CHECK(ev.value(x) == 5.0);
  for (int i = 0; i < 3; ++i) CHECK(ev.subgradient(x) == Point{{2.0, 4.0}});
  CHECK_THROWS_AS(ev.subgradient(x), BudgetExhausted);
  CHECK(ev.gradient_evals() == 3);
  CHECK(counted.subgradients() == 3);
  CHECK(ev.value_evals() == 1);
  CHECK_THROWS_AS(ev.value(Point{{1.0}}), DimensionMismatch);
  CHECK_THROWS_AS(ev.value(Point{{1.0, std::nan("")}}), NonFiniteValue);

  FunctionOracle bad(1, [](const Point&) { return std::nan(""); }, [](const Point&) -> Point { return Point{{1.0, 2.0}}; });
  Evaluator eb(bad);
  CHECK_THROWS_AS(eb.value(Point{{0.0}}), NonFiniteValue);
  CHECK_THROWS_AS(eb.subgradient(Point{{0.0}}), DimensionMismatch);
}

TEST_CASE("oracles are deterministic") {
  auto f = test::l1_norm(4);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Point x = test::random_point(rng, 4);
    CHECK(f->value(x) == f->value(x));
    CHECK(f->subgradient(x) == f->subgradient(x));
  }
}

TEST_CASE("names round-trip") {
  CHECK(parse_variant(to_string(Variant::B)) == Variant::B);
  CHECK(parse_line_search(to_string(LineSearchPolicy::FirstNonDecrease)) == LineSearchPolicy::FirstNonDecrease);
  for (auto fam : {GControl::Family::SecondArg, GControl::Family::Constant, GControl::Family::MinConst})
    CHECK(parse_g_family(to_string(fam)) == fam);
  CHECK_FALSE(parse_variant("C").has_value());
  CHECK(to_string(Status::SegmentSearchFailed) == "segment-search-failed");
}

}
