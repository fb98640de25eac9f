#include <doctest.h>

#include "ata/rng.hpp"

using namespace ata;

TEST_CASE("streams with the same address replay identically") {
  Rng a = make_stream(42, stream_domain::kTaskTimes, 3, 7);
  Rng b = make_stream(42, stream_domain::kTaskTimes, 3, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("streams with different addresses diverge") {
  Rng a = make_stream(42, stream_domain::kTaskTimes, 3, 7);
  Rng b = make_stream(42, stream_domain::kTaskTimes, 3, 8);
  Rng c = make_stream(42, stream_domain::kGradientNoise, 3, 7);
  Rng d = make_stream(43, stream_domain::kTaskTimes, 3, 7);
  int equal_ab = 0;
  int equal_ac = 0;
  int equal_ad = 0;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next();
    equal_ab += va == b.next();
    equal_ac += va == c.next();
    equal_ad += va == d.next();
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
  CHECK(equal_ad == 0);
}

TEST_CASE("uniform01 stays in [0, 1) and open variant in (0, 1]") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform_open01();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("normal moments are standard") {
  Rng rng(11);
  const int n = 200000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02).scale(1.0));
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma sampler matches its mean for large and small shapes") {
  Rng rng(13);
  for (const double shape : {0.5, 3.0, 841.0}) {
    const double scale = 2.0;
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.gamma(shape, scale);
    CHECK(sum / n == doctest::Approx(shape * scale).epsilon(0.03));
  }
}
