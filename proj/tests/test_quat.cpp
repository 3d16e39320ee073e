#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "twistlab/quat.hpp"

using namespace twistlab;
using testutil::quat_distance;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("products follow the quaternion table") {
  UnitQuaternion one;
  UnitQuaternion i = UnitQuaternion::i();
  UnitQuaternion j = UnitQuaternion::j();
  UnitQuaternion k = UnitQuaternion::k();

  CHECK(quat_distance((one * i).value(), i.value()) == 0.0);
  CHECK(quat_distance((i * j).value(), k.value()) < 1e-15);
  CHECK(quat_distance((j * k).value(), i.value()) < 1e-15);
  CHECK(quat_distance((i * i).value(), Quat{-1, 0, 0, 0}) < 1e-15);

  RandomStream rng(11);
  for (int n = 0; n < 100; ++n) {
    UnitQuaternion q = haar(rng);
    CHECK(quat_distance((q * q.inverse()).value(), Quat{1, 0, 0, 0}) < 1e-14);
    CHECK(std::abs(q.value().norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("trace and angle of the marked elements") {
  CHECK(trace(UnitQuaternion()) == 2.0);
  CHECK(trace(UnitQuaternion::minus_one()) == -2.0);
  CHECK(trace(UnitQuaternion::i()) == 0.0);

  CHECK(theta(UnitQuaternion()) == 0.0);
  CHECK(theta(UnitQuaternion::minus_one()) == doctest::Approx(kPi));
  CHECK(theta(UnitQuaternion::i()) == doctest::Approx(kPi / 2));
}

TEST_CASE("one-parameter subgroup passes through its element") {
  UnitQuaternion i = UnitQuaternion::i();
  CHECK(quat_distance(one_param(i, kPi / 2).value(), i.value()) < 1e-12);
  CHECK(quat_distance(one_param(UnitQuaternion::j(), 0.0).value(), Quat{1, 0, 0, 0}) == 0.0);
  CHECK(quat_distance(one_param(UnitQuaternion::k(), 2 * kPi).value(), Quat{1, 0, 0, 0}) < 1e-12);

  CHECK_THROWS_AS(one_param(UnitQuaternion(), 0.3), Error);
  CHECK_THROWS_AS(axis(UnitQuaternion::minus_one()), Error);
  try {
    one_param(UnitQuaternion(), 0.3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AxisUndefined);
  }

  RandomStream rng(12);
  for (int n = 0; n < 200; ++n) {
    UnitQuaternion q = haar(rng);
    double s = rng.uniform(-4, 4), t = rng.uniform(-4, 4);
    // homomorphism in t
    CHECK(quat_distance((one_param(q, s) * one_param(q, t)).value(), one_param(q, s + t).value()) <
          1e-12);
    // the subgroup reaches q at its own angle
    CHECK(quat_distance(one_param(q, theta(q)).value(), q.value()) < 1e-12);
    // conjugation equivariance
    UnitQuaternion p = haar(rng);
    CHECK(quat_distance((p * one_param(q, t) * p.inverse()).value(),
                        one_param(p * q * p.inverse(), t).value()) < 1e-12);
  }
}

TEST_CASE("conjugation solver parameterizes the solution circle") {
  UnitQuaternion i = UnitQuaternion::i();
  UnitQuaternion j = UnitQuaternion::j();

  // p = q: the centralizer circle itself
  for (double t : {0.0, 0.7, 2.9}) {
    CHECK(quat_distance(conj_solve(i, i, t).value(), one_param(i, t).value()) < 1e-14);
  }

  UnitQuaternion x0 = conj_solve(i, j, 0.0);
  CHECK(quat_distance((x0 * i * x0.inverse()).value(), j.value()) < 1e-10);

  try {
    conj_solve(UnitQuaternion(), UnitQuaternion(), 0.0);
    FAIL("central p must be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateCenter);
  }
  try {
    conj_solve(i, UnitQuaternion(0.6, 0.8, 0, 0), 0.0);
    FAIL("trace mismatch must be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TraceMismatch);
  }

  RandomStream rng(13);
  for (int n = 0; n < 200; ++n) {
    UnitQuaternion p = haar(rng);
    if (p.distance_to_center() < 1e-3) continue;
    UnitQuaternion g = haar(rng);
    UnitQuaternion q = g * p * g.inverse();
    double t = rng.uniform(0, 2 * kPi);
    UnitQuaternion x = conj_solve(p, q, t);
    CHECK(quat_distance((x * p * x.inverse()).value(), q.value()) < 1e-10);
    // circle closure: composing with any centralizer element of p stays
    // inside the solution set
    UnitQuaternion y = x * one_param(p, rng.uniform(0, 2 * kPi));
    CHECK(quat_distance((y * p * y.inverse()).value(), q.value()) < 1e-10);
  }

  // antipodal axes exercise the fallback base solution
  UnitQuaternion p(0.5, std::sqrt(0.75), 0, 0);
  UnitQuaternion q(0.5, -std::sqrt(0.75), 0, 0);
  UnitQuaternion x = conj_solve(p, q, 1.3);
  CHECK(quat_distance((x * p * x.inverse()).value(), q.value()) < 1e-10);
}

TEST_CASE("two-sided multiplication map and its kernel") {
  UnitQuaternion i = UnitQuaternion::i();
  PhiMap same = phi_map(i, i);
  CHECK(same.rank == 2);
  REQUIRE(same.kernel.size() == 2);
  // kernel = span{1, i}: both base vectors are killed
  for (const Quat& v : {Quat{1, 0, 0, 0}, Quat{0, 1, 0, 0}}) {
    Eigen::Vector4d image = same.matrix * v.vec();
    CHECK(image.norm() < 1e-12);
  }

  RandomStream rng(14);
  for (int n = 0; n < 50; ++n) {
    UnitQuaternion a = haar(rng);
    if (a.distance_to_center() < 1e-2) continue;
    PhiMap self = phi_map(a, a);
    CHECK((self.matrix * Quat{1, 0, 0, 0}.vec()).norm() < 1e-12);
    CHECK((self.matrix * a.value().vec()).norm() < 1e-12);

    UnitQuaternion g = haar(rng);
    UnitQuaternion b = g * a * g.inverse();
    if (quat_distance(a.value(), b.value()) < 1e-2) continue;
    PhiMap conj = phi_map(a, b);
    CHECK(conj.rank == 2);
    // the image is not contained in the imaginary subspace
    double max_real = 0.0;
    for (const auto& v : conj.image) max_real = std::max(max_real, std::abs(v[0]));
    CHECK(max_real > 1e-6);
  }
}

TEST_CASE("isoclinic factorization round-trips") {
  Isometry4 ident = Isometry4::from_matrix(Eigen::Matrix4d::Identity());
  auto [pi, qi] = so4_factor(ident);
  CHECK(std::abs(std::abs(pi.w()) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(qi.w()) - 1.0) < 1e-12);

  Isometry4 left_i = Isometry4::from_matrix(left_mult_matrix(Quat{0, 1, 0, 0}));
  auto [pl, ql] = so4_factor(left_i);
  CHECK(std::abs(std::abs(pl.x()) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(ql.w()) - 1.0) < 1e-12);
  CHECK(pl.x() * ql.w() > 0.0);  // signs agree so the product is +i

  RandomStream rng(15);
  for (int n = 0; n < 100; ++n) {
    UnitQuaternion p0 = haar(rng);
    UnitQuaternion q0 = haar(rng);
    // independent construction of the matrix of X -> p0 X q0
    Eigen::Matrix4d m;
    Quat basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (int c = 0; c < 4; ++c) {
      m.col(c) = (p0.value() * basis[c] * q0.value()).vec();
    }
    auto [p, q] = so4_factor(Isometry4::from_matrix(m));
    double direct = quat_distance(p.value(), p0.value()) + quat_distance(q.value(), q0.value());
    double flipped = quat_distance(p.value(), (-p0).value()) + quat_distance(q.value(), (-q0).value());
    CHECK(std::min(direct, flipped) < 1e-12);
  }

  // conjugation X -> conj(X) reverses orientation
  Eigen::Matrix4d conj_m = Eigen::Matrix4d::Identity();
  conj_m(1, 1) = conj_m(2, 2) = conj_m(3, 3) = -1.0;
  CHECK_THROWS_AS(so4_factor(Isometry4::from_matrix(conj_m)), Error);
}

TEST_CASE("haar sampling is deterministic with the documented moments") {
  RandomStream a(99), b(99);
  for (int n = 0; n < 10; ++n) {
    CHECK(quat_distance(haar(a).value(), haar(b).value()) == 0.0);
  }

  RandomStream rng(123);
  double mean_tr = 0.0, mean_tr2 = 0.0;
  const int samples = 100000;
  for (int n = 0; n < samples; ++n) {
    double t = trace(haar(rng));
    mean_tr += t;
    mean_tr2 += t * t;
  }
  mean_tr /= samples;
  mean_tr2 /= samples;
  CHECK(std::abs(mean_tr) < 0.02);
  CHECK(std::abs(mean_tr2 - 1.0) < 0.02);
}

TEST_CASE("scalar product is bi-invariant and the trace identities hold") {
  RandomStream rng(77);
  for (int n = 0; n < 500; ++n) {
    UnitQuaternion p = haar(rng), q = haar(rng);
    UnitQuaternion X = haar(rng), Y = haar(rng);
    double before = inner(X.value(), Y.value());
    double after = inner((p * X * q).value(), (p * Y * q).value());
    CHECK(std::abs(before - after) < 1e-12);

    double parallelogram = trace(X * Y) + trace(X * Y.inverse()) - trace(X) * trace(Y);
    CHECK(std::abs(parallelogram) < 1e-12);
    CHECK(std::abs(trace(X * Y.inverse()) - trace(Y * X.inverse())) < 1e-12);
  }
}

TEST_CASE("projective directions compare without sign") {
  CHECK_THROWS_AS(ProjectiveDirection(ImaginaryVector{1e-10, 0, 0}), Error);
  ProjectiveDirection d1(ImaginaryVector{1, 0, 0});
  ProjectiveDirection d2(ImaginaryVector{-2, 0, 0});
  ProjectiveDirection d3(ImaginaryVector{0, 3, 0});
  CHECK(d1.angular_distance(d2) == doctest::Approx(0.0));
  CHECK(d1.angular_distance(d3) == doctest::Approx(kPi / 2));
}
