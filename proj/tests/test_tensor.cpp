#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaze/errors.hpp"
#include "gaze/tensor.hpp"
#include "test_util.hpp"

using gaze::affine;
using gaze::Matrix;
using gaze::Nonlinearity;
using gaze::softmax;
using gaze::Vector;

TEST_CASE("affine: identity, zero weights, hand product") {
  Vector x{1.0, 2.0, 3.0};
  CHECK(affine(Matrix::identity(3), Vector(3, 0.0), x) == x);

  Vector anything{9.0, -2.0, 4.5};
  CHECK(affine(Matrix(2, 3), Vector{5.0, -1.0}, anything) == Vector{5.0, -1.0});

  Matrix w(2, 2);
  w(0, 0) = 1;
  w(0, 1) = 2;
  w(1, 0) = 3;
  w(1, 1) = 4;
  CHECK(affine(w, Vector{1.0, 1.0}, Vector{1.0, 1.0}) == Vector{4.0, 8.0});
}

TEST_CASE("affine rejects mismatched shapes, naming both") {
  Matrix w(2, 3);
  try {
    affine(w, Vector(2, 0.0), Vector(4, 0.0));
    FAIL("expected validation_error");
  } catch (const gaze::validation_error& e) {
    std::string msg = e.what();
    CHECK(msg.find("2x3") != std::string::npos);
    CHECK(msg.find('4') != std::string::npos);
  }
}

TEST_CASE("affine is linear in x") {
  gaze::Rng rng(11);
  Matrix w(5, 7);
  for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.normal(0.0, 1.0);
  Vector zero(5, 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(7), y(7);
    for (auto& v : x) v = rng.normal(0.0, 2.0);
    for (auto& v : y) v = rng.normal(0.0, 2.0);
    Vector xy(7);
    for (std::size_t i = 0; i < 7; ++i) xy[i] = x[i] + y[i];
    Vector lhs = affine(w, zero, xy);
    Vector a = affine(w, zero, x);
    Vector b = affine(w, zero, y);
    for (std::size_t i = 0; i < 5; ++i) CHECK(lhs[i] == doctest::Approx(a[i] + b[i]).epsilon(1e-9));
  }
}

TEST_CASE("softmax: symmetry, extreme logits, frozen values") {
  Vector flat = softmax(Vector{0.0, 0.0, 0.0, 0.0});
  for (double p : flat) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));

  Vector extreme = softmax(Vector{1000.0, 0.0});
  CHECK(std::isfinite(extreme[0]));
  CHECK(extreme[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(extreme[1] == doctest::Approx(0.0).epsilon(1e-9));

  // Frozen from direct high-precision evaluation of exp(v_i)/sum exp.
  Vector p = softmax(Vector{1.0, 2.0, 3.0});
  CHECK(p[0] == doctest::Approx(0.09003057317038046).epsilon(1e-5));
  CHECK(p[1] == doctest::Approx(0.24472847105479764).epsilon(1e-5));
  CHECK(p[2] == doctest::Approx(0.66524095577482190).epsilon(1e-5));

  CHECK_THROWS_AS(softmax(Vector{}), gaze::validation_error);
}

TEST_CASE("softmax sums to one and is shift-invariant on random inputs") {
  gaze::Rng rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng.uniform_index(24);
    Vector v(n);
    for (auto& x : v) x = rng.uniform(-50.0, 50.0);
    Vector p = softmax(v);
    double sum = 0.0;
    for (double x : p) {
      CHECK(x > 0.0);
      CHECK(x < 1.0 + 1e-12);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);

    double c = rng.uniform(-100.0, 100.0);
    Vector shifted = v;
    for (auto& x : shifted) x += c;
    Vector q = softmax(shifted);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(p[i] - q[i]) < 1e-9);
  }
}

TEST_CASE("elementwise nonlinearities: fixed points and ranges") {
  CHECK(gaze::elementwise(Nonlinearity::sigmoid, Vector{0.0})[0] == 0.5);
  CHECK(gaze::elementwise(Nonlinearity::tanh, Vector{0.0})[0] == 0.0);
  CHECK(gaze::elementwise(Nonlinearity::sigmoid, Vector{1.0})[0] ==
        doctest::Approx(0.7310585786300049).epsilon(1e-6));

  gaze::Rng rng(5);
  Vector v(64);
  for (auto& x : v) x = rng.uniform(-40.0, 40.0);
  for (double y : gaze::elementwise(Nonlinearity::sigmoid, v)) {
    CHECK(y >= 0.0);
    CHECK(y <= 1.0);
  }
  for (double y : gaze::elementwise(Nonlinearity::tanh, v)) {
    CHECK(y >= -1.0);
    CHECK(y <= 1.0);
  }
}

TEST_CASE("dropout mask: rate 0, kept fraction, determinism, bad rates") {
  gaze::Rng rng(99);
  CHECK(gaze::dropout_mask(0.0, 8, rng) == Vector(8, 1.0));

  gaze::Rng mc(123);
  Vector mask = gaze::dropout_mask(0.5, 100000, mc);
  std::size_t kept = 0;
  for (double m : mask) {
    CHECK((m == 0.0 || m == 2.0));
    kept += m != 0.0;
  }
  CHECK(std::abs(static_cast<double>(kept) / 100000.0 - 0.5) < 0.01);

  gaze::Rng a(7), b(7);
  CHECK(gaze::dropout_mask(0.3, 1000, a) == gaze::dropout_mask(0.3, 1000, b));

  gaze::Rng c(1);
  CHECK_THROWS_AS(gaze::dropout_mask(1.0, 4, c), gaze::validation_error);
  CHECK_THROWS_AS(gaze::dropout_mask(-0.1, 4, c), gaze::validation_error);
}

// Jacobian-vector products of each primitive against central differences.
TEST_CASE("analytic backward rules match finite differences") {
  gaze::Rng rng(31337);
  const double eps = 1e-5;

  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 2 + rng.uniform_index(15);
    Vector x(n), u(n);
    for (auto& v : x) v = rng.normal(0.0, 1.0);
    for (auto& v : u) v = rng.normal(0.0, 1.0);

    SUBCASE("") {}  // keep rng advancing identically per trial

    // softmax: d/dx_i of u . softmax(x)
    {
      Vector y = softmax(x);
      Vector analytic = gaze::softmax_backward(y, u);
      for (std::size_t i = 0; i < n; ++i) {
        Vector xp = x, xm = x;
        xp[i] += eps;
        xm[i] -= eps;
        double fd = 0.0;
        Vector yp = softmax(xp), ym = softmax(xm);
        for (std::size_t j = 0; j < n; ++j) fd += u[j] * (yp[j] - ym[j]);
        fd /= 2.0 * eps;
        CHECK(testutil::rel_err(analytic[i], fd) < 1e-4);
      }
    }

    // sigmoid / tanh
    for (auto kind : {Nonlinearity::sigmoid, Nonlinearity::tanh}) {
      Vector y = gaze::elementwise(kind, x);
      Vector analytic = gaze::elementwise_backward(kind, y, u);
      for (std::size_t i = 0; i < n; ++i) {
        Vector xp = x, xm = x;
        xp[i] += eps;
        xm[i] -= eps;
        double fd = u[i] * (gaze::elementwise(kind, xp)[i] - gaze::elementwise(kind, xm)[i]) /
                    (2.0 * eps);
        CHECK(testutil::rel_err(analytic[i], fd) < 1e-4);
      }
    }

    // affine: gradients w.r.t. x, W and b of u . (Wx + b)
    {
      std::size_t rows = 2 + rng.uniform_index(6);
      Matrix w(rows, n);
      Vector b(rows), uu(rows);
      for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.normal(0.0, 1.0);
      for (auto& v : b) v = rng.normal(0.0, 1.0);
      for (auto& v : uu) v = rng.normal(0.0, 1.0);

      Vector dx = gaze::affine_backward_input(w, uu);
      Matrix dw(rows, n);
      Vector db(rows, 0.0);
      gaze::affine_backward_params(x, uu, dw, db);

      auto objective = [&](const Matrix& wm, const Vector& bv, const Vector& xv) {
        Vector y = affine(wm, bv, xv);
        double s = 0.0;
        for (std::size_t j = 0; j < rows; ++j) s += uu[j] * y[j];
        return s;
      };
      for (std::size_t i = 0; i < n; ++i) {
        Vector xp = x, xm = x;
        xp[i] += eps;
        xm[i] -= eps;
        double fd = (objective(w, b, xp) - objective(w, b, xm)) / (2.0 * eps);
        CHECK(testutil::rel_err(dx[i], fd) < 1e-4);
      }
      for (int probes = 0; probes < 5; ++probes) {
        std::size_t flat = rng.uniform_index(w.size());
        Matrix wp = w, wm = w;
        wp.data()[flat] += eps;
        wm.data()[flat] -= eps;
        double fd = (objective(wp, b, x) - objective(wm, b, x)) / (2.0 * eps);
        CHECK(testutil::rel_err(dw.data()[flat], fd) < 1e-4);
      }
      for (std::size_t r = 0; r < rows; ++r) {
        Vector bp = b, bm = b;
        bp[r] += eps;
        bm[r] -= eps;
        double fd = (objective(w, bp, x) - objective(w, bm, x)) / (2.0 * eps);
        CHECK(testutil::rel_err(db[r], fd) < 1e-4);
      }
    }
  }
}

TEST_CASE("tensor ops leave no non-finite values on random inputs") {
  gaze::Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.uniform_index(32);
    Vector v(n);
    for (auto& x : v) x = rng.uniform(-700.0, 700.0);
    gaze::check_finite(softmax(v), "softmax output");
    gaze::check_finite(gaze::elementwise(Nonlinearity::sigmoid, v), "sigmoid output");
    gaze::check_finite(gaze::elementwise(Nonlinearity::tanh, v), "tanh output");
  }
}
