#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "recest/linalg.hpp"
#include "recest/rng.hpp"

using namespace recest;

TEST_CASE("identity solve") {
  const SquareMatrix A = SquareMatrix::identity(2);
  const Vec x = solve_linear(A, Vec{3.0, -1.0});
  CHECK(x[0] == 3.0);
  CHECK(x[1] == -1.0);
}

TEST_CASE("diagonal solve") {
  const SquareMatrix A = SquareMatrix::diagonal(Vec{2.0, 4.0});
  const Vec x = solve_linear(A, Vec{2.0, 8.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("zero matrix is singular") {
  const SquareMatrix A(2);
  CHECK_THROWS_AS(solve_linear(A, Vec{1.0, 1.0}), SingularMatrixError);
}

TEST_CASE("relative pivot threshold") {
  // after eliminating the first row the remaining pivot is ~1e-13,
  // below 1e-12 * max|A|
  SquareMatrix A(2);
  A(0, 0) = 1.0;
  A(0, 1) = 1.0;
  A(1, 0) = 1.0;
  A(1, 1) = 1.0 + 1e-13;
  CHECK_THROWS_AS(solve_linear(A, Vec{1.0, 2.0}), SingularMatrixError);

  A(1, 1) = 1.0 + 1e-6;  // comfortably above the threshold
  CHECK_NOTHROW(solve_linear(A, Vec{1.0, 2.0}));
}

TEST_CASE("residual bound on random well-conditioned systems") {
  Rng rng(13);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng.bits() % 5);
    SquareMatrix A(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) A(i, j) = rng.normal();
      A(i, i) += 4.0;  // diagonal dominance keeps the system well conditioned
    }
    Vec b(m);
    for (double& v : b) v = rng.normal();
    const Vec x = solve_linear(A, b);
    Vec r = matvec(A, x) - b;
    CHECK(norm2(r) <= 1e-10 * (1.0 + norm2(b)));
  }
}

TEST_CASE("partial pivoting handles zero leading entry") {
  SquareMatrix A(2);
  A(0, 0) = 0.0;
  A(0, 1) = 1.0;
  A(1, 0) = 1.0;
  A(1, 1) = 0.0;
  const Vec x = solve_linear(A, Vec{5.0, 7.0});
  CHECK(x[0] == doctest::Approx(7.0));
  CHECK(x[1] == doctest::Approx(5.0));
}

TEST_CASE("matrix helpers") {
  SquareMatrix A = SquareMatrix::identity(2);
  A *= 3.0;
  CHECK(A(0, 0) == 3.0);
  CHECK(A.max_abs() == 3.0);
  CHECK(A.finite());
  A(1, 0) = std::nan("");
  CHECK_FALSE(A.finite());

  const SquareMatrix B = outer(Vec{1.0, 2.0}, Vec{3.0, 4.0});
  CHECK(B(1, 0) == 6.0);
  const SquareMatrix C = matmul(SquareMatrix::identity(2), B);
  CHECK(C(0, 1) == B(0, 1));
}
