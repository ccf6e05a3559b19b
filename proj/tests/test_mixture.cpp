#include <gtest/gtest.h>

#include <cmath>

#include "gmsm/gaussian.hpp"
#include "gmsm/mixture.hpp"
#include "gmsm/quadrature.hpp"
#include "oracles.hpp"

using namespace gmsm;

TEST(Gaussian, PdfCdfAgainstHighPrecision) {
  for (double x : {-30.0, -8.5, -3.0, -1.0, -0.1, 0.0, 0.7, 2.5, 6.0, 9.0}) {
    const oracle::hp X(x);
    EXPECT_NEAR(normal_pdf(x) / oracle::d(oracle::phi(X)), 1.0, 1e-14) << x;
    EXPECT_NEAR(normal_cdf(x) / oracle::d(oracle::Phi(X)), 1.0, 1e-14) << x;
    EXPECT_NEAR(normal_sf(x) / oracle::d(oracle::Phi(-X)), 1.0, 1e-14) << x;
  }
}

TEST(Gaussian, MillsRatioBranchesAgree) {
  for (double x : {-2.0, 0.0, 1.0, 5.0, 20.0, 29.9})
    EXPECT_NEAR(mills_ratio(x), oracle::d(oracle::Phi(-oracle::hp(x)) / oracle::phi(oracle::hp(x))),
                1e-13 * mills_ratio(x));
  // continued fraction side vs 50-digit value
  for (double x : {30.0, 35.0, 60.0})
    EXPECT_NEAR(mills_ratio(x), oracle::d(oracle::Phi(-oracle::hp(x)) / oracle::phi(oracle::hp(x))),
                1e-14 * mills_ratio(x));
}

TEST(MixtureParams, RejectsInvalid) {
  EXPECT_THROW(MixtureParams(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(MixtureParams(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(MixtureParams(0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(MixtureParams(0.5, -1.0), std::invalid_argument);
  EXPECT_THROW(ParamSpace(0.5), std::invalid_argument);
  EXPECT_THROW(ParamSpace(0.0), std::invalid_argument);
  EXPECT_NO_THROW(ParamSpace(0.01));
}

TEST(Density, SymmetricMixtureAtOriginIsPhiMu) {
  // 0.5 phi(-5) + 0.5 phi(5) = phi(5)
  EXPECT_NEAR(density(MixtureParams(0.5, 5.0), 0.0), oracle::d(oracle::phi(5)), 1e-20);
  EXPECT_NEAR(density(MixtureParams(0.5, 5.0), 0.0), 1.4867195147342977e-06, 1e-20);
}

TEST(Density, HighPrecisionOracle) {
  const double v = density(MixtureParams(0.3, 2.0), 1.5);
  const double ref = oracle::d(oracle::density(oracle::hp("0.3"), 2, oracle::hp("1.5")));
  EXPECT_NEAR(v / ref, 1.0, 1e-14);
}

TEST(Density, ReflectionSymmetry) {
  for (double th : {0.01, 0.2, 0.7})
    for (double mu : {0.3, 2.0, 7.0})
      for (double x = -12.0; x <= 12.0; x += 0.77) {
        const double a = density(MixtureParams(th, mu), x), b = density(MixtureParams(1 - th, mu), -x);
        EXPECT_NEAR(a, b, 1e-14 * a);
        EXPECT_NEAR(cdf(MixtureParams(th, mu), x), 1.0 - cdf(MixtureParams(1 - th, mu), -x), 1e-15);
      }
}

TEST(Density, NormalizesOnTruncatedLine) {
  for (double mu : {0.1, 1.0, 4.0, 10.0})
    for (double th : {0.05, 0.5, 0.9}) {
      const MixtureParams p(th, mu);
      const double mass = integrate_line([&](double x) { return density(p, x); }, mu);
      EXPECT_NEAR(mass, 1.0, 1e-8) << mu << " " << th;
    }
}

TEST(Cdf, ValuesAndLimits) {
  EXPECT_DOUBLE_EQ(cdf(MixtureParams(0.5, 2.3), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(cdf(MixtureParams(0.2, 2.3), 60.0), 1.0);
  EXPECT_DOUBLE_EQ(cdf(MixtureParams(0.2, 2.3), -60.0), 0.0);
  const double ref = oracle::d(oracle::cdf(oracle::hp("0.7"), 1, 0));
  EXPECT_NEAR(cdf(MixtureParams(0.7, 1.0), 0.0), ref, 1e-15);
  EXPECT_NEAR(ref, 0.363, 5e-4);
  // the complement keeps relative accuracy deep in the right tail
  const double tail = oracle::d(1 - oracle::cdf(oracle::hp("0.4"), 1, 9));
  EXPECT_NEAR(sf(MixtureParams(0.4, 1.0), 9.0) / tail, 1.0, 1e-13);
}

TEST(Cdf, MonotoneInX) {
  const MixtureParams p(0.3, 3.0);
  double prev = 0.0;
  for (double x = -15.0; x <= 15.0; x += 0.01) {
    const double c = cdf(p, x);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Weight, Values) {
  EXPECT_DOUBLE_EQ(weight(MixtureParams(0.5, 3.0), 0.0), 0.5);
  EXPECT_EQ(weight(MixtureParams(0.9, 2.0), -1e3), 0.0);
  EXPECT_EQ(weight(MixtureParams(0.1, 2.0), 1e3), 1.0);
  const oracle::hp th("0.3");
  const double ref = oracle::d(1 / (1 + (1 - th) / th * exp(oracle::hp(-1))));
  EXPECT_NEAR(weight(MixtureParams(0.3, 1.0), 0.5), ref, 1e-15);
  EXPECT_NEAR(ref, 0.5381, 1e-4);
}

TEST(Weight, MatchesDirectRatioWhereSafe) {
  for (double th : {0.05, 0.5, 0.83})
    for (double mu : {0.5, 2.0, 5.0})
      for (double x = -5.0; x <= 5.0; x += 0.25) {
        const double ref = oracle::d(oracle::weight(oracle::hp(th), oracle::hp(mu), oracle::hp(x)));
        EXPECT_NEAR(weight(MixtureParams(th, mu), x), ref, 1e-15 + 1e-14 * ref);
      }
}

TEST(Weight, MidpointFollowsTheProofSign) {
  // w = 1/2 at log((1-theta)/theta)/(2mu), not at its mirror image.
  for (double th : {0.1, 0.3, 0.8})
    for (double mu : {0.5, 2.0}) {
      const double b = std::log((1 - th) / th) / (2 * mu);
      EXPECT_NEAR(weight(MixtureParams(th, mu), b), 0.5, 1e-15);
      EXPECT_GT(std::fabs(weight(MixtureParams(th, mu), -b) - 0.5), 1e-3);
    }
}

TEST(Weight, NoOverflowForLargeArguments) {
  for (double x : {-1e3, -500.0, 500.0, 1e3}) {
    const double w = weight(MixtureParams(0.4, 10.0), x);
    EXPECT_TRUE(std::isfinite(w));
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
}

TEST(Score, ZeroAtSymmetricOrigin) { EXPECT_EQ(score(MixtureParams(0.5, 3.0), 0.0), 0.0); }

TEST(Score, FiniteDifferenceOfLogDensity) {
  const double h = 1e-5;
  for (double th : {0.01, 0.3, 0.5, 0.99})
    for (double mu : {0.2, 1.0, 3.0, 5.0}) {
      const MixtureParams p(th, mu);
      double worst = 0.0;
      for (double x = -mu - 5; x <= mu + 5; x += 0.05) {
        const double fd = (log_density(p, x + h) - log_density(p, x - h)) / (2 * h);
        worst = std::max(worst, std::fabs(fd - score(p, x)));
      }
      EXPECT_LT(worst, 1e-6) << th << " " << mu;
    }
  const MixtureParams p(0.99, 5.0);
  const double fd = (log_density(p, 5.0 + h) - log_density(p, 5.0 - h)) / (2 * h);
  EXPECT_NEAR(score(p, 5.0), fd, 1e-6);
  EXPECT_NEAR(score(p, 5.0), oracle::mix_score(0.99, 5.0, 5.0), 1e-12);
}

TEST(Score, CurvesCoincideAwayFromMidpoint) {
  // mu = 5: scores of very different weights agree once |x| is a few units
  // away from the switching region near 0.
  const double ths[] = {0.01, 0.1, 0.5, 0.9, 0.99};
  for (double x : {-8.0, -5.0, -3.0, 3.0, 5.0, 8.0}) {
    double lo = 1e300, hi = -1e300;
    for (double th : ths) {
      const double s = score(MixtureParams(th, 5.0), x);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    EXPECT_LT(hi - lo, 1e-9) << x;
  }
  EXPECT_GT(std::fabs(score(MixtureParams(0.01, 5.0), 0.0) - score(MixtureParams(0.99, 5.0), 0.0)), 1.0);
}

TEST(ScoreDx, ValuesAndLimits) {
  EXPECT_NEAR(score_dx(MixtureParams(0.5, 0.1), 0.0), -0.99, 1e-15);
  EXPECT_DOUBLE_EQ(score_dx(MixtureParams(0.3, 2.0), 80.0), -1.0);
  EXPECT_DOUBLE_EQ(score_dx(MixtureParams(0.3, 2.0), -80.0), -1.0);
}

TEST(ScoreDx, FiniteDifferenceOfScore) {
  const double h = 1e-5;
  for (double th : {0.05, 0.5, 0.9})
    for (double mu : {0.5, 2.0, 4.0}) {
      const MixtureParams p(th, mu);
      for (double x = -mu - 5; x <= mu + 5; x += 0.1) {
        const double fd = (score(p, x + h) - score(p, x - h)) / (2 * h);
        EXPECT_NEAR(score_dx(p, x), fd, 1e-6) << th << " " << mu << " " << x;
        const double w = weight(p, x);
        EXPECT_NEAR(score_dx(p, x), 4 * mu * mu * w * (1 - w) - 1, 1e-12);
      }
    }
}

TEST(ScoreDx, NegativeInUnimodalRegime) {
  const double mu = 0.99 * std::sqrt(27.0 / 32.0);
  for (double th : {0.01, 0.2, 0.5, 0.8, 0.99})
    for (double x = -10; x <= 10; x += 0.01) EXPECT_LT(score_dx(MixtureParams(th, mu), x), 0.0);
}

TEST(ScoreDiff, ClosedFormAgainstSubtraction) {
  const MixtureParams a(0.2, 1.0), b(0.8, 1.0);
  EXPECT_NEAR(score_diff(a, b, 0.0), score(a, 0.0) - score(b, 0.0), 1e-12);
  for (double x = -6; x <= 6; x += 0.1) {
    const double direct = score(a, x) - score(b, x);
    EXPECT_NEAR(score_diff(a, b, x), direct, 1e-10 * std::max(1e-300, std::fabs(direct)) + 1e-15);
  }
  for (double x = -6; x <= 6; x += 0.5) EXPECT_EQ(score_diff(a, a, x), 0.0);
  EXPECT_THROW(score_diff(MixtureParams(0.3, 1.0), MixtureParams(0.3, 2.0), 0.0), std::invalid_argument);
}

TEST(ScoreDiff, ExponentialEnvelope) {
  for (double th : {0.05, 0.4})
    for (double ts : {0.3, 0.95})
      for (double mu : {0.5, 2.0}) {
        const MixtureParams p(th, mu), q(ts, mu);
        const double m = std::min(th * ts, (1 - th) * (1 - ts));
        for (double x = -8; x <= 8; x += 0.1) {
          const double r = score_diff(p, q, x) / (2 * mu * (th - ts));  // phi phi / (f f)
          const double e = std::exp(-2 * mu * std::fabs(x));
          EXPECT_GE(r, e * (1 - 1e-12));
          EXPECT_LE(r, e / m * (1 + 1e-12));
        }
      }
}

TEST(Evolve, Locations) {
  EXPECT_EQ(evolve(MixtureParams(0.3, 5.0), 0.0).mu_t, 5.0);
  EXPECT_NEAR(evolve(MixtureParams(0.3, 5.0), std::log(2.0)).mu_t, 2.5, 1e-15);
  EXPECT_THROW(evolve(MixtureParams(0.3, 5.0), -0.1), std::invalid_argument);
  const auto e = evolve(MixtureParams(0.3, 5.0), 1.3);
  EXPECT_EQ(e.mu_t, std::exp(-1.3) * 5.0);
  EXPECT_EQ(e.marginal().theta, 0.3);
  double prev = 5.0;
  for (double t = 0.1; t < 20; t += 0.1) {
    const double m = evolve(MixtureParams(0.3, 5.0), t).mu_t;
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(Evolve, Semigroup) {
  const MixtureParams p(0.4, 3.0);
  for (double s : {0.0, 0.2, 1.0})
    for (double t : {0.0, 0.5, 2.0}) {
      const auto a = evolve(evolve(p, s).marginal(), t);
      const auto b = evolve(p, s + t);
      EXPECT_NEAR(a.mu_t, b.mu_t, 1e-15 * b.mu_t);
    }
}

TEST(Evolve, DensityEqualsConvolution) {
  // f_t(x) = int f(y) N(x; e^{-t} y, 1 - e^{-2t}) dy by brute-force trapezoid.
  for (double th : {0.1, 0.5, 0.9})
    for (double mu : {1.0, 5.0})
      for (double t : {0.1, 1.0, 3.0}) {
        const auto ev = evolve(MixtureParams(th, mu), t);
        const double e = std::exp(-t), v = 1 - std::exp(-2 * t), sd = std::sqrt(v);
        for (double x : {-4.0, -1.0, 0.0, 0.5, 2.0, 6.0}) {
          auto integrand = [&](double y) {
            return oracle::mix_pdf(th, mu, y) * oracle::npdf((x - e * y) / sd) / sd;
          };
          const double conv = oracle::trapezoid(integrand, -mu - 14, mu + 14, 200000);
          EXPECT_NEAR(density(ev, x), conv, 1e-8) << th << " " << mu << " " << t << " " << x;
        }
      }
}

TEST(Mixture, ExpMomentEnvelope) {
  // E_theta[e^{-t|X|}] <= [min(sqrt(pi/2), 1/(t-mu)) + min(sqrt(pi/2), 1/(t+mu))] phi(mu)
  const double c = std::sqrt(M_PI / 2);
  for (double th : {0.1, 0.5, 0.9})
    for (double mu : {0.5, 1.0, 2.0, 4.0})
      for (double k : {1.1, 1.5, 2.0, 4.0}) {
        const double t = k * mu;
        const MixtureParams p(th, mu);
        const double lhs = integrate_line([&](double x) { return std::exp(-t * std::fabs(x)) * density(p, x); }, mu);
        const double rhs = (std::min(c, 1 / (t - mu)) + std::min(c, 1 / (t + mu))) * normal_pdf(mu);
        EXPECT_LE(lhs, rhs) << th << " " << mu << " " << t;
      }
}

TEST(Mixture, ExpMomentSingleCapFailsForSmallMu) {
  // With one cap on the summed Mills terms the inequality is false here.
  const double mu = 0.5, t = 0.55;
  const double lhs = integrate_line(
      [&](double x) { return std::exp(-t * std::fabs(x)) * density(MixtureParams(0.5, mu), x); }, mu);
  const double single = std::min(std::sqrt(M_PI / 2), 1 / (t - mu) + 1 / (t + mu)) * normal_pdf(mu);
  EXPECT_GT(lhs, single + 0.2);
}
