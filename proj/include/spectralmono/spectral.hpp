#pragma once

#include <cstdint>

#include "spectralmono/matrix.hpp"
#include "spectralmono/symmetrize.hpp"
#include "spectralmono/tolerances.hpp"

namespace spectralmono {

enum class SignClassTag : std::uint8_t {
  C1_AllPositive,
  C2_NonPerronNegative,
  C3_NonPerronZero,
  C4_SameSignWithZeros,
  Mixed,
};

const char* sign_class_name(SignClassTag tag);

struct SignClass {
  SignClassTag tag = SignClassTag::Mixed;
  int c4_sign = 0;       // +1 or -1 for C4, 0 otherwise
  double zero_tol = 0.0; // absolute band used for the classification
};

// lambda[0] must hold the Perron value; the classification votes over the
// non-Perron slots only, except C1 which also requires lambda[0] > zero_tol.
SignClass classify_eigen_signs(const Vec& lambda, double zero_tol);
double default_zero_tol(const Vec& lambda, const ToleranceConfig& tol = {});

enum class FamilyShape : std::uint8_t { AffineProduct, ConvexCombination };

// One-parameter family M(m)D with M(m) = A[(1-m) r_B I + m B] (affine
// product) or M(m) = (1-m)A + mB (convex combination; requires equal Perron
// roots). The joint canonical form of (A, B) is computed once and cached.
struct HomotopyFamily {
  FamilyShape shape = FamilyShape::AffineProduct;
  Matrix a;
  Matrix b;
  DiagonalMatrix d;
  JointCanonicalForm joint;
  double r_a = 0.0;
  double r_b = 0.0;

  Matrix at(double m) const;        // M(m), without D
  Vec lambda_m(double m) const;     // spectrum of M(m), slot-aligned with joint.k
  Matrix derivative() const;        // dM/dm, constant in m
};

HomotopyFamily make_family(FamilyShape shape, const Matrix& a, const Matrix& b,
                           const DiagonalMatrix& d, const ToleranceConfig& tol = {});

// Sum-of-squares evaluation of r(M(m)D) through the symmetric similar matrix
// S_m = D^{1/2} K Lambda_m K^T D^{1/2}; y = K^T D^{1/2} x_hat where x_hat is
// the unit dominant eigenvector of S_m.
struct SosResult {
  double r = 0.0;
  Vec y;
  Vec x_hat;
};

SosResult spectral_radius_sos(const HomotopyFamily& f, double m,
                              const ToleranceConfig& tol = {});

// Perron pair of M(m)D recovered from x_hat (one symmetric eigensolve serves
// r, v and y): v ~ E D^{-1/2} x_hat, u ~ E^{-1} D^{1/2} x_hat.
struct FamilyPerron {
  double r = 0.0;
  Vec v;
  Vec u;
};
FamilyPerron family_perron(const HomotopyFamily& f, double m,
                           const ToleranceConfig& tol = {});

enum class PredictedDirection : std::uint8_t {
  Negative,
  Positive,
  Zero,
  NonPositive,
  NonNegative,
  None,
};

const char* predicted_direction_name(PredictedDirection p);

struct DerivativeReport {
  double m = 0.0;
  double r_value = 0.0;
  double dr_analytic = 0.0;
  double dr_fd = 0.0;
  Vec y_squared;
  Vec per_term;  // lambda_Ai (lambda_Bi - r_B) y_i^2, or (lambda_Bi - lambda_Ai) y_i^2
  SignClass a_sign_class;
  PredictedDirection predicted = PredictedDirection::None;
  double fd_tol = 0.0;
  bool fd_consistent = false;
};

DerivativeReport drdm(const HomotopyFamily& f, double m, const ToleranceConfig& tol = {});

// Central difference (r(M(m+h)D) - r(M(m-h)D)) / 2h, cross-checked against
// the Perron-pair sensitivity value u(m)^T (dM/dm) D v(m).
double drdm_fd(const HomotopyFamily& f, double m, double h,
               const ToleranceConfig& tol = {});

enum class Relation : std::uint8_t { Less, Equal, Greater };
const char* relation_name(Relation r);

enum class OrderPrediction : std::uint8_t {
  GreaterStrict,
  GreaterOrEqual,
  LessStrict,
  LessOrEqual,
  Equal,
  None,
};

const char* order_prediction_name(OrderPrediction p);

// r(A) r(AD) versus r(A^2 D).
struct OrderingReport {
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::Equal;
  OrderPrediction predicted = OrderPrediction::None;
  bool consistent = true;
  SignClass sign_class;
  bool strict_expected = false;
};

OrderingReport cohen_ordering(const Matrix& a, const DiagonalMatrix& d,
                              const ToleranceConfig& tol = {});

Vec uniform_grid(std::size_t points);

// r([(1-m)I + mP]D) over the grid; P column-stochastic irreducible, any
// pattern (the statement does not need symmetrizability).
struct KarlinProfile {
  Vec m;
  Vec r;
  bool decreasing_ok = false;  // adjacent increase never exceeds the slack
};
KarlinProfile karlin_sweep(const Matrix& p, const DiagonalMatrix& d, const Vec& grid,
                           const ToleranceConfig& tol = {});

// r([(1-m)I + mP]^2 D) over the grid.
struct SquaredFamilyProfile {
  Vec m;
  Vec r;
  bool unimodal_ok = false;
  double argmin_m = 0.0;
};
SquaredFamilyProfile squared_family_sweep(const Matrix& p, const DiagonalMatrix& d,
                                          const Vec& grid,
                                          const ToleranceConfig& tol = {});

// r((1-m)A + mA^T) over the grid.
struct LevingerProfile {
  Vec m;
  Vec r;
  bool symmetric_ok = false;
  bool monotone_halves_ok = false;
};
LevingerProfile levinger_sweep(const Matrix& a, const Vec& grid,
                               const ToleranceConfig& tol = {});

// True iff x^T S x < 0 for every x != 0 with e^T x = 0, decided through the
// eigenvalues of S projected onto the hyperplane.
bool cnd_check(const Matrix& s, const ToleranceConfig& tol = {});

}  // namespace spectralmono
