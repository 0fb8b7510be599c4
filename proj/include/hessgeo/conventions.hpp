#pragma once

// Index conventions and tolerances shared by every module.
//
// Coordinates are affine coordinates of the flat connection, so the flat
// connection has vanishing coefficients and all covariant derivatives of the
// metric reduce to partial derivatives of the potential.
//
//   h_ij        = f_ij                       (Hessian metric)
//   A_ijk       = f_ijk                      (Amari-Chentsov tensor, all lower)
//   A_ij^k      = A_ijl h^lk                 stored as raised(i, j, k)
//   Gamma^k_ij  stored as gamma(k, i, j)     (Levi-Civita and conjugate alike)
//   R[i][j][k][l] with 4 R_ijkl = A_il^m A_jkm - A_ik^m A_jlm
//                               = h_km R^m_ijl   where
//   R^l_ijk     = d_i Gamma^l_jk - d_j Gamma^l_ik
//                 + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik
//   Ric_jl      = h^ik R_ijkl
//   scalar      = h^jl Ric_jl
//   sectional K(X, Y) = R(X, Y, X, Y) / (h(X,X) h(Y,Y) - h(X,Y)^2)
//
// With these choices the hyperbolic plane has K = -1 and Ric = -h.

namespace hessgeo::tol {

inline constexpr double kDomainMargin = 1e-9;
inline constexpr double kDegenerateDeterminant = 1e-12;
inline constexpr double kSignatureThreshold = 1e-12;
inline constexpr double kPositiveDefinite = 1e-10;
inline constexpr double kFlatCurvature = 1e-8;
inline constexpr double kClosedness = 1e-9;
inline constexpr double kRiemannSymmetry = 1e-10;
inline constexpr double kOracleAgreement = 1e-8;
inline constexpr double kLeviCivitaAverage = 1e-10;
inline constexpr double kDualityIdentity = 1e-9;
inline constexpr double kDualDefect = 1e-8;
inline constexpr double kRicciSlack = 1e-10;
inline constexpr double kFiniteDifference = 1e-6;
inline constexpr double kVolumeIdentity = 1e-8;
inline constexpr double kWarpedMetric = 1e-8;

}  // namespace hessgeo::tol
