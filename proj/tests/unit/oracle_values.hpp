#pragma once

// Generated by tests/oracle/make_oracles.py; do not edit.

namespace oracle_values {

inline constexpr double kTopt12 = 0.27516060407455223;
inline constexpr double kAlphaOpt12 = 1.1965928085941857;
inline constexpr double kXiOpt12 = 0.6820590445964476;
inline constexpr double kAlphaOpt12Chi01 = 1.0092173791743344;
inline constexpr double kMeanJz12Chi01Phi03 = -1.6780786767373665;
inline constexpr double kMeanJz2_12Chi01Phi03 = 3.8198549361055596;
inline constexpr double kPhaseUnc12Chi01Phi04 = 0.18983568287128882;
inline constexpr double kAlphaOpt12Chi02 = 1.141324606953729;
inline constexpr double kTopt200 = 0.04217163326508746;
inline constexpr double kAnsatzXi200s02 = 0.21289889178357188;
inline constexpr double kHalfNormalMean01 = 0.07978845608028654;
inline constexpr double kUniformStdPi = 1.8137993642342178;
inline constexpr double kGravPhase = 32.6644045;
inline constexpr double kClockT1 = 0.03797539948234952;
inline constexpr double kPrecision015_200_50 = 0.0015;
inline constexpr double kGaussProductStd = 0.24;
inline constexpr double kAnsatzAmp015 = 86.07272653446414;
inline constexpr double kReshapedSigma015 = 2.7388173873480692;

}  // namespace oracle_values
