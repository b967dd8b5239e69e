// Frozen reference constants for the test suite.
//
// Computed by tests/oracles/reference_values.py (mpmath, 60 significant
// digits) independently of the implementations under test. Do not edit by
// hand; rerun the script and paste when a constant is added.
#pragma once

namespace rsp::testing {

// annuity_factor(rate=0.10, years=10) and annualized unit costs
inline constexpr double kAnnuityFactor10pct10yr = 0.16274539488251160762;
inline constexpr double kAnnualize500 = 81.372697441255803812;
inline constexpr double kAnnualize20 = 3.2549078976502321525;

// exact binomial tail inversion, P[Bin(K, eps) <= d-1] <= beta
inline constexpr long kPriorMinK_001_1em3_d2 = 920;
inline constexpr long kPriorMinK_005_1em3_d13 = 533;
inline constexpr double kBinomTail_920_2_001 = 0.00099292859771064545802;
inline constexpr double kBinomTail_919_2_001 = 0.001001973922214725346;
inline constexpr double kBinomTail_30_7_025 = 0.34805428902419611667;
inline constexpr double kBinomTail_25_25_06 = 0.99999715697119700703;
inline constexpr double kBinomTail_400_5_003 = 0.0069758117695972804694;

// closed-form rule round((2/eps)(ln(1/beta) + d)), beta=1e-3, d=13
inline constexpr long kClosedForm_eps005 = 796;
inline constexpr long kClosedForm_eps01 = 398;
inline constexpr long kClosedForm_eps02 = 199;
inline constexpr long kClosedForm_eps03 = 133;
inline constexpr long kClosedForm_eps04 = 100;
inline constexpr long kClosedForm_eps05 = 80;

// posterior convex epsilon: root of the K+1 term polynomial identity
inline constexpr double kPostConvex_1_1em3_920 = 0.012802486773315316157;
inline constexpr double kPostConvex_3_1em3_920 = 0.017556148479525789266;
inline constexpr double kPostConvex_0_1em3_500 = 0.018055324216703906986;
inline constexpr double kPostConvex_5_001_200 = 0.081084381320688400883;
inline constexpr long kMinK_PostConvex_1_005_1em3 = 232;

// posterior nonconvex epsilon = 1 - (beta/(K*C(K,k)))^(1/(K-k))
inline constexpr double kPostNonconvex_1_1em3_2222 = 0.0099992356754667911177;
inline constexpr double kPostNonconvex_1_1em3_2221 = 0.010003315750608538021;
inline constexpr long kMinK_PostNonconvex_1_001_1em3 = 2222;
inline constexpr long kMinK_PostNonconvex_2_001_1em3 = 3012;
inline constexpr double kPostNonconvex_4_1em3_600 = 0.058147496166189718484;

// improved nonconvex with support bound s_bar
inline constexpr long kMinK_Improved_1_001_1em3_sbar1 = 1410;
inline constexpr double kImproved_2_1em3_1000_3 = 0.020947557612898125908;

// wind power curve (v^3 - v_ci^3)/(v_r^3 - v_ci^3), v_ci=4, v_r=13.61
inline constexpr double kWindCf_945 = 0.31742198045396483042;
inline constexpr double kWindCf_50 = 0.02482693508831480695;
inline constexpr double kWindCf_120 = 0.67724622929435801254;

// Weibull(scale=11.0086, shape=1.9622) mean
inline constexpr double kWeibullMean = 9.7599693669734986482;

}  // namespace rsp::testing
