// Generated by tests/oracles/oracles.py; do not edit.
#pragma once

#include <array>

namespace oracle {

// p_2n on free:2, n = 1..20, as num/den
inline constexpr std::array<const char*, 20> kFree2Returns = {
    "1/4",
    "7/64",
    "29/512",
    "523/16384",
    "2483/131072",
    "24419/2097152",
    "123181/16777216",
    "5068915/1073741824",
    "26477975/8589934592",
    "280099481/137438953472",
    "1496955595/1099511627776",
    "32281933727/35184372088832",
    "175345890847/281474976710656",
    "1917217336027/4503599627370496",
    "10540827333581/36028797018963968",
    "931894610845123/4611686018427387904",
    "5172109253210879/36893488147419103232",
    "57640224082322909/590295810358705651712",
    "322336528619090047/4722366482869645213696",
    "7233736054134131909/151115727451828646838272",
};
inline constexpr double kFree2LowerAt20 = 0.7798324893699127;
inline constexpr int kFree2FirstAbove080 = 30;
inline constexpr const char* kZ1ReturnAt12 = "231/1024";
inline constexpr const char* kZ2ReturnAt12 = "53361/1048576";
inline constexpr const char* kZ2ReturnAt6 = "25/256";
inline constexpr double kTreeCompressionR8 = 0.830014897578613;
inline constexpr double kTreeCompressionR10 = 0.8404454698082207;
inline constexpr double kTreeCompressionR12 = 0.8468939298187781;
inline constexpr double kTreeCompressionR14 = 0.8511675685724556;
inline constexpr double kTreeTheta12_0p2 = 0.0018834936102457567;
inline constexpr double kTreeTheta12_third = 0.23899453473624344;
inline constexpr double kTreeTheta12_0p5 = 0.8542660676804807;
inline constexpr double kTreeTheta2_0p5 = 0.8998870849609375;
inline constexpr const char* kTreeTheta3_third_exact = "3594333554038412510122241/6461081889226673298932241";
inline constexpr double kTreeCrossing12 = 0.27395036041275966;
inline constexpr double kTreeTheta12_0p30 = 0.11083685802689935;
// min phi over connected sets of size n on the 4-regular tree, n = 1..6
inline constexpr std::array<const char*, 6> kTreeMinPhi = {
    "1",
    "3/4",
    "2/3",
    "5/8",
    "3/5",
    "7/12",
};
// same on zd:2 with +-e_i, n = 1..7
inline constexpr std::array<const char*, 7> kGridMinPhi = {
    "1",
    "3/4",
    "2/3",
    "1/2",
    "1/2",
    "5/12",
    "3/7",
};
inline constexpr double kWitnessH8 = 0.6836041809719999;
inline constexpr double kWitnessH9 = 0.725986919004145;
inline constexpr double kMoharLowerTree = 0.17863279495408188;
inline constexpr double kBsBoundN9 = 5.254471012565195e-06;
inline constexpr const char* kBoxChainH0Norm = "1/4";
inline constexpr const char* kBoxChainNorm1 = "1/40";
inline constexpr const char* kBoxChainNorm2 = "1/2000";
inline constexpr const char* kBoxChainNorm3 = "1/200000";
inline constexpr double kWilson37of200Lo = 0.13730192800616045;
inline constexpr double kWilson37of200Hi = 0.24457062761151752;
inline constexpr double kWilson0of50Lo = 0.0;
inline constexpr double kWilson0of50Hi = 0.07134759913335874;

}  // namespace oracle
