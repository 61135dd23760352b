// Generated by tests/oracles/curve_oracles.py; do not edit by hand.
#pragma once

namespace epifit::oracle {

inline constexpr double kLogisticVenetoT73 = 17804.083473729223;
inline constexpr double kRectIntegralVenetoT40 = 52.55988319545;
inline constexpr double kGbmRectVenetoT30 = 4528.5320771396121;
inline constexpr double kBeGbmRectVenetoT33 = 6054.7704553497909;
inline constexpr double kDmpVenetoT40 = 9199.8884083083843;
inline constexpr double kSeasonalIntegralVenetoT10 = 10.147690824605907;
inline constexpr double kDmpSeasVenetoT50 = 13201.617596390832;
inline constexpr double kSurrogateSwabMean = 5183.972602739726;
inline constexpr double kSurrogateSwabSdPopulation = 3887.6489284695206;
inline constexpr double kSurrogateSwabIntegralT40 = 25.010877780146452;
inline constexpr double kDmpSwabSurrogateT40 = 8780.522124694368;
inline constexpr double kDmpSwabSurrogateT73 = 18437.906148794636;
inline constexpr double kSirdVenetoDay10[4] = {17161.835711579733, 377.6954383199868, 37.66935617400149, 8.915387121824992};
inline constexpr double kSirdVenetoDay40[4] = {6713.8964299856025, 8578.84629981959, 1894.3228574324276, 399.0503059579255};
inline constexpr double kSirdVenetoDay72[4] = {381.3938903257062, 8045.115978394109, 7568.2951674078795, 1591.3108570678564};

}  // namespace epifit::oracle
