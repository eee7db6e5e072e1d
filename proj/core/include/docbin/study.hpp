#pragma once

#include <array>

#include "docbin/raster.hpp"
#include "docbin/wavelet.hpp"

namespace docbin {

/// PSNR (dB) of threshold binarizations of one color document against its GT,
/// averaged over the red, green and blue channels. Each channel is processed
/// per patch; subbands are resized back to patch size before thresholding.
struct SubbandPsnr {
  double original = 0.0;
  std::array<double, 4> dwt{};       // LL, HL, LH, HH
  std::array<double, 4> dwt_norm{};  // LL, HL, LH, HH after sigmoid normalization
};

SubbandPsnr subband_binarization_psnr(const Raster& img, const BinaryMask& gt,
                                      int patch_size, Threshold t = Threshold::unit(0.5),
                                      const NormOverrides& norm = {});

}  // namespace docbin
