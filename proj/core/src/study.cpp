#include "docbin/study.hpp"

#include "docbin/metrics.hpp"
#include "docbin/patching.hpp"
#include "docbin/wavelet.hpp"

namespace docbin {

SubbandPsnr subband_binarization_psnr(const Raster& img, const BinaryMask& gt, int patch_size,
                                      Threshold t, const NormOverrides& norm) {
  if (img.channels() != 3) throw InvalidArgument("subband study needs a color image");
  if (img.width() != gt.width() || img.height() != gt.height()) {
    throw StructuralError("subband study: image and GT dimensions differ");
  }
  if (patch_size % 2 != 0) throw InvalidArgument("subband study needs an even patch size");

  const ChannelBundle channels = split_channels(img);
  SubbandPsnr out;
  for (const FloatPlane* channel : {&channels.red, &channels.green, &channels.blue}) {
    const PlaneGrid grid = split_patches(*channel, patch_size);
    std::array<PlaneGrid, 4> raw;
    std::array<PlaneGrid, 4> normed;
    for (int b = 0; b < 4; ++b) raw[b].geometry = normed[b].geometry = grid.geometry;

    for (const FloatPlane& patch : grid.patches) {
      const SubbandSet sub = dwt2_haar(patch);
      const FloatPlane* bands[4] = {&sub.ll, &sub.hl, &sub.lh, &sub.hh};
      for (int b = 0; b < 4; ++b) {
        raw[b].patches.push_back(resize_bicubic(*bands[b], patch_size, patch_size));
        normed[b].patches.push_back(resize_bicubic(
            normalize_sigmoid(*bands[b], auto_norm_params(*bands[b], norm)), patch_size, patch_size));
      }
    }

    out.original += psnr(binarize(*channel, t), gt) / 3.0;
    for (int b = 0; b < 4; ++b) {
      out.dwt[b] += psnr(binarize(reassemble(raw[b]), t), gt) / 3.0;
      out.dwt_norm[b] += psnr(binarize(reassemble(normed[b]), t), gt) / 3.0;
    }
  }
  return out;
}

}  // namespace docbin
