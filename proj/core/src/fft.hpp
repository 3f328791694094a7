#pragma once

#include <complex>
#include <vector>

namespace vlcrelay::detail {

// Unnormalized in-place DFT of any length. Forward uses exp(-j...), inverse
// exp(+j...). Safe to call concurrently.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace vlcrelay::detail
