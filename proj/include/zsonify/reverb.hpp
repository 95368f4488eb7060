#pragma once

#include "zsonify/audio_buffer.hpp"

namespace zsonify {

/// Fixed-parameter Schroeder reverb: four parallel combs into two series
/// allpasses per channel, with slightly longer delays on the right for
/// width. Returns the wet signal only.
AudioBuffer schroeder_reverb(const AudioBuffer& send);

} // namespace zsonify
