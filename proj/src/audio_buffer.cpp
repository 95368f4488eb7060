#include "zsonify/audio_buffer.hpp"

#include <cmath>
#include <stdexcept>

namespace zsonify {

void mix_into(AudioBuffer& accumulator, const StereoPair& source, double onset_seconds) {
    if (!(onset_seconds >= 0.0))
        throw std::invalid_argument("mix_into: negative onset");
    if (accumulator.sample_rate <= 0)
        throw std::invalid_argument("mix_into: accumulator needs a sample rate");

    const std::size_t start =
        static_cast<std::size_t>(std::llround(onset_seconds * accumulator.sample_rate));
    accumulator.ensure_frames(start + source.frames());
    for (std::size_t i = 0; i < source.frames(); ++i) {
        accumulator.left[start + i] += source.left[i];
        accumulator.right[start + i] += source.right[i];
    }
}

} // namespace zsonify
