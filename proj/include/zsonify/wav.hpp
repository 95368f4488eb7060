#pragma once

#include <string>
#include <vector>

#include "zsonify/audio_buffer.hpp"

namespace zsonify {

/// Writes a linear-PCM RIFF stereo file at the buffer's sample rate.
/// bit_depth must be 16, 24 or 32; samples are expected in [-1, 1] and
/// scale to the symmetric integer range (no dither).
void write_wav(const AudioBuffer& buffer, const std::string& path, int bit_depth = 24);

struct WavData {
    int sample_rate = 0;
    int bit_depth = 0;
    std::vector<double> left;
    std::vector<double> right;
};

/// Reads stereo PCM wav files written by write_wav (verification helper).
WavData read_wav(const std::string& path);

} // namespace zsonify
