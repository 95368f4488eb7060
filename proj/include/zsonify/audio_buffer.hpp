#pragma once

#include <cstddef>
#include <vector>

namespace zsonify {

/// A stereo segment without a fixed placement on the timeline.
struct StereoPair {
    std::vector<double> left;
    std::vector<double> right;

    std::size_t frames() const { return left.size(); }
};

/// Stereo sample sequence at a fixed rate. Intermediate buffers are
/// unbounded; the final limiter brings samples into [-1, 1].
struct AudioBuffer {
    int sample_rate = 44100;
    std::vector<double> left;
    std::vector<double> right;

    std::size_t frames() const { return left.size(); }
    double seconds() const {
        return sample_rate > 0 ? static_cast<double>(frames()) / sample_rate : 0.0;
    }
    void ensure_frames(std::size_t n) {
        if (left.size() < n) left.resize(n, 0.0);
        if (right.size() < n) right.resize(n, 0.0);
    }
};

/// Adds source into the accumulator at round(onset * sample_rate),
/// growing the accumulator as needed. Negative onsets throw.
void mix_into(AudioBuffer& accumulator, const StereoPair& source, double onset_seconds);

} // namespace zsonify
