#include "zsonify/reverb.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace zsonify {

namespace {

// Classic Schroeder topology with fixed parameters. Feedback gains follow
// the comb delay for a common decay time; the right channel runs slightly
// longer delays for stereo width.
constexpr std::array<double, 4> kCombDelaysMs{29.7, 37.1, 41.1, 43.7};
constexpr std::array<double, 2> kAllpassDelaysMs{5.0, 1.7};
constexpr double kAllpassGain = 0.7;
constexpr double kDecayTimeS = 1.4;
constexpr double kWetScale = 0.25;
constexpr double kRightOffsetMs = 0.53;

std::vector<double> process_channel(const std::vector<double>& in, int sample_rate,
                                    double offset_ms) {
    struct Comb {
        std::vector<double> line;
        std::size_t pos = 0;
        double feedback = 0.0;
    };
    struct Allpass {
        std::vector<double> line;
        std::size_t pos = 0;
    };

    std::array<Comb, 4> combs;
    for (std::size_t c = 0; c < combs.size(); ++c) {
        const double delay_s = (kCombDelaysMs[c] + offset_ms) / 1000.0;
        const std::size_t len =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(delay_s * sample_rate)));
        combs[c].line.assign(len, 0.0);
        combs[c].feedback = std::pow(10.0, -3.0 * delay_s / kDecayTimeS);
    }
    std::array<Allpass, 2> allpasses;
    for (std::size_t a = 0; a < allpasses.size(); ++a) {
        const double delay_s = (kAllpassDelaysMs[a] + offset_ms) / 1000.0;
        const std::size_t len =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(delay_s * sample_rate)));
        allpasses[a].line.assign(len, 0.0);
    }

    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        double acc = 0.0;
        for (auto& c : combs) {
            const double delayed = c.line[c.pos];
            c.line[c.pos] = in[i] + delayed * c.feedback;
            c.pos = (c.pos + 1) % c.line.size();
            acc += delayed;
        }
        double v = acc * kWetScale;
        for (auto& a : allpasses) {
            const double delayed = a.line[a.pos];
            const double w = v + delayed * kAllpassGain;
            a.line[a.pos] = w;
            a.pos = (a.pos + 1) % a.line.size();
            v = delayed - kAllpassGain * w;
        }
        out[i] = v;
    }
    return out;
}

} // namespace

AudioBuffer schroeder_reverb(const AudioBuffer& send) {
    AudioBuffer wet;
    wet.sample_rate = send.sample_rate;
    wet.left = process_channel(send.left, send.sample_rate, 0.0);
    wet.right = process_channel(send.right, send.sample_rate, kRightOffsetMs);
    return wet;
}

} // namespace zsonify
