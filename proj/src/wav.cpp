#include "zsonify/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace zsonify {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::int32_t encode_sample(double x, std::int32_t full_scale) {
    const double clamped = std::clamp(x, -1.0, 1.0);
    return static_cast<std::int32_t>(std::llround(clamped * full_scale));
}

void put_sample(std::string& out, std::int32_t code, int bytes) {
    for (int i = 0; i < bytes; ++i)
        out.push_back(static_cast<char>((static_cast<std::uint32_t>(code) >> (8 * i)) & 0xFF));
}

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::int32_t read_sample(const unsigned char* p, int bytes) {
    std::uint32_t raw = 0;
    for (int i = 0; i < bytes; ++i) raw |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    const int shift = 32 - 8 * bytes;
    return static_cast<std::int32_t>(raw << shift) >> shift; // sign extend
}

} // namespace

void write_wav(const AudioBuffer& buffer, const std::string& path, int bit_depth) {
    if (bit_depth != 16 && bit_depth != 24 && bit_depth != 32)
        throw std::invalid_argument("write_wav: bit depth must be 16, 24 or 32");
    if (buffer.left.size() != buffer.right.size())
        throw std::invalid_argument("write_wav: channel lengths differ");

    const int bytes = bit_depth / 8;
    const std::uint16_t channels = 2;
    if (buffer.frames() > (0xFFFFFFFFull - 44) / (channels * bytes))
        throw std::invalid_argument("write_wav: buffer exceeds the RIFF size limit");
    const std::uint32_t frames = static_cast<std::uint32_t>(buffer.frames());
    const std::uint32_t data_size = frames * channels * bytes;
    const std::uint32_t byte_rate = static_cast<std::uint32_t>(buffer.sample_rate) * channels * bytes;
    const std::uint16_t block_align = channels * bytes;
    const std::int32_t full_scale =
        static_cast<std::int32_t>((1LL << (bit_depth - 1)) - 1);

    std::string out;
    out.reserve(44 + data_size);
    out += "RIFF";
    put_u32(out, 36 + data_size);
    out += "WAVE";
    out += "fmt ";
    put_u32(out, 16);
    put_u16(out, 1); // PCM
    put_u16(out, channels);
    put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
    put_u32(out, byte_rate);
    put_u16(out, block_align);
    put_u16(out, static_cast<std::uint16_t>(bit_depth));
    out += "data";
    put_u32(out, data_size);
    for (std::uint32_t i = 0; i < frames; ++i) {
        put_sample(out, encode_sample(buffer.left[i], full_scale), bytes);
        put_sample(out, encode_sample(buffer.right[i], full_scale), bytes);
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw std::runtime_error("failed writing audio file: " + path);
}

WavData read_wav(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(file)),
                      std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || bytes.compare(0, 4, "RIFF") != 0 ||
        bytes.compare(8, 4, "WAVE") != 0)
        throw std::runtime_error("not a RIFF wave file: " + path);

    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    WavData wav;
    int channels = 0;
    std::size_t pos = 12;
    std::size_t data_begin = 0, data_size = 0;
    while (pos + 8 <= bytes.size()) {
        const std::string chunk_id = bytes.substr(pos, 4);
        const std::uint32_t chunk_size = read_u32(data + pos + 4);
        const std::size_t body = pos + 8;
        if (chunk_id == "fmt ") {
            if (read_u16(data + body) != 1)
                throw std::runtime_error("only PCM wave files are supported");
            channels = read_u16(data + body + 2);
            wav.sample_rate = static_cast<int>(read_u32(data + body + 4));
            wav.bit_depth = read_u16(data + body + 14);
        } else if (chunk_id == "data") {
            data_begin = body;
            data_size = chunk_size;
        }
        pos = body + chunk_size + (chunk_size & 1);
    }
    if (channels != 2) throw std::runtime_error("expected a stereo file: " + path);
    if (wav.bit_depth != 16 && wav.bit_depth != 24 && wav.bit_depth != 32)
        throw std::runtime_error("unsupported bit depth");
    if (data_begin == 0 || data_begin + data_size > bytes.size())
        throw std::runtime_error("missing or truncated data chunk: " + path);

    const int sample_bytes = wav.bit_depth / 8;
    const std::size_t frames = data_size / (2 * sample_bytes);
    const double full_scale = static_cast<double>((1LL << (wav.bit_depth - 1)) - 1);
    wav.left.resize(frames);
    wav.right.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        const unsigned char* frame = data + data_begin + i * 2 * sample_bytes;
        wav.left[i] = read_sample(frame, sample_bytes) / full_scale;
        wav.right[i] = read_sample(frame + sample_bytes, sample_bytes) / full_scale;
    }
    return wav;
}

} // namespace zsonify
