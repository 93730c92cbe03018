#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "dofseg/colorspace.hpp"
#include "dofseg/morphology.hpp"

namespace testing {

inline dofseg::BinaryMask random_mask(std::mt19937& rng, int w, int h, double density)
{
    std::bernoulli_distribution on(density);
    dofseg::BinaryMask m(w, h);
    for (auto& b : m.bits()) b = on(rng) ? 1 : 0;
    return m;
}

// Union of random filled rectangles: masks with holes, bays and islands,
// which exercise morphology much harder than white noise.
inline dofseg::BinaryMask blobby_mask(std::mt19937& rng, int w, int h, int rects)
{
    dofseg::BinaryMask m(w, h);
    std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1), extent(1, std::max(2, w / 4));
    for (int i = 0; i < rects; ++i) {
        const int x0 = px(rng), y0 = py(rng), rw = extent(rng), rh = extent(rng);
        const bool carve = i % 4 == 3;
        for (int y = y0; y < std::min(h, y0 + rh); ++y)
            for (int x = x0; x < std::min(w, x0 + rw); ++x) m.at(x, y) = carve ? 0 : 1;
    }
    return m;
}

inline dofseg::LabImage random_lab(std::mt19937& rng, int w, int h)
{
    std::uniform_int_distribution<int> byte(0, 255);
    dofseg::RgbImage img(w, h);
    for (auto& p : img.pixels())
        p = {static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
             static_cast<std::uint8_t>(byte(rng))};
    return dofseg::to_lab(img);
}

class TempDir {
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("dofseg_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// Scoped DOFSEG_THREADS override.
class ThreadCap {
public:
    explicit ThreadCap(int n)
    {
        if (const char* old = std::getenv("DOFSEG_THREADS")) old_ = old, had_ = true;
        ::setenv("DOFSEG_THREADS", std::to_string(n).c_str(), 1);
    }
    ~ThreadCap()
    {
        if (had_) ::setenv("DOFSEG_THREADS", old_.c_str(), 1);
        else ::unsetenv("DOFSEG_THREADS");
    }

private:
    std::string old_;
    bool had_ = false;
};

} // namespace testing
