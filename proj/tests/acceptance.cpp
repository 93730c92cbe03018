// Acceptance runner: one PASS/FAIL line per criterion, thresholds fixed here.
// Exit status is the number of failed criteria.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "dofseg/clustering.hpp"
#include "dofseg/colorspace.hpp"
#include "dofseg/evaluation.hpp"
#include "dofseg/morphology.hpp"
#include "dofseg/pipeline.hpp"
#include "oracles.hpp"
#include "support.hpp"

#ifndef DOFSEG_CLI
#error "DOFSEG_CLI must name the tool binary"
#endif

using namespace dofseg;
namespace fs = std::filesystem;

namespace {

// ---- thresholds ------------------------------------------------------------------

constexpr double kMetricBudget = 5.0;
constexpr double kDbscanBudget = 30.0;
constexpr double kMorphologyBudget = 60.0;
constexpr double kColorBudget = 5.0;
constexpr double kAutoParamBudget = 1.0;
constexpr double kSyntheticBudget = 600.0;
constexpr double kResolutionBudget = 900.0;
constexpr double kMonotoneBudget = 300.0;
constexpr double kSimilarityBudget = 120.0;

constexpr double kMetricTol = 1e-12;
constexpr double kAxiomTol = 1e-9;
constexpr double kAnchorTol = 0.05;
constexpr double kDeltaEMax = 374.2326;
constexpr double kDeltaEMaxTol = 1e-4;
constexpr double kCaseDistortion = 0.35;
constexpr double kCaseShare = 0.80;
constexpr double kSuiteMean = 0.30;

constexpr int kSuiteSize = 20;
constexpr double kSigmaLo = 6.0, kSigmaHi = 12.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* name;
    double budget_s; // <= 0: no runtime bound
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---- shared fixtures ------------------------------------------------------------

SyntheticImage suite_image(int i)
{
    SyntheticSpec spec;
    spec.seed = static_cast<std::uint64_t>(1000 + i);
    spec.blur_sigma = kSigmaLo + (kSigmaHi - kSigmaLo) * i / (kSuiteSize - 1);
    spec.shape = i % 2 ? SyntheticShape::Ellipse : SyntheticShape::Disc;
    return make_synthetic(spec);
}

double distortion_of(const SyntheticImage& s)
{
    const auto rep = segment(to_lab(s.image), {});
    return spatial_distortion(rep.mask, s.truth).d;
}

// ---- criteria -----------------------------------------------------------------------

Outcome metric_exactness()
{
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> dim(1, 128);
    int agree = 0, cases = 0;
    bool anchors = true;
    while (cases < 100) {
        const int w = dim(rng), h = dim(rng);
        const auto truth = cases % 2 ? testing::blobby_mask(rng, w, h, 1 + cases % 7)
                                     : testing::random_mask(rng, w, h, 0.05 + 0.9 * (cases % 10) / 9.0);
        if (truth.count() == 0) continue;
        const auto pred = testing::random_mask(rng, w, h, (cases % 11) / 10.0);
        ++cases;
        if (std::abs(spatial_distortion(pred, truth).d - oracle::spatial_distortion(pred, truth)) <= kMetricTol) ++agree;
        anchors = anchors && spatial_distortion(truth, truth).d == 0.0 &&
                  spatial_distortion(BinaryMask(w, h), truth).d == 1.0;
    }
    return {anchors && agree == cases, fmt("d(I,I)=0 and d(empty,I)=1 %s; oracle agreement %d/%d",
                                           anchors ? "exact" : "VIOLATED", agree, cases)};
}

// Same partition up to a renaming of cluster ids; noise must match exactly.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b)
{
    if (a.size() != b.size()) return false;
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == kNoise) != (b[i] == kNoise)) return false;
        if (a[i] == kNoise) continue;
        if (ab.emplace(a[i], b[i]).first->second != b[i]) return false;
        if (ba.emplace(b[i], a[i]).first->second != a[i]) return false;
    }
    return true;
}

Outcome dbscan_oracle()
{
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> count(1, 200), mp(2, 8);
    std::uniform_real_distribution<double> eps_d(1.0, 20.0);
    int ok = 0;
    for (int t = 0; t < 50; ++t) {
        const auto pts = oracle::random_points(rng, count(rng), 100);
        const double eps = eps_d(rng);
        const int min_pts = mp(rng);
        const auto got = dbscan(pts, eps, min_pts);
        const auto want = oracle::dbscan_closure(pts, eps, min_pts);
        if (same_partition(got.labels, want.labels) && got.core == want.core) ++ok;
    }
    return {ok == 50, fmt("%d/50 point sets match the closure oracle", ok)};
}

Outcome morphology_suite()
{
    std::mt19937 rng(4242);
    int ok = 0;
    std::vector<BinaryMask> masks;
    for (int i = 0; i < 200; ++i)
        masks.push_back(i % 2 ? testing::blobby_mask(rng, 64, 64, 2 + i % 12)
                              : testing::random_mask(rng, 64, 64, 0.1 + 0.8 * (i % 9) / 8.0));
    for (int i = 0; i < 200; ++i) {
        const auto& m = masks[static_cast<std::size_t>(i)];
        const StructuringElement se(3 + 2 * (i % 4));
        const auto c = close(m, se);
        const auto smaller = oracle::pointwise_min(m, masks[static_cast<std::size_t>((i + 1) % 200)]);
        const auto marker = oracle::pointwise_min(testing::random_mask(rng, 64, 64, 0.03), m);
        const auto rec = reconstruct_by_dilation(marker, m, se);
        const auto upper = oracle::pointwise_max(testing::random_mask(rng, 64, 64, 0.97), m);
        const auto rec_e = reconstruct_by_erosion(upper, m, se);
        const auto filled = fill_holes(m);
        const bool pass = erode(m, se) == complement(dilate(complement(m), se)) && m.subset_of(c) &&
                          close(c, se) == c && close(smaller, se).subset_of(c) && marker.subset_of(rec) &&
                          rec.subset_of(m) && m.subset_of(rec_e) && rec_e.subset_of(upper) &&
                          fill_holes(filled) == filled;
        ok += pass;
    }
    return {ok == 200, fmt("%d/200 masks satisfy duality, closing, reconstruction bounds, fill idempotence", ok)};
}

Outcome color_math()
{
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> L(0, 100), ab(-128, 127);
    auto draw = [&] { return LabColor{L(rng), ab(rng), ab(rng)}; };
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto u = draw(), v = draw(), w = draw();
        if (std::abs(delta_e(u, u)) > kAxiomTol) ++violations;
        if (delta_e(u, v) < -kAxiomTol) ++violations;
        if (std::abs(delta_e(u, v) - delta_e(v, u)) > kAxiomTol) ++violations;
        if (delta_e(u, w) > delta_e(u, v) + delta_e(v, w) + kAxiomTol) ++violations;
    }
    double worst = 0.0;
    for (const auto& c : std::vector<std::array<int, 3>>{{255, 255, 255}, {0, 0, 0}, {255, 0, 0}}) {
        const auto got = srgb_to_lab(static_cast<std::uint8_t>(c[0]), static_cast<std::uint8_t>(c[1]),
                                     static_cast<std::uint8_t>(c[2]));
        const auto want = oracle::reference_lab(c[0], c[1], c[2]);
        worst = std::max({worst, std::abs(got.L - want.L), std::abs(got.a - want.a), std::abs(got.b - want.b)});
    }
    const double max_err = std::abs(delta_e_max() - kDeltaEMax);
    return {violations == 0 && worst <= kAnchorTol && max_err <= kDeltaEMaxTol,
            fmt("axiom violations %d/40000; anchor error %.2e; dE_max %.6f", violations, worst, delta_e_max())};
}

Outcome auto_parameters()
{
    const auto p = auto_params(ScoreMap(400, 400, 255.0), 1.0 / 40.0);
    return {p.eps == 10.0 && p.min_pts == 121, fmt("eps %.6f, minPts %d", p.eps, p.min_pts)};
}

Outcome synthetic_suite()
{
    std::vector<double> d;
    for (int i = 0; i < kSuiteSize; ++i) d.push_back(distortion_of(suite_image(i)));
    const auto within = std::count_if(d.begin(), d.end(), [](double v) { return v <= kCaseDistortion; });
    const auto s = summarize(d);
    const double share = static_cast<double>(within) / kSuiteSize;
    return {share >= kCaseShare && s.average <= kSuiteMean,
            fmt("%ld/%d cases d <= %.2f; mean %.4f, median %.4f, max %.4f", static_cast<long>(within), kSuiteSize,
                kCaseDistortion, s.average, s.median, s.max)};
}

Outcome resolution_trend()
{
    double hi = 0.0, lo = 0.0;
    for (int i = 0; i < kSuiteSize; ++i) {
        const auto full = suite_image(i);
        hi += distortion_of(rescale_synthetic(full, 400));
        lo += distortion_of(rescale_synthetic(full, 100));
    }
    hi /= kSuiteSize;
    lo /= kSuiteSize;
    return {hi < lo, fmt("mean d at 400: %.4f, at 100: %.4f", hi, lo)};
}

Outcome relevance_monotonicity()
{
    int ok = 0;
    std::string worst;
    for (int f = 0; f < 5; ++f) {
        const auto img = to_lab(suite_image(3 * f + 1).image);
        PipelineParams base, strict;
        strict.theta_rel = 0.9;
        const auto a = segment(img, base), b = segment(img, strict);
        const bool subset = b.mask.subset_of(a.mask);
        const bool bounded = a.sweeps <= static_cast<int>(a.regions_before) &&
                             b.sweeps <= static_cast<int>(b.regions_before);
        ok += subset && bounded;
        worst += fmt("%s[%zu/%zu px, sweeps %d/%zu]", f ? " " : "", b.mask.count(), a.mask.count(), b.sweeps,
                     b.regions_before);
    }
    return {ok == 5, fmt("%d/5 fixtures nested and bounded; ", ok) + worst};
}

Outcome similarity_gap()
{
    ClassManifest m;
    std::vector<Histogram> plain, masked;
    for (int i = 0; i < 10; ++i) {
        SyntheticSpec spec;
        spec.seed = static_cast<std::uint64_t>(500 + i);
        spec.background_seed = 500;
        spec.palette = i % 2;
        spec.shape = (i / 2) % 2 ? SyntheticShape::Ellipse : SyntheticShape::Disc;
        const auto s = make_synthetic(spec);
        m.entries.push_back({"", "", fmt("class%d", i % 2), std::nullopt, std::nullopt});
        plain.push_back(color_histogram(s.image, nullptr, 12));
        masked.push_back(color_histogram(s.image, &s.truth, 12));
    }
    const auto r = similarity_report(m, plain, &masked);
    const double gap = r.overall.gap.value_or(0.0), mgap = r.overall.masked_gap.value_or(0.0);
    return {mgap > gap, fmt("unmasked gap %.4f, masked gap %.4f (%s)", gap, mgap,
                            r.normalized ? "frequencies" : "counts")};
}

// ---- determinism ---------------------------------------------------------------------

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the tool with a thread cap inside `dir`; returns stdout plus exit code.
std::string cli(const fs::path& dir, int threads, const std::string& args)
{
    const std::string cmd = "cd '" + dir.string() + "' && DOFSEG_THREADS=" + std::to_string(threads) + " '" +
                            DOFSEG_CLI + "' " + args + " 2>&1";
    std::string out;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return "popen failed";
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = ::pclose(pipe);
    return out + "\n[exit " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "]";
}

// Every command, run in a fresh directory; the result is every file's bytes
// plus every command's output.
std::map<std::string, std::string> cli_session(const fs::path& dir, int threads)
{
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::map<std::string, std::string> out;
    const std::vector<std::string> commands = {
        "synth --out-dir set --count 3 --seed 7",
        "synth --out-dir classes --count 6 --seed 9 --classes 2 --width 200 --height 150",
        "segment set/img_0000.png -o mask.png --report report.json --stages stages",
        "segment set/img_0001.png -o mask1.png --report report1.json --theta-rel 0.9",
        "evaluate --pred mask.png --truth set/truth_0000.png",
        "evaluate --manifest set/manifest.csv",
        "diagnose set/img_0002.png -o dev.png --method deviation",
        "diagnose set/img_0002.png -o hos.png --method hos",
        "similarity --manifest classes/manifest.csv --use-masks",
    };
    for (std::size_t i = 0; i < commands.size(); ++i) out["$" + std::to_string(i)] = cli(dir, threads, commands[i]);
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
    return out;
}

Outcome determinism()
{
    testing::TempDir tmp;
    const auto ref = cli_session(tmp / "ref", 1);
    int mismatched = 0;
    std::string first_bad;
    for (int run = 0; run < 3; ++run) {
        const int threads = run == 0 ? 1 : 4;
        const auto again = cli_session(tmp / ("run" + std::to_string(run)), threads);
        if (again != ref) {
            ++mismatched;
            for (const auto& [k, v] : ref) {
                const auto it = again.find(k);
                if (it == again.end() || it->second != v) {
                    if (first_bad.empty()) first_bad = k;
                    break;
                }
            }
        }
    }
    bool ok_exit = true;
    for (const auto& [k, v] : ref)
        if (k[0] == '$' && v.find("[exit 0]") == std::string::npos) ok_exit = false;

    // The library path as well: the same image under different worker caps.
    int lib_ok = 0;
    for (int i = 0; i < 3; ++i) {
        const auto img = to_lab(suite_image(i).image);
        SegmentationReport one, four;
        {
            testing::ThreadCap cap(1);
            one = segment(img, {});
        }
        {
            testing::ThreadCap cap(4);
            four = segment(img, {});
        }
        lib_ok += one.mask == four.mask && report_json(one, false) == report_json(four, false);
    }
    return {mismatched == 0 && ok_exit && lib_ok == 3,
            fmt("%zu artifacts over 9 commands x 4 runs (threads 1,1,4,4); %d mismatching runs%s%s; library %d/3",
                ref.size(), mismatched, first_bad.empty() ? "" : ", first: ", first_bad.c_str(), lib_ok) +
                (ok_exit ? "" : "; a command failed")};
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {"metric exactness", kMetricBudget, metric_exactness},
        {"dbscan oracle equivalence", kDbscanBudget, dbscan_oracle},
        {"morphology suite", kMorphologyBudget, morphology_suite},
        {"color math", kColorBudget, color_math},
        {"auto-parameter arithmetic", kAutoParamBudget, auto_parameters},
        {"synthetic end-to-end suite", kSyntheticBudget, synthetic_suite},
        {"resolution trend", kResolutionBudget, resolution_trend},
        {"relevance monotonicity", kMonotoneBudget, relevance_monotonicity},
        {"similarity gap", kSimilarityBudget, similarity_gap},
        {"determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget_s <= 0.0 || secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::string budget = c.budget_s > 0.0 ? fmt(" / %.0fs", c.budget_s) : std::string();
        std::printf("%s  %-28s %7.2fs%s  %s%s\n", pass ? "PASS" : "FAIL", c.name, secs, budget.c_str(),
                    o.detail.c_str(), in_time ? "" : "  [over time budget]");
        std::fflush(stdout);
    }
    return failed;
}
