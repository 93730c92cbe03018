// Exercises the shared library through its C header only.
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dofseg/dofseg.h"

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir = fs::temp_directory_path() / ("dofseg_capi_" + std::to_string(::getpid()));
    Scratch() { fs::create_directories(dir); }
    ~Scratch()
    {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

std::string take(char* s)
{
    std::string out = s ? s : "";
    dofseg_string_free(s);
    return out;
}

} // namespace

TEST_CASE("version, status strings and parameter defaults")
{
    CHECK(std::strlen(dofseg_version()) > 0);
    CHECK(std::string(dofseg_status_string(DOFSEG_OK)) == "ok");
    CHECK(std::string(dofseg_status_string(DOFSEG_ERR_DECODE)).size() > 0);

    dofseg_params p;
    dofseg_params_default(&p);
    CHECK(p.theta_score == 50.0);
    CHECK(p.theta_eps == doctest::Approx(0.025));
    CHECK(p.sigma == doctest::Approx(0.9));
    CHECK(p.theta_dist == 25.0);
    CHECK(p.theta_rec == doctest::Approx(1.0 / 3.0));
    CHECK(p.theta_rel == doctest::Approx(2.0 / 3.0));
    CHECK(p.working_size == 400);
    CHECK(dofseg_params_validate(&p) == DOFSEG_OK);
    p.theta_rel = 2.0;
    CHECK(dofseg_params_validate(&p) == DOFSEG_ERR_INVALID_ARGUMENT);
    CHECK(std::string(dofseg_last_error()).find("theta_rel") != std::string::npos);
    CHECK(dofseg_params_validate(nullptr) == DOFSEG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("segment a synthetic image end to end")
{
    Scratch s;
    dofseg_synth_spec spec;
    dofseg_synth_default(&spec);
    spec.count = 2;
    REQUIRE(dofseg_synth(s.dir.c_str(), &spec) == DOFSEG_OK);
    CHECK(std::string(dofseg_last_error()).empty());

    dofseg_image* img = nullptr;
    REQUIRE(dofseg_image_load((s.dir / "img_0000.png").c_str(), &img) == DOFSEG_OK);
    CHECK(dofseg_image_width(img) == 400);
    CHECK(dofseg_image_height(img) == 300);

    dofseg_result* res = nullptr;
    REQUIRE(dofseg_segment(img, nullptr, 1, &res) == DOFSEG_OK);
    CHECK(dofseg_result_outcome(res) == DOFSEG_SEGMENTED);
    const dofseg_mask* pred = dofseg_result_mask(res);
    CHECK(dofseg_mask_width(pred) == 400);
    CHECK(dofseg_mask_count(pred) > 0);

    dofseg_mask* truth = nullptr;
    REQUIRE(dofseg_mask_load((s.dir / "truth_0000.png").c_str(), &truth) == DOFSEG_OK);
    dofseg_eval ev;
    REQUIRE(dofseg_evaluate(pred, truth, &ev) == DOFSEG_OK);
    CHECK(ev.d <= 0.35);
    CHECK(ev.tp + ev.fp + ev.fn + ev.tn == 400u * 300u);
    char* js = nullptr;
    REQUIRE(dofseg_eval_json(&ev, &js) == DOFSEG_OK);
    CHECK(take(js).find("\"d_prime\"") != std::string::npos);

    char* report = nullptr;
    REQUIRE(dofseg_result_report_json(res, 0, &report) == DOFSEG_OK);
    const auto rep = take(report);
    CHECK(rep.find("\"status\": \"ok\"") != std::string::npos);
    CHECK(rep.find("timings_ms") == std::string::npos);

    REQUIRE(dofseg_result_write_stages(res, (s.dir / "stages").c_str()) == DOFSEG_OK);
    CHECK(fs::exists(s.dir / "stages" / "05_final_mask.png"));

    std::vector<std::uint8_t> bits(400 * 300);
    REQUIRE(dofseg_mask_copy(pred, bits.data(), bits.size()) == DOFSEG_OK);
    std::size_t on = 0;
    for (auto b : bits) on += b;
    CHECK(on == dofseg_mask_count(pred));
    CHECK(dofseg_mask_copy(pred, bits.data(), 10) == DOFSEG_ERR_INVALID_ARGUMENT);

    REQUIRE(dofseg_mask_save_png(pred, (s.dir / "pred.png").c_str()) == DOFSEG_OK);
    dofseg_mask* back = nullptr;
    REQUIRE(dofseg_mask_load((s.dir / "pred.png").c_str(), &back) == DOFSEG_OK);
    CHECK(dofseg_mask_count(back) == dofseg_mask_count(pred));

    REQUIRE(dofseg_diagnose(img, DOFSEG_METHOD_HOS, nullptr, (s.dir / "hos.png").c_str()) == DOFSEG_OK);
    REQUIRE(dofseg_diagnose(img, DOFSEG_METHOD_DEVIATION, nullptr, (s.dir / "dev.png").c_str()) == DOFSEG_OK);
    dofseg_image* diag = nullptr;
    REQUIRE(dofseg_image_load((s.dir / "dev.png").c_str(), &diag) == DOFSEG_OK);
    CHECK(dofseg_image_width(diag) == 400);
    CHECK(dofseg_diagnose(img, static_cast<dofseg_method>(7), nullptr, (s.dir / "x.png").c_str()) ==
          DOFSEG_ERR_INVALID_ARGUMENT);

    char* batch = nullptr;
    REQUIRE(dofseg_evaluate_manifest((s.dir / "manifest.csv").c_str(), nullptr, 0, &batch) == DOFSEG_OK);
    CHECK(take(batch).find("\"summary\"") != std::string::npos);

    dofseg_image_free(diag);
    dofseg_mask_free(back);
    dofseg_mask_free(truth);
    dofseg_result_free(res);
    dofseg_image_free(img);
}

TEST_CASE("in-memory images and masks")
{
    std::vector<std::uint8_t> rgb(64 * 48 * 3, 120);
    dofseg_image* img = nullptr;
    REQUIRE(dofseg_image_from_rgb(64, 48, rgb.data(), &img) == DOFSEG_OK);
    dofseg_result* res = nullptr;
    REQUIRE(dofseg_segment(img, nullptr, 0, &res) == DOFSEG_OK);
    CHECK(dofseg_result_outcome(res) == DOFSEG_NO_CANDIDATES);
    CHECK(dofseg_mask_count(dofseg_result_mask(res)) == 0);
    CHECK(dofseg_result_write_stages(res, "/tmp/unused") == DOFSEG_ERR_INVALID_ARGUMENT);
    dofseg_result_free(res);

    dofseg_params p;
    dofseg_params_default(&p);
    p.sigma = -1.0;
    res = nullptr;
    CHECK(dofseg_segment(img, &p, 0, &res) == DOFSEG_ERR_INVALID_ARGUMENT);
    CHECK(res == nullptr);
    dofseg_image_free(img);

    const std::uint8_t a_bits[4] = {1, 1, 0, 0}, b_bits[4] = {1, 0, 0, 0}, none[4] = {0, 0, 0, 0};
    dofseg_mask *a = nullptr, *b = nullptr, *z = nullptr, *wide = nullptr;
    REQUIRE(dofseg_mask_from_bytes(2, 2, a_bits, &a) == DOFSEG_OK);
    REQUIRE(dofseg_mask_from_bytes(2, 2, b_bits, &b) == DOFSEG_OK);
    REQUIRE(dofseg_mask_from_bytes(2, 2, none, &z) == DOFSEG_OK);
    REQUIRE(dofseg_mask_from_bytes(4, 1, a_bits, &wide) == DOFSEG_OK);
    dofseg_eval ev;
    REQUIRE(dofseg_evaluate(a, b, &ev) == DOFSEG_OK);
    CHECK(ev.d_prime == 1.0);
    CHECK(ev.fp == 1);
    CHECK(dofseg_evaluate(a, z, &ev) == DOFSEG_ERR_EMPTY_REFERENCE);
    CHECK(dofseg_evaluate(a, wide, &ev) == DOFSEG_ERR_DIMENSION_MISMATCH);
    dofseg_mask_free(a);
    dofseg_mask_free(b);
    dofseg_mask_free(z);
    dofseg_mask_free(wide);
}

TEST_CASE("errors map to status codes")
{
    Scratch s;
    dofseg_image* img = nullptr;
    CHECK(dofseg_image_load((s.dir / "missing.png").c_str(), &img) == DOFSEG_ERR_IO);
    CHECK(img == nullptr);
    const std::uint8_t junk[] = {1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(dofseg_image_decode(junk, sizeof junk, &img) == DOFSEG_ERR_DECODE);
    CHECK(std::string(dofseg_last_error()).size() > 0);
    CHECK(dofseg_image_decode(nullptr, 0, &img) == DOFSEG_ERR_INVALID_ARGUMENT);
    CHECK(dofseg_image_load(nullptr, &img) == DOFSEG_ERR_INVALID_ARGUMENT);
    CHECK(dofseg_segment(nullptr, nullptr, 0, nullptr) == DOFSEG_ERR_INVALID_ARGUMENT);

    std::ofstream(s.dir / "img.csv") << "path,class\na.png,x\nb.png,y\nc.png,y\n";
    char* out = nullptr;
    CHECK(dofseg_similarity((s.dir / "img.csv").c_str(), 12, 2.0, 0, &out) == DOFSEG_ERR_SINGLETON_CLASS);
    CHECK(std::string(dofseg_last_error()).find("x") != std::string::npos);
    CHECK(out == nullptr);

    // Freeing null handles is a no-op.
    dofseg_image_free(nullptr);
    dofseg_mask_free(nullptr);
    dofseg_result_free(nullptr);
    dofseg_string_free(nullptr);
}
