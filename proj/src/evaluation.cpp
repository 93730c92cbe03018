#include "dofseg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "dofseg/error.hpp"

namespace dofseg {

EvalRecord spatial_distortion(const BinaryMask& pred, const BinaryMask& truth)
{
    if (!pred.same_shape(truth))
        throw Error(ErrorCode::DimensionMismatch, "prediction and reference dimensions differ");
    EvalRecord r;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool p = pred.bits()[i] != 0, t = truth.bits()[i] != 0;
        if (p && t) ++r.tp;
        else if (p) ++r.fp;
        else if (t) ++r.fn;
        else ++r.tn;
    }
    const std::size_t reference = r.tp + r.fn;
    if (reference == 0) throw Error(ErrorCode::EmptyReference, "reference mask empty");
    r.d_prime = static_cast<double>(r.fp + r.fn) / static_cast<double>(reference);
    r.d = std::min(1.0, r.d_prime);
    return r;
}

SummaryStats summarize(std::vector<double> values)
{
    SummaryStats s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    const std::size_t n = values.size();
    s.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    double sum = 0.0;
    for (double v : values) sum += v;
    s.average = sum / static_cast<double>(n);
    double sq = 0.0;
    for (double v : values) sq += (v - s.average) * (v - s.average);
    s.stddev = std::sqrt(sq / static_cast<double>(n));
    return s;
}

double Histogram::total() const
{
    double t = 0.0;
    for (double b : bins) t += b;
    return t;
}

Histogram Histogram::normalized_copy() const
{
    Histogram h = *this;
    const double t = total();
    if (t > 0.0)
        for (auto& b : h.bins) b /= t;
    h.normalized = true;
    return h;
}

namespace {

int hue_bin(const Rgb8& c, int bins)
{
    const int mx = std::max({c.r, c.g, c.b});
    const int mn = std::min({c.r, c.g, c.b});
    if (mx == 0 || static_cast<double>(mx - mn) / mx < kAchromaticSaturation) return 0;

    const double d = mx - mn;
    double hue;
    if (mx == c.r) hue = 60.0 * std::fmod((c.g - c.b) / d + 6.0, 6.0);
    else if (mx == c.g) hue = 60.0 * ((c.b - c.r) / d + 2.0);
    else hue = 60.0 * ((c.r - c.g) / d + 4.0);
    const int bin = static_cast<int>(std::floor(hue / (360.0 / bins)));
    return std::clamp(bin, 0, bins - 1);
}

} // namespace

Histogram color_histogram(const RgbImage& img, const BinaryMask* mask, int bins)
{
    if (bins < 1) throw Error(ErrorCode::InvalidArgument, "histogram needs at least one bin");
    if (mask && (mask->width() != img.width() || mask->height() != img.height()))
        throw Error(ErrorCode::DimensionMismatch, "image and mask dimensions differ");
    Histogram h;
    h.bins.assign(static_cast<std::size_t>(bins), 0.0);
    std::size_t counted = 0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (mask && !mask->bits()[i]) continue;
        h.bins[static_cast<std::size_t>(hue_bin(img.pixels()[i], bins))] += 1.0;
        ++counted;
    }
    if (counted == 0) throw Error(ErrorCode::NoPixels, "no pixels to histogram");
    return h;
}

Histogram color_histogram(const LabImage& img, const BinaryMask* mask, int bins)
{
    return color_histogram(to_rgb(img), mask, bins);
}

double minkowski_distance(const Histogram& q, const Histogram& t, double p)
{
    if (q.bins.size() != t.bins.size())
        throw Error(ErrorCode::DimensionMismatch, "histogram lengths differ");
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "minkowski order must be >= 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < q.bins.size(); ++i) sum += std::pow(std::abs(q.bins[i] - t.bins[i]), p);
    return std::pow(sum, 1.0 / p);
}

std::vector<std::string> ClassManifest::class_order() const
{
    std::vector<std::string> order;
    for (const auto& e : entries)
        if (std::find(order.begin(), order.end(), e.label) == order.end()) order.push_back(e.label);
    return order;
}

double inner_class_distance(const ClassManifest& m, std::size_t index, const std::vector<Histogram>& hists,
                            double p)
{
    const auto& label = m.entries.at(index).label;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < m.entries.size(); ++j) {
        if (j == index || m.entries[j].label != label) continue;
        sum += minkowski_distance(hists.at(j), hists.at(index), p);
        ++n;
    }
    if (n == 0) throw Error(ErrorCode::SingletonClass, "class '" + label + "' has a single member");
    return sum / static_cast<double>(n);
}

double inter_class_distance(const ClassManifest& m, std::size_t index, const std::vector<Histogram>& hists,
                            double p)
{
    const auto& label = m.entries.at(index).label;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < m.entries.size(); ++j) {
        if (m.entries[j].label == label) continue;
        sum += minkowski_distance(hists.at(j), hists.at(index), p);
        ++n;
    }
    if (n == 0) throw Error(ErrorCode::NoForeignImages, "no images outside class '" + label + "'");
    return sum / static_cast<double>(n);
}

namespace {

struct Means {
    double inner = 0.0;
    std::optional<double> inter;
};

// Mean inner/inter distance over the entries selected by `members`.
Means class_means(const ClassManifest& m, const std::vector<std::size_t>& members,
                  const std::vector<Histogram>& hists, double p, bool has_foreign)
{
    Means out;
    double inner = 0.0, inter = 0.0;
    for (std::size_t i : members) {
        inner += inner_class_distance(m, i, hists, p);
        if (has_foreign) inter += inter_class_distance(m, i, hists, p);
    }
    const double n = static_cast<double>(members.size());
    out.inner = inner / n;
    if (has_foreign) out.inter = inter / n;
    return out;
}

void fill_ratios(ClassSimilarity& c, const Means& plain, const std::optional<Means>& masked)
{
    c.inner = plain.inner;
    c.inter = plain.inter;
    if (plain.inter) c.gap = *plain.inter - plain.inner;
    if (!masked) return;
    c.masked_inner = masked->inner;
    c.masked_inter = masked->inter;
    if (plain.inner != 0.0) c.ratio_inner = masked->inner / plain.inner;
    if (plain.inter && masked->inter) {
        if (*plain.inter != 0.0) c.ratio_outer = *masked->inter / *plain.inter;
        c.masked_gap = *masked->inter - masked->inner;
        c.gap_delta = *c.masked_gap - *c.gap;
    }
}

} // namespace

SimilarityReport similarity_report(const ClassManifest& m, const std::vector<Histogram>& unmasked,
                                   const std::vector<Histogram>* masked, double p)
{
    if (unmasked.size() != m.entries.size() || (masked && masked->size() != m.entries.size()))
        throw Error(ErrorCode::InvalidArgument, "one histogram per manifest entry required");
    if (m.entries.empty()) throw Error(ErrorCode::InvalidArgument, "empty manifest");
    if (const auto singles = singleton_classes(m); !singles.empty()) {
        std::string list;
        for (const auto& s : singles) list += (list.empty() ? "" : ", ") + s;
        throw Error(ErrorCode::SingletonClass, "classes with a single member: " + list);
    }

    SimilarityReport rep;
    rep.p = p;
    rep.bins = static_cast<int>(unmasked.front().bins.size());

    // raw counts only when every histogram carries the same mass
    const double mass = unmasked.front().total();
    bool equal_mass = std::all_of(unmasked.begin(), unmasked.end(), [&](const Histogram& h) { return h.total() == mass; });
    if (masked)
        equal_mass = equal_mass &&
                     std::all_of(masked->begin(), masked->end(), [&](const Histogram& h) { return h.total() == mass; });
    rep.normalized = !equal_mass;

    auto prepare = [&](const std::vector<Histogram>& in) {
        if (!rep.normalized) return in;
        std::vector<Histogram> out;
        out.reserve(in.size());
        for (const auto& h : in) out.push_back(h.normalized_copy());
        return out;
    };
    const auto plain = prepare(unmasked);
    std::optional<std::vector<Histogram>> under_mask;
    if (masked) under_mask = prepare(*masked);

    const auto labels = m.class_order();
    const bool has_foreign = labels.size() > 1;
    std::vector<std::size_t> all;
    for (const auto& label : labels) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < m.entries.size(); ++i)
            if (m.entries[i].label == label) members.push_back(i);
        all.insert(all.end(), members.begin(), members.end());

        ClassSimilarity c;
        c.label = label;
        c.images = members.size();
        std::optional<Means> mm;
        if (under_mask) mm = class_means(m, members, *under_mask, p, has_foreign);
        fill_ratios(c, class_means(m, members, plain, p, has_foreign), mm);
        rep.classes.push_back(std::move(c));
    }

    std::sort(all.begin(), all.end());
    rep.overall.label = "overall";
    rep.overall.images = all.size();
    std::optional<Means> mm;
    if (under_mask) mm = class_means(m, all, *under_mask, p, has_foreign);
    fill_ratios(rep.overall, class_means(m, all, plain, p, has_foreign), mm);
    return rep;
}

namespace {

nlohmann::ordered_json class_json(const ClassSimilarity& c)
{
    nlohmann::ordered_json j;
    j["class"] = c.label;
    j["images"] = c.images;
    j["inner"] = c.inner;
    if (c.inter) j["inter"] = *c.inter;
    if (c.gap) j["gap"] = *c.gap;
    if (c.masked_inner) j["masked_inner"] = *c.masked_inner;
    if (c.masked_inter) j["masked_inter"] = *c.masked_inter;
    if (c.masked_gap) j["masked_gap"] = *c.masked_gap;
    if (c.ratio_inner) j["ratio_inner"] = *c.ratio_inner;
    if (c.ratio_outer) j["ratio_outer"] = *c.ratio_outer;
    if (c.gap_delta) j["gap_delta"] = *c.gap_delta;
    return j;
}

} // namespace

std::string similarity_json(const SimilarityReport& r)
{
    nlohmann::ordered_json j;
    j["bins"] = r.bins;
    j["p"] = r.p;
    j["normalized"] = r.normalized;
    j["classes"] = nlohmann::ordered_json::array();
    for (const auto& c : r.classes) j["classes"].push_back(class_json(c));
    j["overall"] = class_json(r.overall);
    return j.dump(2);
}

std::string eval_record_json(const EvalRecord& r)
{
    nlohmann::ordered_json j;
    j["d_prime"] = r.d_prime;
    j["d"] = r.d;
    j["tp"] = r.tp;
    j["fp"] = r.fp;
    j["fn"] = r.fn;
    j["tn"] = r.tn;
    return j.dump();
}

std::vector<std::string> singleton_classes(const ClassManifest& m)
{
    std::map<std::string, std::size_t> counts;
    for (const auto& e : m.entries) ++counts[e.label];
    std::vector<std::string> out;
    for (const auto& label : m.class_order())
        if (counts[label] < 2) out.push_back(label);
    return out;
}

} // namespace dofseg
