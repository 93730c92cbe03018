#include <fstream>
#include <sstream>

#include "dofseg/error.hpp"
#include "dofseg/evaluation.hpp"

namespace dofseg {

namespace {

// RFC 4180-style field splitting: quoted fields may hold commas and "" escapes.
std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    for (auto& f : fields) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t\r");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return fields;
}

} // namespace

ClassManifest load_manifest(const std::filesystem::path& csv)
{
    std::ifstream in(csv);
    if (!in) throw Error(ErrorCode::IoFailed, "cannot open manifest " + csv.string());

    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "manifest has no header");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_csv_line(line);

    int path_col = -1, class_col = -1, mask_col = -1, pred_col = -1;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        if (header[i] == "path") path_col = i;
        else if (header[i] == "class") class_col = i;
        else if (header[i] == "mask_path") mask_col = i;
        else if (header[i] == "pred_path") pred_col = i;
    }
    if (path_col < 0 || (class_col < 0 && mask_col < 0))
        throw Error(ErrorCode::InvalidArgument, "manifest header needs path and class or mask_path");

    const auto base = csv.parent_path();
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    ClassManifest m;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto f = split_csv_line(line);
        auto field = [&](int col) -> const std::string& {
            if (col >= static_cast<int>(f.size()))
                throw Error(ErrorCode::InvalidArgument,
                            "manifest line " + std::to_string(line_no) + " has too few fields");
            return f[static_cast<std::size_t>(col)];
        };
        ClassManifest::Entry e;
        e.source = field(path_col);
        if (e.source.empty())
            throw Error(ErrorCode::InvalidArgument, "manifest line " + std::to_string(line_no) + " has an empty path");
        e.path = resolve(e.source);
        if (class_col >= 0) e.label = field(class_col);
        if (mask_col >= 0 && !field(mask_col).empty()) e.mask_path = resolve(field(mask_col));
        if (pred_col >= 0 && !field(pred_col).empty()) e.pred_path = resolve(field(pred_col));
        m.entries.push_back(std::move(e));
    }
    return m;
}

} // namespace dofseg
