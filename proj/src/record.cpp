#include "maser/record.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maser/errors.hpp"

namespace maser {

namespace {

void check_events(const std::vector<Event>& events, double horizon, int max_label,
                  const char* what) {
    double prev = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        if (!(e.t > prev))
            throw FormatError(std::string(what) + ": event times must be strictly increasing");
        if (!(e.t <= horizon))
            throw FormatError(std::string(what) + ": event time beyond horizon");
        if (e.label < 1 || e.label > max_label)
            throw FormatError(std::string(what) + ": bad label " + std::to_string(e.label));
        prev = e.t;
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace

void DetectionRecord::validate() const {
    if (!(horizon > 0.0)) throw FormatError("record: horizon must be positive");
    check_events(events, horizon, 2, "record");
}

void FullRecord::validate(int n_max) const {
    if (!(horizon > 0.0)) throw FormatError("full record: horizon must be positive");
    check_events(events, horizon, 4, "full record");
    if (initial_level < 0) throw FormatError("full record: negative initial level");

    // The path must change by +-1 per step and match the jump labels.
    int level = initial_level;
    std::size_t pi = 0;
    for (const Event& e : events) {
        if (e.label == 2) continue;
        if (pi >= path.size())
            throw FormatError("full record: jump event without a path step");
        const PathStep& s = path[pi++];
        if (s.t != e.t)
            throw FormatError("full record: path step time does not match event time");
        const int d = s.level - level;
        if ((e.label == 1 || e.label == 4) && d != 1)
            throw FormatError("full record: up-jump label without +1 path step");
        if (e.label == 3 && d != -1)
            throw FormatError("full record: emission label without -1 path step");
        if (s.level < 0 || (n_max >= 0 && s.level > n_max))
            throw FormatError("full record: path level out of range");
        level = s.level;
    }
    if (pi != path.size())
        throw FormatError("full record: path step without a jump event");
}

int FullRecord::level_at(double t) const {
    int level = initial_level;
    for (const PathStep& s : path) {
        if (s.t >= t) break;
        level = s.level;
    }
    return level;
}

DetectionRecord atoms_only(const FullRecord& full) {
    DetectionRecord rec;
    rec.horizon = full.horizon;
    rec.meta = full.meta;
    for (const Event& e : full.events)
        if (e.label == 1 || e.label == 2) rec.events.push_back(e);
    return rec;
}

void write_record_csv(const DetectionRecord& rec, const std::string& path) {
    rec.validate();
    std::ofstream out(path, std::ios::binary); // LF line endings everywhere
    if (!out) throw FormatError("cannot open for writing: " + path);
    out << "t,label\n";
    for (const Event& e : rec.events)
        out << format_double(e.t) << ',' << e.label << '\n';
    if (!out) throw FormatError("write failed: " + path);

    nlohmann::json meta;
    meta["horizon"] = rec.horizon;
    meta["schema_version"] = rec.meta.schema_version;
    if (rec.meta.seed) meta["seed"] = *rec.meta.seed;
    if (rec.meta.params) {
        const ModelParams& p = *rec.meta.params;
        meta["params"] = {{"phi", p.phi}, {"n_ex", p.n_ex}, {"nu", p.nu},
                          {"n_max", p.n_max}, {"tail_tol", p.tail_tol}};
    }
    std::ofstream mout(path + ".json", std::ios::binary);
    if (!mout) throw FormatError("cannot open for writing: " + path + ".json");
    mout << meta.dump(2) << '\n';
}

DetectionRecord read_record_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open record file: " + path);

    DetectionRecord rec;
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& msg) -> FormatError {
        return FormatError(path + ":" + std::to_string(line_no) + ": " + msg);
    };

    if (!std::getline(in, line)) throw fail("empty file");
    line_no = 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,label") throw fail("expected header 't,label'");

    double prev = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw fail("expected 't,label'");

        double t = 0.0;
        const char* tb = line.data();
        auto tr = std::from_chars(tb, tb + comma, t);
        if (tr.ec != std::errc{} || tr.ptr != tb + comma)
            throw fail("bad time value '" + line.substr(0, comma) + "'");

        int label = 0;
        const char* lb = line.data() + comma + 1;
        auto lr = std::from_chars(lb, line.data() + line.size(), label);
        if (lr.ec != std::errc{} || lr.ptr != line.data() + line.size())
            throw fail("bad label '" + line.substr(comma + 1) + "'");
        if (label != 1 && label != 2) throw fail("label must be 1 or 2");
        if (!(t > prev)) throw fail("event times must be strictly increasing");
        prev = t;
        rec.events.push_back({t, label});
    }

    // Sidecar metadata (horizon is required).
    std::ifstream min(path + ".json", std::ios::binary);
    if (!min) throw FormatError("missing record sidecar: " + path + ".json");
    nlohmann::json meta;
    try {
        min >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ".json: " + e.what());
    }
    if (!meta.contains("horizon")) throw FormatError(path + ".json: missing horizon");
    rec.horizon = meta.at("horizon").get<double>();
    rec.meta.schema_version = meta.value("schema_version", kRecordSchemaVersion);
    if (meta.contains("seed")) rec.meta.seed = meta.at("seed").get<std::uint64_t>();
    if (meta.contains("params")) {
        const auto& jp = meta.at("params");
        ModelParams p;
        p.phi = jp.value("phi", 0.0);
        p.n_ex = jp.value("n_ex", 0.0);
        p.nu = jp.value("nu", 0.0);
        p.n_max = jp.value("n_max", 0);
        p.tail_tol = jp.value("tail_tol", 1e-10);
        rec.meta.params = p;
    }
    rec.validate();
    return rec;
}

} // namespace maser
