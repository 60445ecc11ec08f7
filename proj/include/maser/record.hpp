#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maser/params.hpp"

namespace maser {

inline constexpr int kRecordSchemaVersion = 1;

struct Event {
    double t = 0.0;
    int label = 0;

    friend bool operator==(const Event&, const Event&) = default;
};

struct RecordMeta {
    std::optional<ModelParams> params;
    std::optional<std::uint64_t> seed;
    int schema_version = kRecordSchemaVersion;
};

// Atom detection record on the window (0, horizon]: strictly increasing
// event times with labels 1 (ground) or 2 (excited).
struct DetectionRecord {
    double horizon = 0.0;
    std::vector<Event> events;
    RecordMeta meta;

    void validate() const; // throws FormatError
};

struct PathStep {
    double t = 0.0;
    int level = 0; // level after the jump
};

// Full environment monitoring: labels 1..4 plus the piecewise-constant
// cavity path. Every up-jump of the path coincides with a label-1 or
// label-4 event, every down-jump with a label-3 event; label-2 events leave
// the path unchanged.
struct FullRecord {
    double horizon = 0.0;
    std::vector<Event> events;
    int initial_level = 0;
    std::vector<PathStep> path;
    RecordMeta meta;

    void validate(int n_max = -1) const; // throws FormatError

    int level_at(double t) const; // level just before time t
};

// Keeps the atom channels {1,2} in order; horizon and meta carry over.
DetectionRecord atoms_only(const FullRecord& full);

// CSV body with header "t,label" plus a sidecar JSON file "<path>.json"
// holding {horizon, seed, params?, schema_version}. Times are written with
// 17 significant digits so a read-back reproduces the doubles bit for bit.
void write_record_csv(const DetectionRecord& rec, const std::string& path);
DetectionRecord read_record_csv(const std::string& path);

} // namespace maser
