#include "noma/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "noma/errors.hpp"

namespace noma {

double per(int errors, int frames) {
    if (frames < 1) throw MetricError("per: frames must be >= 1");
    return static_cast<double>(errors) / frames;
}

namespace {

bool in_outage(const TrialRecord& r, StreamSel s, double threshold) {
    const int errors = s == StreamSel::Broadcast ? r.bc_errors : r.mc_errors;
    return per(errors, r.frames) > threshold;
}

}  // namespace

double coverage(const std::vector<TrialRecord>& records, StreamSel stream, double threshold) {
    if (records.empty()) throw EmptyGroup("coverage: empty group");
    int outage = 0;
    for (const TrialRecord& r : records) {
        if (in_outage(r, stream, threshold)) ++outage;
    }
    return 100.0 * (1.0 - static_cast<double>(outage) / records.size());
}

double joint_coverage(const std::vector<TrialRecord>& mc_records,
                      const std::vector<TrialRecord>& bc_records, double threshold) {
    if (mc_records.empty()) throw EmptyGroup("joint_coverage: empty group");
    std::map<int, const TrialRecord*> bc_by_user;
    for (const TrialRecord& r : bc_records) bc_by_user[r.user_id] = &r;
    if (bc_by_user.size() != mc_records.size()) {
        throw MetricError("joint_coverage: user sets differ");
    }
    int outage = 0;
    for (const TrialRecord& r : mc_records) {
        auto it = bc_by_user.find(r.user_id);
        if (it == bc_by_user.end()) throw MetricError("joint_coverage: user sets differ");
        if (in_outage(r, StreamSel::Multicast, threshold) ||
            in_outage(*it->second, StreamSel::Broadcast, threshold)) {
            ++outage;
        }
    }
    return 100.0 * (1.0 - static_cast<double>(outage) / mc_records.size());
}

double joint_coverage(const std::vector<TrialRecord>& records, double threshold) {
    return joint_coverage(records, records, threshold);
}

SnrHistogram snr_distribution(const std::vector<UserDrop>& drops) {
    if (drops.empty()) throw MetricError("snr_distribution: need at least one drop");
    SnrHistogram h;
    h.min_db = h.max_db = drops[0].snr_db;
    double sum = 0.0;
    for (const UserDrop& d : drops) {
        h.min_db = std::min(h.min_db, d.snr_db);
        h.max_db = std::max(h.max_db, d.snr_db);
        sum += d.snr_db;
    }
    h.mean_db = sum / drops.size();
    const double lo = std::floor(h.min_db) - 1.0;
    const double hi = std::ceil(h.max_db) + 1.0;
    const int n_bins = static_cast<int>(hi - lo);
    h.bin_db.resize(n_bins);
    h.pdf.assign(n_bins, 0.0);
    for (int i = 0; i < n_bins; ++i) h.bin_db[i] = lo + i;
    for (const UserDrop& d : drops) {
        int bin = static_cast<int>(std::floor(d.snr_db - lo));
        bin = std::clamp(bin, 0, n_bins - 1);
        h.pdf[bin] += 1.0 / drops.size();
    }
    h.cdf.resize(n_bins);
    double acc = 0.0;
    for (int i = 0; i < n_bins; ++i) {
        acc += h.pdf[i];
        h.cdf[i] = acc;
    }
    h.cdf.back() = 1.0;  // guard accumulated rounding
    return h;
}

}  // namespace noma
