#pragma once

#include <vector>

#include "noma/channel.hpp"

namespace noma {

// Per-user tally for one (mcs, alpha) cell.
struct TrialRecord {
    int user_id = 0;
    int group_k = 0;
    int mcs_index = 0;
    double alpha = 0.0;
    int frames = 0;
    int bc_errors = 0;
    int mc_errors = 0;
    double snr_db = 0.0;
};

enum class StreamSel { Broadcast, Multicast };

// Packet error rate; frames >= 1.
double per(int errors, int frames);

// 100 * (1 - N'/N): a user is in outage iff its PER strictly exceeds the
// threshold. Throws EmptyGroup on an empty record set.
double coverage(const std::vector<TrialRecord>& records, StreamSel stream, double threshold);

// Outage-set union over both streams; <= each individual coverage by
// construction. The two record sets must cover the same users.
double joint_coverage(const std::vector<TrialRecord>& mc_records,
                      const std::vector<TrialRecord>& bc_records, double threshold);
double joint_coverage(const std::vector<TrialRecord>& records, double threshold);

// Fixed 1-dB-bin SNR histogram spanning [min-1, max+1].
struct SnrHistogram {
    std::vector<double> bin_db;  // left edge of each 1-dB bin
    std::vector<double> pdf;
    std::vector<double> cdf;
    double mean_db = 0.0;
    double min_db = 0.0;
    double max_db = 0.0;
};

SnrHistogram snr_distribution(const std::vector<UserDrop>& drops);

}  // namespace noma
