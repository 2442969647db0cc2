#pragma once

#include <string>

#include "pcgseg/eval.hpp"
#include "pcgseg/types.hpp"

namespace pcgseg {

// CSV schemas (fixed headers):
//   labels:  frame,state            state in {S1,Systole,S2,Diastole}
//   rpeaks:  rpeak_time_s
//   beats:   onset_frame,delta_frames   (delta to the next onset; 0 on the
//            last row)
//   hr:      time_s,bpm_raw,bpm_filtered
//   report:  metric,value
void write_labels_csv(const std::string& path, const StateSequence& labels);
StateSequence read_labels_csv(const std::string& path);

void write_rpeaks_csv(const std::string& path,
                      const std::vector<double>& rpeak_times_s);
std::vector<double> read_rpeaks_csv(const std::string& path);

void write_beats_csv(const std::string& path, const BeatSeries& beats);
BeatSeries read_beats_csv(const std::string& path);

void write_hr_csv(const std::string& path, const std::vector<double>& times_s,
                  const HrEstimate& est);
void read_hr_csv(const std::string& path, std::vector<double>& times_s,
                 HrEstimate& est);

void write_report_csv(const std::string& path,
                      const std::vector<std::pair<std::string, double>>& rows);
std::vector<std::pair<std::string, double>> read_report_csv(
    const std::string& path);

}  // namespace pcgseg
