#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "puedet/channel.hpp"
#include "puedet/detector.hpp"
#include "puedet/roc.hpp"

namespace puedet {

// Shortest exact decimal form (17 significant digits); used everywhere a
// double is written to disk so outputs are byte-reproducible.
std::string format_g17(double v);

// segment,state,duration
void write_trace_csv(std::ostream& out, const ContinuousTrace& trace);

// slot,bit,attack_mask
void write_sensed_csv(std::ostream& out, const SensedSeries& series);

// step,slot_index,loss,contaminated
void write_scores_csv(std::ostream& out, const std::vector<DetectionScore>& scores);
std::vector<DetectionScore> read_scores_csv(std::istream& in);

// threshold,fpr,tpr
void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& points);

}  // namespace puedet
