#include "puedet/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "puedet/errors.hpp"

namespace puedet {

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& out, const ContinuousTrace& trace) {
    out << "segment,state,duration\n";
    for (std::size_t i = 0; i < trace.segments.size(); ++i) {
        const Segment& s = trace.segments[i];
        out << i << "," << (s.state == ChannelState::On ? 1 : 0) << ","
            << format_g17(s.duration) << "\n";
    }
}

void write_sensed_csv(std::ostream& out, const SensedSeries& series) {
    out << "slot,bit,attack_mask\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << i << "," << int(series.bits[i]) << "," << int(series.attack_mask[i])
            << "\n";
    }
}

void write_scores_csv(std::ostream& out, const std::vector<DetectionScore>& scores) {
    out << "step,slot_index,loss,contaminated\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out << i << "," << scores[i].slot_index << "," << format_g17(scores[i].loss)
            << "," << (scores[i].contaminated ? 1 : 0) << "\n";
    }
}

std::vector<DetectionScore> read_scores_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "step,slot_index,loss,contaminated") {
        throw ValidationError("scores csv: missing or unexpected header");
    }
    std::vector<DetectionScore> scores;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        DetectionScore score;
        try {
            std::getline(fields, cell, ',');  // step index, informational
            std::getline(fields, cell, ',');
            score.slot_index = std::stoull(cell);
            std::getline(fields, cell, ',');
            score.loss = std::stod(cell);
            if (!std::getline(fields, cell, ',')) {
                throw std::invalid_argument("missing contaminated column");
            }
            score.contaminated = std::stoi(cell) != 0;
        } catch (const std::exception& e) {
            throw ValidationError("scores csv: bad row " + std::to_string(row) + ": " +
                                  e.what());
        }
        scores.push_back(score);
        ++row;
    }
    return scores;
}

void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& points) {
    out << "threshold,fpr,tpr\n";
    for (const RocPoint& p : points) {
        out << format_g17(p.threshold) << "," << format_g17(p.false_positive_rate)
            << "," << format_g17(p.true_positive_rate) << "\n";
    }
}

}  // namespace puedet
