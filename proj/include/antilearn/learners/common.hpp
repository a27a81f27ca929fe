#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace antilearn {

/// Class decision plus the learner's raw output (posteriors, votes,
/// decision values or network outputs, depending on the algorithm).
struct Prediction {
    std::size_t label = 0;
    std::vector<double> scores;
};

/// Index of the largest score; ties go to the lowest index.
inline std::size_t argmax_low(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

}  // namespace antilearn
