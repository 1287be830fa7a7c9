#include "mergelab/runs.hpp"

namespace mergelab {

RunProfile::RunProfile(std::vector<Length> lengths)
    : lengths_(std::move(lengths))
{
    if (lengths_.empty())
        throw std::invalid_argument("run profile must be nonempty");
    realizable_ = true;
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
        if (lengths_[i] == 0)
            throw std::invalid_argument("run lengths must be positive");
        if (i + 1 < lengths_.size() && lengths_[i] < 2)
            realizable_ = false;
        total_ += lengths_[i];
    }
}

RunProfile profile_of(std::span<const Run> runs)
{
    std::vector<Length> lengths;
    lengths.reserve(runs.size());
    for (const Run& run : runs)
        lengths.push_back(run.length);
    return RunProfile(std::move(lengths));
}

} // namespace mergelab
