#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "crank/prior/train.hpp"

namespace crank::prior {

/// {"d", "w", "config", "final_losses", optional "hidden", optional "smoothing"}.
std::string weights_to_json(const TrainResult& result, const TrainConfig& config);
Scorer scorer_from_json(const std::string& text);

void write_weights(const std::filesystem::path& path, const TrainResult& result,
                   const TrainConfig& config);
Scorer read_scorer(const std::filesystem::path& path);

/// CSV header: epoch,listwise,pointwise,combined
void write_loss_trace(const std::filesystem::path& path, std::span<const EpochLoss> trace);

}  // namespace crank::prior
