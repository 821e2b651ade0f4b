#pragma once

#include <string>
#include <utility>
#include <vector>

namespace digitwise::svg {

struct LabeledPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

// 800x800 scatter plot; each point carries its label as a <title> tooltip.
[[nodiscard]] std::string scatter(const std::vector<LabeledPoint>& points, const std::string& title);

// Vertical bars, one per (bucket, count), in the given order.
[[nodiscard]] std::string bar_chart(const std::vector<std::pair<std::string, double>>& bars,
                                    const std::string& title);

[[nodiscard]] std::string escape(const std::string& text);

}  // namespace digitwise::svg
