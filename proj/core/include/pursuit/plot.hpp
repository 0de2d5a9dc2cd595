#pragma once

#include <string>
#include <vector>

#include "pursuit/csv.hpp"
#include "pursuit/png.hpp"

namespace pursuit {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::uint8_t r = 0, g = 0, b = 0;
};

// Horizontal interval highlighted along the zero line (total occlusion).
struct Band {
    double x0 = 0.0;
    double x1 = 0.0;
};

// Line chart with axes, ticks, legend, and occlusion bands. Non-finite
// samples break the polyline instead of being drawn.
RgbImage render_chart(const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<Series>& series,
                      const std::vector<Band>& bands = {}, int width = 900, int height = 540);

// 5x7 bitmap text, scale-1; used by the chart renderer and exposed for tests.
void draw_text(RgbImage& img, int x, int y, const std::string& text, std::uint8_t r,
               std::uint8_t g, std::uint8_t b);

// Renders the standard 13-panel set from a run log (run.hpp schema) into
// outdir. Returns the number of files written.
int emit_plots(const CsvTable& log, const std::string& outdir);

}  // namespace pursuit
