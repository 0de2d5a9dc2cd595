#include "pursuit/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace pursuit {

namespace {

// 5x7 column-major glyphs, LSB = top row. Subset sufficient for chart labels;
// lowercase is rendered as uppercase.
struct Glyph {
    char c;
    std::uint8_t col[5];
};

constexpr Glyph kFont[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00}}, {'0', {0x3E, 0x51, 0x49, 0x45, 0x3E}},
    {'1', {0x00, 0x42, 0x7F, 0x40, 0x00}}, {'2', {0x42, 0x61, 0x51, 0x49, 0x46}},
    {'3', {0x21, 0x41, 0x45, 0x4B, 0x31}}, {'4', {0x18, 0x14, 0x12, 0x7F, 0x10}},
    {'5', {0x27, 0x45, 0x45, 0x45, 0x39}}, {'6', {0x3C, 0x4A, 0x49, 0x49, 0x30}},
    {'7', {0x01, 0x71, 0x09, 0x05, 0x03}}, {'8', {0x36, 0x49, 0x49, 0x49, 0x36}},
    {'9', {0x06, 0x49, 0x49, 0x29, 0x1E}}, {'A', {0x7E, 0x11, 0x11, 0x11, 0x7E}},
    {'B', {0x7F, 0x49, 0x49, 0x49, 0x36}}, {'C', {0x3E, 0x41, 0x41, 0x41, 0x22}},
    {'D', {0x7F, 0x41, 0x41, 0x22, 0x1C}}, {'E', {0x7F, 0x49, 0x49, 0x49, 0x41}},
    {'F', {0x7F, 0x09, 0x09, 0x09, 0x01}}, {'G', {0x3E, 0x41, 0x49, 0x49, 0x7A}},
    {'H', {0x7F, 0x08, 0x08, 0x08, 0x7F}}, {'I', {0x00, 0x41, 0x7F, 0x41, 0x00}},
    {'J', {0x20, 0x40, 0x41, 0x3F, 0x01}}, {'K', {0x7F, 0x08, 0x14, 0x22, 0x41}},
    {'L', {0x7F, 0x40, 0x40, 0x40, 0x40}}, {'M', {0x7F, 0x02, 0x0C, 0x02, 0x7F}},
    {'N', {0x7F, 0x04, 0x08, 0x10, 0x7F}}, {'O', {0x3E, 0x41, 0x41, 0x41, 0x3E}},
    {'P', {0x7F, 0x09, 0x09, 0x09, 0x06}}, {'Q', {0x3E, 0x41, 0x51, 0x21, 0x5E}},
    {'R', {0x7F, 0x09, 0x19, 0x29, 0x46}}, {'S', {0x46, 0x49, 0x49, 0x49, 0x31}},
    {'T', {0x01, 0x01, 0x7F, 0x01, 0x01}}, {'U', {0x3F, 0x40, 0x40, 0x40, 0x3F}},
    {'V', {0x1F, 0x20, 0x40, 0x20, 0x1F}}, {'W', {0x3F, 0x40, 0x38, 0x40, 0x3F}},
    {'X', {0x63, 0x14, 0x08, 0x14, 0x63}}, {'Y', {0x07, 0x08, 0x70, 0x08, 0x07}},
    {'Z', {0x61, 0x51, 0x49, 0x45, 0x43}}, {'-', {0x08, 0x08, 0x08, 0x08, 0x08}},
    {'.', {0x00, 0x60, 0x60, 0x00, 0x00}}, {'/', {0x20, 0x10, 0x08, 0x04, 0x02}},
    {'_', {0x40, 0x40, 0x40, 0x40, 0x40}}, {'(', {0x00, 0x1C, 0x22, 0x41, 0x00}},
    {')', {0x00, 0x41, 0x22, 0x1C, 0x00}}, {',', {0x00, 0x50, 0x30, 0x00, 0x00}},
    {':', {0x00, 0x36, 0x36, 0x00, 0x00}}, {'+', {0x08, 0x08, 0x3E, 0x08, 0x08}},
    {'=', {0x14, 0x14, 0x14, 0x14, 0x14}}, {'%', {0x23, 0x13, 0x08, 0x64, 0x62}},
};

const std::uint8_t* glyph_for(char c) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    for (const auto& g : kFont)
        if (g.c == c) return g.col;
    return kFont[0].col;  // blank for anything unknown
}

void draw_line(RgbImage& img, int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g,
               std::uint8_t b) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        img.set(x0, y0, r, g, b);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

// "Nice" tick spacing covering [lo, hi] with roughly `target` intervals.
double nice_step(double span, int target) {
    const double rough = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(rough)));
    const double frac = rough / mag;
    double step = 10.0;
    if (frac <= 1.0)
        step = 1.0;
    else if (frac <= 2.0)
        step = 2.0;
    else if (frac <= 5.0)
        step = 5.0;
    return step * mag;
}

std::string tick_label(double v) {
    char buf[32];
    if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3))
        std::snprintf(buf, sizeof(buf), "%.1e", v);
    else
        std::snprintf(buf, sizeof(buf), "%g", std::round(v * 1e6) / 1e6);
    return buf;
}

struct Extent {
    double lo = 0.0, hi = 1.0;
};

Extent extent_of(const std::vector<Series>& series, bool use_x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : series)
        for (const double v : use_x ? s.x : s.y)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    if (!(lo <= hi)) return {0.0, 1.0};
    if (lo == hi) {
        const double pad = std::max(1.0, std::abs(lo) * 0.1);
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

}  // namespace

void draw_text(RgbImage& img, int x, int y, const std::string& text, std::uint8_t r,
               std::uint8_t g, std::uint8_t b) {
    for (const char c : text) {
        const std::uint8_t* col = glyph_for(c);
        for (int cx = 0; cx < 5; ++cx)
            for (int cy = 0; cy < 7; ++cy)
                if (col[cx] & (1 << cy)) img.set(x + cx, y + cy, r, g, b);
        x += 6;
    }
}

RgbImage render_chart(const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<Series>& series,
                      const std::vector<Band>& bands, int width, int height) {
    RgbImage img(width, height);
    const int ml = 72, mr = 16, mt = 28, mb = 44;
    const int px0 = ml, px1 = width - mr, py0 = mt, py1 = height - mb;

    const Extent ex = extent_of(series, true);
    const Extent ey = extent_of(series, false);
    const auto to_px = [&](double v) {
        return px0 + (v - ex.lo) / (ex.hi - ex.lo) * (px1 - px0);
    };
    const auto to_py = [&](double v) {
        return py1 - (v - ey.lo) / (ey.hi - ey.lo) * (py1 - py0);
    };

    // Grid and ticks.
    const double xstep = nice_step(ex.hi - ex.lo, 6);
    for (double v = std::ceil(ex.lo / xstep) * xstep; v <= ex.hi + 1e-12; v += xstep) {
        const int x = static_cast<int>(std::lround(to_px(v)));
        draw_line(img, x, py0, x, py1, 228, 228, 228);
        const std::string lab = tick_label(v);
        draw_text(img, x - static_cast<int>(lab.size()) * 3, py1 + 8, lab, 90, 90, 90);
    }
    const double ystep = nice_step(ey.hi - ey.lo, 5);
    for (double v = std::ceil(ey.lo / ystep) * ystep; v <= ey.hi + 1e-12; v += ystep) {
        const int y = static_cast<int>(std::lround(to_py(v)));
        draw_line(img, px0, y, px1, y, 228, 228, 228);
        const std::string lab = tick_label(v);
        draw_text(img, px0 - 6 - static_cast<int>(lab.size()) * 6, y - 3, lab, 90, 90, 90);
    }

    // Total-occlusion bands along the zero line (bottom edge when zero is
    // outside the y-range).
    int band_y = py1 - 4;
    if (ey.lo < 0.0 && ey.hi > 0.0) band_y = static_cast<int>(std::lround(to_py(0.0))) - 2;
    for (const auto& band : bands) {
        const int bx0 = std::clamp(static_cast<int>(std::lround(to_px(band.x0))), px0, px1);
        const int bx1 = std::clamp(static_cast<int>(std::lround(to_px(band.x1))), px0, px1);
        for (int y = band_y; y < band_y + 4; ++y)
            draw_line(img, bx0, y, bx1, y, 255, 170, 80);
    }

    // Axes box.
    draw_line(img, px0, py0, px0, py1, 40, 40, 40);
    draw_line(img, px0, py1, px1, py1, 40, 40, 40);

    // Series polylines; NaN/Inf break the line.
    for (const auto& s : series) {
        bool pen_down = false;
        int lx = 0, ly = 0;
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen_down = false;
                continue;
            }
            const int x = static_cast<int>(std::lround(to_px(s.x[i])));
            const int y = static_cast<int>(std::lround(to_py(s.y[i])));
            if (pen_down)
                draw_line(img, lx, ly, x, y, s.r, s.g, s.b);
            else
                img.set(x, y, s.r, s.g, s.b);
            lx = x;
            ly = y;
            pen_down = true;
        }
    }

    // Title, labels, legend.
    draw_text(img, ml, 10, title, 20, 20, 20);
    draw_text(img, (px0 + px1) / 2 - static_cast<int>(xlabel.size()) * 3, height - 14, xlabel,
              60, 60, 60);
    draw_text(img, 4, py0 - 14, ylabel, 60, 60, 60);
    int ly = py0 + 6;
    for (const auto& s : series) {
        draw_line(img, px1 - 120, ly + 3, px1 - 100, ly + 3, s.r, s.g, s.b);
        draw_text(img, px1 - 94, ly, s.name, 50, 50, 50);
        ly += 12;
    }
    return img;
}

namespace {

constexpr double kRad2Deg = 180.0 / M_PI;

std::vector<Band> occlusion_bands(const CsvTable& log) {
    const std::vector<double> t = log.column("t");
    const std::vector<double> occ = log.column("occlusion");
    std::vector<Band> bands;
    bool in_band = false;
    double start = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        const bool total = occ[i] == 2.0;
        if (total && !in_band) {
            start = t[i];
            in_band = true;
        } else if (!total && in_band) {
            bands.push_back({start, t[i]});
            in_band = false;
        }
    }
    if (in_band) bands.push_back({start, t.back()});
    return bands;
}

Series make_series(const CsvTable& log, const std::string& xcol, const std::string& ycol,
                   const std::string& name, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return {name, log.column(xcol), log.column(ycol), r, g, b};
}

// Masks samples where the flag column is zero (e.g. invalid measurements).
Series masked(Series s, const std::vector<double>& flag) {
    for (size_t i = 0; i < s.y.size() && i < flag.size(); ++i)
        if (flag[i] == 0.0) s.y[i] = std::numeric_limits<double>::quiet_NaN();
    return s;
}

Series scaled(Series s, double factor) {
    for (double& v : s.y) v *= factor;
    return s;
}

}  // namespace

int emit_plots(const CsvTable& log, const std::string& outdir) {
    if (log.rows.empty()) throw std::runtime_error("emit_plots: empty log");
    std::filesystem::create_directories(outdir);
    const auto path = [&](const char* name) { return outdir + "/" + name; };
    const std::vector<Band> bands = occlusion_bands(log);
    const std::vector<double> valid = log.column("meas_valid");
    int count = 0;
    const auto save = [&](const RgbImage& img, const char* name) {
        write_png_rgb(img, path(name));
        ++count;
    };

    save(render_chart("range r", "t (s)", "m",
                      {make_series(log, "t", "r", "true", 30, 90, 200),
                       make_series(log, "t", "est_r", "est", 210, 70, 40)},
                      bands),
         "state_r.png");
    save(render_chart("los angle theta", "t (s)", "deg",
                      {scaled(make_series(log, "t", "theta", "true", 30, 90, 200), kRad2Deg),
                       scaled(make_series(log, "t", "est_theta", "est", 210, 70, 40), kRad2Deg)},
                      bands),
         "state_theta.png");
    save(render_chart("range rate vr", "t (s)", "m/s",
                      {make_series(log, "t", "vr", "true", 30, 90, 200),
                       make_series(log, "t", "est_vr", "est", 210, 70, 40)},
                      bands),
         "state_vr.png");
    save(render_chart("transverse vtheta", "t (s)", "m/s",
                      {make_series(log, "t", "vtheta", "true", 30, 90, 200),
                       make_series(log, "t", "est_vtheta", "est", 210, 70, 40)},
                      bands),
         "state_vtheta.png");
    save(render_chart("uas acceleration commands", "t (s)", "m/s2",
                      {make_series(log, "t", "a_lat", "a_lat", 30, 90, 200),
                       make_series(log, "t", "a_long", "a_long", 210, 70, 40)},
                      bands),
         "commands.png");
    save(render_chart("speeds", "t (s)", "m/s",
                      {make_series(log, "t", "uas_speed", "uas", 30, 90, 200),
                       make_series(log, "t", "veh_speed", "vehicle", 210, 70, 40)},
                      bands),
         "speeds.png");
    {
        Series d = make_series(log, "t", "uas_speed", "uas-vehicle", 120, 60, 170);
        const std::vector<double> vb = log.column("veh_speed");
        for (size_t i = 0; i < d.y.size(); ++i) d.y[i] -= vb[i];
        save(render_chart("speed delta", "t (s)", "m/s", {d}, bands), "speed_delta.png");
    }
    save(render_chart("headings", "t (s)", "deg",
                      {scaled(make_series(log, "t", "uas_heading", "uas", 30, 90, 200), kRad2Deg),
                       scaled(make_series(log, "t", "veh_heading", "vehicle", 210, 70, 40),
                              kRad2Deg)},
                      bands),
         "headings.png");
    {
        Series d = make_series(log, "t", "uas_heading", "uas-vehicle", 120, 60, 170);
        const std::vector<double> hb = log.column("veh_heading");
        for (size_t i = 0; i < d.y.size(); ++i)
            d.y[i] = kRad2Deg * std::remainder(d.y[i] - hb[i], 2.0 * M_PI);
        save(render_chart("heading delta", "t (s)", "deg", {d}, bands), "heading_delta.png");
    }
    save(render_chart("objective y1", "t (s)", "m4/s2",
                      {make_series(log, "t", "y1", "true", 30, 90, 200),
                       make_series(log, "t", "est_y1", "est", 210, 70, 40)},
                      bands),
         "objective_y1.png");
    save(render_chart("objective y2", "t (s)", "m2/s2",
                      {make_series(log, "t", "y2", "true", 30, 90, 200),
                       make_series(log, "t", "est_y2", "est", 210, 70, 40)},
                      bands),
         "objective_y2.png");
    save(render_chart("world trajectories", "x (m)", "y (m)",
                      {make_series(log, "uas_x", "uas_y", "uas", 30, 90, 200),
                       make_series(log, "veh_x", "veh_y", "vehicle", 210, 70, 40),
                       masked(make_series(log, "meas_x", "meas_y", "measured", 60, 160, 60),
                              valid)},
                      {}, 700, 700),
         "trajectory_world.png");
    save(render_chart("camera-frame measurements", "px", "px",
                      {masked(make_series(log, "meas_px_x", "meas_px_y", "measured", 60, 160, 60),
                              valid)},
                      {}, 700, 700),
         "trajectory_camera.png");
    return count;
}

}  // namespace pursuit
