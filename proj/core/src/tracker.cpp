#include "pursuit/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pursuit {

Eigen::Vector2d compute_centroid(const std::vector<Eigen::Vector2d>& pts) {
    if (pts.empty()) throw std::invalid_argument("compute_centroid: no points");
    Eigen::Vector2d sum{0.0, 0.0};
    for (const auto& p : pts) sum += p;
    return sum / static_cast<double>(pts.size());
}

CentroidAdjustment adjust_centroid(const std::vector<Eigen::Vector2d>& good_old,
                                   const std::vector<Eigen::Vector2d>& good_new,
                                   const std::vector<Eigen::Vector2d>& all_old) {
    if (good_old.empty() || good_new.empty())
        throw std::invalid_argument("adjust_centroid: empty good set");
    if (good_old.size() != good_new.size())
        throw std::invalid_argument("adjust_centroid: good sets not in bijection");
    CentroidAdjustment out;
    out.delta = compute_centroid(all_old) - compute_centroid(good_old);
    out.adjusted = compute_centroid(good_new) + out.delta;
    return out;
}

Eigen::Vector2d reconstruct_point(const Eigen::Vector2d& old_pos,
                                  const Eigen::Vector2d& old_full_centroid,
                                  const Eigen::Vector2d& adjusted_centroid) {
    return adjusted_centroid + (old_pos - old_full_centroid);
}

NccPeak ncc_match(const Image& img, const Image& templ, const RoiRect& search) {
    const int tw = templ.width, th = templ.height;
    const int n = tw * th;

    double tmean = 0.0;
    for (std::uint8_t v : templ.data) tmean += v;
    tmean /= n;
    double tvar = 0.0;
    std::vector<double> tz(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        tz[size_t(i)] = templ.data[size_t(i)] - tmean;
        tvar += tz[size_t(i)] * tz[size_t(i)];
    }
    NccPeak best{{0.0, 0.0}, -2.0};
    if (tvar <= 1e-12) return best;
    const double tnorm = std::sqrt(tvar);

    // Candidate top-left corners so that the template center is inside search.
    const int cx_off = tw / 2, cy_off = th / 2;
    const int x_lo = std::max(0, search.x0 - cx_off);
    const int x_hi = std::min(img.width - tw, search.x1 - cx_off);
    const int y_lo = std::max(0, search.y0 - cy_off);
    const int y_hi = std::min(img.height - th, search.y1 - cy_off);

    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            double isum = 0.0, isum2 = 0.0, cross = 0.0;
            int i = 0;
            for (int ty = 0; ty < th; ++ty) {
                const std::uint8_t* row = &img.data[size_t(y + ty) * img.width + x];
                for (int tx = 0; tx < tw; ++tx, ++i) {
                    const double v = row[tx];
                    isum += v;
                    isum2 += v * v;
                    cross += v * tz[size_t(i)];
                }
            }
            const double ivar = isum2 - isum * isum / n;
            if (ivar <= 1e-12) continue;
            const double score = cross / (std::sqrt(ivar) * tnorm);
            if (score > best.score)
                best = {{x + 0.5 * (tw - 1), y + 0.5 * (th - 1)}, score};
        }
    }
    return best;
}

namespace {

Image crop(const Image& img, int x0, int y0, int w, int h) {
    Image out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int sx = std::clamp(x0 + x, 0, img.width - 1);
            const int sy = std::clamp(y0 + y, 0, img.height - 1);
            out.at(x, y) = img.at(sx, sy);
        }
    return out;
}

RoiRect clamp_roi(RoiRect r, const Image& img) {
    r.x0 = std::clamp(r.x0, 0, img.width);
    r.x1 = std::clamp(r.x1, 0, img.width);
    r.y0 = std::clamp(r.y0, 0, img.height);
    r.y1 = std::clamp(r.y1, 0, img.height);
    return r;
}

}  // namespace

const Pyramid& Tracker::pyramid_for(const Frame& f) const {
    for (int s = 0; s < 2; ++s)
        if (pyr_index_[s] == f.index) return pyr_slot_[s];
    const int s = 1 - pyr_newest_;  // evict the older slot
    pyr_slot_[s] = Pyramid::build(f.image, cfg_.flow.levels);
    pyr_index_[s] = f.index;
    pyr_newest_ = s;
    return pyr_slot_[s];
}

void Tracker::adopt_points(const Frame& frame, const std::vector<Eigen::Vector2d>& pts) {
    points_.clear();
    for (size_t i = 0; i < pts.size(); ++i) {
        FeaturePoint fp;
        fp.id = static_cast<int>(i);
        fp.pos = pts[i];
        fp.last_good_pos = fp.pos;
        fp.status = PointStatus::Good;
        points_.push_back(fp);
    }
    const Eigen::Vector2d centroid = compute_centroid(pts);

    // Full template: keypoint bounding box plus margin.
    double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
    for (const auto& p : pts) {
        x0 = std::min(x0, p.x());
        y0 = std::min(y0, p.y());
        x1 = std::max(x1, p.x());
        y1 = std::max(y1, p.y());
    }
    const int m = cfg_.template_margin;
    const int bx0 = static_cast<int>(std::floor(x0)) - m;
    const int by0 = static_cast<int>(std::floor(y0)) - m;
    const int bw = static_cast<int>(std::ceil(x1)) - bx0 + 1 + m;
    const int bh = static_cast<int>(std::ceil(y1)) - by0 + 1 + m;
    bank_.full = crop(frame.image, bx0, by0, bw, bh);
    bank_.centroid_in_full = centroid - Eigen::Vector2d(bx0, by0);

    bank_.parts.clear();
    bank_.offsets.clear();
    for (const auto& p : pts) {
        const int h = cfg_.part_half;
        bank_.parts.push_back(crop(frame.image, static_cast<int>(std::round(p.x())) - h,
                                   static_cast<int>(std::round(p.y())) - h, 2 * h + 1, 2 * h + 1));
        bank_.offsets.push_back(p - centroid);
    }
    frames_since_refresh_ = 0;
}

void Tracker::refresh_bank(const Frame& frame) {
    // Re-detect around the current point set so templates and offsets follow
    // the object's appearance (it rotates in the image over long runs).
    double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
    for (const auto& p : points_) {
        x0 = std::min(x0, p.pos.x());
        y0 = std::min(y0, p.pos.y());
        x1 = std::max(x1, p.pos.x());
        y1 = std::max(y1, p.pos.y());
    }
    const int m = cfg_.template_margin;
    RoiRect roi{static_cast<int>(std::floor(x0)) - m, static_cast<int>(std::floor(y0)) - m,
                static_cast<int>(std::ceil(x1)) + 1 + m, static_cast<int>(std::ceil(y1)) + 1 + m};
    roi = clamp_roi(roi, frame.image);
    if (roi.x0 >= roi.x1 || roi.y0 >= roi.y1) return;
    const DetectResult det =
        detect_features(frame.image, roi, cfg_.num_points, cfg_.quality_level, cfg_.min_distance);
    if (static_cast<int>(det.corners.size()) < 3) return;  // keep the old bank

    std::vector<Eigen::Vector2d> pts;
    for (const auto& c : det.corners) pts.push_back(c.pos);
    adopt_points(frame, pts);
}

void Tracker::init(const Frame& frame, const RoiRect& roi) {
    const DetectResult det =
        detect_features(frame.image, roi, cfg_.num_points, cfg_.quality_level, cfg_.min_distance);
    if (det.corners.empty()) throw std::runtime_error("Tracker::init: no features in roi");

    std::vector<Eigen::Vector2d> pts;
    for (const auto& c : det.corners) pts.push_back(c.pos);
    adopt_points(frame, pts);
    const Eigen::Vector2d centroid = compute_centroid(pts);

    state_ = OcclusionState::None;
    last_adjusted_centroid_ = centroid;
    frames_occluded_ = 0;
    initialized_ = true;
    info_ = TrackStepInfo{};
    info_.good_count = n();
    info_.centroid = centroid;
    info_.adjusted_centroid = centroid;
    info_.has_measurement = true;
    info_.deficit_at_init = cfg_.num_points - n();
    pyr_index_[0] = pyr_index_[1] = -1;
}

std::vector<int> Tracker::good_ids() const {
    std::vector<int> ids;
    for (const auto& p : points_)
        if (p.status == PointStatus::Good) ids.push_back(p.id);
    return ids;
}

std::optional<NccPeak> Tracker::redetect(const Frame& frame) const {
    if (!initialized_) throw std::runtime_error("Tracker::redetect: not initialized");
    const double half =
        std::min(cfg_.search_half0 * std::pow(cfg_.search_growth, frames_occluded_),
                 static_cast<double>(std::max(frame.image.width, frame.image.height)));
    RoiRect search{static_cast<int>(last_adjusted_centroid_.x() - half),
                   static_cast<int>(last_adjusted_centroid_.y() - half),
                   static_cast<int>(last_adjusted_centroid_.x() + half),
                   static_cast<int>(last_adjusted_centroid_.y() + half)};
    search = clamp_roi(search, frame.image);
    if (search.x0 >= search.x1 || search.y0 >= search.y1) return std::nullopt;

    // Coarse-to-fine: quarter-resolution sweep, then a local full-resolution
    // refinement around the coarse peak.
    const Image img2 = frame.image.half().half();
    const Image tmpl2 = bank_.full.half().half();
    RoiRect coarse{search.x0 / 4, search.y0 / 4, search.x1 / 4, search.y1 / 4};
    coarse = clamp_roi(coarse, img2);
    NccPeak peak2 = ncc_match(img2, tmpl2, coarse);
    if (peak2.score < cfg_.ncc_threshold - 0.15) return std::nullopt;

    RoiRect fine{static_cast<int>(peak2.pos.x() * 4) - 8, static_cast<int>(peak2.pos.y() * 4) - 8,
                 static_cast<int>(peak2.pos.x() * 4) + 8, static_cast<int>(peak2.pos.y() * 4) + 8};
    fine = clamp_roi(fine, frame.image);
    const NccPeak peak = ncc_match(frame.image, bank_.full, fine);
    if (peak.score < cfg_.ncc_threshold) return std::nullopt;
    return peak;
}

std::optional<Eigen::Vector2d> Tracker::track_step(const Frame& prev, const Frame& next) {
    if (!initialized_) throw std::runtime_error("Tracker::track_step: not initialized");

    info_ = TrackStepInfo{};
    const OcclusionState old_state = state_;
    const std::vector<int> old_good = good_ids();

    const bool any_flowable =
        std::any_of(points_.begin(), points_.end(),
                    [](const FeaturePoint& p) { return p.status != PointStatus::Bad; });

    if (old_state == OcclusionState::Total && !any_flowable) {
        // No flow possible; try full-template redetection.
        const std::optional<NccPeak> peak = redetect(next);
        if (!peak) {
            ++frames_occluded_;
            info_.state = state_;
            info_.transition = classify_transition(old_state, state_, {}, {}, n());
            return std::nullopt;
        }
        info_.redetected = true;
        const Eigen::Vector2d center =
            peak->pos + (bank_.centroid_in_full -
                         Eigen::Vector2d(0.5 * (bank_.full.width - 1), 0.5 * (bank_.full.height - 1)));
        // Re-place points at their stored offsets; part templates verify each.
        for (auto& p : points_) {
            const Eigen::Vector2d cand = center + bank_.offsets[size_t(p.id)];
            RoiRect local{static_cast<int>(cand.x()) - 2, static_cast<int>(cand.y()) - 2,
                          static_cast<int>(cand.x()) + 3, static_cast<int>(cand.y()) + 3};
            local = clamp_roi(local, next.image);
            const NccPeak pp = ncc_match(next.image, bank_.parts[size_t(p.id)], local);
            if (pp.score >= cfg_.part_ncc_threshold) {
                p.pos = pp.pos;
                p.status = PointStatus::Recovered;  // one flow step before good
            } else {
                p.pos = cand;
                p.status = PointStatus::Bad;
            }
        }
        last_adjusted_centroid_ = center;
        frames_occluded_ = 0;
        // Still no flow-verified good points this frame: measurement resumes
        // once flow confirms the recovery.
        info_.state = state_;
        info_.transition = classify_transition(old_state, state_, {}, {}, n());
        info_.adjusted_centroid = center;
        info_.centroid = center;
        return std::nullopt;
    }

    // Flow for Good and Recovered points.
    const Pyramid& prev_pyr = pyramid_for(prev);
    const Pyramid& next_pyr = pyramid_for(next);

    std::vector<size_t> flow_index;
    std::vector<Eigen::Vector2d> flow_pts;
    for (size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].status != PointStatus::Bad) {
            flow_index.push_back(i);
            flow_pts.push_back(points_[i].pos);
        }
    }
    const std::vector<FlowPoint> flow = pyramidal_flow_fb(prev_pyr, next_pyr, flow_pts, cfg_.flow);

    std::vector<Eigen::Vector2d> all_old;
    for (const auto& p : points_) all_old.push_back(p.pos);
    const Eigen::Vector2d old_full_centroid = compute_centroid(all_old);

    std::vector<size_t> cand_index;
    std::vector<Eigen::Vector2d> cand_new;
    for (size_t j = 0; j < flow_index.size(); ++j) {
        FeaturePoint& p = points_[flow_index[j]];
        bool ok = flow[j].ok;
        if (ok) {
            // Appearance verification: a point sliding under an occluder can
            // pass the flow check by locking onto the occluder edge; its part
            // template no longer matches there.
            const Eigen::Vector2d& q = flow[j].pos;
            RoiRect spot{static_cast<int>(std::round(q.x())), static_cast<int>(std::round(q.y())),
                         static_cast<int>(std::round(q.x())) + 1,
                         static_cast<int>(std::round(q.y())) + 1};
            spot = clamp_roi(spot, next.image);
            const NccPeak score = ncc_match(next.image, bank_.parts[size_t(p.id)], spot);
            ok = score.score >= cfg_.part_ncc_threshold;
        }
        if (ok) {
            cand_index.push_back(flow_index[j]);
            cand_new.push_back(flow[j].pos);
        } else {
            p.status = PointStatus::Bad;
        }
    }

    // Motion-consistency gate: a point whose template straddles an occluder
    // edge of matching polarity can pass both checks while it stops moving
    // with the object. The object is rigid, so every surviving displacement
    // must sit near the median displacement.
    if (cfg_.motion_gate_px > 0.0 && cand_index.size() >= 3) {
        std::vector<double> dx, dy;
        for (size_t j = 0; j < cand_index.size(); ++j) {
            dx.push_back(cand_new[j].x() - points_[cand_index[j]].pos.x());
            dy.push_back(cand_new[j].y() - points_[cand_index[j]].pos.y());
        }
        auto median = [](std::vector<double> v) {
            std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
            return v[v.size() / 2];
        };
        const Eigen::Vector2d med{median(dx), median(dy)};
        std::vector<size_t> kept_index;
        std::vector<Eigen::Vector2d> kept_new;
        for (size_t j = 0; j < cand_index.size(); ++j) {
            const Eigen::Vector2d d{dx[j], dy[j]};
            if ((d - med).norm() <= cfg_.motion_gate_px) {
                kept_index.push_back(cand_index[j]);
                kept_new.push_back(cand_new[j]);
            } else {
                points_[cand_index[j]].status = PointStatus::Bad;
            }
        }
        cand_index.swap(kept_index);
        cand_new.swap(kept_new);
    }

    std::vector<Eigen::Vector2d> surv_old, surv_new;
    for (size_t j = 0; j < cand_index.size(); ++j) {
        FeaturePoint& p = points_[cand_index[j]];
        surv_old.push_back(p.pos);
        surv_new.push_back(cand_new[j]);
        p.pos = cand_new[j];
        p.last_good_pos = cand_new[j];
        p.status = PointStatus::Good;
    }

    const std::vector<int> new_good = good_ids();
    OcclusionState new_state = classify_occlusion(static_cast<int>(new_good.size()), n());

    if (new_good.empty()) {
        state_ = OcclusionState::Total;
        frames_occluded_ = 1;
        info_.state = state_;
        info_.transition = classify_transition(old_state, state_, old_good, new_good, n());
        return std::nullopt;
    }

    const CentroidAdjustment adj = adjust_centroid(surv_old, surv_new, all_old);

    // Rigid-shape reconstruction of the missing points.
    for (auto& p : points_) {
        if (p.status == PointStatus::Bad)
            p.pos = reconstruct_point(all_old[size_t(p.id)], old_full_centroid, adj.adjusted);
    }

    // Point-level redetection: a reconstructed point whose part template
    // matches near its predicted position is revived (pending one flow step).
    for (auto& p : points_) {
        if (p.status != PointStatus::Bad) continue;
        const double h = cfg_.revive_search_half;
        RoiRect local{static_cast<int>(p.pos.x() - h), static_cast<int>(p.pos.y() - h),
                      static_cast<int>(p.pos.x() + h) + 1, static_cast<int>(p.pos.y() + h) + 1};
        local = clamp_roi(local, next.image);
        if (local.x0 >= local.x1 || local.y0 >= local.y1) continue;
        const NccPeak pp = ncc_match(next.image, bank_.parts[size_t(p.id)], local);
        if (pp.score >= cfg_.part_ncc_threshold) {
            p.pos = pp.pos;
            p.status = PointStatus::Recovered;
        }
    }

    state_ = new_state;
    last_adjusted_centroid_ = adj.adjusted;
    frames_occluded_ = 0;

    // Periodic appearance refresh, only on clean frames so an occluder can
    // never be baked into the templates.
    if (cfg_.refresh_interval > 0 && new_state == OcclusionState::None &&
        ++frames_since_refresh_ >= cfg_.refresh_interval)
        refresh_bank(next);

    info_.state = new_state;
    info_.transition = classify_transition(old_state, new_state, old_good, new_good, n());
    info_.good_count = static_cast<int>(new_good.size());
    info_.centroid = compute_centroid(surv_new);
    info_.adjusted_centroid = adj.adjusted;
    info_.has_measurement = true;
    return adj.adjusted;
}

}  // namespace pursuit
