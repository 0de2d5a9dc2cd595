#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pursuit/features.hpp"
#include "pursuit/flow.hpp"
#include "pursuit/image.hpp"
#include "pursuit/occlusion.hpp"

namespace pursuit {

enum class PointStatus {
    Good,       // tracked by verified optical flow
    Bad,        // lost; position is the rigid-shape reconstruction
    Recovered,  // re-placed by reconstruction/matching, pending one flow verification
};

struct FeaturePoint {
    int id = 0;
    Eigen::Vector2d pos{0.0, 0.0};  // sub-pixel image coords
    Eigen::Vector2d last_good_pos{0.0, 0.0};
    PointStatus status = PointStatus::Good;
};

// Arithmetic mean of a non-empty point set. Throws on empty input.
Eigen::Vector2d compute_centroid(const std::vector<Eigen::Vector2d>& pts);

struct CentroidAdjustment {
    Eigen::Vector2d adjusted;
    Eigen::Vector2d delta;  // mean(all_old) - mean(good_old)
};

// good_old/good_new must be the same surviving ids in bijection; all_old is
// the full old point set.
CentroidAdjustment adjust_centroid(const std::vector<Eigen::Vector2d>& good_old,
                                   const std::vector<Eigen::Vector2d>& good_new,
                                   const std::vector<Eigen::Vector2d>& all_old);

// Rigid-shape back-projection: new position = adjusted_centroid + (old_pos -
// old_full_centroid).
Eigen::Vector2d reconstruct_point(const Eigen::Vector2d& old_pos,
                                  const Eigen::Vector2d& old_full_centroid,
                                  const Eigen::Vector2d& adjusted_centroid);

struct NccPeak {
    Eigen::Vector2d pos;  // template-center position in the image
    double score = 0.0;
};

// Normalized cross-correlation of templ over integer placements whose center
// lies inside `search`. Returns the best peak regardless of score.
NccPeak ncc_match(const Image& img, const Image& templ, const RoiRect& search);

// Full and per-point templates captured at the first unoccluded frame.
struct TemplateBank {
    Image full;
    Eigen::Vector2d centroid_in_full{0.0, 0.0};  // capture centroid, template coords
    std::vector<Image> parts;                    // one per keypoint
    std::vector<Eigen::Vector2d> offsets;        // keypoint minus capture centroid
};

struct TrackerConfig {
    int num_points = 10;
    FlowConfig flow;
    double quality_level = 0.05;
    double min_distance = 4.0;
    int template_margin = 4;       // px around the keypoint bbox, full template
    int part_half = 7;             // part template half side
    double ncc_threshold = 0.70;   // full-template redetection gate
    double part_ncc_threshold = 0.60;
    double revive_search_half = 5.0;  // px around a reconstructed point
    double motion_gate_px = 2.0;      // max deviation from the median flow step
    double search_half0 = 60.0;       // initial redetection search half-size
    double search_growth = 1.25;      // per totally-occluded frame
    int refresh_interval = 30;        // frames between template refreshes (0 = never)
};

struct TrackStepInfo {
    OcclusionState state = OcclusionState::None;
    TransitionCase transition;
    int good_count = 0;
    Eigen::Vector2d centroid{0.0, 0.0};           // naive, good points only
    Eigen::Vector2d adjusted_centroid{0.0, 0.0};
    bool has_measurement = false;
    bool redetected = false;
    int deficit_at_init = 0;
};

// Long-term feature tracker: flow + centroid adjustment + occlusion state
// machine + reconstruction and template-matching recovery.
class Tracker {
public:
    explicit Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) {}

    // First-frame initialization on an unoccluded view of the object.
    void init(const Frame& frame, const RoiRect& roi);
    bool initialized() const { return initialized_; }

    // One pipeline step; returns the adjusted centroid in pixel coordinates,
    // or nothing under total occlusion.
    std::optional<Eigen::Vector2d> track_step(const Frame& prev, const Frame& next);

    const TrackStepInfo& info() const { return info_; }
    const std::vector<FeaturePoint>& points() const { return points_; }
    const TemplateBank& bank() const { return bank_; }
    int n() const { return static_cast<int>(points_.size()); }
    OcclusionState state() const { return state_; }

    // Exposed for direct testing: full-template redetection over the current
    // search window. Updates no state.
    std::optional<NccPeak> redetect(const Frame& frame) const;

private:
    std::vector<int> good_ids() const;
    void adopt_points(const Frame& frame, const std::vector<Eigen::Vector2d>& pts);
    void refresh_bank(const Frame& frame);

    TrackerConfig cfg_;
    bool initialized_ = false;
    std::vector<FeaturePoint> points_;
    TemplateBank bank_;
    OcclusionState state_ = OcclusionState::None;
    Eigen::Vector2d last_adjusted_centroid_{0.0, 0.0};
    int frames_occluded_ = 0;
    int frames_since_refresh_ = 0;
    TrackStepInfo info_;

    // Two-slot pyramid cache keyed by frame index.
    mutable Pyramid pyr_slot_[2];
    mutable int pyr_index_[2] = {-1, -1};
    mutable int pyr_newest_ = 0;
    const Pyramid& pyramid_for(const Frame& f) const;
};

}  // namespace pursuit
