#include "lodom/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lodom {

void FeatureConfig::validate() const {
  if (neighbor_half_width < 1) {
    throw std::invalid_argument("FeatureConfig: neighbor_half_width >= 1");
  }
  if (!(edge_sigma_min > 0.0) || !(planar_sigma_max > 0.0)) {
    throw std::invalid_argument("FeatureConfig: thresholds must be positive");
  }
  if (!(edge_sigma_min > planar_sigma_max)) {
    throw std::invalid_argument(
        "FeatureConfig: edge_sigma_min must exceed planar_sigma_max");
  }
  if (sectors_per_ring < 1 || max_edges_per_sector < 0 ||
      max_planars_per_sector < 0) {
    throw std::invalid_argument("FeatureConfig: bad sector setup");
  }
}

double smoothness(std::span<const IndexedPoint> ring, int index,
                  const FeatureConfig& cfg) {
  const int h = cfg.neighbor_half_width;
  if (index < h || index + h >= static_cast<int>(ring.size())) {
    throw std::invalid_argument("smoothness: neighborhood out of range");
  }
  const Eigen::Vector3d& center = ring[index].position;
  if (cfg.smoothness_form == SmoothnessForm::kNormOfSum) {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (int j = -h; j <= h; ++j) {
      if (j == 0) continue;
      sum += ring[index + j].position - center;
    }
    return sum.norm() / (2.0 * h);
  }
  double acc = 0.0;
  for (int j = -h; j <= h; ++j) {
    if (j == 0) continue;
    acc += (ring[index + j].position - center).norm();
  }
  return acc / (2.0 * h);
}

namespace {

struct Candidate {
  int index = 0;  // 0-based position within the ring
  double sigma = 0.0;
  bool edge_eligible = true;
};

// True when the neighborhood spans a range discontinuity larger than
// gap_factor times the median consecutive spacing of the window.
bool spans_discontinuity(std::span<const IndexedPoint> ring, int index, int h,
                         double gap_factor) {
  std::vector<double> gaps;
  gaps.reserve(2 * h);
  double max_gap = 0.0;
  for (int j = -h; j < h; ++j) {
    const double g =
        (ring[index + j + 1].position - ring[index + j].position).norm();
    gaps.push_back(g);
    max_gap = std::max(max_gap, g);
  }
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double median = gaps[gaps.size() / 2];
  return max_gap > gap_factor * median;
}

}  // namespace

FeatureCloud extract_features(const Scan& scan, const FeatureConfig& cfg) {
  cfg.validate();
  const int h = cfg.neighbor_half_width;
  FeatureCloud out;

  for (int r = 0; r < scan.ring_count(); ++r) {
    const auto& ring = scan.rings[r];
    const int n = static_cast<int>(ring.size());
    if (n < 2 * h + 1) continue;

    // Bucket interior columns into azimuth sectors.
    std::vector<std::vector<Candidate>> sectors(cfg.sectors_per_ring);
    for (int i = h; i + h < n; ++i) {
      Candidate c;
      c.index = i;
      c.sigma = smoothness(ring, i, cfg);
      c.edge_eligible =
          !spans_discontinuity(ring, i, h, cfg.occlusion_gap_factor);
      int sector = static_cast<int>(ring[i].azimuth_fraction *
                                    cfg.sectors_per_ring);
      sector = std::clamp(sector, 0, cfg.sectors_per_ring - 1);
      sectors[sector].push_back(c);
    }

    for (auto& sector : sectors) {
      std::vector<Candidate> by_sigma = sector;

      std::sort(by_sigma.begin(), by_sigma.end(),
                [](const Candidate& a, const Candidate& b) {
                  if (a.sigma != b.sigma) return a.sigma > b.sigma;
                  return a.index < b.index;
                });
      int picked = 0;
      for (const auto& c : by_sigma) {
        if (picked >= cfg.max_edges_per_sector) break;
        if (c.sigma < cfg.edge_sigma_min) break;
        if (!c.edge_eligible) continue;
        FeaturePoint fp;
        fp.position = ring[c.index].position;
        fp.sigma = c.sigma;
        fp.azimuth_fraction = ring[c.index].azimuth_fraction;
        fp.ring = ring[c.index].ring;
        fp.column = ring[c.index].column;
        out.edges.push_back(fp);
        ++picked;
      }

      std::sort(by_sigma.begin(), by_sigma.end(),
                [](const Candidate& a, const Candidate& b) {
                  if (a.sigma != b.sigma) return a.sigma < b.sigma;
                  return a.index < b.index;
                });
      picked = 0;
      for (const auto& c : by_sigma) {
        if (picked >= cfg.max_planars_per_sector) break;
        if (c.sigma > cfg.planar_sigma_max) break;
        FeaturePoint fp;
        fp.position = ring[c.index].position;
        fp.sigma = c.sigma;
        fp.azimuth_fraction = ring[c.index].azimuth_fraction;
        fp.ring = ring[c.index].ring;
        fp.column = ring[c.index].column;
        out.planars.push_back(fp);
        ++picked;
      }
    }
  }

  auto by_ring_column = [](const FeaturePoint& a, const FeaturePoint& b) {
    if (a.ring != b.ring) return a.ring < b.ring;
    return a.column < b.column;
  };
  std::sort(out.edges.begin(), out.edges.end(), by_ring_column);
  std::sort(out.planars.begin(), out.planars.end(), by_ring_column);
  return out;
}

}  // namespace lodom
