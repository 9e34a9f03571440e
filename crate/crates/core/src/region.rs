//! Region diagrams of the two embedding questions in the `(1/p, t)` plane.
//!
//! Each diagram partitions a finite window `[0, extent] × [-extent, extent]`
//! into labeled polygons whose interiors carry a single verdict status,
//! together with the emphasized critical segments separating them. Unbounded
//! regions are represented by their clipped polygons and flagged.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::params::VerdictStatus;

/// Which embedding question the diagram depicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Figure {
    /// Mixed scale into isotropic scale (critical line `t = 0`).
    MixedIntoIso,
    /// Isotropic scale into mixed scale (critical line `t = max(0, 1/p − 1)`).
    IsoIntoMixed,
}

/// A clipped region of the parameter plane with its verdict label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledRegion {
    pub label: VerdictStatus,
    /// Vertices in `(1/p, t)` coordinates, counter-clockwise, not closed.
    pub polygon: Vec<[f64; 2]>,
    /// True when the region extends beyond the plotted window.
    pub unbounded: bool,
}

/// A straight segment of the diagram, emphasized when it is critical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalSegment {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub emphasized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionDiagram {
    pub figure: Figure,
    pub d: u32,
    pub extent: f64,
    pub regions: Vec<LabeledRegion>,
    pub critical_segments: Vec<CriticalSegment>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegionError {
    DimensionTooSmall(u32),
    NonPositiveExtent(f64),
}

impl core::fmt::Display for RegionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::DimensionTooSmall(d) => write!(f, "region diagrams need d >= 2, got {d}"),
            Self::NonPositiveExtent(e) => write!(f, "extent must be positive, got {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RegionError {}

/// Builds the region diagram for the requested figure, clipped to the window
/// `[0, extent] × [-extent, extent]`.
pub fn region_diagram(figure: Figure, d: u32, extent: f64) -> Result<RegionDiagram, RegionError> {
    if d < 2 {
        return Err(RegionError::DimensionTooSmall(d));
    }
    if !(extent > 0.0) || !extent.is_finite() {
        return Err(RegionError::NonPositiveExtent(extent));
    }
    let e = extent;
    let (regions, critical_segments) = match figure {
        Figure::MixedIntoIso => {
            let mut regions = vec![
                LabeledRegion {
                    label: VerdictStatus::Embeds,
                    polygon: vec![[0.0, 0.0], [e, 0.0], [e, e], [0.0, e]],
                    unbounded: true,
                },
                LabeledRegion {
                    label: VerdictStatus::ReverseEmbeds,
                    polygon: vec![
                        [0.0, -e],
                        [e.min(1.0), -e],
                        [e.min(1.0), 0.0],
                        [0.0, 0.0],
                    ],
                    unbounded: true,
                },
            ];
            if e > 1.0 {
                regions.push(LabeledRegion {
                    label: VerdictStatus::NotComparable,
                    polygon: vec![[1.0, -e], [e, -e], [e, 0.0], [1.0, 0.0]],
                    unbounded: true,
                });
            }
            let segments = vec![CriticalSegment {
                a: [0.0, 0.0],
                b: [e, 0.0],
                emphasized: true,
            }];
            (regions, segments)
        }
        Figure::IsoIntoMixed => {
            let embeds_polygon = if e > 1.0 {
                vec![[0.0, 0.0], [1.0, 0.0], [e, e - 1.0], [e, e], [0.0, e]]
            } else {
                vec![[0.0, 0.0], [e, 0.0], [e, e], [0.0, e]]
            };
            let mut regions = vec![
                LabeledRegion {
                    label: VerdictStatus::Embeds,
                    polygon: embeds_polygon,
                    unbounded: true,
                },
                LabeledRegion {
                    label: VerdictStatus::ReverseEmbeds,
                    polygon: vec![[0.0, -e], [e, -e], [e, 0.0], [0.0, 0.0]],
                    unbounded: true,
                },
            ];
            if e > 1.0 {
                regions.push(LabeledRegion {
                    label: VerdictStatus::NotComparable,
                    polygon: vec![[1.0, 0.0], [e, 0.0], [e, e - 1.0]],
                    unbounded: true,
                });
            }
            let mut segments = vec![CriticalSegment {
                a: [0.0, 0.0],
                b: [e.min(1.0), 0.0],
                emphasized: true,
            }];
            if e > 1.0 {
                segments.push(CriticalSegment {
                    a: [1.0, 0.0],
                    b: [e, e - 1.0],
                    emphasized: true,
                });
            }
            (regions, segments)
        }
    };
    Ok(RegionDiagram {
        figure,
        d,
        extent,
        regions,
        critical_segments,
    })
}

/// Distance from `point` to the segment `[a, b]`.
pub fn segment_distance(point: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (px, py) = (point[0] - a[0], point[1] - a[1]);
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let s = if len2 > 0.0 {
        ((px * dx + py * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (rx, ry) = (px - s * dx, py - s * dy);
    libm::sqrt(rx * rx + ry * ry)
}

impl LabeledRegion {
    /// Distance from `point` to the polygon boundary.
    pub fn boundary_distance(&self, point: [f64; 2]) -> f64 {
        let n = self.polygon.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            best = best.min(segment_distance(point, a, b));
        }
        best
    }

    /// Ray-casting point-in-polygon test; boundary points are unreliable,
    /// use [`Self::strictly_contains`] for sampling.
    pub fn contains(&self, point: [f64; 2]) -> bool {
        let n = self.polygon.len();
        let (x, y) = (point[0], point[1]);
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = (self.polygon[i][0], self.polygon[i][1]);
            let (xj, yj) = (self.polygon[j][0], self.polygon[j][1]);
            if (yi > y) != (yj > y) {
                let x_cross = (xj - xi) * (y - yi) / (yj - yi) + xi;
                if x < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// True when `point` lies inside with at least `margin` of clearance
    /// from the boundary.
    pub fn strictly_contains(&self, point: [f64; 2], margin: f64) -> bool {
        self.contains(point) && self.boundary_distance(point) > margin
    }
}

impl RegionDiagram {
    /// Label of the region strictly containing `point`, if any.
    pub fn label_at(&self, point: [f64; 2], margin: f64) -> Option<VerdictStatus> {
        self.regions
            .iter()
            .find(|r| r.strictly_contains(point, margin))
            .map(|r| r.label)
    }

    /// Human-readable figure name, used by reports.
    pub fn figure_name(&self) -> String {
        use alloc::string::ToString;
        match self.figure {
            Figure::MixedIntoIso => "mixed_into_iso".to_string(),
            Figure::IsoIntoMixed => "iso_into_mixed".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{embed_iso_into_mixed, embed_mixed_into_iso, make_params};

    #[test]
    fn figure_one_layout() {
        let diag = region_diagram(Figure::MixedIntoIso, 2, 2.0).unwrap();
        assert_eq!(diag.regions.len(), 3);
        assert_eq!(diag.regions[0].label, VerdictStatus::Embeds);
        assert!(diag.regions[0].contains([0.5, 1.0]));
        assert!(diag.critical_segments[0].emphasized);
    }

    #[test]
    fn figure_two_layout() {
        let diag = region_diagram(Figure::IsoIntoMixed, 2, 2.0).unwrap();
        assert_eq!(diag.label_at([0.5, 1.0], 1e-9), Some(VerdictStatus::Embeds));
        assert_eq!(
            diag.label_at([1.8, 0.3], 1e-9),
            Some(VerdictStatus::NotComparable)
        );
        assert_eq!(
            diag.label_at([0.3, -1.0], 1e-9),
            Some(VerdictStatus::ReverseEmbeds)
        );
        assert_eq!(diag.critical_segments.len(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(region_diagram(Figure::MixedIntoIso, 1, 2.0).is_err());
        assert!(region_diagram(Figure::MixedIntoIso, 2, 0.0).is_err());
    }

    #[test]
    fn interior_samples_agree_with_oracle() {
        for (figure, oracle) in [
            (
                Figure::MixedIntoIso,
                embed_mixed_into_iso as fn(&crate::params::ParameterPoint) -> crate::params::Verdict,
            ),
            (Figure::IsoIntoMixed, embed_iso_into_mixed),
        ] {
            let extent = 2.0;
            let diag = region_diagram(figure, 2, extent).unwrap();
            let samples = 50usize;
            let mut checked = 0usize;
            for i in 0..samples {
                for j in 0..samples {
                    let x = extent * (i as f64 + 0.5) / samples as f64;
                    let t = -extent + 2.0 * extent * (j as f64 + 0.5) / samples as f64;
                    let Some(label) = diag.label_at([x, t], 1e-9) else {
                        continue;
                    };
                    let p = if x == 0.0 { f64::INFINITY } else { 1.0 / x };
                    let point = make_params(t, p, 2.0, 2).unwrap();
                    let verdict = oracle(&point);
                    assert_eq!(verdict.status, label, "figure {figure:?} at ({x}, {t})");
                    checked += 1;
                }
            }
            assert!(checked > 2000, "only {checked} interior samples");
        }
    }
}
