//! Planar point-process primitives on a finite observation window.
//!
//! Patterns are immutable once built. Every operation returns a new
//! [`PointPattern`] and keeps point order, so an index into the input is
//! still meaningful after thinning (via [`thin_indexed`]) or scaling.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Image of `self` under `p -> about + factor * (p - about)`.
    pub fn scaled_about(&self, factor: f64, about: &Point) -> Point {
        Point {
            x: about.x + factor * (self.x - about.x),
            y: about.y + factor * (self.y - about.y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowShape {
    /// Axis-aligned square; extent is the half-width.
    Square,
    /// Disc; extent is the radius.
    Disc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    shape: WindowShape,
    center: Point,
    extent: f64,
}

impl Window {
    pub fn new(shape: WindowShape, center: Point, extent: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(invalid("center", "coordinates must be finite"));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(invalid("extent", format!("must be positive and finite, got {extent}")));
        }
        Ok(Self { shape, center, extent })
    }

    pub fn square(center: Point, half_width: f64) -> Result<Self> {
        Self::new(WindowShape::Square, center, half_width)
    }

    pub fn disc(center: Point, radius: f64) -> Result<Self> {
        Self::new(WindowShape::Disc, center, radius)
    }

    pub fn shape(&self) -> WindowShape {
        self.shape
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn area(&self) -> f64 {
        match self.shape {
            WindowShape::Square => 4.0 * self.extent * self.extent,
            WindowShape::Disc => std::f64::consts::PI * self.extent * self.extent,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        match self.shape {
            WindowShape::Square => dx.abs() <= self.extent && dy.abs() <= self.extent,
            WindowShape::Disc => dx.hypot(dy) <= self.extent,
        }
    }

    /// Uniform point inside the window.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self.shape {
            WindowShape::Square => Point {
                x: self.center.x + self.extent * (2.0 * rng.random::<f64>() - 1.0),
                y: self.center.y + self.extent * (2.0 * rng.random::<f64>() - 1.0),
            },
            WindowShape::Disc => {
                let r = self.extent * rng.random::<f64>().sqrt();
                let theta = std::f64::consts::TAU * rng.random::<f64>();
                Point {
                    x: self.center.x + r * theta.cos(),
                    y: self.center.y + r * theta.sin(),
                }
            }
        }
    }

    fn scaled_about(&self, factor: f64, about: &Point) -> Window {
        Window {
            shape: self.shape,
            center: self.center.scaled_about(factor, about),
            extent: self.extent * factor,
        }
    }
}

/// Mark carried by each point of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// Base station of tier `k` (0-based).
    Tier(usize),
    /// Mobile station.
    Ms,
}

impl Tag {
    pub fn tier(&self) -> Option<usize> {
        match *self {
            Tag::Tier(k) => Some(k),
            Tag::Ms => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    points: Vec<Point>,
    tags: Vec<Tag>,
    window: Window,
}

impl PointPattern {
    pub fn new(points: Vec<Point>, tags: Vec<Tag>, window: Window) -> Result<Self> {
        if points.len() != tags.len() {
            return Err(invalid(
                "tags",
                format!("{} tags for {} points", tags.len(), points.len()),
            ));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite() || !window.contains(p)) {
            return Err(invalid("points", format!("({}, {}) lies outside the window", p.x, p.y)));
        }
        Ok(Self { points, tags, window })
    }

    pub fn empty(window: Window) -> Self {
        Self {
            points: Vec::new(),
            tags: Vec::new(),
            window,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, Tag)> + '_ {
        self.points.iter().copied().zip(self.tags.iter().copied())
    }

    /// Points per unit area of the window.
    pub fn empirical_intensity(&self) -> f64 {
        self.len() as f64 / self.window.area()
    }

    // Used by scaling maps whose images are inside `window` by construction;
    // re-checking containment would only reject rounding noise on the boundary.
    pub(crate) fn from_parts_unchecked(points: Vec<Point>, tags: Vec<Tag>, window: Window) -> Self {
        debug_assert_eq!(points.len(), tags.len());
        Self { points, tags, window }
    }
}

/// Homogeneous Poisson point process of `intensity` on `window`, every point tagged `tag`.
pub fn sample_ppp(intensity: f64, window: &Window, tag: Tag, stream: &mut RandomStream) -> Result<PointPattern> {
    if !(intensity.is_finite() && intensity >= 0.0) {
        return Err(invalid(
            "intensity",
            format!("must be finite and non-negative, got {intensity}"),
        ));
    }
    let mean = intensity * window.area();
    if mean == 0.0 {
        return Ok(PointPattern::empty(*window));
    }
    let count = Poisson::new(mean)
        .map_err(|e| invalid("intensity", e.to_string()))?
        .sample(stream) as usize;
    let points: Vec<Point> = (0..count).map(|_| window.sample_uniform(stream)).collect();
    Ok(PointPattern {
        tags: vec![tag; points.len()],
        points,
        window: *window,
    })
}

/// Union of patterns in list order. All patterns must share one window.
pub fn superpose(patterns: &[PointPattern]) -> Result<PointPattern> {
    let first = patterns
        .first()
        .ok_or_else(|| invalid("patterns", "at least one pattern is required"))?;
    let window = first.window;
    if patterns.iter().any(|p| p.window != window) {
        return Err(invalid("patterns", "all patterns must share the same window"));
    }
    let total = patterns.iter().map(PointPattern::len).sum();
    let mut points = Vec::with_capacity(total);
    let mut tags = Vec::with_capacity(total);
    for p in patterns {
        points.extend_from_slice(&p.points);
        tags.extend_from_slice(&p.tags);
    }
    Ok(PointPattern { points, tags, window })
}

/// Independent thinning; see [`thin_indexed`] for the retained indices.
pub fn thin(pattern: &PointPattern, retain_prob: f64, stream: &mut RandomStream) -> Result<PointPattern> {
    thin_indexed(pattern, retain_prob, stream).map(|(p, _)| p)
}

/// Keeps each point independently with probability `retain_prob`. Returns the
/// thinned pattern and the (increasing) indices of the retained points.
pub fn thin_indexed(
    pattern: &PointPattern,
    retain_prob: f64,
    stream: &mut RandomStream,
) -> Result<(PointPattern, Vec<usize>)> {
    if !(0.0..=1.0).contains(&retain_prob) {
        return Err(invalid("retain_prob", format!("must lie in [0, 1], got {retain_prob}")));
    }
    // One uniform per point regardless of retain_prob keeps downstream draws aligned.
    let kept: Vec<usize> = (0..pattern.len())
        .filter(|_| stream.random::<f64>() < retain_prob)
        .collect();
    let thinned = PointPattern {
        points: kept.iter().map(|&i| pattern.points[i]).collect(),
        tags: kept.iter().map(|&i| pattern.tags[i]).collect(),
        window: pattern.window,
    };
    Ok((thinned, kept))
}

/// Applies `p -> about + factor * (p - about)` to every point and to the window.
pub fn scale_pattern(pattern: &PointPattern, factor: f64, about: &Point) -> Result<PointPattern> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(invalid("factor", format!("must be positive and finite, got {factor}")));
    }
    Ok(PointPattern {
        points: pattern.points.iter().map(|p| p.scaled_about(factor, about)).collect(),
        tags: pattern.tags.clone(),
        window: pattern.window.scaled_about(factor, about),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub point: Point,
    pub distance: f64,
}

/// Nearest point of `pattern` to `query`.
///
/// Points exactly equal to `exclude` are skipped. Ties go to the lowest index.
pub fn nearest(pattern: &PointPattern, query: &Point, exclude: Option<&Point>) -> Option<Neighbor> {
    let mut best: Option<Neighbor> = None;
    for (index, point) in pattern.points.iter().enumerate() {
        if exclude == Some(point) {
            continue;
        }
        let distance = point.distance(query);
        if best.is_none_or(|b| distance < b.distance) {
            best = Some(Neighbor {
                index,
                point: *point,
                distance,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> Window {
        Window::square(Point::ORIGIN, 10.0).unwrap()
    }

    fn pattern(points: &[(f64, f64)]) -> PointPattern {
        let pts: Vec<Point> = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let n = pts.len();
        PointPattern::new(pts, vec![Tag::Tier(0); n], window()).unwrap()
    }

    #[test]
    fn window_validation_and_area() {
        assert!(Window::square(Point::ORIGIN, 0.0).is_err());
        assert!(Window::disc(Point::ORIGIN, -1.0).is_err());
        assert!(Window::square(Point::new(f64::NAN, 0.0), 1.0).is_err());
        assert_eq!(Window::square(Point::ORIGIN, 10.0).unwrap().area(), 400.0);
        let disc = Window::disc(Point::ORIGIN, 2.0).unwrap();
        assert!((disc.area() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(disc.contains(&Point::new(0.0, 2.0)));
        assert!(!disc.contains(&Point::new(1.5, 1.5)));
    }

    #[test]
    fn pattern_rejects_outside_points_and_tag_mismatch() {
        let w = window();
        assert!(PointPattern::new(vec![Point::new(11.0, 0.0)], vec![Tag::Ms], w).is_err());
        assert!(PointPattern::new(vec![Point::ORIGIN], vec![], w).is_err());
    }

    #[test]
    fn zero_intensity_is_empty() {
        let mut s = RandomStream::new(1);
        let p = sample_ppp(0.0, &window(), Tag::Ms, &mut s).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn bad_intensity_rejected() {
        let mut s = RandomStream::new(1);
        assert!(sample_ppp(-1.0, &window(), Tag::Ms, &mut s).is_err());
        assert!(sample_ppp(f64::INFINITY, &window(), Tag::Ms, &mut s).is_err());
        assert!(sample_ppp(f64::NAN, &window(), Tag::Ms, &mut s).is_err());
    }

    #[test]
    fn disc_samples_stay_inside() {
        let w = Window::disc(Point::new(3.0, -1.0), 4.0).unwrap();
        let mut s = RandomStream::new(5);
        let p = sample_ppp(2.0, &w, Tag::Ms, &mut s).unwrap();
        assert!(!p.is_empty());
        assert!(p.points().iter().all(|q| w.contains(q)));
    }

    #[test]
    fn superpose_preserves_tags_and_counts() {
        let w = window();
        let a = PointPattern::new(vec![Point::new(1.0, 0.0)], vec![Tag::Tier(0)], w).unwrap();
        let b = PointPattern::new(
            vec![Point::new(2.0, 0.0), Point::new(3.0, 0.0)],
            vec![Tag::Tier(1); 2],
            w,
        )
        .unwrap();
        let u = superpose(&[a, b]).unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(u.tags(), &[Tag::Tier(0), Tag::Tier(1), Tag::Tier(1)]);

        let e = superpose(&[PointPattern::empty(w), PointPattern::empty(w)]).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn superpose_rejects_mismatched_windows() {
        let a = PointPattern::empty(window());
        let b = PointPattern::empty(Window::square(Point::ORIGIN, 5.0).unwrap());
        assert!(superpose(&[a, b]).is_err());
        assert!(superpose(&[]).is_err());
    }

    #[test]
    fn thin_extremes() {
        let p = pattern(&[(1.0, 0.0), (2.0, 0.0), (3.0, 1.0)]);
        let mut s = RandomStream::new(3);
        assert_eq!(thin(&p, 1.0, &mut s).unwrap(), p);
        assert!(thin(&p, 0.0, &mut s).unwrap().is_empty());
        assert!(thin(&p, 1.5, &mut s).is_err());
        assert!(thin(&p, -0.1, &mut s).is_err());
    }

    #[test]
    fn thin_indices_point_back_into_source() {
        let mut s = RandomStream::new(11);
        let p = sample_ppp(1.0, &window(), Tag::Tier(2), &mut s).unwrap();
        let (t, idx) = thin_indexed(&p, 0.4, &mut s).unwrap();
        assert_eq!(t.len(), idx.len());
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
        for (j, &i) in idx.iter().enumerate() {
            assert_eq!(t.points()[j], p.points()[i]);
        }
    }

    #[test]
    fn scale_examples() {
        let p = pattern(&[(2.0, 0.0)]);
        assert_eq!(scale_pattern(&p, 1.0, &Point::ORIGIN).unwrap(), p);
        let half = scale_pattern(&p, 0.5, &Point::ORIGIN).unwrap();
        assert_eq!(half.points()[0], Point::new(1.0, 0.0));
        assert_eq!(half.window().extent(), 5.0);
        assert!(scale_pattern(&p, 0.0, &Point::ORIGIN).is_err());
        assert!(scale_pattern(&p, -2.0, &Point::ORIGIN).is_err());
    }

    #[test]
    fn nearest_examples() {
        assert!(nearest(&PointPattern::empty(window()), &Point::ORIGIN, None).is_none());
        let p = pattern(&[(1.0, 0.0), (3.0, 0.0)]);
        let n = nearest(&p, &Point::ORIGIN, None).unwrap();
        assert_eq!((n.point, n.distance, n.index), (Point::new(1.0, 0.0), 1.0, 0));
        let n = nearest(&p, &Point::ORIGIN, Some(&Point::new(1.0, 0.0))).unwrap();
        assert_eq!((n.point, n.distance, n.index), (Point::new(3.0, 0.0), 3.0, 1));
        let single = pattern(&[(1.0, 0.0)]);
        assert!(nearest(&single, &Point::ORIGIN, Some(&Point::new(1.0, 0.0))).is_none());
    }

    #[test]
    fn nearest_ties_go_to_lowest_index() {
        let p = pattern(&[(0.0, 2.0), (2.0, 0.0), (-2.0, 0.0)]);
        assert_eq!(nearest(&p, &Point::ORIGIN, None).unwrap().index, 0);
    }
}
