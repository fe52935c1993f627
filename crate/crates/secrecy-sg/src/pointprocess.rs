//! Homogeneous Poisson point processes in disk windows and the
//! nearest-neighbor geometry the secrecy-rate trials are built on.
//!
//! The analysis lives on the infinite plane; simulation truncates it to a
//! disk whose radius is chosen through [`window_radius_for`] so that the
//! nearest relevant point escapes the window only with a caller-chosen
//! probability budget.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;

use crate::{Error, Result};

/// Point counts below this use brute-force nearest-neighbor scans; larger
/// sets get a uniform grid bucket index.
const BRUTE_FORCE_LIMIT: usize = 1024;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Euclidean distance to another point.
    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Distance from the origin.
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Disk-shaped observation window centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskWindow {
    radius: f64,
}

impl DiskWindow {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!(
                "disk window needs a positive finite radius, got {radius}"
            )));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: Point) -> bool {
        p.norm() <= self.radius
    }
}

/// An immutable realization of a point process inside a disk window.
///
/// Safe to share across workers; the nearest-neighbor index is built lazily
/// behind a `OnceLock` and never mutates observable state.
#[derive(Debug)]
pub struct PointSet {
    points: Vec<Point>,
    density: f64,
    window: DiskWindow,
    grid: OnceLock<GridIndex>,
}

impl Clone for PointSet {
    fn clone(&self) -> Self {
        Self {
            points: self.points.clone(),
            density: self.density,
            window: self.window,
            grid: OnceLock::new(),
        }
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
            && self.density == other.density
            && self.window == other.window
    }
}

impl PointSet {
    /// Wrap an explicit point list; every point must lie inside the window.
    pub fn new(points: Vec<Point>, density: f64, window: DiskWindow) -> Result<Self> {
        if !(density > 0.0) {
            return Err(Error::Domain(format!(
                "point-set density must be positive, got {density}"
            )));
        }
        if let Some(p) = points.iter().find(|p| !window.contains(**p)) {
            return Err(Error::Argument(format!(
                "point ({}, {}) lies outside the window of radius {}",
                p.x,
                p.y,
                window.radius()
            )));
        }
        Ok(Self {
            points,
            density,
            window,
            grid: OnceLock::new(),
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn window(&self) -> DiskWindow {
        self.window
    }

    fn grid(&self) -> &GridIndex {
        self.grid
            .get_or_init(|| GridIndex::build(&self.points, self.window.radius()))
    }
}

/// Sample a homogeneous PPP of the given density in a disk window.
///
/// The count is Poisson(density · area); given the count, points are i.i.d.
/// uniform on the disk. Fully deterministic for a fixed generator state.
pub fn sample_ppp<R: Rng + ?Sized>(
    density: f64,
    window: DiskWindow,
    rng: &mut R,
) -> Result<PointSet> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::Domain(format!(
            "PPP density must be positive and finite, got {density}"
        )));
    }
    let count = poisson_count(density * window.area(), rng);
    let mut points = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let r = window.radius() * rng.random::<f64>().sqrt();
        let theta = 2.0 * PI * rng.random::<f64>();
        points.push(Point::new(r * theta.cos(), r * theta.sin()));
    }
    Ok(PointSet {
        points,
        density,
        window,
        grid: OnceLock::new(),
    })
}

/// Poisson draw by Knuth inversion for small means; larger means split in
/// half recursively (sums of independent Poissons stay exactly Poisson), so
/// the tails are exact at any mean.
fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    const INVERSION_LIMIT: f64 = 60.0;
    if mean <= INVERSION_LIMIT {
        let limit = (-mean).exp();
        let mut k = 0u64;
        let mut p = 1.0_f64;
        loop {
            p *= rng.random::<f64>();
            if p <= limit {
                return k;
            }
            k += 1;
        }
    } else {
        let half = mean / 2.0;
        poisson_count(half, rng) + poisson_count(half, rng)
    }
}

/// Window radius r with exp(-π · density · r²) = epsilon: the nearest point
/// of the process lies inside r except with probability epsilon.
pub fn window_radius_for(epsilon: f64, density: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "truncation budget must satisfy 0 < epsilon < 1, got {epsilon}"
        )));
    }
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::Domain(format!(
            "density must be positive and finite, got {density}"
        )));
    }
    Ok((-epsilon.ln() / (PI * density)).sqrt())
}

/// Minimum distance from `origin_point` to any point of `set`, or `None`
/// when the set is empty.
pub fn nearest_distance(origin_point: Point, set: &PointSet) -> Option<f64> {
    nearest_excluding(set, origin_point, None)
}

/// Half the distance from `set[index]` to its nearest co-point: the minimum
/// distance from a generator to its own Voronoi cell boundary. `None` for a
/// singleton set.
pub fn half_nn_distance(set: &PointSet, index: usize) -> Result<Option<f64>> {
    if index >= set.len() {
        return Err(Error::Argument(format!(
            "point index {index} out of range for a set of {} points",
            set.len()
        )));
    }
    Ok(nearest_excluding(set, set.points[index], Some(index)).map(|d| 0.5 * d))
}

fn nearest_excluding(set: &PointSet, from: Point, exclude: Option<usize>) -> Option<f64> {
    let points = &set.points;
    let effective = points.len() - usize::from(exclude.is_some());
    if effective == 0 {
        return None;
    }
    if points.len() < BRUTE_FORCE_LIMIT {
        let mut best = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            if Some(i) == exclude {
                continue;
            }
            best = best.min(from.distance(*p));
        }
        Some(best)
    } else {
        set.grid().nearest(points, from, exclude)
    }
}

/// Hit-or-miss estimate of the area of the origin's Voronoi cell in the
/// tessellation generated by `eves ∪ {origin}`.
///
/// A probe y belongs to the cell iff ‖y‖ ≤ ‖y − e‖ for every e. Unbiased
/// provided the probe window contains the whole cell, which the caller
/// guarantees by sizing it through [`window_radius_for`] with margin.
pub fn estimate_origin_cell_area<R: Rng + ?Sized>(
    eves: &PointSet,
    probe_window: DiskWindow,
    n_probes: u64,
    rng: &mut R,
) -> Result<f64> {
    if n_probes == 0 {
        return Err(Error::Argument(
            "cell-area estimation needs at least one probe".into(),
        ));
    }
    let mut hits = 0u64;
    for _ in 0..n_probes {
        let r = probe_window.radius() * rng.random::<f64>().sqrt();
        let theta = 2.0 * PI * rng.random::<f64>();
        let probe = Point::new(r * theta.cos(), r * theta.sin());
        let inside = match nearest_distance(probe, eves) {
            Some(d) => probe.norm() <= d,
            None => true,
        };
        if inside {
            hits += 1;
        }
    }
    Ok(hits as f64 / n_probes as f64 * probe_window.area())
}

/// Uniform grid bucket index over the window's bounding square.
#[derive(Debug)]
struct GridIndex {
    cell: f64,
    side: usize,
    min: f64,
    buckets: Vec<Vec<u32>>,
}

impl GridIndex {
    fn build(points: &[Point], window_radius: f64) -> Self {
        // Aim for ~2 points per occupied bucket.
        let side = ((points.len() as f64 / 2.0).sqrt().ceil() as usize).max(1);
        let min = -window_radius;
        let cell = 2.0 * window_radius / side as f64;
        let mut buckets = vec![Vec::new(); side * side];
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = Self::cell_of(p, min, cell, side);
            buckets[cy * side + cx].push(i as u32);
        }
        Self {
            cell,
            side,
            min,
            buckets,
        }
    }

    fn cell_of(p: &Point, min: f64, cell: f64, side: usize) -> (usize, usize) {
        let clamp = |v: f64| -> usize {
            if v < 0.0 {
                0
            } else {
                (v as usize).min(side - 1)
            }
        };
        (clamp((p.x - min) / cell), clamp((p.y - min) / cell))
    }

    /// Expanding-ring nearest-neighbor search. The query point may lie
    /// outside the indexed window.
    fn nearest(&self, points: &[Point], from: Point, exclude: Option<usize>) -> Option<f64> {
        let side = self.side as i64;
        let ci = ((from.x - self.min) / self.cell).floor() as i64;
        let cj = ((from.y - self.min) / self.cell).floor() as i64;
        let mut best = f64::INFINITY;

        // Rings can start far outside the grid for exterior query points.
        let max_ring = {
            let di = ci.max(side - 1 - ci).abs().max(ci.abs());
            let dj = cj.max(side - 1 - cj).abs().max(cj.abs());
            di.max(dj) + side + 1
        };
        for ring in 0..=max_ring {
            // Any point in a cell at Chebyshev ring k is at least
            // (k-1)·cell away from the query point.
            if best.is_finite() && (ring - 1) as f64 * self.cell > best {
                break;
            }
            let mut visit = |i: i64, j: i64| {
                if i < 0 || j < 0 || i >= side || j >= side {
                    return;
                }
                for &idx in &self.buckets[j as usize * self.side + i as usize] {
                    if Some(idx as usize) == exclude {
                        continue;
                    }
                    best = best.min(from.distance(points[idx as usize]));
                }
            };
            if ring == 0 {
                visit(ci, cj);
            } else {
                for i in (ci - ring)..=(ci + ring) {
                    visit(i, cj - ring);
                    visit(i, cj + ring);
                }
                for j in (cj - ring + 1)..(cj + ring) {
                    visit(ci - ring, j);
                    visit(ci + ring, j);
                }
            }
        }
        best.is_finite().then_some(best)
    }
}
