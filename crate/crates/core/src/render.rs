//! Simplex maps of three-player power distributions.
//!
//! A sweep computes the power vector of every sorted grid point for one
//! scoring rule. Rendering maps each pixel of an equilateral triangle to
//! barycentric weights, sorts them, rounds to the nearest grid point and
//! colors it from that point's power. Sorting first makes the picture
//! invariant under all six relabelings of the players.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::equivalence::s_scores;
use crate::error::{Error, Result};
use crate::grid::WeightGrid;
use crate::model::{PowerVector, ProfileSpace, RuleMapping};
use crate::power::mapping_power;
use crate::rational::{file_tag, format_fraction, round_half_away, Rational};
use crate::scoring::IntegerScorer;

/// Smallest accepted image width.
pub const MIN_IMAGE_SIZE: u32 = 64;

/// Background outside the triangle.
pub const BACKGROUND: [u8; 3] = [255, 255, 255];

/// Extremes of the sweep used by the color transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremes {
    pub max_pbi2: Rational,
    pub max_pbi3: Rational,
    pub min_pbi1: Rational,
}

impl Extremes {
    pub fn of<'a>(powers: impl IntoIterator<Item = &'a PowerVector>) -> Option<Extremes> {
        let mut it = powers.into_iter();
        let first = it.next()?;
        let mut e = Extremes {
            max_pbi2: first.value(1),
            max_pbi3: first.value(2),
            min_pbi1: first.value(0),
        };
        for p in it {
            let (v1, v2, v3) = (p.value(0), p.value(1), p.value(2));
            if v2 > e.max_pbi2 {
                e.max_pbi2 = v2;
            }
            if v3 > e.max_pbi3 {
                e.max_pbi3 = v3;
            }
            if v1 < e.min_pbi1 {
                e.min_pbi1 = v1;
            }
        }
        Some(e)
    }
}

/// Power vector of every sorted grid point for one value of `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepResult {
    s: Rational,
    grid: WeightGrid,
    /// Distinct power vectors, in order of first occurrence on the grid.
    powers: Vec<PowerVector>,
    /// Grid index to position in `powers`.
    point_power: Vec<u32>,
    extremes: Extremes,
}

impl SweepResult {
    pub fn from_parts(
        s: Rational,
        denominator: u32,
        powers: Vec<PowerVector>,
        point_power: Vec<u32>,
    ) -> Result<Self> {
        let grid = WeightGrid::new(denominator)?;
        if point_power.len() != grid.len() {
            return Err(Error::Shape(format!(
                "sweep has {} points, the grid has {}",
                point_power.len(),
                grid.len()
            )));
        }
        if point_power.iter().any(|&i| i as usize >= powers.len()) {
            return Err(Error::Invalid(
                "sweep refers to a missing power vector".into(),
            ));
        }
        if powers.iter().any(|p| p.len() != 3) {
            return Err(Error::Shape(
                "sweep power vectors must have three entries".into(),
            ));
        }
        let extremes = Extremes::of(&powers).ok_or_else(|| Error::Invalid("empty sweep".into()))?;
        Ok(SweepResult {
            s,
            grid,
            powers,
            point_power,
            extremes,
        })
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn denominator(&self) -> u32 {
        self.grid.denominator()
    }

    pub fn grid(&self) -> &WeightGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.point_power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point_power.is_empty()
    }

    pub fn powers(&self) -> &[PowerVector] {
        &self.powers
    }

    pub fn point_power_indices(&self) -> &[u32] {
        &self.point_power
    }

    pub fn extremes(&self) -> &Extremes {
        &self.extremes
    }

    pub fn power_at_index(&self, index: usize) -> &PowerVector {
        &self.powers[self.point_power[index] as usize]
    }

    /// Power at a sorted grid point.
    pub fn power_at(&self, point: [u32; 3]) -> Option<&PowerVector> {
        self.grid.index_of(point).map(|i| self.power_at_index(i))
    }

    /// `(point, power)` for every grid point in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = ([u32; 3], &PowerVector)> {
        self.grid
            .points()
            .zip(&self.point_power)
            .map(|(p, &i)| (p, &self.powers[i as usize]))
    }
}

/// Computes the power of every sorted grid point. Winner tables are built
/// per point; power is computed once per distinct table.
pub fn sweep(s: &Rational, denominator: u32) -> Result<SweepResult> {
    let grid = WeightGrid::new(denominator)?;
    let scores = s_scores(s)?;
    let space = ProfileSpace::new(3, 3)?;

    // Per row: distinct tables in first-seen order and one local id per point.
    let rows: Vec<(Vec<Vec<u8>>, Vec<u32>)> = grid
        .rows()
        .into_par_iter()
        .map(|row| {
            let mut tables: Vec<Vec<u8>> = Vec::new();
            let mut seen: HashMap<Vec<u8>, u32> = HashMap::new();
            let mut ids = Vec::new();
            for (_, point) in grid.row_points(row) {
                let weights = point.iter().map(|&w| w as i64).collect();
                let winners = IntegerScorer::from_parts(weights, scores.clone())
                    .expect("grid weights are small")
                    .tabulate(&space);
                let id = match seen.get(&winners) {
                    Some(&id) => id,
                    None => {
                        let id = tables.len() as u32;
                        seen.insert(winners.clone(), id);
                        tables.push(winners);
                        id
                    }
                };
                ids.push(id);
            }
            (tables, ids)
        })
        .collect();

    let mut table_ids: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut tables: Vec<Vec<u8>> = Vec::new();
    let mut point_table: Vec<u32> = Vec::with_capacity(grid.len());
    for (row_tables, ids) in rows {
        let remap: Vec<u32> = row_tables
            .into_iter()
            .map(|t| {
                *table_ids.entry(t.clone()).or_insert_with(|| {
                    tables.push(t);
                    (tables.len() - 1) as u32
                })
            })
            .collect();
        point_table.extend(ids.into_iter().map(|id| remap[id as usize]));
    }

    let table_powers: Vec<PowerVector> = tables
        .into_par_iter()
        .map(|t| mapping_power(&RuleMapping::from_parts_unchecked(3, 3, t)))
        .collect();

    let mut powers: Vec<PowerVector> = Vec::new();
    let mut power_ids: HashMap<PowerVector, u32> = HashMap::new();
    let mut table_to_power = vec![u32::MAX; table_powers.len()];
    let point_power = point_table
        .into_iter()
        .map(|t| {
            let slot = &mut table_to_power[t as usize];
            if *slot == u32::MAX {
                let pv = &table_powers[t as usize];
                *slot = *power_ids.entry(pv.clone()).or_insert_with(|| {
                    powers.push(pv.clone());
                    (powers.len() - 1) as u32
                });
            }
            *slot
        })
        .collect();

    SweepResult::from_parts(s.clone(), denominator, powers, point_power)
}

/// Exact RGB intensities in `[0, 1]` for a power vector of sorted weights.
///
/// `R = min(1, 2 PBI3 / max PBI3)`, `G = PBI2 / max PBI2`,
/// `B = (PBI1 - min PBI1) / (1 - min PBI1)`. A zero maximum gives a zero
/// channel; `min PBI1 = 1` gives `B = 1`.
pub fn color_of(p: &PowerVector, e: &Extremes) -> [Rational; 3] {
    let zero = Rational::zero();
    let one = Rational::one();
    let clamp = |x: Rational| {
        if x < zero {
            zero.clone()
        } else if x > one {
            one.clone()
        } else {
            x
        }
    };
    let r = if e.max_pbi3.is_zero() {
        zero.clone()
    } else {
        clamp(Rational::from_integer(2.into()) * p.value(2) / &e.max_pbi3)
    };
    let g = if e.max_pbi2.is_zero() {
        zero.clone()
    } else {
        clamp(p.value(1) / &e.max_pbi2)
    };
    let b = if e.min_pbi1 == one {
        one.clone()
    } else {
        clamp((p.value(0) - &e.min_pbi1) / (&one - &e.min_pbi1))
    };
    [r, g, b]
}

/// `round(255 * x)` per channel, half away from zero.
pub fn to_bytes(rgb: &[Rational; 3]) -> [u8; 3] {
    let scale = Rational::from_integer(BigInt::from(255));
    rgb.clone().map(|x| {
        round_half_away(&(x * &scale))
            .to_u8()
            .expect("intensity in [0, 1]")
    })
}

/// Rendering options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    /// Image width in pixels.
    pub size: u32,
    /// Paint pixels within this many pixels of the lines `w1 = w2`,
    /// `w2 = w3` or `w3 = 0` with the color of the line itself.
    pub enlarge_thin_classes: Option<u32>,
}

impl RenderOptions {
    pub fn new(size: u32) -> Self {
        RenderOptions {
            size,
            enlarge_thin_classes: None,
        }
    }
}

pub const DEFAULT_ENLARGE_RADIUS: u32 = 2;

/// Triangle placement: player 1's vertex on top, player 2 bottom left,
/// player 3 bottom right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexLayout {
    pub width: u32,
    pub height: u32,
    side: f64,
    tri_height: f64,
    bottom: f64,
    center_x: f64,
}

impl SimplexLayout {
    pub fn new(size: u32) -> Self {
        let margin = (size / 50) as f64;
        let side = size as f64 - 2.0 * margin;
        let tri_height = side * 3f64.sqrt() / 2.0;
        let height = (tri_height + 2.0 * margin).ceil() as u32;
        SimplexLayout {
            width: size,
            height,
            side,
            tri_height,
            bottom: margin + tri_height,
            center_x: size as f64 / 2.0,
        }
    }

    /// Barycentric coordinates of a pixel center, or `None` outside the triangle.
    pub fn barycentric(&self, x: u32, y: u32) -> Option<[f64; 3]> {
        let px = x as f64 + 0.5;
        let py = y as f64 + 0.5;
        let b0 = (self.bottom - py) / self.tri_height;
        let u = (px - self.center_x) / self.side;
        let half = (1.0 - b0) / 2.0;
        let b = [b0, half - u, half + u];
        b.iter().all(|&v| v >= 0.0).then_some(b)
    }

    /// Pixel whose center is nearest to a barycentric point.
    pub fn pixel_of(&self, b: [f64; 3]) -> (i64, i64) {
        let py = self.bottom - b[0] * self.tri_height;
        let px = self.center_x + (b[2] - b[1]) / 2.0 * self.side;
        ((px - 0.5).round() as i64, (py - 0.5).round() as i64)
    }

    fn line_distances(&self, sorted: [f64; 3]) -> (f64, f64, f64) {
        (
            (sorted[0] - sorted[1]) * self.side / 2.0,
            (sorted[1] - sorted[2]) * self.side / 2.0,
            sorted[2] * self.tri_height,
        )
    }
}

fn sort_desc(mut b: [f64; 3]) -> [f64; 3] {
    b.sort_unstable_by(|a, c| c.total_cmp(a));
    b
}

/// Nearest sorted grid point to barycentric weights: each coordinate is
/// rounded to a multiple of `1/D` and the sum is repaired by largest
/// remainder. Depends only on the multiset of coordinates.
pub fn nearest_grid_point(b: [f64; 3], denominator: u32) -> [u32; 3] {
    let total: f64 = b.iter().sum();
    let sorted = sort_desc(b.map(|v| v.max(0.0) / total));
    let d = denominator as f64;
    let scaled = sorted.map(|v| v * d);
    let mut rounded = scaled.map(|v| v.round() as i64);
    let mut diff = denominator as i64 - rounded.iter().sum::<i64>();
    while diff != 0 {
        // adjust the coordinate whose rounding error points the right way most
        let pick = (0..3)
            .filter(|&k| diff < 0 || rounded[k] < denominator as i64)
            .filter(|&k| diff > 0 || rounded[k] > 0)
            .max_by(|&i, &j| {
                let ei = (scaled[i] - rounded[i] as f64) * diff.signum() as f64;
                let ej = (scaled[j] - rounded[j] as f64) * diff.signum() as f64;
                ei.total_cmp(&ej).then(j.cmp(&i))
            })
            .expect("some coordinate can move");
        rounded[pick] += diff.signum();
        diff -= diff.signum();
    }
    crate::grid::sorted_desc(rounded.map(|v| v as u32))
}

fn snap_to_lines(
    layout: &SimplexLayout,
    b: [f64; 3],
    denominator: u32,
    radius: f64,
) -> Option<[u32; 3]> {
    let total: f64 = b.iter().sum();
    let sb = sort_desc(b.map(|v| v.max(0.0) / total));
    let (d12, d23, d3) = layout.line_distances(sb);
    let (n12, n23, n3) = (d12 <= radius, d23 <= radius, d3 <= radius);
    let d = denominator as i64;
    let point = |w: [i64; 3]| crate::grid::sorted_desc(w.map(|v| v.clamp(0, d) as u32));
    match (n12, n23, n3) {
        (false, false, false) => None,
        (true, true, _) if d % 3 == 0 => Some(point([d / 3, d / 3, d / 3])),
        (true, true, _) => None,
        (true, _, true) if d % 2 == 0 => Some(point([d / 2, d / 2, 0])),
        (_, true, true) => Some(point([d, 0, 0])),
        (true, _, _) => {
            // w1 = w2 needs D - w3 even
            let target = sb[2] * denominator as f64;
            let mut w3 = target.round() as i64;
            if (d - w3) % 2 != 0 {
                w3 = if (w3 as f64) <= target {
                    w3 + 1
                } else {
                    w3 - 1
                };
            }
            let lo = d % 2;
            let hi = if (d - d / 3) % 2 == 0 {
                d / 3
            } else {
                d / 3 - 1
            };
            (lo <= hi).then(|| {
                let w3 = w3.clamp(lo, hi);
                point([(d - w3) / 2, (d - w3) / 2, w3])
            })
        }
        (_, true, _) => {
            let w2 = (((sb[1] + sb[2]) / 2.0) * denominator as f64).round() as i64;
            let w2 = w2.clamp(0, d / 3);
            Some(point([d - 2 * w2, w2, w2]))
        }
        (_, _, true) => {
            let w1 = ((sb[0] + sb[2] / 2.0) * denominator as f64).round() as i64;
            let w1 = w1.clamp((d + 1) / 2, d);
            Some(point([w1, d - w1, 0]))
        }
    }
}

/// An 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexImage {
    pub width: u32,
    pub height: u32,
    pub background: [u8; 3],
    pixels: Vec<u8>,
}

impl SimplexImage {
    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = ((y * self.width + x) * 3) as usize;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn raw(&self) -> &[u8] {
        &self.pixels
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        {
            let mut encoder = png::Encoder::new(&mut out, self.width, self.height);
            encoder.set_color(png::ColorType::Rgb);
            encoder.set_depth(png::BitDepth::Eight);
            let mut writer = encoder
                .write_header()
                .map_err(|e| Error::Encoding(e.to_string()))?;
            writer
                .write_image_data(&self.pixels)
                .map_err(|e| Error::Encoding(e.to_string()))?;
        }
        Ok(out)
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let bytes = self.encode_png()?;
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}

/// Colors weights in the simplex from a finished sweep.
pub struct Painter<'a> {
    sweep: &'a SweepResult,
    layout: SimplexLayout,
    enlarge: Option<f64>,
    /// Byte color per distinct power vector of the sweep.
    palette: Vec<[u8; 3]>,
}

impl<'a> Painter<'a> {
    pub fn new(sweep: &'a SweepResult, options: &RenderOptions) -> Result<Self> {
        if options.size < MIN_IMAGE_SIZE {
            return Err(Error::Invalid(format!(
                "image size {} is below the minimum of {MIN_IMAGE_SIZE}",
                options.size
            )));
        }
        let palette = sweep
            .powers()
            .iter()
            .map(|p| to_bytes(&color_of(p, sweep.extremes())))
            .collect();
        Ok(Painter {
            sweep,
            layout: SimplexLayout::new(options.size),
            enlarge: options.enlarge_thin_classes.map(f64::from),
            palette,
        })
    }

    pub fn layout(&self) -> &SimplexLayout {
        &self.layout
    }

    /// Grid point a barycentric position is painted from.
    pub fn grid_point(&self, b: [f64; 3]) -> [u32; 3] {
        let d = self.sweep.denominator();
        self.enlarge
            .and_then(|r| snap_to_lines(&self.layout, b, d, r))
            .unwrap_or_else(|| nearest_grid_point(b, d))
    }

    pub fn color_at(&self, b: [f64; 3]) -> [u8; 3] {
        let index = self
            .sweep
            .grid()
            .index_of(self.grid_point(b))
            .expect("rounding yields a sorted grid point");
        self.palette[self.sweep.point_power_indices()[index] as usize]
    }

    pub fn paint(&self) -> SimplexImage {
        let SimplexLayout { width, height, .. } = self.layout;
        let rows: Vec<Vec<u8>> = (0..height)
            .into_par_iter()
            .map(|y| {
                let mut row = Vec::with_capacity(width as usize * 3);
                for x in 0..width {
                    let c = match self.layout.barycentric(x, y) {
                        Some(b) => self.color_at(b),
                        None => BACKGROUND,
                    };
                    row.extend_from_slice(&c);
                }
                row
            })
            .collect();
        SimplexImage {
            width,
            height,
            background: BACKGROUND,
            pixels: rows.concat(),
        }
    }
}

/// Renders the map for `s` on grid denominator `D` from a matching sweep.
pub fn render_map(
    sweep: &SweepResult,
    s: &Rational,
    denominator: u32,
    options: &RenderOptions,
) -> Result<SimplexImage> {
    if sweep.s() != s || sweep.denominator() != denominator {
        return Err(Error::Dependency(format!(
            "no sweep for s={} D={denominator} (have s={} D={})",
            format_fraction(s),
            format_fraction(sweep.s()),
            sweep.denominator()
        )));
    }
    Ok(Painter::new(sweep, options)?.paint())
}

/// Supplies sweeps, possibly from a cache.
pub trait SweepSource {
    fn sweep(&self, s: &Rational, denominator: u32) -> Result<SweepResult>;
}

/// Computes every sweep from scratch.
pub struct Compute;

impl SweepSource for Compute {
    fn sweep(&self, s: &Rational, denominator: u32) -> Result<SweepResult> {
        sweep(s, denominator)
    }
}

pub fn image_file_name(s: &Rational) -> String {
    format!("simplex_s{}.png", file_tag(s))
}

pub const MANIFEST_NAME: &str = "manifest.csv";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesOutput {
    pub images: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Manifest line for one panel.
pub fn manifest_row(s: &Rational, e: &Extremes) -> String {
    format!(
        "{},{},{},{}",
        format_fraction(s),
        format_fraction(&e.max_pbi2),
        format_fraction(&e.max_pbi3),
        format_fraction(&e.min_pbi1)
    )
}

/// One PNG per `s` plus `manifest.csv` with the extremes used per panel.
pub fn render_series(
    s_list: &[Rational],
    denominator: u32,
    options: &RenderOptions,
    out_dir: &Path,
    source: &dyn SweepSource,
) -> Result<SeriesOutput> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut manifest = String::from("s,maxPBI2,maxPBI3,minPBI1\n");
    let mut images = Vec::new();
    for s in s_list {
        let sw = source.sweep(s, denominator)?;
        let image = render_map(&sw, s, denominator, options)?;
        let path = out_dir.join(image_file_name(s));
        image.write_png(&path)?;
        images.push(path);
        manifest.push_str(&manifest_row(s, sw.extremes()));
        manifest.push('\n');
    }
    let manifest_path = out_dir.join(MANIFEST_NAME);
    let mut f = std::fs::File::create(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    f.write_all(manifest.as_bytes())
        .map_err(|e| Error::io(&manifest_path, e))?;
    Ok(SeriesOutput {
        images,
        manifest: manifest_path,
    })
}
