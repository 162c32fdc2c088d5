//! Lattice definitions, strip geometry and the per-site move stream the
//! sweep engine consumes.
//!
//! All three lattices are swept with the same engine. The honeycomb lattice
//! is embedded as a brick wall: every vertex keeps degree 3, horizontal
//! edges run along every row, and vertical edges appear only where
//! `(col + row)` is even, so columns alternate in phase. A strip of width
//! `T` has rows `0..=T`; the walk's origin hangs below row 0 (the origin
//! boundary) and the weighted surface is row `T`.
//!
//! Boundary slot layout while processing site `(c, r)`:
//!
//! * square / honeycomb: `[new_0 .. new_{r-1}] [kink?] [old_r .. old_T]`
//! * triangular:         `[new/diag pairs 0..r-1] [kink] [diag_r old_r ..]`
//!
//! Each site move consumes a consecutive run of slots and produces a
//! consecutive run at the same index, so a signature update is a single
//! splice.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::{AReal, Dd, Precision};

/// Maximum number of boundary slots a signature can encode.
pub const MAX_SLOTS: usize = 28;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeKind {
    Honeycomb,
    Square,
    Triangular,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Honeycomb => "honeycomb",
            LatticeKind::Square => "square",
            LatticeKind::Triangular => "triangular",
        }
    }

    /// Largest strip width the signature encoding supports.
    pub fn max_width(self) -> usize {
        match self {
            // square/honeycomb: T+2 slots mid-column; triangular: 2T+3.
            LatticeKind::Honeycomb | LatticeKind::Square => MAX_SLOTS - 2,
            LatticeKind::Triangular => (MAX_SLOTS - 3) / 2,
        }
    }

    /// Base of the exponential state-count growth, for cost estimates.
    pub fn state_growth_base(self) -> f64 {
        match self {
            LatticeKind::Honeycomb | LatticeKind::Square => 3.0,
            LatticeKind::Triangular => 4.0,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightingMode {
    /// Weight on the surface sites carrying an outward dangling edge
    /// (honeycomb only; these are the alternating surface sites).
    AlternateSite,
    /// Weight on every surface site.
    AllSite,
    /// Weight on every edge lying within the surface row.
    Edge,
}

impl WeightingMode {
    pub fn name(self) -> &'static str {
        match self {
            WeightingMode::AlternateSite => "alternate-site",
            WeightingMode::AllSite => "all-site",
            WeightingMode::Edge => "edge",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("alternate-site weighting is defined only on the honeycomb lattice")]
    AlternateSiteUnsupported,
    #[error("width {width} exceeds the engine limit {max} for the {lattice} lattice")]
    WidthTooLarge { width: usize, max: usize, lattice: &'static str },
    #[error("invalid strip parameters: {0}")]
    InvalidParams(&'static str),
}

/// Everything a strip build needs: lattice, width, sweep length, weighting,
/// truncation degree and the step fugacity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StripSpec {
    pub lattice: LatticeKind,
    pub width_t: usize,
    pub half_length: usize,
    pub mode: WeightingMode,
    pub trunc_m: usize,
    pub x: Dd,
}

impl StripSpec {
    pub fn new(
        lattice: LatticeKind,
        width_t: usize,
        half_length: usize,
        mode: WeightingMode,
        trunc_m: usize,
        x: Dd,
    ) -> Result<StripSpec, LatticeError> {
        if mode == WeightingMode::AlternateSite && lattice != LatticeKind::Honeycomb {
            return Err(LatticeError::AlternateSiteUnsupported);
        }
        if width_t > lattice.max_width() {
            return Err(LatticeError::WidthTooLarge {
                width: width_t,
                max: lattice.max_width(),
                lattice: lattice.name(),
            });
        }
        if trunc_m < 1 {
            return Err(LatticeError::InvalidParams("truncation degree must be >= 1"));
        }
        if half_length < 1 {
            return Err(LatticeError::InvalidParams("half-length must be >= 1"));
        }
        if !(x.to_f64() > 0.0) || !x.is_finite() {
            return Err(LatticeError::InvalidParams("step fugacity must be positive"));
        }
        Ok(StripSpec { lattice, width_t, half_length, mode, trunc_m, x })
    }

    /// Critical-point spec with the usual defaults.
    pub fn at_critical(
        lattice: LatticeKind,
        width_t: usize,
        half_length: usize,
        mode: WeightingMode,
        trunc_m: usize,
    ) -> Result<StripSpec, LatticeError> {
        StripSpec::new(lattice, width_t, half_length, mode, trunc_m, critical_x_dd(lattice))
    }
}

/// Critical step fugacity at analysis precision.
///
/// The honeycomb value is the closed form `1/sqrt(2+sqrt(2))`; square and
/// triangular are the series estimates, zero-padded past the quoted digits.
pub fn critical_x(lattice: LatticeKind, p: Precision) -> AReal {
    match lattice {
        LatticeKind::Honeycomb => {
            let two = AReal::from_i64(2, p);
            AReal::from_i64(1, p).div(&two.add(&two.sqrt()).sqrt())
        }
        LatticeKind::Square => AReal::parse("0.37905227776", p).unwrap(),
        LatticeKind::Triangular => AReal::parse("0.2409175745", p).unwrap(),
    }
}

pub fn critical_x_dd(lattice: LatticeKind) -> Dd {
    critical_x(lattice, Precision::from_digits(50)).to_dd()
}

/// Upper bound `mu^2` for the crossing bracket: exact for honeycomb,
/// `1/x_c^2` for the others.
pub fn mu_squared(lattice: LatticeKind, p: Precision) -> AReal {
    match lattice {
        LatticeKind::Honeycomb => {
            let two = AReal::from_i64(2, p);
            two.add(&two.sqrt())
        }
        _ => AReal::from_i64(1, p).div(&critical_x(lattice, p).powi(2)),
    }
}

/// Boundary classes a walk end can touch.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DangleKind {
    /// The fixed origin mid-edge `a` on the origin boundary.
    Origin,
    /// Any other origin-boundary mid-edge.
    Alpha,
    /// A weighted-boundary mid-edge.
    Beta,
    /// An open strip end (patch mode only).
    Epsilon,
}

/// Weight quantum of one move: new edges and new surface contacts.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct CellEvent {
    pub new_edges: u8,
    pub new_contacts: u8,
    pub on_weighted_boundary: bool,
}

/// One site of the sweep: which boundary slots it consumes/produces, which
/// dangles it offers and how it is weighted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteMove {
    pub col: u32,
    pub row: u32,
    pub consume_at: u8,
    pub n_consume: u8,
    pub n_produce: u8,
    pub dangles: [Option<DangleKind>; 2],
    /// Visiting this site adds one contact (site-weighted modes).
    pub site_contact: bool,
    /// Occupying produced slot `i` adds one contact (edge mode).
    pub produced_surface: [bool; 3],
    /// Boundary slot count before this move (engine consistency checks).
    pub slots_before: u8,
}

/// Sweep-shaping options beyond the strip spec itself.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Offer weighted-boundary dangles (needed for B-series and patches).
    pub beta_dangles: bool,
    /// Offer open-end dangles at the first and last column (patch mode).
    pub epsilon_ends: bool,
    /// Override the total number of columns (default `2 * half_length + 1`).
    pub total_columns: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { beta_dangles: false, epsilon_ends: false, total_columns: None }
    }
}

/// Column/row extent and origin placement of a sweep.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SweepRegion {
    pub columns: usize,
    pub rows: usize,
    pub origin_col: usize,
    pub initial_slots: usize,
}

pub fn sweep_region(spec: &StripSpec, opts: &SweepOptions) -> SweepRegion {
    let columns = opts.total_columns.unwrap_or(2 * spec.half_length + 1);
    let mid = columns / 2;
    let origin_col = match spec.lattice {
        // The origin must sit on a column with a downward dangle.
        LatticeKind::Honeycomb => {
            if mid % 2 == 1 {
                mid
            } else {
                mid + 1
            }
        }
        _ => mid,
    };
    let t = spec.width_t;
    let initial_slots = match spec.lattice {
        LatticeKind::Triangular => 2 * t + 1,
        _ => t + 1,
    };
    SweepRegion { columns, rows: t + 1, origin_col, initial_slots }
}

/// The deterministic site-by-site move stream for a whole sweep.
///
/// Sites are emitted column-major, bottom row first.
pub fn column_stream(spec: &StripSpec, opts: &SweepOptions) -> Vec<SiteMove> {
    let region = sweep_region(spec, opts);
    let t = spec.width_t;
    let mut moves = Vec::with_capacity(region.columns * region.rows);
    for c in 0..region.columns {
        for r in 0..=t {
            moves.push(site_move(spec, opts, &region, c, r));
        }
    }
    moves
}

fn site_move(
    spec: &StripSpec,
    opts: &SweepOptions,
    region: &SweepRegion,
    c: usize,
    r: usize,
) -> SiteMove {
    let t = spec.width_t;
    let (consume_at, n_consume, n_produce, slots_before) = match spec.lattice {
        LatticeKind::Square => {
            let slots = if r == 0 { t + 1 } else { t + 2 };
            let (at, nc) = if r == 0 { (0, 1) } else { (r, 2) };
            let np = if r < t { 2 } else { 1 };
            (at, nc, np, slots)
        }
        LatticeKind::Honeycomb => {
            let kink_in = r > 0 && (c + r) % 2 == 1;
            let kink_out = r < t && (c + r) % 2 == 0;
            let slots = t + 1 + kink_in as usize;
            (r, 1 + kink_in as usize, 1 + kink_out as usize, slots)
        }
        LatticeKind::Triangular => {
            let slots = if r == 0 { 2 * t + 1 } else { 2 * t + 3 };
            let (at, nc) = if r == 0 { (0, 1) } else { (2 * r, 3) };
            let np = if r < t { 3 } else { 1 };
            (at, nc, np, slots)
        }
    };

    let mut dangles = [None, None];
    let origin_dangle = match spec.lattice {
        LatticeKind::Honeycomb => r == 0 && c % 2 == 1,
        _ => r == 0,
    };
    if origin_dangle {
        dangles[0] = Some(if c == region.origin_col { DangleKind::Origin } else { DangleKind::Alpha });
    }
    let beta_dangle = match spec.lattice {
        LatticeKind::Honeycomb => r == t && (c + t) % 2 == 0,
        _ => r == t,
    };
    if beta_dangle && opts.beta_dangles {
        let slot = if dangles[0].is_none() { 0 } else { 1 };
        dangles[slot] = Some(DangleKind::Beta);
    }
    if opts.epsilon_ends && (c == 0 || c == region.columns - 1) {
        let slot = if dangles[0].is_none() { 0 } else { 1 };
        debug_assert!(dangles[slot].is_none(), "more than two dangles at one site");
        dangles[slot] = Some(DangleKind::Epsilon);
    }

    let site_contact = match spec.mode {
        WeightingMode::AllSite => r == t,
        WeightingMode::AlternateSite => r == t && (c + t) % 2 == 0,
        WeightingMode::Edge => false,
    };
    let mut produced_surface = [false; 3];
    if spec.mode == WeightingMode::Edge && r == t && n_produce >= 1 {
        // The first produced slot is always the new surface-row horizontal.
        produced_surface[0] = true;
    }

    SiteMove {
        col: c as u32,
        row: r as u32,
        consume_at: consume_at as u8,
        n_consume: n_consume as u8,
        n_produce: n_produce as u8,
        dangles,
        site_contact,
        produced_surface,
        slots_before: slots_before as u8,
    }
}
