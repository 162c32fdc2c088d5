//! The transfer-matrix engine: strip and patch series builds.
//!
//! `build_a` produces the walk generating function A_T(x, y) for a strip:
//! the weighted sum over self-avoiding walks that start at the fixed origin
//! mid-edge below the strip and return to the origin boundary, each walk
//! contributing x^steps y^contacts. With `collect_b` (honeycomb) the B
//! series (walks ending on the weighted boundary) is collected too, and in
//! patch mode the E series (walks leaving through the open strip ends).

mod checkpoint;
pub mod sig;
mod sweep;

pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use sweep::{BuildOptions, Engine, EngineError, IntCtx, IntTable, NumCtx, NumPoly, SweepPayload, SweepStats};

use crate::lattice::StripSpec;
use crate::oracle::CountTable;
use crate::poly::ContactPolynomial;
use crate::real::{Coeff, Dd};

/// Outcome of a strip (or patch) build.
pub struct SeriesResult {
    pub spec: StripSpec,
    /// Walks returning to the origin boundary.
    pub a: ContactPolynomial<Dd>,
    /// Walks ending on the weighted boundary, when collected.
    pub b: Option<ContactPolynomial<Dd>>,
    /// Walks leaving through the open ends, when collected (patch mode).
    pub e: Option<ContactPolynomial<Dd>>,
    pub stats: SweepStats,
}

/// A numeric engine ready to run, stepping one column at a time.
pub type StripEngine<C> = Engine<NumPoly<C>>;

pub fn numeric_engine<C: Coeff>(
    spec: &StripSpec,
    opts: BuildOptions,
) -> Result<StripEngine<C>, EngineError> {
    let ctx = NumCtx::<C>::new(spec.x, spec.trunc_m);
    Engine::new(spec, opts, ctx)
}

/// Convert a finished engine into series results.
///
/// Every contributing walk carries two boundary half-steps in addition to
/// its interior edges, so the accumulated sums gain one factor of x here.
pub fn finish_numeric<C: Coeff>(engine: StripEngine<C>) -> SeriesResult {
    let stats = engine.stats();
    let spec = engine.spec.clone();
    let x = C::from_dd(spec.x);
    let to_poly = |p: &NumPoly<C>| -> ContactPolynomial<Dd> {
        let coeffs: Vec<Dd> = p.0.iter().map(|&c| c.mul(x).to_dd()).collect();
        ContactPolynomial::from_coeffs(coeffs, spec.trunc_m)
    };
    let a = to_poly(&engine.results[0]);
    let b = engine.opts.collect_b.then(|| to_poly(&engine.results[1]));
    let e = engine.opts.open_ends.then(|| to_poly(&engine.results[2]));
    SeriesResult { spec, a, b, e, stats }
}

/// Build A_T(x, y) for a strip at the spec's parameters.
pub fn build_a(spec: &StripSpec) -> Result<SeriesResult, EngineError> {
    build_with_options::<Dd>(spec, BuildOptions::default())
}

/// Build with explicit options and working scalar.
pub fn build_with_options<C: Coeff>(
    spec: &StripSpec,
    opts: BuildOptions,
) -> Result<SeriesResult, EngineError> {
    let mut engine = numeric_engine::<C>(spec, opts)?;
    engine.run()?;
    Ok(finish_numeric(engine))
}

/// Exact integer counts of contributing walks with n steps and m contacts,
/// for cross-checking against the DFS oracle. The sweep is run over a strip
/// long enough that no walk of `n_max` steps feels the ends, matching the
/// oracle's geometry.
pub fn build_two_variable(spec: &StripSpec, n_max: usize) -> Result<CountTable, EngineError> {
    // u128 cannot overflow below this cap (far fewer than 2^127 walks).
    assert!(n_max <= 40, "exact enumeration is capped at 40 steps");
    let mut table = CountTable::new(n_max);
    if n_max == 0 {
        return Ok(table);
    }
    let ctx = IntCtx { e_max: n_max - 1, m_max: n_max };
    let opts = BuildOptions {
        total_columns: Some(2 * n_max + 5),
        ..Default::default()
    };
    let mut engine: Engine<IntTable> = Engine::new(spec, opts, ctx)?;
    engine.run()?;
    let acc = &engine.results[0].0;
    let w = n_max + 1;
    for e in 0..n_max {
        for m in 0..=n_max {
            let c = acc[e * w + m];
            if c != 0 {
                // Steps = interior edges + 1 (the two boundary half-steps).
                debug_assert!(m <= e + 1);
                table.add(e + 1, m, c).expect("capped counts fit in u128");
            }
        }
    }
    Ok(table)
}
