//! The boundary-line sweep.
//!
//! A map from boundary signatures to payloads is pushed through the strip
//! one site at a time. Each site move consumes the slots entering the site
//! and produces the slots leaving it; every signature spawns the legal
//! local continuations (skip, pass through, new loop, merge, touchdown)
//! with `x^n y^m` weights attached via the payload's `accumulate`.
//!
//! Determinism: each move builds a per-target update plan single-threaded
//! (sources in map order, targets in first-encounter order), then executes
//! it in parallel over targets. Per-target accumulation order is the plan
//! order, so results are bit-identical for any thread count.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use super::sig::{EndClass, Sig, EMPTY, FREE, LOWER, UPPER};
use crate::lattice::{
    column_stream, sweep_region, DangleKind, LatticeError, SiteMove, StripSpec, SweepOptions,
    SweepRegion,
};
use crate::real::{Coeff, Dd};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("state map grew to {states} signatures, over the budget of {limit}")]
    StateBudget { states: usize, limit: usize },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

/// Multiplicative hash for the u64 signatures (iteration never depends on
/// map order, so only speed and determinism of lookups matter).
#[derive(Default)]
pub struct SigHasher(u64);

impl Hasher for SigHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
        }
    }
    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0 ^ x).wrapping_mul(0x517c_c1b7_2722_0a95);
    }
}

type SigMap = HashMap<Sig, u32, BuildHasherDefault<SigHasher>>;

/// Per-signature payload carried through the sweep.
pub trait SweepPayload: Clone + Send + Sync + 'static {
    type Ctx: Sync + Send;
    /// Payload of the initial all-empty signature (the multiplicative unit).
    fn seed(ctx: &Self::Ctx) -> Self;
    fn new_target(len: usize, ctx: &Self::Ctx) -> Self;
    /// Size a target must have to absorb `self` shifted by `m_shift`.
    fn len_hint(&self, m_shift: u8, ctx: &Self::Ctx) -> usize;
    /// `self += x^n_edges * y^m_shift * src`, truncated.
    fn accumulate(&mut self, src: &Self, n_edges: u8, m_shift: u8, ctx: &Self::Ctx);
    fn is_zero(&self) -> bool;
}

/// Numeric payload: truncated polynomial in y, dense occupied prefix.
#[derive(Clone, Debug)]
pub struct NumPoly<C: Coeff>(pub Vec<C>);

pub struct NumCtx<C: Coeff> {
    pub x_pow: [C; 3],
    pub trunc: usize,
}

impl<C: Coeff> NumCtx<C> {
    pub fn new(x: Dd, trunc: usize) -> Self {
        NumCtx {
            x_pow: [C::from_dd(Dd::ONE), C::from_dd(x), C::from_dd(Dd::mul(x, x))],
            trunc,
        }
    }
}

impl<C: Coeff> SweepPayload for NumPoly<C> {
    type Ctx = NumCtx<C>;

    fn seed(_ctx: &Self::Ctx) -> Self {
        NumPoly(vec![C::from_dd(Dd::ONE)])
    }

    fn new_target(len: usize, _ctx: &Self::Ctx) -> Self {
        NumPoly(vec![C::ZERO; len])
    }

    fn len_hint(&self, m_shift: u8, ctx: &Self::Ctx) -> usize {
        (self.0.len() + m_shift as usize).min(ctx.trunc + 1)
    }

    #[inline]
    fn accumulate(&mut self, src: &Self, n_edges: u8, m_shift: u8, ctx: &Self::Ctx) {
        let scale = ctx.x_pow[n_edges as usize];
        let shift = m_shift as usize;
        let lim = src.0.len().min(ctx.trunc + 1 - shift.min(ctx.trunc + 1));
        debug_assert!(self.0.len() >= lim + shift || lim == 0);
        let dst = &mut self.0[shift..];
        for (d, s) in dst.iter_mut().zip(&src.0[..lim]) {
            d.add_assign(scale.mul(*s));
        }
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

/// Exact-count payload: integer table over (edges, contacts).
#[derive(Clone, Debug)]
pub struct IntTable(pub Vec<u128>);

pub struct IntCtx {
    pub e_max: usize,
    pub m_max: usize,
}

impl IntCtx {
    fn width(&self) -> usize {
        self.m_max + 1
    }
    fn size(&self) -> usize {
        (self.e_max + 1) * (self.m_max + 1)
    }
}

impl SweepPayload for IntTable {
    type Ctx = IntCtx;

    fn seed(ctx: &Self::Ctx) -> Self {
        let mut t = vec![0; ctx.size()];
        t[0] = 1;
        IntTable(t)
    }

    fn new_target(_len: usize, ctx: &Self::Ctx) -> Self {
        IntTable(vec![0; ctx.size()])
    }

    fn len_hint(&self, _m_shift: u8, ctx: &Self::Ctx) -> usize {
        ctx.size()
    }

    fn accumulate(&mut self, src: &Self, n_edges: u8, m_shift: u8, ctx: &Self::Ctx) {
        let w = ctx.width();
        let n = n_edges as usize;
        let shift = m_shift as usize;
        for e in 0..=(ctx.e_max.saturating_sub(n)) {
            let src_row = &src.0[e * w..(e + 1) * w];
            let dst_row = &mut self.0[(e + n) * w..(e + n + 1) * w];
            for m in 0..=(ctx.m_max - shift.min(ctx.m_max)) {
                if src_row[m] != 0 {
                    // Strip walks cannot overflow u128 at the capped n_max.
                    dst_row[m + shift] += src_row[m];
                }
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Extra knobs for a build beyond the strip spec.
#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// Collect walks ending on the weighted boundary (B series).
    pub collect_b: bool,
    /// Open the strip ends and collect walks leaving through them
    /// (E series; patch geometry).
    pub open_ends: bool,
    /// Override the total column count (patches).
    pub total_columns: Option<usize>,
    /// Abort if the signature map outgrows this.
    pub max_states: Option<usize>,
}

impl BuildOptions {
    fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            beta_dangles: self.collect_b,
            epsilon_ends: self.open_ends,
            total_columns: self.total_columns,
        }
    }
}

pub struct SweepStats {
    pub peak_signatures: usize,
    pub moves_processed: usize,
    pub wall_seconds: f64,
}

/// The sweep state machine. Drives one strip (or patch) build; step by
/// column so long runs can checkpoint between columns.
pub struct Engine<P: SweepPayload> {
    pub(crate) spec: StripSpec,
    pub(crate) opts: BuildOptions,
    pub(crate) ctx: P::Ctx,
    pub(crate) region: SweepRegion,
    moves: Vec<SiteMove>,
    pub(crate) slots: usize,
    pub(crate) sigs: Vec<Sig>,
    pub(crate) pays: Vec<P>,
    index: SigMap,
    /// Completed-walk accumulators for the alpha, beta, epsilon classes.
    pub(crate) results: [P; 3],
    pub(crate) next_move: usize,
    pub(crate) peak: usize,
    started: Instant,
    // plan scratch, reused across moves
    items: Vec<(u32, u32, u8, u8)>,
    completions: Vec<(usize, u32, u8, u8)>,
    tgt_sigs: Vec<Sig>,
    tgt_len: Vec<u32>,
    tgt_index: SigMap,
}

impl<P: SweepPayload> Engine<P> {
    pub fn new(spec: &StripSpec, opts: BuildOptions, ctx: P::Ctx) -> Result<Self, EngineError> {
        let sweep_opts = opts.sweep_options();
        let region = sweep_region(spec, &sweep_opts);
        let moves = column_stream(spec, &sweep_opts);
        let seed = P::seed(&ctx);
        let mut index = SigMap::default();
        index.insert(Sig::EMPTY_SIG, 0);
        let results = [
            P::new_target(0, &ctx),
            P::new_target(0, &ctx),
            P::new_target(0, &ctx),
        ];
        Ok(Engine {
            spec: spec.clone(),
            opts,
            ctx,
            region,
            moves,
            slots: region.initial_slots,
            sigs: vec![Sig::EMPTY_SIG],
            pays: vec![seed],
            index,
            results,
            next_move: 0,
            peak: 1,
            started: Instant::now(),
            items: Vec::new(),
            completions: Vec::new(),
            tgt_sigs: Vec::new(),
            tgt_len: Vec::new(),
            tgt_index: SigMap::default(),
        })
    }

    pub fn total_moves(&self) -> usize {
        self.moves.len()
    }

    pub fn columns_total(&self) -> usize {
        self.region.columns
    }

    pub fn columns_done(&self) -> usize {
        self.next_move / self.region.rows
    }

    pub fn is_done(&self) -> bool {
        self.next_move >= self.moves.len()
    }

    pub fn signatures(&self) -> usize {
        self.sigs.len()
    }

    /// Process every remaining move.
    pub fn run(&mut self) -> Result<(), EngineError> {
        while !self.is_done() {
            self.advance_column()?;
        }
        Ok(())
    }

    /// Process one full column of site moves, then prune.
    pub fn advance_column(&mut self) -> Result<(), EngineError> {
        let rows = self.region.rows;
        for _ in 0..rows {
            self.step_move()?;
        }
        self.prune_zero();
        if let Some(limit) = self.opts.max_states {
            if self.sigs.len() > limit {
                return Err(EngineError::StateBudget { states: self.sigs.len(), limit });
            }
        }
        Ok(())
    }

    pub(crate) fn restore_state(
        &mut self,
        next_move: usize,
        slots: usize,
        peak: usize,
        results: Vec<P>,
        sigs: Vec<Sig>,
        pays: Vec<P>,
    ) -> Result<(), EngineError> {
        if results.len() != 3 || sigs.len() != pays.len() {
            return Err(EngineError::Checkpoint("inconsistent state sizes".into()));
        }
        self.next_move = next_move;
        self.slots = slots;
        self.peak = peak;
        let mut it = results.into_iter();
        self.results = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
        self.rebuild(sigs, pays);
        Ok(())
    }

    pub(crate) fn stats(&self) -> SweepStats {
        SweepStats {
            peak_signatures: self.peak,
            moves_processed: self.next_move,
            wall_seconds: self.started.elapsed().as_secs_f64(),
        }
    }

    fn step_move(&mut self) -> Result<(), EngineError> {
        let mv = self.moves[self.next_move].clone();
        debug_assert_eq!(self.slots, mv.slots_before as usize);

        self.items.clear();
        self.completions.clear();
        self.tgt_sigs.clear();
        self.tgt_len.clear();
        self.tgt_index.clear();

        let slots = self.slots;
        // Plan phase: enumerate branches of every source signature.
        for (i, &sig) in self.sigs.iter().enumerate() {
            debug_assert!(sig.is_valid(slots), "invalid signature {sig:?} at move {}", self.next_move);
            let src_idx = i as u32;
            let Engine { items, completions, tgt_sigs, tgt_len, tgt_index, pays, ctx, .. } = self;
            emit_branches(sig, &mv, slots, &mut |out, n, m| match out {
                Branch::Map(t) => {
                    let ti = match tgt_index.get(&t) {
                        Some(&ti) => ti,
                        None => {
                            let ti = tgt_sigs.len() as u32;
                            tgt_index.insert(t, ti);
                            tgt_sigs.push(t);
                            tgt_len.push(0);
                            ti
                        }
                    };
                    let hint = pays[i].len_hint(m, ctx) as u32;
                    if hint > tgt_len[ti as usize] {
                        tgt_len[ti as usize] = hint;
                    }
                    items.push((ti, src_idx, n, m));
                }
                Branch::Complete(class) => {
                    completions.push((class as usize - 1, src_idx, n, m));
                }
            });
        }

        // Counting sort by target keeps per-target source order stable.
        let ntgt = self.tgt_sigs.len();
        let mut counts = vec![0u32; ntgt + 1];
        for &(t, ..) in &self.items {
            counts[t as usize + 1] += 1;
        }
        for i in 0..ntgt {
            counts[i + 1] += counts[i];
        }
        let mut sorted = vec![(0u32, 0u32, 0u8, 0u8); self.items.len()];
        let mut cursor = counts.clone();
        for &it in &self.items {
            let c = &mut cursor[it.0 as usize];
            sorted[*c as usize] = it;
            *c += 1;
        }

        // Execute per target; serial below a small threshold.
        let ctx = &self.ctx;
        let pays = &self.pays;
        let tgt_len = &self.tgt_len;
        let exec = |t: usize| -> P {
            let mut out = P::new_target(tgt_len[t] as usize, ctx);
            for &(_, src, n, m) in &sorted[counts[t] as usize..counts[t + 1] as usize] {
                out.accumulate(&pays[src as usize], n, m, ctx);
            }
            out
        };
        let new_pays: Vec<P> = if ntgt >= 32 {
            (0..ntgt).into_par_iter().map(exec).collect()
        } else {
            (0..ntgt).map(exec).collect()
        };

        // Completions fold into the class accumulators in plan order.
        for &(class, src, n, m) in &self.completions {
            let hint = self.pays[src as usize].len_hint(m, &self.ctx);
            if self.results[class].len_hint(0, &self.ctx) < hint {
                let mut grown = P::new_target(hint, &self.ctx);
                grown.accumulate(&self.results[class], 0, 0, &self.ctx);
                self.results[class] = grown;
            }
            let src_pay = self.pays[src as usize].clone();
            self.results[class].accumulate(&src_pay, n, m, &self.ctx);
        }

        self.sigs = std::mem::take(&mut self.tgt_sigs);
        self.pays = new_pays;
        self.index = std::mem::take(&mut self.tgt_index);
        self.slots = slots - mv.n_consume as usize + mv.n_produce as usize;
        self.next_move += 1;
        if self.sigs.len() > self.peak {
            self.peak = self.sigs.len();
        }

        // Once the origin site is behind the boundary, walks that never
        // touched down at `a` can no longer contribute.
        if mv.row as usize == 0 && mv.col as usize == self.region.origin_col {
            self.retain(|sig| sig.origin_used());
        }
        Ok(())
    }

    fn prune_zero(&mut self) {
        let keep: Vec<bool> = self.pays.iter().map(|p| !p.is_zero()).collect();
        if keep.iter().all(|&k| k) {
            return;
        }
        let mut sigs = Vec::with_capacity(self.sigs.len());
        let mut pays = Vec::with_capacity(self.pays.len());
        for (i, p) in std::mem::take(&mut self.pays).into_iter().enumerate() {
            if keep[i] {
                sigs.push(self.sigs[i]);
                pays.push(p);
            }
        }
        self.rebuild(sigs, pays);
    }

    fn retain(&mut self, f: impl Fn(&Sig) -> bool) {
        let mut sigs = Vec::with_capacity(self.sigs.len());
        let mut pays = Vec::with_capacity(self.pays.len());
        for (i, p) in std::mem::take(&mut self.pays).into_iter().enumerate() {
            if f(&self.sigs[i]) {
                sigs.push(self.sigs[i]);
                pays.push(p);
            }
        }
        self.rebuild(sigs, pays);
    }

    fn rebuild(&mut self, sigs: Vec<Sig>, pays: Vec<P>) {
        self.index.clear();
        for (i, &s) in sigs.iter().enumerate() {
            self.index.insert(s, i as u32);
        }
        self.sigs = sigs;
        self.pays = pays;
    }
}

enum Branch {
    Map(Sig),
    Complete(EndClass),
}

fn end_class(d: DangleKind) -> Option<EndClass> {
    match d {
        DangleKind::Origin => None,
        DangleKind::Alpha => Some(EndClass::Alpha),
        DangleKind::Beta => Some(EndClass::Beta),
        DangleKind::Epsilon => Some(EndClass::Epsilon),
    }
}

/// Mark one walk end as used; `None` if the end slot is already taken.
fn use_dangle(sig: Sig, d: DangleKind) -> Option<Sig> {
    match end_class(d) {
        None => {
            if sig.origin_used() {
                None
            } else {
                Some(sig.with_origin_used())
            }
        }
        Some(class) => {
            if sig.other_end().is_some() {
                None
            } else {
                Some(sig.with_other_end(class))
            }
        }
    }
}

/// Enumerate the legal continuations of `sig` through one site move.
fn emit_branches(sig: Sig, mv: &SiteMove, slots: usize, emit: &mut impl FnMut(Branch, u8, u8)) {
    let at = mv.consume_at as usize;
    let nc = mv.n_consume as usize;
    let np = mv.n_produce as usize;
    let site_m = mv.site_contact as u8;
    let surf = |o: usize| mv.produced_surface[o] as u8;

    let mut occ: [(usize, u8); 3] = [(0, 0); 3];
    let mut n_occ = 0usize;
    for k in 0..nc {
        let s = sig.state(at + k);
        if s != EMPTY {
            occ[n_occ] = (at + k, s);
            n_occ += 1;
        }
    }

    let base = sig.splice(at, nc, &[]);
    // Partners never sit inside the consumed run except for a direct loop
    // closure, which is handled before any adjustment.
    let adj = |p: usize| if p >= at + nc { p - nc } else { p };
    let insert = |b: Sig, outs: &[u8; 3]| b.splice(at, 0, &outs[..np]);

    match n_occ {
        0 => {
            // Site not visited.
            emit(Branch::Map(insert(base, &[EMPTY; 3])), 0, 0);
            // Visited, starting a new loop across two produced slots.
            for i in 0..np {
                for j in i + 1..np {
                    let mut outs = [EMPTY; 3];
                    outs[i] = LOWER;
                    outs[j] = UPPER;
                    let m = site_m + surf(i) + surf(j);
                    debug_assert!(m <= 1);
                    emit(Branch::Map(insert(base, &outs)), 2, m);
                }
            }
            // Visited, one end touching down at a boundary dangle.
            for d in mv.dangles.into_iter().flatten() {
                if let Some(b) = use_dangle(base, d) {
                    for o in 0..np {
                        let mut outs = [EMPTY; 3];
                        outs[o] = FREE;
                        emit(Branch::Map(insert(b, &outs)), 1, site_m + surf(o));
                    }
                }
            }
        }
        1 => {
            let (p0, s0) = occ[0];
            // Pass through to one produced slot.
            for o in 0..np {
                let mut outs = [EMPTY; 3];
                outs[o] = s0;
                emit(Branch::Map(insert(base, &outs)), 1, site_m + surf(o));
            }
            // Terminate here via a dangle.
            for d in mv.dangles.into_iter().flatten() {
                let Some(b) = use_dangle(base, d) else { continue };
                if s0 == FREE {
                    // Second walk end finished: the walk is complete only if
                    // nothing else is pending.
                    if b.slots_empty() && b.origin_used() {
                        if let Some(class) = b.other_end() {
                            emit(Branch::Complete(class), 0, site_m);
                        }
                    }
                } else {
                    let pp = sig.partner(p0, slots).expect("balanced loop states");
                    let b = b.with_state(adj(pp), FREE);
                    emit(Branch::Map(insert(b, &[EMPTY; 3])), 0, site_m);
                }
            }
        }
        2 => {
            let (p1, s1) = occ[0];
            let (p2, s2) = occ[1];
            let loops1 = s1 != FREE;
            let loops2 = s2 != FREE;
            if loops1 && loops2 {
                if sig.partner(p1, slots) == Some(p2) {
                    // Would close a loop: self-avoiding walks forbid cycles.
                    return;
                }
                // Joining two loop ends reconnects their partners as a loop.
                let qa = adj(sig.partner(p1, slots).expect("balanced"));
                let qb = adj(sig.partner(p2, slots).expect("balanced"));
                let (lo, hi) = if qa < qb { (qa, qb) } else { (qb, qa) };
                let b = base.with_state(lo, LOWER).with_state(hi, UPPER);
                emit(Branch::Map(insert(b, &[EMPTY; 3])), 0, site_m);
            } else if loops1 || loops2 {
                // A loose-ended strand absorbs one loop end.
                let pl = if loops1 { p1 } else { p2 };
                let q = adj(sig.partner(pl, slots).expect("balanced"));
                let b = base.with_state(q, FREE);
                emit(Branch::Map(insert(b, &[EMPTY; 3])), 0, site_m);
            } else {
                // Two loose ends meet: the walk closes completely.
                debug_assert!(base.origin_used() && base.other_end().is_some());
                if base.slots_empty() && base.origin_used() {
                    if let Some(class) = base.other_end() {
                        emit(Branch::Complete(class), 0, site_m);
                    }
                }
            }
        }
        _ => {
            // Three occupied edges cannot meet at a degree-2 walk site.
        }
    }
}
