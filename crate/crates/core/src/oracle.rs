//! Brute-force ground truth: depth-first enumeration of the contributing
//! walks in small strips, plus the finite-size partition function and mean
//! contact density.
//!
//! The DFS shares the geometry conventions of [`crate::lattice`] (same
//! origin placement, same dangle rules) but no sweep machinery, so it is an
//! independent check of the transfer-matrix engine.

use std::collections::HashSet;

use thiserror::Error;

use crate::lattice::{sweep_region, DangleKind, LatticeKind, StripSpec, SweepOptions, WeightingMode};
use crate::real::AReal;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("walk counts overflowed the 128-bit accumulator")]
    CountOverflow,
    #[error("partition function is zero; density undefined")]
    ZeroPartition,
    #[error("length {0} exceeds the enumerated range")]
    LengthOutOfRange(usize),
}

/// Exact counts `c[n][m]` of contributing walks with `n` steps (visited
/// sites) and `m` surface contacts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    counts: Vec<Vec<u128>>,
    n_max: usize,
}

impl CountTable {
    pub fn new(n_max: usize) -> CountTable {
        CountTable { counts: vec![vec![0; n_max + 1]; n_max + 1], n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, n: usize, m: usize) -> u128 {
        self.counts.get(n).and_then(|row| row.get(m)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, n: usize, m: usize, count: u128) -> Result<(), OracleError> {
        debug_assert!(m <= n);
        let cell = &mut self.counts[n][m];
        *cell = cell.checked_add(count).ok_or(OracleError::CountOverflow)?;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|row| row.iter().all(|&c| c == 0))
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().flatten().sum()
    }

    /// CSV rows `n,m,count` for the nonzero cells.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,m,count\n");
        for n in 0..=self.n_max {
            for m in 0..=n {
                let c = self.get(n, m);
                if c != 0 {
                    s.push_str(&format!("{n},{m},{c}\n"));
                }
            }
        }
        s
    }
}

/// `Z_n(y) = sum_m c[n][m] y^m`.
pub fn partition_function(table: &CountTable, y: &AReal, n: usize) -> Result<AReal, OracleError> {
    if n > table.n_max() {
        return Err(OracleError::LengthOutOfRange(n));
    }
    let p = y.precision();
    let mut z = AReal::zero(p);
    for m in (0..=n).rev() {
        // Horner in y over the contact index.
        z = z.mul(y);
        let c = table.get(n, m);
        if c != 0 {
            z = z.add(&AReal::parse(&c.to_string(), p).unwrap());
        }
    }
    Ok(z)
}

/// Mean surface-contact density `rho_n(y)`.
pub fn mean_contact_density(table: &CountTable, y: &AReal, n: usize) -> Result<AReal, OracleError> {
    let z = partition_function(table, y, n)?;
    if z.is_zero() {
        return Err(OracleError::ZeroPartition);
    }
    let p = y.precision();
    let mut num = AReal::zero(p);
    for m in (0..=n).rev() {
        num = num.mul(y);
        let c = table.get(n, m);
        if c != 0 {
            let term = AReal::parse(&c.to_string(), p).unwrap().mul(&AReal::from_i64(m as i64, p));
            num = num.add(&term);
        }
    }
    Ok(num.div(&z).div(&AReal::from_i64(n as i64, p)))
}

/// Per-termination-class count tables for a patch enumeration.
#[derive(Clone, Debug)]
pub struct ClassTables {
    pub alpha: CountTable,
    pub beta: CountTable,
    pub epsilon: CountTable,
}

struct Dfs<'a> {
    spec: &'a StripSpec,
    columns: i64,
    origin: (i64, i64),
    n_max: usize,
    visited: HashSet<(i64, i64)>,
    path: Vec<(i64, i64)>,
    contacts: usize,
    tables: ClassTables,
}

impl<'a> Dfs<'a> {
    fn neighbors(&self, c: i64, r: i64) -> [(i64, i64); 6] {
        // Unused entries point outside the strip and are filtered by bounds.
        let out = (-1, -1);
        match self.spec.lattice {
            LatticeKind::Square => [(c - 1, r), (c + 1, r), (c, r - 1), (c, r + 1), out, out],
            LatticeKind::Honeycomb => {
                let vertical = if (c + r) % 2 == 0 { (c, r + 1) } else { (c, r - 1) };
                [(c - 1, r), (c + 1, r), vertical, out, out, out]
            }
            LatticeKind::Triangular => [
                (c - 1, r),
                (c + 1, r),
                (c, r - 1),
                (c, r + 1),
                (c + 1, r + 1),
                (c - 1, r - 1),
            ],
        }
    }

    fn in_strip(&self, c: i64, r: i64) -> bool {
        c >= 0 && c < self.columns && r >= 0 && r <= self.spec.width_t as i64
    }

    fn site_weight(&self, c: i64, r: i64) -> usize {
        let t = self.spec.width_t as i64;
        match self.spec.mode {
            WeightingMode::AllSite => (r == t) as usize,
            WeightingMode::AlternateSite => (r == t && (c + t) % 2 == 0) as usize,
            WeightingMode::Edge => 0,
        }
    }

    fn edge_weight(&self, a: (i64, i64), b: (i64, i64)) -> usize {
        let t = self.spec.width_t as i64;
        (self.spec.mode == WeightingMode::Edge && a.1 == t && b.1 == t) as usize
    }

    /// Termination dangles available at a site, under the active options.
    fn terminations(&self, c: i64, r: i64, opts: &SweepOptions) -> [Option<DangleKind>; 2] {
        let t = self.spec.width_t as i64;
        let mut out = [None, None];
        let alpha = match self.spec.lattice {
            LatticeKind::Honeycomb => r == 0 && c % 2 == 1,
            _ => r == 0,
        };
        if alpha && (c, r) != self.origin {
            out[0] = Some(DangleKind::Alpha);
        }
        let beta = match self.spec.lattice {
            LatticeKind::Honeycomb => r == t && (c + t) % 2 == 0,
            _ => r == t,
        };
        if beta && opts.beta_dangles {
            let i = if out[0].is_none() { 0 } else { 1 };
            out[i] = Some(DangleKind::Beta);
        }
        if opts.epsilon_ends && (c == 0 || c == self.columns - 1) {
            let i = if out[0].is_none() { 0 } else { 1 };
            out[i] = Some(DangleKind::Epsilon);
        }
        out
    }

    fn record(&mut self, class: DangleKind) -> Result<(), OracleError> {
        let n = self.path.len();
        let m = self.contacts;
        let table = match class {
            DangleKind::Alpha => &mut self.tables.alpha,
            DangleKind::Beta => &mut self.tables.beta,
            DangleKind::Epsilon => &mut self.tables.epsilon,
            DangleKind::Origin => unreachable!(),
        };
        table.add(n, m, 1)
    }

    fn run(&mut self, opts: &SweepOptions) -> Result<(), OracleError> {
        let (c, r) = *self.path.last().unwrap();
        for class in self.terminations(c, r, opts).into_iter().flatten() {
            self.record(class)?;
        }
        if self.path.len() == self.n_max {
            return Ok(());
        }
        for (nc, nr) in self.neighbors(c, r) {
            if !self.in_strip(nc, nr) || self.visited.contains(&(nc, nr)) {
                continue;
            }
            let dm = self.site_weight(nc, nr) + self.edge_weight((c, r), (nc, nr));
            self.visited.insert((nc, nr));
            self.path.push((nc, nr));
            self.contacts += dm;
            self.run(opts)?;
            self.contacts -= dm;
            self.path.pop();
            self.visited.remove(&(nc, nr));
        }
        Ok(())
    }
}

/// Enumerate contributing walks by DFS, counting by steps and contacts.
///
/// Walk class matches the transfer-matrix `A` series: start at the origin
/// mid-edge, end on another origin-boundary mid-edge. `spec.half_length`
/// is ignored; the strip is made long enough that no walk of `n_max` steps
/// can feel the ends.
pub fn enumerate_walks(spec: &StripSpec, n_max: usize) -> Result<CountTable, OracleError> {
    Ok(enumerate_classes(spec, n_max, &SweepOptions::default())?.alpha)
}

/// DFS enumeration with all termination classes, used for patch checks.
///
/// When `opts.total_columns` is set the strip ends are real boundaries
/// (patch geometry); otherwise the strip is padded so ends are unreachable.
pub fn enumerate_classes(
    spec: &StripSpec,
    n_max: usize,
    opts: &SweepOptions,
) -> Result<ClassTables, OracleError> {
    let mut opts = *opts;
    if opts.total_columns.is_none() {
        opts.total_columns = Some(2 * n_max + 5);
    }
    let region = sweep_region(spec, &opts);
    let origin = (region.origin_col as i64, 0i64);
    let mut dfs = Dfs {
        spec,
        columns: region.columns as i64,
        origin,
        n_max,
        visited: HashSet::new(),
        path: Vec::new(),
        contacts: 0,
        tables: ClassTables {
            alpha: CountTable::new(n_max),
            beta: CountTable::new(n_max),
            epsilon: CountTable::new(n_max),
        },
    };
    if n_max == 0 {
        return Ok(dfs.tables);
    }
    dfs.visited.insert(origin);
    dfs.path.push(origin);
    dfs.contacts = dfs.site_weight(origin.0, origin.1);
    dfs.run(&opts)?;
    Ok(dfs.tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Precision;

    fn p50() -> Precision {
        Precision::from_digits(50)
    }

    #[test]
    fn honeycomb_width_zero_alternate_site() {
        // Width-0 strip walks run along a line touching a weighted site
        // every second step: c[2k+1][k] = 2, nothing else.
        let spec =
            StripSpec::at_critical(LatticeKind::Honeycomb, 0, 5, WeightingMode::AlternateSite, 10)
                .unwrap();
        let t = enumerate_walks(&spec, 9).unwrap();
        for n in 0..=9usize {
            for m in 0..=n {
                let expect = if n >= 3 && n % 2 == 1 && m == (n - 1) / 2 { 2 } else { 0 };
                assert_eq!(t.get(n, m), expect, "c[{n}][{m}]");
            }
        }
    }

    #[test]
    fn one_step_walks_cannot_return() {
        for lattice in [LatticeKind::Honeycomb, LatticeKind::Square, LatticeKind::Triangular] {
            let spec = StripSpec::at_critical(lattice, 1, 5, WeightingMode::AllSite, 10).unwrap();
            assert!(enumerate_walks(&spec, 1).unwrap().is_zero());
        }
    }

    #[test]
    fn square_counts_are_translation_invariant() {
        let spec = StripSpec::at_critical(LatticeKind::Square, 2, 5, WeightingMode::AllSite, 10).unwrap();
        let a = enumerate_classes(&spec, 8, &SweepOptions::default()).unwrap().alpha;
        let wide = SweepOptions { total_columns: Some(2 * 8 + 9), ..Default::default() };
        let b = enumerate_classes(&spec, 8, &wide).unwrap().alpha;
        assert_eq!(a, b);
    }

    #[test]
    fn square_minimal_walks() {
        // Smallest returning walks on the square lattice: a -> up? no; the
        // two 2-step walks along the surface row return immediately.
        let spec = StripSpec::at_critical(LatticeKind::Square, 2, 5, WeightingMode::AllSite, 10).unwrap();
        let t = enumerate_walks(&spec, 4).unwrap();
        assert_eq!(t.get(2, 0), 2); // left and right neighbour
        assert_eq!(t.get(1, 0), 0);
        assert!(t.get(3, 0) > 0);
    }

    #[test]
    fn partition_and_density_single_cell() {
        let mut t = CountTable::new(5);
        t.add(3, 1, 2).unwrap();
        let y = AReal::from_i64(2, p50());
        let z = partition_function(&t, &y, 3).unwrap();
        assert!((z.to_f64() - 4.0).abs() < 1e-30);
        let rho = mean_contact_density(&t, &y, 3).unwrap();
        assert!((rho.to_f64() - 1.0 / 3.0).abs() < 1e-30);
    }

    #[test]
    fn unit_fugacity_gives_plain_counts() {
        let spec = StripSpec::at_critical(LatticeKind::Square, 1, 5, WeightingMode::AllSite, 10).unwrap();
        let t = enumerate_walks(&spec, 8).unwrap();
        let y = AReal::from_i64(1, p50());
        for n in 2..=8 {
            let z = partition_function(&t, &y, n).unwrap();
            let plain: u128 = (0..=n).map(|m| t.get(n, m)).sum();
            assert!((z.to_f64() - plain as f64).abs() < 1e-20);
        }
    }

    #[test]
    fn density_monotone_in_y() {
        let spec = StripSpec::at_critical(LatticeKind::Square, 1, 5, WeightingMode::AllSite, 10).unwrap();
        let t = enumerate_walks(&spec, 9).unwrap();
        let mut last = AReal::zero(p50());
        for k in 1..=12 {
            let y = AReal::from_f64(0.25 * k as f64, p50());
            let rho = mean_contact_density(&t, &y, 9).unwrap();
            assert!(rho >= last, "rho not monotone at y={}", y.to_f64());
            let in_range = rho >= AReal::zero(p50())
                && rho <= AReal::from_i64(1, p50());
            assert!(in_range);
            last = rho;
        }
    }

    #[test]
    fn zero_partition_is_signalled() {
        let t = CountTable::new(4);
        let y = AReal::from_i64(1, p50());
        assert_eq!(
            mean_contact_density(&t, &y, 4).unwrap_err(),
            OracleError::ZeroPartition
        );
    }

    #[test]
    fn csv_dump_lists_cells() {
        let mut t = CountTable::new(5);
        t.add(3, 1, 2).unwrap();
        t.add(5, 2, 7).unwrap();
        assert_eq!(t.to_csv(), "n,m,count\n3,1,2\n5,2,7\n");
    }
}
