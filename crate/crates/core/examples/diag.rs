// Scratch diagnostic (removed before release).
use sawstrip::lattice::{mu_squared, LatticeKind, StripSpec, WeightingMode};
use sawstrip::real::{AReal, Precision};
use sawstrip::tm::build_a;

fn scan(lattice: LatticeKind, mode: WeightingMode, t: usize, m: usize) {
    let p = Precision::from_digits(50);
    let s1 = StripSpec::at_critical(lattice, t, m, mode, m).unwrap();
    let s2 = StripSpec::at_critical(lattice, t + 1, m, mode, m).unwrap();
    let a1 = build_a(&s1).unwrap().a;
    let a2 = build_a(&s2).unwrap().a;
    let hi = mu_squared(lattice, p).to_f64();
    let n = 4000;
    let mut prev = 0i8;
    let mut changes = Vec::new();
    for k in 0..=n {
        let y = 1.0 + (hi - 1.0) * k as f64 / n as f64;
        let d = a1.eval(&AReal::from_f64(y, p)).sub(&a2.eval(&AReal::from_f64(y, p)));
        let s = if d.is_zero() { 0 } else if d.is_negative() { -1 } else { 1 };
        if prev != 0 && s != 0 && s != prev {
            changes.push((y, if s > 0 { "-+".to_string() } else { "+-".to_string() }));
        }
        prev = s;
    }
    println!("{:?} {:?} T={}: sign at y=1+: {}, changes: {:?}", lattice, mode, t,
        prev_sign_at_one(&a1, &a2), changes);
}

fn prev_sign_at_one(a1: &sawstrip::ContactPolynomial, a2: &sawstrip::ContactPolynomial) -> i8 {
    let p = Precision::from_digits(50);
    let y = AReal::from_f64(1.0, p);
    let d = a1.eval(&y).sub(&a2.eval(&y));
    if d.is_negative() { -1 } else { 1 }
}

fn main() {
    for t in 1..=3 {
        scan(LatticeKind::Square, WeightingMode::AllSite, t, 300);
    }
    for t in 1..=3 {
        scan(LatticeKind::Square, WeightingMode::Edge, t, 300);
    }
    for t in 1..=2 {
        scan(LatticeKind::Honeycomb, WeightingMode::AllSite, t, 300);
        scan(LatticeKind::Honeycomb, WeightingMode::AlternateSite, t, 300);
        scan(LatticeKind::Triangular, WeightingMode::AllSite, t, 200);
        scan(LatticeKind::Triangular, WeightingMode::Edge, t, 200);
    }
}
