// Scratch calibration runs (removed before release).
use sawstrip::crossing::find_crossing;
use sawstrip::lattice::{mu_squared, LatticeKind, StripSpec, WeightingMode};
use sawstrip::oracle::enumerate_walks;
use sawstrip::real::{AReal, Precision};
use sawstrip::tm::{build_a, build_two_variable};

fn p50() -> Precision {
    Precision::from_digits(50)
}

fn check_oracle(lattice: LatticeKind, mode: WeightingMode, t: usize, n_max: usize) {
    let spec = StripSpec::at_critical(lattice, t, 4, mode, n_max + 1).unwrap();
    let tm = build_two_variable(&spec, n_max).unwrap();
    let dfs = enumerate_walks(&spec, n_max).unwrap();
    if tm == dfs {
        println!("oracle OK  {:?} {:?} T={} n<={} total={}", lattice, mode, t, n_max, dfs.total());
    } else {
        println!("oracle MISMATCH {:?} {:?} T={}", lattice, mode, t);
        for n in 0..=n_max {
            for m in 0..=n {
                if tm.get(n, m) != dfs.get(n, m) {
                    println!("  c[{n}][{m}]: tm={} dfs={}", tm.get(n, m), dfs.get(n, m));
                }
            }
        }
    }
}

fn crossing_run(lattice: LatticeKind, mode: WeightingMode, t: usize, m: usize, l: usize) {
    let s1 = StripSpec::at_critical(lattice, t, l, mode, m).unwrap();
    let s2 = StripSpec::at_critical(lattice, t + 1, l, mode, m).unwrap();
    let now = std::time::Instant::now();
    let a1 = build_a(&s1).unwrap();
    let a2 = build_a(&s2).unwrap();
    let bracket = (AReal::from_i64(1, p50()), mu_squared(lattice, p50()));
    let tol = AReal::parse("1e-20", p50()).unwrap();
    let c = find_crossing(t, &a1.a, &a2.a, bracket, &tol, None).unwrap();
    println!(
        "{:?} {:?} T={} M={} L={}: y_c = {}  A = {}  [{:.1}s, peak {} sigs]",
        lattice,
        mode,
        t,
        m,
        l,
        c.y_cross.to_fixed(15),
        c.a_at_cross.to_fixed(15),
        now.elapsed().as_secs_f64(),
        a2.stats.peak_signatures,
    );
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("oracle");
    match which {
        "oracle" => {
            for t in 0..=2 {
                check_oracle(LatticeKind::Honeycomb, WeightingMode::AlternateSite, t, 10);
                check_oracle(LatticeKind::Honeycomb, WeightingMode::AllSite, t, 10);
                check_oracle(LatticeKind::Honeycomb, WeightingMode::Edge, t, 10);
                check_oracle(LatticeKind::Square, WeightingMode::AllSite, t, 10);
                check_oracle(LatticeKind::Square, WeightingMode::Edge, t, 10);
                check_oracle(LatticeKind::Triangular, WeightingMode::AllSite, t, 9);
                check_oracle(LatticeKind::Triangular, WeightingMode::Edge, t, 9);
            }
        }
        "rows" => {
            // Published first rows:
            // hc all-site T=1: 1.474342684974343 / 2.758023465753132
            // sq all-site T=1: 1.781782909906119 / 2.748677355944862
            // sq edge    T=1: 2.023317607727152 / 2.519464246890523
            // tr all-site T=1: 2.169017975620833 / 5.299883162257977
            // tr edge    T=1: 2.933665548671216 / 4.793416679321919
            let m = 1000;
            crossing_run(LatticeKind::Square, WeightingMode::AllSite, 1, m, m);
            crossing_run(LatticeKind::Honeycomb, WeightingMode::AllSite, 1, m, m);
            crossing_run(LatticeKind::Square, WeightingMode::Edge, 1, m, m);
            crossing_run(LatticeKind::Triangular, WeightingMode::AllSite, 1, m, m);
            crossing_run(LatticeKind::Triangular, WeightingMode::Edge, 1, m, m);
        }
        "table1" => {
            // Published: M=100: L=M 1.832547814756, L=2M 1.778376701255
            crossing_run(LatticeKind::Square, WeightingMode::AllSite, 9, 100, 100);
            crossing_run(LatticeKind::Square, WeightingMode::AllSite, 9, 100, 200);
        }
        _ => eprintln!("unknown mode"),
    }
}
