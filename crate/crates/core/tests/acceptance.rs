//! Acceptance suite. Every criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails. Runs without the libtest harness so
//! the lines are always visible.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use legendre_rip::codes::{biased_to_code, code_to_biased, welch_entropy_check, write_bset, write_code};
use legendre_rip::codes::{BiasedSet, BinaryCode, CodeFromBiased};
use legendre_rip::construct::{
    build_bernoulli_baseline, build_legendre_deterministic, build_legendre_seeded, write_ripm, DesignParams, Seed,
    SignMatrix,
};
use legendre_rip::ntheory::{jacobi_symbol, legendre_symbol, next_prime_geq, BigNat, PrimeCert};
use legendre_rip::verify::{
    bias_exact, binomial, charsum_check, coherence, conjecture_scan, fro_constant, matching_coloring_count,
    rip_constant, PrimeSelection, RipMode, DEFAULT_SUPPORT_BUDGET,
};
use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("legendre symbol matches residue enumeration", legendre_oracle),
        ("jacobi agrees with legendre and its factorization", jacobi_agreement),
        ("seeded constructions have no zero entry", no_zero_entries),
        ("matching-coloring identity", matching_identity),
        ("character sums within 9k sqrt(p) ln p", charsum_bound),
        ("exact bias within |I| sqrt(p) ln p / 2^H", exact_bias_bound),
        ("coherence at or above the Welch floor", welch_bound),
        ("exhaustive RIP matches an eigendecomposition oracle", rip_oracle),
        ("theta_1 equals coherence", fro_coherence),
        ("code round trip and weight-window bias", codes_round_trip),
        ("entropy/Welch inequality on biased sets", entropy_welch),
        ("conjecture scan smoke test", conjecture_smoke),
        ("CLI determinism across reruns and thread counts", cli_determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {tag} {name} [{secs:.2}s]: {detail}", i + 1);
        failures += outcome.is_err() as usize;
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn is_prime_trial(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Euler's criterion on machine words.
fn euler(a: u64, p: u64) -> i8 {
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Symbols of every residue mod `p`, by listing the squares.
fn residue_table(p: u64) -> Vec<i8> {
    let squares: BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
    (0..p)
        .map(|a| match a {
            0 => 0,
            a if squares.contains(&a) => 1,
            _ => -1,
        })
        .collect()
}

fn big(v: u64) -> BigNat {
    BigNat::from(v)
}

fn legendre_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0u64;
    for p in (3..1000).filter(|&p| is_prime_trial(p)) {
        let table = residue_table(p);
        for a in 0..p {
            let got = legendre_symbol(&big(a), &big(p)).map_err(|e| format!("p={p} a={a}: {e}"))?;
            ensure(got == table[a as usize], || format!("p={p} a={a}: got {got}, expected {}", table[a as usize]))?;
            checked += 1;
        }
    }
    within(start, Duration::from_secs(10), "enumeration")?;
    Ok(format!("{checked} pairs exact"))
}

fn jacobi_agreement() -> Outcome {
    let primes: Vec<u64> = (3..1000).filter(|&p| is_prime_trial(p)).collect();
    let tables: Vec<Vec<i8>> = primes.iter().map(|&p| residue_table(p)).collect();
    let mut checked = 0u64;
    for n in (3..1000u64).step_by(2) {
        let mut factors = Vec::new();
        let mut rest = n;
        for (i, &p) in primes.iter().enumerate() {
            while rest % p == 0 {
                factors.push(i);
                rest /= p;
            }
        }
        for a in 0..n {
            let expected: i8 = factors.iter().map(|&i| tables[i][(a % primes[i]) as usize]).product();
            let got = jacobi_symbol(&big(a), &big(n)).map_err(|e| format!("n={n} a={a}: {e}"))?;
            ensure(got == expected, || format!("n={n} a={a}: jacobi {got}, expected {expected}"))?;
            if factors.len() == 1 {
                let l = legendre_symbol(&big(a), &big(n)).map_err(|e| e.to_string())?;
                ensure(l == got, || format!("p={n} a={a}: jacobi {got}, legendre {l}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs exact, primes and odd composites below 1000"))
}

fn no_zero_entries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut entries = 0u64;
    for i in 0..100u64 {
        let h = rng.gen_range(1..=24u32);
        let m = rng.gen_range(1..=100u64);
        let n = rng.gen_range(1..=10_000 / m);
        let params = DesignParams::explicit(m, n, h).map_err(|e| e.to_string())?;
        let cert = next_prime_geq(&(&BigNat::pow2(h) + m * n)).map_err(|e| e.to_string())?;
        let seed = Seed::generate(h, i).map_err(|e| e.to_string())?;
        let mat = build_legendre_seeded(&params, &seed, &cert).map_err(|e| e.to_string())?;
        let p = cert.as_u64().expect("small prime");
        let x = seed.x().to_u64().expect("small seed");
        for c in 0..n as usize {
            for r in 0..m as usize {
                let a = x + c as u64 * m + r as u64 + 1;
                let want = euler(a % p, p);
                ensure(want != 0 && mat.sign(r, c) == want, || {
                    format!("H={h} M={m} N={n} p={p} x={x}: entry ({r},{c}) is {}, symbol {want}", mat.sign(r, c))
                })?;
                entries += 1;
            }
        }
    }
    Ok(format!("100 constructions, {entries} entries nonzero and equal to Euler's criterion"))
}

fn matching_identity() -> Outcome {
    let start = Instant::now();
    for q in [2usize, 4, 6, 8, 10] {
        for colors in 1..=6u64 {
            // (M + q - 2)!! / (M - 2)!! = M (M + 2) ... (M + q - 2)
            let expected: u128 = (0..q as u64 / 2).map(|j| (colors + 2 * j) as u128).product();
            let c = matching_coloring_count(q, colors).map_err(|e| e.to_string())?;
            ensure(c.brute == expected && c.formula == expected, || {
                format!("q={q} M={colors}: brute {} formula {} expected {expected}", c.brute, c.formula)
            })?;
        }
    }
    within(start, Duration::from_secs(5), "matching enumeration")?;
    Ok("30 (q, M) pairs exact".into())
}

fn charsum_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = next_prime_geq(&big(rng.gen_range(10_000..999_000))).map_err(|e| e.to_string())?;
        let p = p.as_u64().expect("small prime");
        let k = rng.gen_range(1..=8usize);
        let mut offsets = BTreeSet::new();
        while offsets.len() < k {
            offsets.insert(rng.gen_range(1..p - 1));
        }
        let offsets: Vec<u64> = offsets.into_iter().collect();
        let t = rng.gen_range(1..=p - offsets[k - 1]);
        let c = charsum_check(p, &offsets, t).map_err(|e| e.to_string())?;
        let bound = 9.0 * k as f64 * (p as f64).sqrt() * (p as f64).ln();
        ensure(c.pass && (c.sum_value.unsigned_abs() as f64) <= bound, || {
            format!("p={p} offsets={offsets:?} t={t}: |sum|={} bound={bound}", c.sum_value.abs())
        })?;
        worst = worst.max(c.sum_value.unsigned_abs() as f64 / bound);
    }
    Ok(format!("200 instances, max |sum|/bound = {worst:.4}"))
}

fn exact_bias_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let h = rng.gen_range(1..=16u32);
        let m = rng.gen_range(1..=8u64);
        let n = rng.gen_range(1..=64 / m);
        let mn = m * n;
        let cert = next_prime_geq(&(&BigNat::pow2(h) + mn)).map_err(|e| e.to_string())?;
        let p = cert.as_u64().expect("small prime");
        let size = rng.gen_range(1..=6.min(mn as usize));
        let mut set = BTreeSet::new();
        while set.len() < size {
            set.insert(rng.gen_range(1..=mn));
        }
        let set: Vec<u64> = set.into_iter().collect();
        let seeds = 1u64 << h;
        let direct: i64 = (0..seeds)
            .map(|x| set.iter().map(|&i| euler(x + i, p) as i64).product::<i64>())
            .sum();
        let r = bias_exact(&cert, h, &set, Some(n), 16).map_err(|e| e.to_string())?;
        ensure(r.exact_bias == Some(Ratio::new(direct, seeds as i64)), || {
            format!("H={h} p={p} I={set:?}: library {:?}, direct {direct}/{seeds}", r.exact_bias)
        })?;
        let bound = set.len() as f64 * (p as f64).sqrt() * (p as f64).ln();
        ensure(direct.unsigned_abs() as f64 <= bound && r.charsum_holds == Some(true), || {
            format!("H={h} p={p} I={set:?}: |sum|={} exceeds {bound}", direct.abs())
        })?;
        worst = worst.max(direct.unsigned_abs() as f64 / bound);
    }
    Ok(format!("50 instances exact, max |bias|/bound = {worst:.4}"))
}

/// A random matrix from one of the three ensembles.
fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> SignMatrix {
    let mn = (m * n) as u64;
    match rng.gen_range(0..3) {
        0 => build_bernoulli_baseline(m, n, rng.gen()).expect("bernoulli"),
        1 => {
            let p = next_prime_geq(&big(mn + 1 + rng.gen_range(0..1000))).expect("prime");
            build_legendre_deterministic(m, n, &p).expect("deterministic")
        }
        _ => {
            let h = rng.gen_range(4..=20u32);
            let params = DesignParams::explicit(m as u64, n as u64, h).expect("params");
            let p = next_prime_geq(&params.p_min).expect("prime");
            let seed = Seed::generate(h, rng.gen()).expect("seed");
            build_legendre_seeded(&params, &seed, &p).expect("seeded")
        }
    }
}

fn dense(mat: &SignMatrix) -> DMatrix<f64> {
    let s = 1.0 / (mat.rows() as f64).sqrt();
    DMatrix::from_fn(mat.rows(), mat.cols(), |r, c| mat.sign(r, c) as f64 * s)
}

/// Largest absolute inner product of distinct normalized columns.
fn direct_coherence(phi: &DMatrix<f64>) -> f64 {
    let n = phi.ncols();
    let mut mu = 0.0f64;
    for a in 0..n {
        for b in a + 1..n {
            mu = mu.max(phi.column(a).dot(&phi.column(b)).abs());
        }
    }
    mu
}

fn welch_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut closest = f64::INFINITY;
    for _ in 0..50 {
        let m = rng.gen_range(2..=16usize);
        let n = rng.gen_range(m + 1..=64);
        let mat = random_matrix(&mut rng, m, n);
        let floor = (((n - m) as f64) / (m as f64 * (n - 1) as f64)).sqrt();
        let c = coherence(&mat).map_err(|e| e.to_string())?;
        let direct = direct_coherence(&dense(&mat));
        ensure((c.mu - direct).abs() <= 1e-12, || format!("{m}x{n}: mu {} vs direct {direct}", c.mu))?;
        ensure(c.mu >= floor - 1e-12 && c.welch_holds, || {
            format!("{m}x{n} {}: mu {} below floor {floor}", mat.provenance().tag(), c.mu)
        })?;
        closest = closest.min(c.mu - floor);
    }
    Ok(format!("50 matrices, min mu - floor = {closest:.4}"))
}

/// `max |lambda - 1|` over eigenvalues of every Gram submatrix of size <= k.
fn eigen_delta(phi: &DMatrix<f64>, k: usize) -> f64 {
    fn walk(phi: &DMatrix<f64>, k: usize, from: usize, support: &mut Vec<usize>, best: &mut f64) {
        if !support.is_empty() {
            let sub = phi.select_columns(support.iter());
            let eig = SymmetricEigen::new(sub.transpose() * &sub);
            for l in eig.eigenvalues.iter() {
                *best = best.max((l - 1.0).abs());
            }
        }
        if support.len() == k {
            return;
        }
        for c in from..phi.ncols() {
            support.push(c);
            walk(phi, k, c + 1, support, best);
            support.pop();
        }
    }
    let mut best = 0.0;
    walk(phi, k, 0, &mut Vec::new(), &mut best);
    best
}

fn rip_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut max_diff = 0.0f64;
    for i in 0..20 {
        let k = i % 3 + 1;
        let mat = random_matrix(&mut rng, 12, 24);
        let r = rip_constant(&mat, k, RipMode::Exhaustive, DEFAULT_SUPPORT_BUDGET).map_err(|e| e.to_string())?;
        let got = r.delta_exact.ok_or("exhaustive mode returned no exact delta")?;
        let oracle = eigen_delta(&dense(&mat), k);
        let diff = (got - oracle).abs();
        ensure(diff <= 1e-9, || format!("matrix {i} K={k}: rip_constant {got}, oracle {oracle}"))?;
        max_diff = max_diff.max(diff);
    }
    Ok(format!("20 matrices 12x24, K <= 3, max |diff| = {max_diff:.2e}"))
}

fn fro_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut max_diff = 0.0f64;
    for i in 0..20 {
        let m = rng.gen_range(2..=24usize);
        let n = rng.gen_range(2..=48usize);
        let mat = random_matrix(&mut rng, m, n);
        let theta = fro_constant(&mat, 1, DEFAULT_SUPPORT_BUDGET).map_err(|e| e.to_string())?.theta_emp;
        let mu = coherence(&mat).map_err(|e| e.to_string())?.mu;
        let diff = (theta - mu).abs();
        ensure(diff <= 1e-12, || format!("matrix {i} {m}x{n}: theta_1 {theta}, mu {mu}"))?;
        max_diff = max_diff.max(diff);
    }
    Ok(format!("20 matrices, max |theta_1 - mu| = {max_diff:.2e}"))
}

fn random_code(rng: &mut ChaCha8Rng) -> BinaryCode {
    loop {
        let n = rng.gen_range(1..=10usize);
        let q = rng.gen_range(n..=64usize);
        let rows: Vec<Vec<u8>> = (0..n).map(|_| (0..q).map(|_| rng.gen_range(0..=1u8)).collect()).collect();
        if let Ok(code) = BinaryCode::new(&rows) {
            return code;
        }
    }
}

/// `max over nonempty masks of |sum_x prod_{i in mask} x_i|`, by direct products.
fn brute_bias(signs: &[Vec<i8>]) -> u64 {
    let n = signs[0].len();
    (1u64..1 << n)
        .map(|mask| {
            signs
                .iter()
                .map(|x| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| x[i] as i64).product::<i64>())
                .sum::<i64>()
                .unsigned_abs()
        })
        .max()
        .unwrap_or(0)
}

fn columns(code: &BinaryCode) -> Vec<u64> {
    let mut cols: Vec<u64> = (0..code.len()).map(|c| code.column_mask(c)).collect();
    cols.sort_unstable();
    cols
}

fn codes_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..50 {
        let code = random_code(&mut rng);
        let q = code.len() as u64;
        // Weight window of the generated code, from its codewords directly.
        let rows = code.rows();
        let imbalance = (1u64..1 << code.dim())
            .map(|msg| {
                let w = (0..code.len())
                    .filter(|&c| (0..code.dim()).filter(|&r| msg >> r & 1 == 1).map(|r| rows[r][c]).sum::<u8>() % 2 == 1)
                    .count() as i64;
                (q as i64 - 2 * w).unsigned_abs()
            })
            .max()
            .unwrap_or(0);
        let eps = Ratio::new(imbalance, q);
        let a = code_to_biased(&code, eps).map_err(|e| format!("code {i}: {e}"))?;
        let signs = a.set.signs();
        let bias = brute_bias(&signs);
        ensure(a.pass && Ratio::new(bias, q) <= eps, || {
            format!("code {i}: bias {bias}/{q} exceeds window {eps}")
        })?;
        match biased_to_code(&a.set).map_err(|e| format!("code {i}: {e}"))? {
            CodeFromBiased::Code { code: back, window_holds, .. } => {
                ensure(window_holds && back.dim() == code.dim(), || format!("code {i}: window or rank lost"))?;
                ensure(columns(&back) == columns(&code), || format!("code {i}: columns differ after round trip"))?;
            }
            other => return Err(format!("code {i}: unexpected {other:?}")),
        }
    }
    Ok("50 generators recovered up to column order, bias within window".into())
}

fn entropy_welch() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tightest = f64::INFINITY;
    for i in 0..50 {
        let n = rng.gen_range(1..=12usize);
        let q = rng.gen_range(1..=1usize << (n - 1));
        let signs: Vec<Vec<i8>> = (0..q).map(|_| (0..n).map(|_| if rng.gen() { 1 } else { -1 }).collect()).collect();
        let set = BiasedSet::new(&signs).map_err(|e| e.to_string())?;
        let w = welch_entropy_check(&set).map_err(|e| e.to_string())?;
        let s = brute_bias(&signs);
        ensure(w.exact_bias.max_abs_sum == s, || format!("set {i}: library bias {} vs {s}", w.exact_bias.max_abs_sum))?;
        // (s/q)^2 >= (2^n - q) / (q (2^n - 1))  <=>  s^2 (2^n - 1) >= q (2^n - q)
        let two_n = 1i128 << n;
        let (s, q) = (s as i128, q as i128);
        let lhs = s * s * (two_n - 1);
        let rhs = q * (two_n - q);
        ensure(lhs >= rhs && w.holds, || format!("set {i} n={n} q={q}: {lhs} < {rhs}"))?;
        if rhs > 0 {
            tightest = tightest.min(lhs as f64 / rhs as f64);
        }
    }
    Ok(format!("50 sets exact, min lhs/rhs = {tightest:.3}"))
}

fn conjecture_smoke() -> Outcome {
    let start = Instant::now();
    ensure(binomial(32, 4) == 35_960, || "C(32,4) != 35960".into())?;
    let seeds: Vec<u64> = (0..20).collect();
    let s = conjecture_scan(16, 32, 2, PrimeSelection::FirstAbove { count: 20 }, 0.5, &seeds, DEFAULT_SUPPORT_BUDGET)
        .map_err(|e| e.to_string())?;
    ensure(s.order == 4 && s.rows.len() == 20 && s.baseline.len() == 20, || {
        format!("order {} with {} primes and {} baselines", s.order, s.rows.len(), s.baseline.len())
    })?;
    ensure(s.rows.iter().all(|r| r.p > 512), || "a scanned prime is not above MN".into())?;
    within(start, Duration::from_secs(300), "scan")?;
    let fmt = |sp: Option<legendre_rip::verify::Spread>| match sp {
        Some(sp) => format!("[{:.4}, {:.4}, {:.4}]", sp.min, sp.median, sp.max),
        None => "-".into(),
    };
    Ok(format!(
        "primes {}..{}, legendre delta_4 min/median/max {}, bernoulli {}, overlap {:?}",
        s.rows[0].p,
        s.rows[19].p,
        fmt(s.legendre_spread),
        fmt(s.baseline_spread),
        s.overlap
    ))
}

struct Run {
    status: Option<i32>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    files: Vec<Vec<u8>>,
}

fn run_cli(args: &[String], threads: usize, outputs: &[&Path]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_legendre-rip"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("binary runs");
    let files = outputs
        .iter()
        .map(|p| {
            let bytes = std::fs::read(p).unwrap_or_default();
            let _ = std::fs::remove_file(p);
            bytes
        })
        .collect();
    Run {
        status: out.status.code(),
        stdout: out.stdout,
        stderr: out.stderr,
        files,
    }
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name);
    let s = |p: &Path| p.display().to_string();

    let params = DesignParams::explicit(16, 32, 12).map_err(|e| e.to_string())?;
    let cert = PrimeCert::certify(&big(4621)).map_err(|e| e.to_string())?;
    let seed = Seed::generate(12, 7).map_err(|e| e.to_string())?;
    let mat = build_legendre_seeded(&params, &seed, &cert).map_err(|e| e.to_string())?;
    let matrix = path("m.ripm");
    std::fs::write(&matrix, write_ripm(&mat)).map_err(|e| e.to_string())?;
    let code = BinaryCode::new(&[vec![1, 0, 0, 1, 1, 0, 1], vec![0, 1, 0, 1, 0, 1, 1], vec![0, 0, 1, 0, 1, 1, 1]])
        .map_err(|e| e.to_string())?;
    let code_file = path("c.code");
    std::fs::write(&code_file, write_code(&code)).map_err(|e| e.to_string())?;
    let set = BiasedSet::new(&[vec![1, 1, -1], vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, -1]])
        .map_err(|e| e.to_string())?;
    let bset_file = path("b.bset");
    std::fs::write(&bset_file, write_bset(&set)).map_err(|e| e.to_string())?;
    let out = path("out");
    let report = path("report");

    let cases: Vec<(String, Vec<&Path>)> = vec![
        ("plan --n 1000 --k 5 --delta 0.5".into(), vec![]),
        (format!("gen --m 16 --n 32 --h 12 --seed 7 --out {}", s(&out)), vec![&out]),
        ("gen --m 8 --n 16 --k 2 --delta 0.9 --h 10 --seed 1".into(), vec![]),
        ("gen --deterministic --m 8 --n 16".into(), vec![]),
        ("gen --bernoulli --m 8 --n 16 --rng-seed 3".into(), vec![]),
        (format!("verify --matrix {} --k 2", s(&matrix)), vec![]),
        (
            format!("verify --matrix {} --checks rip --mode sampled --k 3 --samples 300 --rng-seed 5", s(&matrix)),
            vec![],
        ),
        (
            format!("verify --matrix {} --checks coherence,fro --format json --report {}", s(&matrix), s(&report)),
            vec![&report],
        ),
        ("bias --h 10 --index-set 1,3,7 --m 4 --n-cols 8".into(), vec![]),
        ("bias --h 20 --index-set 1,2 --samples 500 --rng-seed 9".into(), vec![]),
        ("charsum --p 10007 --offsets 1,2,5 --t 5000".into(), vec![]),
        ("scan-conjecture --m 4 --n 8 --k 1 --first 5 --baseline-seeds 5".into(), vec![]),
        (format!("code-convert --input {} --out {}", s(&code_file), s(&out)), vec![&out]),
        (format!("code-convert --input {}", s(&bset_file)), vec![]),
        (format!("recover --matrix {} --signal 3:1.5,10:-2 --k 2", s(&matrix)), vec![]),
        ("sweep --ensemble legendre-seeded --m 16 --n 32 --k-range 1:4 --trials 20 --rng-seed 1".into(), vec![]),
        ("sweep --ensemble bernoulli --m 16 --n 32 --k-range 1:4 --trials 20 --rng-seed 1".into(), vec![]),
        ("sweep --ensemble legendre-deterministic --prime 521 --m 16 --n 32 --k-range 1:3 --trials 10".into(), vec![]),
        ("matching --q 8 --colors 3".into(), vec![]),
    ];
    for (line, outputs) in &cases {
        let args: Vec<String> = line.split_whitespace().map(String::from).collect();
        let first = run_cli(&args, 1, outputs);
        ensure(first.status == Some(0), || {
            format!("`{line}` exited {:?}: {}", first.status, String::from_utf8_lossy(&first.stderr))
        })?;
        ensure(!first.stdout.is_empty() || first.files.iter().any(|f| !f.is_empty()), || {
            format!("`{line}` produced no output")
        })?;
        for threads in [4, 4] {
            let again = run_cli(&args, threads, outputs);
            let same = again.status == first.status
                && again.stdout == first.stdout
                && again.stderr == first.stderr
                && again.files == first.files;
            ensure(same, || format!("`{line}` differs with {threads} threads"))?;
        }
    }
    Ok(format!("{} commands byte-identical over 1, 4, 4 threads", cases.len()))
}
