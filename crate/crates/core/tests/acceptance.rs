//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kummer_core::algebra::{AlgebraElement, ExpVec};
use kummer_core::assembler::{assemble, CrossedProductReport};
use kummer_core::homology::{
    random_twisted_cycle, reduce_twisted_cycle, twisted_homology, twisted_result, untwisted_homology, untwisted_result,
};
use kummer_core::koszul::{block_matrix, BlockKey, KoszulChain, WedgeIndex};
use kummer_core::les_solver::{cyclic_from_hochschild, periodic_from_cyclic};
use kummer_core::linalg::{exact_rank, rank, RankOptions};
use kummer_core::scalars::{LambdaMonomial, Scalar};
use kummer_core::transport::{h_map, invariance_sign, k_map};

type Outcome = Result<String, String>;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// 2^n + 1, C(n, 2k), 0.
fn hh_oracle(n: usize, s: usize) -> usize {
    if s == 0 {
        (1 << n) + 1
    } else if s % 2 == 1 {
        0
    } else {
        binom(n, s)
    }
}

fn crossed_products() -> Result<BTreeMap<usize, CrossedProductReport>, String> {
    let mut out = BTreeMap::new();
    for (n, opts) in [(2, RankOptions::exact()), (3, RankOptions::exact()), (4, RankOptions::modular(0x5eed))] {
        let u = untwisted_result(n, 3, &opts).map_err(|e| format!("n={n} untwisted: {e}"))?;
        let t = twisted_result(n, 3, 2, &opts).map_err(|e| format!("n={n} twisted: {e}"))?;
        let report = assemble(n, &u, &t).map_err(|e| e.to_string())?;
        out.insert(n, report);
    }
    Ok(out)
}

fn crossed_product_hochschild(reports: &BTreeMap<usize, CrossedProductReport>) -> Outcome {
    let mut summary = Vec::new();
    for (n, r) in reports {
        let expected: Vec<usize> = (0..=*n).map(|s| hh_oracle(*n, s)).collect();
        let computed: Vec<usize> = r.hh_dims.values().copied().collect();
        if computed != expected {
            return Err(format!("n={n}: computed {computed:?}, expected {expected:?}"));
        }
        summary.push(format!("n={n} {computed:?}"));
    }
    Ok(summary.join("; "))
}

fn cyclic_closed_form(reports: &BTreeMap<usize, CrossedProductReport>) -> Outcome {
    let mut summary = Vec::new();
    for (n, r) in reports {
        let cyclic = cyclic_from_hochschild(&r.hh_dims, 8).map_err(|e| e.to_string())?;
        for k in 0..=8 {
            let expected = if k % 2 == 1 { 0 } else { (0..=k).step_by(2).map(|j| binom(*n, j)).sum::<usize>() + (1 << n) };
            if cyclic.hc_dims[&k] != expected {
                return Err(format!("n={n} HC_{k}: computed {}, expected {expected}", cyclic.hc_dims[&k]));
            }
        }
        summary.push(format!("n={n} {:?}", cyclic.hc_dims.values().collect::<Vec<_>>()));
    }
    Ok(summary.join("; "))
}

fn periodic_closed_form(reports: &BTreeMap<usize, CrossedProductReport>) -> Outcome {
    let mut summary = Vec::new();
    for (n, r) in reports {
        let cyclic = cyclic_from_hochschild(&r.hh_dims, 8).map_err(|e| e.to_string())?;
        let (even, odd) = periodic_from_cyclic(&cyclic).map_err(|e| e.to_string())?;
        if (even, odd) != (3 * (1 << (n - 1)), 0) {
            return Err(format!("n={n}: HP = ({even}, {odd})"));
        }
        summary.push(format!("n={n} ({even}, {odd})"));
    }
    Ok(summary.join("; "))
}

fn invariance_sign_law() -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for s in 0..=n {
            for w in WedgeIndex::all(n, s) {
                let eps = invariance_sign(n, w).map_err(|e| format!("n={n} {w}: {e}"))?;
                let expected = Scalar::from_int(if s % 2 == 0 { 1 } else { -1 });
                if eps != expected {
                    return Err(format!("n={n} wedge {w}: got {eps}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} wedges, all (-1)^s"))
}

fn twisted_vanishing() -> Outcome {
    let mut summary = Vec::new();
    for (n, opts) in [(2, RankOptions::exact()), (3, RankOptions::exact()), (4, RankOptions::modular(0xfeed))] {
        for s in 1..=n {
            // windows 3 and 4, margin 2
            let t = twisted_homology(n, s, 4, 2, &opts).map_err(|e| format!("n={n} s={s}: {e}"))?;
            if t.dim != 0 || !t.stabilized {
                return Err(format!("n={n} s={s}: dim {} stabilized {}", t.dim, t.stabilized));
            }
        }
        summary.push(format!("n={n} H_1..H_{n} = 0"));
    }
    Ok(summary.join("; "))
}

fn constructive_reduction() -> Outcome {
    let mut failures = Vec::new();
    for n in [2, 3] {
        for seed in 0..100u64 {
            let gamma = random_twisted_cycle(n, 1, 2, 1000 * n as u64 + seed);
            match reduce_twisted_cycle(&gamma) {
                Ok(cert) if cert.verify() => {}
                Ok(_) => failures.push(format!("n={n} seed={seed}: round trip failed")),
                Err(e) => failures.push(format!("n={n} seed={seed}: {e}")),
            }
        }
    }
    if failures.is_empty() {
        Ok("200 cycles reduced, zero residuals".into())
    } else {
        Err(failures.join("; "))
    }
}

fn random_scalar(rng: &mut ChaCha8Rng, vars: usize) -> Scalar {
    let mut acc = Scalar::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let m = LambdaMonomial::from_exponents((0..vars).map(|_| rng.gen_range(-2..=2)));
        acc = &acc + &(&Scalar::from_int(rng.gen_range(-3..=3)) * &Scalar::monomial(m));
    }
    acc
}

fn random_chain(rng: &mut ChaCha8Rng, n: usize, s: usize) -> KoszulChain {
    let wedges = WedgeIndex::all(n, s);
    let mut x = KoszulChain::zero(n, s);
    for _ in 0..rng.gen_range(1..=5) {
        let b: Vec<i32> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let w = wedges[rng.gen_range(0..wedges.len())];
        x.add_term(ExpVec::from_slice(&b), w, random_scalar(rng, 3));
    }
    x
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> AlgebraElement {
    let mut a = AlgebraElement::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let b: Vec<i32> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        a.add_term(ExpVec::from_slice(&b), Scalar::from_int(rng.gen_range(-3..=3)));
    }
    a
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce55);
    // d∘d = 0
    for _ in 0..200 {
        let n = rng.gen_range(2..=4);
        let s = rng.gen_range(2..=n);
        let x = random_chain(&mut rng, n, s);
        if !x.untwisted_diff().untwisted_diff().is_zero() || !x.twisted_diff().twisted_diff().is_zero() {
            return Err(format!("d∘d ≠ 0 on {x}"));
        }
    }
    // associativity and the flip automorphism
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let (a, b, c) = (random_element(&mut rng, n), random_element(&mut rng, n), random_element(&mut rng, n));
        if a.multiply(&b).multiply(&c) != a.multiply(&b.multiply(&c)) {
            return Err("associativity fails".into());
        }
        if a.multiply(&b).flip() != a.flip().multiply(&b.flip()) || a.flip().flip() != a {
            return Err("flip is not an involutive automorphism".into());
        }
    }
    // k∘h = id on generators
    for n in 1..=4 {
        for s in 0..=n {
            for w in WedgeIndex::all(n, s) {
                let g = KoszulChain::basis(ExpVec::zero(n), w, Scalar::one());
                if k_map(&h_map(&g)).map_err(|e| e.to_string())? != g {
                    return Err(format!("k∘h ≠ id on n={n} {w}"));
                }
            }
        }
    }
    // field axioms
    for _ in 0..200 {
        let (x, y, z) = (random_scalar(&mut rng, 6), random_scalar(&mut rng, 6), random_scalar(&mut rng, 6));
        let distributes = &x * &(&y + &z) == &(&x * &y) + &(&x * &z);
        let associates = &(&x * &y) * &z == &x * &(&y * &z);
        let commutes = &x * &y == &y * &x && &x + &y == &y + &x;
        let inverts = x.is_zero() || (&x * &x.inv().unwrap()).is_one();
        if !(distributes && associates && commutes && inverts) {
            return Err(format!("field axioms fail on {x}, {y}, {z}"));
        }
    }
    // exact vs modular ranks on 50 block matrices
    let mut agreements = 0;
    while agreements < 50 {
        let n = rng.gen_range(2..=3);
        let s = rng.gen_range(1..=n);
        let window = rng.gen_range(1..=2);
        let key = if rng.gen_bool(0.5) {
            let v: Vec<i32> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
            BlockKey::twisted(&ExpVec::from_slice(&v))
        } else {
            let v: Vec<i32> = (0..n).map(|_| rng.gen_range(-window..=window)).collect();
            BlockKey::untwisted(ExpVec::from_slice(&v))
        };
        let m = block_matrix(n, s, &key, window).matrix;
        let seed = rng.gen();
        let modular = rank(&m, &RankOptions::modular(seed)).map_err(|e| e.to_string())?;
        if modular.rank != exact_rank(&m) {
            return Err(format!("rank mismatch on {key} s={s} L={window}"));
        }
        agreements += 1;
    }
    Ok("d∘d, associativity, flip, k∘h, field axioms, 50 rank agreements".into())
}

fn untwisted_concentration() -> Outcome {
    let mut summary = Vec::new();
    for n in [2, 3] {
        let r = untwisted_homology(n, n, 3, &RankOptions::exact()).map_err(|e| format!("n={n}: {e}"))?;
        let expected = 7usize.pow(n as u32) - 1;
        for b in &r.blocks_checked {
            if b.nonzero_blocks_exact != expected || b.zero_block_dim != binom(n, b.degree) {
                return Err(format!("n={n} degree {}: {b:?}", b.degree));
            }
        }
        summary.push(format!("n={n}: {expected} blocks exact"));
    }
    Ok(summary.join("; "))
}

fn main() {
    let mut results: Vec<(&str, Outcome, f64)> = Vec::new();
    let mut timed = |name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let r = f();
        results.push((name, r, start.elapsed().as_secs_f64()));
    };
    let start = Instant::now();
    let reports = crossed_products();
    let setup = start.elapsed().as_secs_f64();
    let with_reports = |f: fn(&BTreeMap<usize, CrossedProductReport>) -> Outcome| -> Outcome {
        reports.as_ref().map_err(Clone::clone).and_then(f)
    };
    timed("crossed-product Hochschild dimensions", &|| with_reports(crossed_product_hochschild));
    timed("cyclic homology closed form", &|| with_reports(cyclic_closed_form));
    timed("periodic cyclic homology closed form", &|| with_reports(periodic_closed_form));
    timed("invariance sign law", &invariance_sign_law);
    timed("twisted homology vanishing", &twisted_vanishing);
    timed("constructive twisted reduction", &constructive_reduction);
    timed("property suites", &property_suites);
    timed("untwisted concentration at 0", &untwisted_concentration);

    println!("acceptance (crossed-product setup {setup:.1}s)");
    let mut failed = 0;
    for (k, (name, outcome, secs)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS  {}. {name} [{secs:.1}s]: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {name} [{secs:.1}s]: {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
