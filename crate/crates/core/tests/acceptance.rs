//! Acceptance suite. Every check is exact; each criterion prints one line.

use std::collections::HashSet;
use std::io::Write;
use std::time::Instant;

use localinv_core::*;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn dims(d: &[usize]) -> DimensionVector {
    DimensionVector::new(d.to_vec()).unwrap()
}

/// Multidegrees with total in `1..=max_total`: one label, or two labels
/// both used.
fn alphas(max_total: usize) -> Vec<MultiDegree> {
    let mut out = Vec::new();
    for k in 1..=max_total {
        out.push(MultiDegree::new(vec![k]));
        for a in MultiDegree::all_with_total(2, k) {
            if a.degrees.iter().all(|&x| x > 0) {
                out.push(a);
            }
        }
    }
    out
}

fn monomials(d: &DimensionVector, max_total: usize) -> Vec<TraceMonomial> {
    alphas(max_total)
        .iter()
        .flat_map(|a| enumerate_generators(a, d, EnumerationFilter::default()).unwrap())
        .collect()
}

fn suite() -> Vec<(DimensionVector, Vec<TraceMonomial>)> {
    vec![
        (dims(&[2, 2]), monomials(&dims(&[2, 2]), 4)),
        (dims(&[2, 3]), monomials(&dims(&[2, 3]), 3)),
    ]
}

fn c1_invariance() -> Outcome {
    let mut checked = 0usize;
    for (d, ts) in suite() {
        for (ti, t) in ts.iter().enumerate() {
            for s in 0..20u64 {
                let seed = 1_000_000 + 1000 * ti as u64 + s;
                let mut sampler = InputSampler::new(seed);
                let x = sampler.endotuple(&d, t.m());
                let g = sampler.group_element(&d).map_err(|e| e.to_string())?;
                let y = local_conjugate(&x, &g).map_err(|e| e.to_string())?;
                let lhs = evaluate(t, &y).map_err(|e| e.to_string())?;
                let rhs = evaluate(t, &x).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!(
                        "{} at d={:?} seed {seed}: {lhs} != {rhs}",
                        t.render(),
                        d.dims()
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (monomial, input, g) triples invariant"))
}

fn c2_consistency() -> Outcome {
    let mut checked = 0usize;
    for (d, ts) in suite() {
        for (ti, t) in ts.iter().enumerate() {
            let plan = plan_contraction(t, &d, None).map_err(|e| e.to_string())?;
            for s in 0..3u64 {
                let seed = 2_000_000 + 1000 * ti as u64 + s;
                let simple = random_simple_tuple(&d, t.m(), seed);
                let expanded = EndoTuple::new(simple.iter().map(kron_expand).collect()).unwrap();
                let a = evaluate(t, &expanded).map_err(|e| e.to_string())?;
                let b = evaluate_simple(t, &simple).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("simple mismatch for {}: {a} != {b}", t.render()));
                }
                let x = random_endotuple(&d, t.m(), seed);
                let a = evaluate(t, &x).map_err(|e| e.to_string())?;
                let b = evaluate_with_plan(t, &x, &plan).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("plan mismatch for {}: {a} != {b}", t.render()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} monomial/input pairs agree across definitions"
    ))
}

fn c3_commutant() -> Outcome {
    let cases: [(&[usize], usize); 6] = [
        (&[2], 2),
        (&[2], 3),
        (&[3], 2),
        (&[2, 2], 1),
        (&[2, 2], 2),
        (&[2, 3], 2),
    ];
    let mut parts = Vec::new();
    for (dv, m) in cases {
        let d = dims(dv);
        let rho = span_dimension_rho(&d, m).map_err(|e| e.to_string())?;
        let mu = commutant_dimension_mu(&d, m).map_err(|e| e.to_string())?;
        if rho.certainty != Certainty::Exact || mu.certainty != Certainty::Exact {
            return Err(format!("non-exact dimension at d={dv:?}, m={m}"));
        }
        if rho.value != mu.value {
            return Err(format!(
                "d={dv:?}, m={m}: rho {} != mu {}",
                rho.value, mu.value
            ));
        }
        let product: usize = dv
            .iter()
            .map(|&di| span_dimension_rho(&dims(&[di]), m).map(|x| x.value))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.to_string())?
            .iter()
            .product();
        if product != rho.value {
            return Err(format!(
                "product formula fails at d={dv:?}, m={m}: {product} != {}",
                rho.value
            ));
        }
        parts.push(format!("{dv:?},m={m}:{}", rho.value));
    }
    Ok(parts.join(" "))
}

fn c4_generation() -> Outcome {
    let d = dims(&[2, 2]);
    let mut parts = Vec::new();
    for a in alphas(4) {
        let r = verify_generation(&a, &d, 7).map_err(|e| e.to_string())?;
        if !r.matches {
            return Err(format!(
                "alpha {a}: oracle {} vs span {}",
                r.oracle_dim, r.span_dim
            ));
        }
        parts.push(format!("{a}:{}", r.span_dim));
    }
    Ok(parts.join(" "))
}

fn c5_factoring() -> Outcome {
    let d = dims(&[2, 2]);
    let t = TraceMonomial::parse(&[1, 2, 1], 2, &["(12)", "(23)"]).map_err(|e| e.to_string())?;
    let expected = {
        let mut v = vec![
            TraceMonomial::parse(&[1, 2], 2, &["(12)", "(12)"])
                .unwrap()
                .canonicalize(),
            TraceMonomial::parse(&[1], 2, &["(1)", "(1)"])
                .unwrap()
                .canonicalize(),
        ];
        v.sort_by_key(|x| x.encoding());
        v
    };
    let mut got = t.factor();
    got.sort_by_key(|x| x.encoding());
    if got != expected {
        let r: Vec<String> = got.iter().map(|x| x.render()).collect();
        return Err(format!("(1,2,1) factored as {r:?}"));
    }
    let u = TraceMonomial::parse(&[2, 1, 1], 2, &["(12)", "(23)"]).map_err(|e| e.to_string())?;
    let uf = u.factor();
    if uf.len() != 1 {
        return Err(format!("(2,1,1) split into {} factors", uf.len()));
    }
    for (mono, factors) in [(&t, &got), (&u, &uf)] {
        for s in 0..5u64 {
            let x = random_simple_tuple(&d, 2, 5_000 + s);
            let whole = evaluate_simple(mono, &x).map_err(|e| e.to_string())?;
            let mut prod = Scalar::one();
            for f in factors.iter() {
                prod *= evaluate_simple(f, &x).map_err(|e| e.to_string())?;
            }
            if whole != prod {
                return Err(format!("{} differs from its factor product", mono.render()));
            }
        }
    }
    Ok("(1,2,1) = (12),(12)^(1,2) * id^(1); (2,1,1) irreducible".into())
}

fn partitions_bounded(n: usize, max_part: usize) -> u64 {
    fn rec(left: usize, max_part: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        (1..=max_part.min(left)).map(|p| rec(left - p, p)).sum()
    }
    rec(n, max_part)
}

fn c6_necklaces_hilbert() -> Outcome {
    for m in 1..=3usize {
        for k in 1..=6usize {
            let mut seen = HashSet::new();
            let total = m.pow(k as u32);
            for mut x in 0..total {
                let mut w = Vec::with_capacity(k);
                for _ in 0..k {
                    w.push(x % m);
                    x /= m;
                }
                let rot = (0..k).map(|r| [&w[r..], &w[..r]].concat()).min().unwrap();
                seen.insert(rot);
            }
            let count = necklace_count(m as u64, k as u64).to_usize().unwrap();
            if count != seen.len() || enumerate_necklaces(m, k).len() != seen.len() {
                return Err(format!(
                    "necklaces m={m}, k={k}: {count} vs brute force {}",
                    seen.len()
                ));
            }
        }
    }
    let s = hs_single(1, 2, 12).map_err(|e| e.to_string())?;
    let ints = s.integer_coeffs().ok_or("non-integer coefficients")?;
    for (j, c) in ints.iter().enumerate() {
        if *c != BigInt::from(partitions_bounded(j, 4)) {
            return Err(format!("hs_single(1,2)[{j}] = {c}"));
        }
    }
    for dv in [&[2usize, 2][..], &[2, 3]] {
        let d = dims(dv);
        let n = default_order(&d);
        let local = hs_local(1, &d, n).map_err(|e| e.to_string())?;
        let singles: Vec<PowerSeries> = dv.iter().map(|&di| hs_single(1, di, n).unwrap()).collect();
        for j in 0..=n {
            let prod: Scalar = singles.iter().map(|s| s.coeffs()[j].clone()).product();
            if local.coeffs()[j] != prod {
                return Err(format!(
                    "hs_local product identity fails at d={dv:?}, j={j}"
                ));
            }
        }
    }
    Ok("necklaces m<=3,k<=6; partitions to order 12; product identity".into())
}

fn c7_rationality() -> Outcome {
    let mut parts = Vec::new();
    for dv in [&[2usize, 2][..], &[2, 3]] {
        let d = dims(dv);
        let (n, _, rec) = reconstruct_local(1, &d, None, MAX_ORDER).map_err(|e| e.to_string())?;
        let f = rec
            .function()
            .ok_or_else(|| format!("reconstruction inconclusive at d={dv:?}, N={n}"))?;
        let bound = d.dim_v() * d.dim_v();
        let poles = check_pole_orders(f, bound);
        if !poles.ok {
            return Err(format!("pole check failed at d={dv:?}"));
        }
        parts.push(format!(
            "d={dv:?} N={n} deg P={} numerator_is_one={} exponents={:?}",
            f.num_degree(),
            f.numerator_is_one(),
            poles.exponents
        ));
        report(&format!(
            "  numerator d={dv:?}: {:?}",
            f.num().iter().map(|c| c.to_string()).collect::<Vec<_>>()
        ));
    }
    Ok(parts.join("; "))
}

fn c8_bounds() -> Outcome {
    let d = dims(&[2, 2]);
    let b = degree_bounds(1, &d);
    let ok = b.segre == 16
        && b.final_m1 == Some(16)
        && b.small_dim == Some(9)
        && b.girth_small_dim == Some(vec![3, 3]);
    let b2 = degree_bounds(2, &d);
    if !ok || b2.segre != 32 {
        return Err(format!("{b:?} / m=2 segre {}", b2.segre));
    }
    Ok("segre 16, final 16, small-dim 9, girth (3,3); m=2 segre 32".into())
}

fn c9_empirical() -> Outcome {
    let r = verify_bound_empirically(&dims(&[2, 2]), 4, 11).map_err(|e| e.to_string())?;
    let observed: Vec<usize> = r
        .degrees
        .iter()
        .filter(|g| g.new_generators)
        .map(|g| g.degree)
        .collect();
    if let Some(&k) = observed.iter().find(|&&k| k > 9) {
        return Err(format!("new generator at degree {k}"));
    }
    Ok(format!("new-generator degrees {observed:?}, all <= 9"))
}

/// Written straight to stderr so the lines show even when output is captured.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 invariance", c1_invariance),
        ("2 definition consistency", c2_consistency),
        ("3 commutant dimensions", c3_commutant),
        ("4 generation", c4_generation),
        ("5 factoring", c5_factoring),
        ("6 necklaces and Hilbert series", c6_necklaces_hilbert),
        ("7 rationality and poles", c7_rationality),
        ("8 bound report", c8_bounds),
        ("9 empirical degrees", c9_empirical),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => report(&format!("criterion {name}: PASS ({secs:.1}s) {msg}")),
            Err(msg) => {
                report(&format!("criterion {name}: FAIL ({secs:.1}s) {msg}"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
