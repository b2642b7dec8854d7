//! The acceptance checklist. Each test covers one release criterion and
//! prints a single PASS/FAIL line (run with --nocapture to see them all);
//! on failure the line is followed by the individual findings.
//!
//! Where a criterion needs an expected value, it is computed here from
//! scratch — integer arithmetic, brute-force expansion, bit masks — rather
//! than through the library code under test.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rmorbit::builder::{
    arity_required, block_bound_holds, build_with_provenance, rm_constraint, total_bound_holds,
};
use rmorbit::constraint::{point_index, AffineTransform, Constraint, FunctionTable};
use rmorbit::derivative::{core_constraint, core_polynomial, verify_core, DEFAULT_POINT_BUDGET};
use rmorbit::gf::{Elem, Field};
use rmorbit::oracle::{
    delete_point, orbit_span_rank, rm_dimension, verify_deg_border, zero_coefficient, RankStatus,
};
use rmorbit::poly::{binom_mod_p, border_set, degree_set, exponent_vectors, multinomial_nonzero};
use rmorbit::tester::{estimate_rejection, exact_rejection, DEFAULT_TRANSFORM_BUDGET};

/// The (q, n, d) points where exhaustive orbit certification is feasible.
const CERT_GRID: [(u32, usize, u64); 7] = [
    (2, 2, 1),
    (2, 2, 2),
    (2, 3, 1),
    (3, 2, 1),
    (3, 2, 2),
    (4, 2, 2),
    (4, 2, 3),
];

macro_rules! req {
    ($fails:expr, $cond:expr, $($msg:tt)+) => {
        if !($cond) {
            $fails.push(format!($($msg)+));
        }
    };
}

fn conclude(label: &str, fails: &[String]) {
    if fails.is_empty() {
        println!("{label}: PASS");
    } else {
        println!("{label}: FAIL");
        for f in fails {
            println!("  - {f}");
        }
        panic!("{label}: FAIL ({} finding(s))", fails.len());
    }
}

fn random_codeword<R: Rng>(rng: &mut R, field: &Field, n: usize, d: u64) -> FunctionTable {
    let mut table = FunctionTable::zero(field.clone(), n).unwrap();
    let q = field.order() as u16;
    for e in degree_set(n, d, field.order()) {
        let coeff = Elem(rng.gen_range(0..q));
        if coeff.0 == 0 {
            continue;
        }
        let mono = FunctionTable::monomial(field.clone(), n, &e).unwrap();
        table = table.add(&mono.scale(coeff)).unwrap();
    }
    table
}

#[test]
fn criterion_1_core_verification_at_nine_field_orders() {
    let mut fails = Vec::new();
    for q in [2u32, 4, 8, 16, 3, 9, 5, 25, 7] {
        let field = Field::of_order(q).unwrap();
        match verify_core(&field, DEFAULT_POINT_BUDGET) {
            Ok(r) => {
                req!(fails, r.pass, "q={q}: {:?}", r.failure);
                req!(fails, r.k <= r.upper_bound, "q={q}: k={} above {}", r.k, r.upper_bound);
                req!(fails, r.k as i64 >= r.lower_bound, "q={q}: k={} below {}", r.k, r.lower_bound);
                req!(fails, r.reject_check, "q={q}: canonical monomial not rejected");
            }
            Err(e) => fails.push(format!("q={q}: {e}")),
        }
    }
    conclude("criterion 1 (core verification at nine field orders)", &fails);
}

/// Expands the alternating sum of (x_p + Σ_{i∈I} x_i)^(q-1) over all subsets
/// I of the first p-1 variables and divides out x_1⋯x_{p-1}, entirely in
/// integer arithmetic mod p. All coefficients of the expansion lie in the
/// prime subfield, so this reproduces the core polynomial with none of the
/// library's field or polynomial machinery.
fn expanded_core(p: u32, q: u32) -> BTreeMap<Vec<u32>, u32> {
    let nv = p as usize; // variables x_1..x_{p-1} and, last, x_p
    let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    for mask in 0u32..1 << (p - 1) {
        let mut vars = vec![nv - 1];
        for i in 0..p - 1 {
            if mask >> i & 1 == 1 {
                vars.push(i as usize);
            }
        }
        // (sum of the chosen variables)^(q-1) by repeated multiplication
        let mut poly: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        poly.insert(vec![0; nv], 1);
        for _ in 0..q - 1 {
            let mut next: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
            for (e, c) in &poly {
                for &v in &vars {
                    let mut e2 = e.clone();
                    e2[v] += 1;
                    let slot = next.entry(e2).or_insert(0);
                    *slot = (*slot + c) % p;
                }
            }
            poly = next;
        }
        let sign = if (p - 1 - mask.count_ones()) % 2 == 0 { 1 } else { p - 1 };
        for (e, c) in poly {
            let slot = acc.entry(e).or_insert(0);
            *slot = (*slot + c * sign) % p;
        }
    }
    let mut quotient = BTreeMap::new();
    for (e, c) in acc {
        if c == 0 {
            continue;
        }
        assert!(
            e[..nv - 1].iter().all(|&x| x >= 1),
            "alternating sum not divisible by the variable product"
        );
        let mut e2 = e;
        for x in &mut e2[..nv - 1] {
            *x -= 1;
        }
        quotient.insert(e2, c);
    }
    quotient
}

#[test]
fn criterion_2_known_core_values_match_an_independent_expansion() {
    let mut fails = Vec::new();

    let library_poly = |q: u32| -> BTreeMap<Vec<u32>, u32> {
        let field = Field::of_order(q).unwrap();
        let cp = core_polynomial(&field, DEFAULT_POINT_BUDGET).unwrap();
        cp.poly().terms().map(|(e, c)| (e.clone(), c.0 as u32)).collect()
    };

    // every advertised case agrees with the scratch expansion, term by term
    for (p, q) in [(2u32, 2u32), (2, 4), (3, 3), (5, 5), (7, 7)] {
        let expected = expanded_core(p, q);
        let got = library_poly(q);
        req!(fails, got == expected, "q={q}: polynomial mismatch: {got:?} vs {expected:?}");
    }

    // q=2: P is identically 1 on four points
    let expected_one: BTreeMap<Vec<u32>, u32> = [(vec![0, 0], 1)].into();
    req!(fails, expanded_core(2, 2) == expected_one, "q=2 expansion is not 1");
    let c2 = core_constraint(&Field::of_order(2).unwrap(), DEFAULT_POINT_BUDGET).unwrap();
    req!(fails, c2.k() == 4, "q=2: k={} not 4", c2.k());

    // q=4: P = x1^2 + x1*x2 + x2^2 on nine points
    let expected_f4: BTreeMap<Vec<u32>, u32> =
        [(vec![2, 0], 1), (vec![1, 1], 1), (vec![0, 2], 1)].into();
    req!(fails, expanded_core(2, 4) == expected_f4, "q=4 expansion is not x1^2+x1x2+x2^2");
    let c4 = core_constraint(&Field::of_order(4).unwrap(), DEFAULT_POINT_BUDGET).unwrap();
    req!(fails, c4.k() == 9, "q=4: k={} not 9", c4.k());

    // prime fields: P is the Wilson constant (p-1)! and k = p^p
    for p in [2u32, 3, 5, 7] {
        let factorial = (1..p as u64).product::<u64>() % p as u64;
        let expected: BTreeMap<Vec<u32>, u32> =
            [(vec![0; p as usize], factorial as u32)].into();
        req!(fails, expanded_core(p, p) == expected, "q={p}: expansion is not ({p}-1)!");
        let c = core_constraint(&Field::of_order(p).unwrap(), DEFAULT_POINT_BUDGET).unwrap();
        let want = (p as u64).pow(p);
        req!(fails, c.k() as u64 == want, "q={p}: k={} not {want}", c.k());
    }

    conclude("criterion 2 (known core values vs independent expansion)", &fails);
}

#[test]
fn criterion_3_query_bounds_hold_as_exact_integers() {
    let mut fails = Vec::new();
    for q in [2u32, 3, 4, 8, 9] {
        let field = Field::of_order(q).unwrap();
        let p = field.p();
        for d in 0..=3 * q as u64 {
            let n = arity_required(d, q, p, field.s()) as usize;
            let (c, prov) = match build_with_provenance(&field, n, d) {
                Ok(x) => x,
                Err(e) => {
                    fails.push(format!("q={q} d={d}: {e}"));
                    continue;
                }
            };
            req!(fails, prov.k == c.k() as u64, "q={q} d={d}: provenance k mismatch");
            req!(fails, total_bound_holds(prov.k, q, p, d), "q={q} d={d}: total bound fails at k={}", prov.k);
            req!(fails, prov.bound_satisfied, "q={q} d={d}: provenance says bound unsatisfied");
            for b in &prov.decompositions {
                req!(
                    fails,
                    block_bound_holds(b.k, q, p, b.target),
                    "q={q} d={d}: block bound fails at target {} k={}",
                    b.target,
                    b.k
                );
            }
        }
    }
    conclude("criterion 3 (exact query-count bounds, q <= 9, d <= 3q)", &fails);
}

#[test]
fn criterion_4_exhaustive_orbit_rank_certificates() {
    let mut fails = Vec::new();
    for (q, n, d) in CERT_GRID {
        let field = Field::of_order(q).unwrap();
        let c = rm_constraint(&field, n, d).unwrap();
        let cert = orbit_span_rank(&c, d, DEFAULT_TRANSFORM_BUDGET, 0).unwrap();
        req!(fails, cert.exhaustive, "({q},{n},{d}): not exhaustive");
        req!(fails, cert.status == RankStatus::Pass, "({q},{n},{d}): status {:?}", cert.status);
        let dual = (q as u64).pow(n as u32) - rm_dimension(n, d, q);
        req!(fails, cert.dual_dim == dual, "({q},{n},{d}): dual_dim {} vs {dual}", cert.dual_dim);
        req!(
            fails,
            cert.achieved_rank == dual,
            "({q},{n},{d}): rank {} short of {dual}",
            cert.achieved_rank
        );
        req!(
            fails,
            total_bound_holds(cert.max_row_weight, q, field.p(), d),
            "({q},{n},{d}): max row weight {} above the spanning bound",
            cert.max_row_weight
        );
    }
    conclude("criterion 4 (exhaustive single-orbit rank certificates)", &fails);
}

#[test]
fn criterion_5_full_function_ground_truth() {
    let mut fails = Vec::new();
    let f2 = Field::of_order(2).unwrap();

    // literal sweep at n=2, d=1: all 16 functions against all 64 transforms
    let c = rm_constraint(&f2, 2, 1).unwrap();
    let mut accepted: Vec<u32> = Vec::new();
    for bits in 0u32..16 {
        let values: Vec<Elem> = (0..4).map(|i| Elem((bits >> i & 1) as u16)).collect();
        let f = FunctionTable::new(f2.clone(), 2, values).unwrap();
        let r = exact_rejection(&c, &f, DEFAULT_TRANSFORM_BUDGET).unwrap();
        if r.rejections == 0 {
            accepted.push(bits);
        }
    }
    let mask_of = |e: &[u32], n: usize| -> u32 {
        let t = FunctionTable::monomial(f2.clone(), n, e).unwrap();
        (0..t.len()).map(|i| (t.get(i).0 as u32) << i).sum()
    };
    let gens2: Vec<u32> = [vec![0, 0], vec![1, 0], vec![0, 1]]
        .iter()
        .map(|e| mask_of(e, 2))
        .collect();
    let mut codewords: Vec<u32> = (0u32..8)
        .map(|sel| (0..3).filter(|i| sel >> i & 1 == 1).fold(0, |acc, i| acc ^ gens2[i]))
        .collect();
    codewords.sort_unstable();
    req!(
        fails,
        accepted == codewords,
        "n=2: orbit accepts {accepted:?}, code is {codewords:?}"
    );

    // all 2^16 functions at n=4, d=1: the orbit's parity checks, collected
    // over every one of the 2^20 affine maps, must carve out exactly the code
    let c4 = rm_constraint(&f2, 4, 1).unwrap();
    let pts = c4.points();
    let lam = &c4.rows()[0];
    let total = AffineTransform::count(&f2, 4).unwrap();
    req!(fails, total == 1 << 20, "n=4: expected 2^20 transforms, got {total}");
    let mut seen = vec![false; 1 << 16];
    let mut masks: Vec<u16> = Vec::new();
    for idx in 0..total {
        let t = AffineTransform::from_index(f2.clone(), 4, idx);
        let mut m: u16 = 0;
        for (pt, l) in pts.iter().zip(lam.iter()) {
            if l.0 & 1 == 1 {
                m ^= 1 << point_index(&f2, &t.apply(pt));
            }
        }
        if m != 0 && !seen[m as usize] {
            seen[m as usize] = true;
            masks.push(m);
        }
    }
    // rank of the check set by plain xor elimination
    let mut basis: Vec<u16> = Vec::new();
    for &m in &masks {
        let mut v = m;
        for &b in &basis {
            let pivot = 15 - b.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    let dual = 16 - rm_dimension(4, 1, 2);
    req!(fails, basis.len() as u64 == dual, "n=4: check rank {} vs dual dim {dual}", basis.len());

    let gens4: Vec<u16> = [
        vec![0, 0, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
    ]
    .iter()
    .map(|e| mask_of(e, 4) as u16)
    .collect();
    let mut code4: Vec<u16> = (0u32..32)
        .map(|sel| (0..5).filter(|i| sel >> i & 1 == 1).fold(0, |acc, i| acc ^ gens4[i]))
        .collect();
    code4.sort_unstable();
    let mut survivors: Vec<u16> = Vec::new();
    'f: for f in 0u32..1 << 16 {
        for &m in &masks {
            if (f as u16 & m).count_ones() % 2 == 1 {
                continue 'f;
            }
        }
        survivors.push(f as u16);
    }
    req!(
        fails,
        survivors == code4,
        "n=4: {} survivors vs {} codewords",
        survivors.len(),
        code4.len()
    );

    conclude("criterion 5 (full-function ground truth at q=2, d=1)", &fails);
}

#[test]
fn criterion_6_border_rejection_and_mutation_sensitivity() {
    let mut fails = Vec::new();
    for (q, n, d) in CERT_GRID {
        let field = Field::of_order(q).unwrap();
        let c = rm_constraint(&field, n, d).unwrap();
        let base = verify_deg_border(&c, d, DEFAULT_TRANSFORM_BUDGET, 0).unwrap();
        req!(fails, base.pass, "({q},{n},{d}): base border check fails");

        let mut mutations: Vec<(String, rmorbit::error::Result<Constraint>)> = Vec::new();
        for row in 0..c.row_count() {
            for col in 0..c.k() {
                if c.rows()[row][col].0 != 0 {
                    mutations.push((
                        format!("zero coefficient [{row}][{col}]"),
                        zero_coefficient(&c, row, col),
                    ));
                }
            }
        }
        for col in 0..c.k() {
            mutations.push((format!("delete point {col}"), delete_point(&c, col)));
        }
        // the (2,2,2) point is the everything-code: its constraint is empty,
        // so there is nothing to mutate and nothing that could go undetected
        for (label, m) in mutations {
            let flipped = match m {
                Err(_) => true,
                Ok(mc) => {
                    !verify_deg_border(&mc, d, DEFAULT_TRANSFORM_BUDGET, 0).unwrap().pass
                        || orbit_span_rank(&mc, d, DEFAULT_TRANSFORM_BUDGET, 0).unwrap().status
                            != RankStatus::Pass
                }
            };
            req!(fails, flipped, "({q},{n},{d}) {label}: no check flipped");
        }
    }
    conclude("criterion 6 (border rejection and mutation sensitivity)", &fails);
}

#[test]
fn criterion_7_tester_completeness_and_soundness() {
    let mut fails = Vec::new();
    for (i, (q, n, d)) in CERT_GRID.into_iter().enumerate() {
        let field = Field::of_order(q).unwrap();
        let c = rm_constraint(&field, n, d).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(41 + i as u64);
        let member = random_codeword(&mut rng, &field, n, d);
        let rep = estimate_rejection(&c, &member, 100_000, 17).unwrap();
        req!(
            fails,
            rep.rejections == 0,
            "({q},{n},{d}): codeword rejected {} of {} trials",
            rep.rejections,
            rep.trials
        );

        let border = border_set(n, d, q, field.p(), field.s());
        let Some(e) = border.first() else {
            continue; // the everything-code has no border monomial to reject
        };
        let outside = FunctionTable::monomial(field.clone(), n, e).unwrap();
        let exact = exact_rejection(&c, &outside, DEFAULT_TRANSFORM_BUDGET).unwrap();
        req!(fails, exact.rejections > 0, "({q},{n},{d}): border monomial never rejected");

        let mc = estimate_rejection(&c, &outside, 10_000, 99).unwrap();
        let sigma = (exact.estimate * (1.0 - exact.estimate) / 10_000.0).sqrt();
        req!(
            fails,
            (mc.estimate - exact.estimate).abs() <= 3.0 * sigma,
            "({q},{n},{d}): estimate {} vs exact {} outside 3 sigma",
            mc.estimate,
            exact.estimate
        );
    }
    conclude("criterion 7 (tester completeness and soundness)", &fails);
}

fn random_constraint<R: Rng>(rng: &mut R, field: &Field, n: usize) -> Constraint {
    let q = field.order() as u16;
    loop {
        let k = rng.gen_range(2..=4);
        let points: Vec<Vec<Elem>> = (0..k)
            .map(|_| (0..n).map(|_| Elem(rng.gen_range(0..q))).collect())
            .collect();
        let rows: Vec<Vec<Elem>> = (0..rng.gen_range(1..=2))
            .map(|_| (0..k).map(|_| Elem(rng.gen_range(0..q))).collect())
            .collect();
        if let Ok(c) = Constraint::new(field.clone(), n, points, rows) {
            return c;
        }
    }
}

#[test]
fn criterion_8_combinator_laws_and_digit_arithmetic() {
    let mut fails = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut union_pairs = 0;
    for trial in 0..200 {
        let q = [2u32, 3, 4][rng.gen_range(0..3)];
        let field = Field::of_order(q).unwrap();
        let n1 = rng.gen_range(1..=2);
        let n2 = if trial % 2 == 0 { n1 } else { rng.gen_range(1..=2) };
        let c1 = random_constraint(&mut rng, &field, n1);
        let c2 = random_constraint(&mut rng, &field, n2);

        let conv = c1.convolve(&c2).unwrap();
        for e in exponent_vectors(q, n1 + n2) {
            let (e1, e2) = e.split_at(n1);
            let want =
                c1.accepts_monomial(e1).unwrap() || c2.accepts_monomial(e2).unwrap();
            if conv.accepts_monomial(&e).unwrap() != want {
                fails.push(format!("pair {trial} (q={q}): convolution law breaks at {e:?}"));
                break;
            }
        }
        if n1 == n2 {
            union_pairs += 1;
            let u = c1.union_with(&c2).unwrap();
            for e in exponent_vectors(q, n1) {
                let want =
                    c1.accepts_monomial(&e).unwrap() && c2.accepts_monomial(&e).unwrap();
                if u.accepts_monomial(&e).unwrap() != want {
                    fails.push(format!("pair {trial} (q={q}): union law breaks at {e:?}"));
                    break;
                }
            }
        }
    }
    req!(fails, union_pairs >= 100, "only {union_pairs} same-arity pairs");

    // digitwise binomial rule against exact factorial arithmetic
    let fact: Vec<BigUint> = {
        let mut f = vec![BigUint::from(1u32)];
        for i in 1..=256u32 {
            let next = f.last().unwrap() * i;
            f.push(next);
        }
        f
    };
    for p in [2u32, 3, 5, 7] {
        let bp = BigUint::from(p);
        for a in 0..=256u64 {
            for b in 0..=256u64 {
                let expect = if b > a {
                    0
                } else {
                    let binom = &fact[a as usize] / (&fact[b as usize] * &fact[(a - b) as usize]);
                    (binom % &bp).try_into().unwrap()
                };
                if binom_mod_p(a, b, p) != expect {
                    fails.push(format!("binom({a},{b}) mod {p} != {expect}"));
                }
            }
        }
    }

    // digitwise multinomial carry rule against exact factorial arithmetic
    let mut part_rng = ChaCha8Rng::seed_from_u64(7);
    for p in [2u32, 3, 5, 7] {
        let bp = BigUint::from(p);
        for _ in 0..300 {
            let total: u64 = part_rng.gen_range(0..=64);
            let count = part_rng.gen_range(1..=5);
            let mut parts = Vec::with_capacity(count);
            let mut left = total;
            for i in 0..count {
                let take = if i + 1 == count { left } else { part_rng.gen_range(0..=left) };
                parts.push(take);
                left -= take;
            }
            let mut multi = fact[total as usize].clone();
            for &part in &parts {
                multi /= &fact[part as usize];
            }
            let expect = multi % &bp != BigUint::from(0u32);
            if multinomial_nonzero(total, &parts, p).unwrap() != expect {
                fails.push(format!("multinomial({total}; {parts:?}) mod {p} != {expect}"));
            }
        }
    }

    conclude("criterion 8 (combinator laws and digit arithmetic)", &fails);
}

#[test]
fn criterion_9_binary_grid_tracks_the_known_exact_counts() {
    let mut fails = Vec::new();
    let field = Field::of_order(2).unwrap();
    // the exact optimum at q=2 is 2^(d+1) queries
    for d in 0..=7u64 {
        let n = arity_required(d, 2, 2, 1) as usize;
        let (_, prov) = build_with_provenance(&field, n, d).unwrap();
        let reference = 1u64 << (d + 1);
        req!(
            fails,
            prov.k <= 4 * reference && 4 * prov.k >= reference,
            "d={d}: k={} not within 4x of {reference}",
            prov.k
        );
        req!(fails, total_bound_holds(prov.k, 2, 2, d), "d={d}: bound does not dominate k={}", prov.k);
        req!(fails, prov.bound_satisfied, "d={d}: provenance says bound unsatisfied");
    }
    conclude("criterion 9 (binary grid within 4x of the exact counts)", &fails);
}
