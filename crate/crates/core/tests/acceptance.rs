//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relfix::analysis::{asymptotic_report, fix_asingleton_check};
use relfix::chain::chain_metric;
use relfix::comparison::{classify_phi, CatalogFn, ClassifyOptions, ComparisonFn, Verdict};
use relfix::generate::{generate, master_seed, random_relation, random_space, run_suite, GeneratorConfig};
use relfix::io::theorem_report_json;
use relfix::metric::FiniteMetricSpace;
use relfix::picard::{catalog_map, numeric_picard, orbit, NumericOptions, NumericStatus};
use relfix::reduction::reduce_to_banach;
use relfix::relation::{enumerate_simple_chains, equivalence_classes, rs_cover, s_omega, Relation};
use relfix::scalar::{rat, Rational};
use relfix::special::{comparability_relation, edelstein_relation, verify_edelstein, verify_nieto_lopez};
use relfix::theorem::{verify_ai_linear_rs, verify_banach, TheoremId};

struct Check {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Check {
    Check { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Check {
    Check { pass: false, detail: detail.into() }
}

fn main() {
    let seed = master_seed();
    let criteria: [(&str, fn(u64) -> Check); 8] = [
        ("chain metric equals brute-force chain minimum", chain_metric_oracle),
        ("chain metric subordinates d and agrees on s-edges", chain_metric_lemma),
        ("theorem soundness on generated instances", soundness),
        ("reduction to the Banach principle round-trips", reduction_round_trip),
        ("specialization identities", specializations),
        ("numeric Picard iteration of cos", numeric_cos),
        ("admissibility separation", admissibility),
        ("asymptoticity properties", asymptoticity),
    ];
    println!("acceptance suite, master seed {seed}");
    let mut failures = 0;
    for (k, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = criterion(seed);
        failures += usize::from(!v.pass);
        println!(
            "criterion {}: {} - {name}: {} ({:.2}s)",
            k + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}

/// Random reflexive symmetric relation that connects the whole carrier.
fn connected_rs_instance(rng: &mut ChaCha8Rng, max_points: usize) -> (FiniteMetricSpace, Relation) {
    let n = rng.gen_range(1..=max_points);
    let space = random_space(rng, n);
    let mut r = random_relation(rng, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        r.insert(order[k], parent).expect("in range");
    }
    (space, rs_cover(&r))
}

fn chain_metric_oracle(seed: u64) -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = 1000;
    let mut pairs = 0usize;
    for i in 0..instances {
        let (space, s) = connected_rs_instance(&mut rng, 8);
        let n = space.len();
        let all: Vec<usize> = (0..n).collect();
        let e = match chain_metric(&space, &s, &all) {
            Ok(e) => e,
            Err(err) => return fail(format!("instance {i}: {err}")),
        };
        for x in 0..n {
            let brute = simple_chain_minima(&space, &s, x);
            for y in 0..n {
                match &brute[y] {
                    Some(b) if b == e.local(x, y) => pairs += 1,
                    other => {
                        return fail(format!("instance {i}, pair ({x},{y}): dijkstra {} vs brute {other:?}", e.local(x, y)))
                    }
                }
                if i < 100 {
                    let listed = enumerate_simple_chains(&s, x, y, n.max(2))
                        .iter()
                        .map(|c| c.points().windows(2).map(|w| space.dist(w[0], w[1]).clone()).sum::<Rational>())
                        .min();
                    if listed != brute[y] {
                        return fail(format!("instance {i}, pair ({x},{y}): chain enumeration disagrees"));
                    }
                }
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(30) {
        return fail(format!("{instances} instances took {:.1}s, limit 30s", elapsed.as_secs_f64()));
    }
    ok(format!("{instances} instances, {pairs} pairs, exact equality"))
}

/// Minimum d-length over every simple chain from `x`, by exhaustive
/// depth-first search; `x` itself is reached by the chain `(x, x)`.
fn simple_chain_minima(space: &FiniteMetricSpace, s: &Relation, x: usize) -> Vec<Option<Rational>> {
    fn walk(
        space: &FiniteMetricSpace,
        s: &Relation,
        u: usize,
        length: &Rational,
        on_path: &mut [bool],
        best: &mut [Option<Rational>],
    ) {
        for v in 0..on_path.len() {
            if on_path[v] || !s.contains(u, v) {
                continue;
            }
            let next = length + space.dist(u, v);
            if best[v].as_ref().is_none_or(|b| &next < b) {
                best[v] = Some(next.clone());
            }
            on_path[v] = true;
            walk(space, s, v, &next, on_path, best);
            on_path[v] = false;
        }
    }
    let n = space.len();
    let mut best = vec![None; n];
    if s.contains(x, x) {
        best[x] = Some(rat(0, 1));
    }
    let mut on_path = vec![false; n];
    on_path[x] = true;
    walk(space, s, x, &rat(0, 1), &mut on_path, &mut best);
    best
}

fn chain_metric_lemma(seed: u64) -> Check {
    let cfg = GeneratorConfig { min_points: 1, max_points: 10 };
    let (mut classes, mut pairs) = (0usize, 0usize);
    let instances = 1000u64;
    for i in 0..instances {
        let inst = generate(seed.wrapping_add(i), &cfg);
        let s = rs_cover(&inst.relation);
        let space = &inst.space;
        for class in equivalence_classes(&s_omega(&s)).expect("equivalence") {
            let e = match chain_metric(space, &s, &class) {
                Ok(e) => e,
                Err(err) => return fail(format!("seed {}: {err}", inst.seed)),
            };
            classes += 1;
            for (a, &x) in class.iter().enumerate() {
                for (b, &y) in class.iter().enumerate() {
                    pairs += 1;
                    if space.dist(x, y) > e.local(a, b) {
                        return fail(format!("seed {}: d > e at ({x},{y})", inst.seed));
                    }
                    if s.contains(x, y) && space.dist(x, y) != e.local(a, b) {
                        return fail(format!("seed {}: e != d on s-edge ({x},{y})", inst.seed));
                    }
                }
            }
        }
    }
    ok(format!("{instances} instances, {classes} classes, {pairs} pairs, zero violations"))
}

fn soundness(seed: u64) -> Check {
    let started = Instant::now();
    let cfg = GeneratorConfig::default();
    let count = 500;
    let mut summary = Vec::new();
    for id in TheoremId::ALL {
        let s = run_suite(id, count, seed, &cfg);
        if !s.violations.is_empty() {
            return fail(format!("{id}: violation at seed {:?}", s.violations[0].seed));
        }
        if let Some((seed, e)) = s.errors.first() {
            return fail(format!("{id}: harness error at seed {seed}: {e}"));
        }
        summary.push(format!("{id} {}/{}", s.conclusions_held, s.premises_held));
    }

    // independent check of the linear symmetric theorem's conclusion
    let mut checked = 0usize;
    for i in 0..count as u64 {
        let inst = generate(seed.wrapping_add(i), &cfg);
        let s = rs_cover(&inst.relation);
        let report = match verify_ai_linear_rs(&inst.space, &inst.map, &s, &inst.lambda) {
            Ok(r) => r,
            Err(e) => return fail(format!("seed {}: {e}", inst.seed)),
        };
        if !report.premises_hold {
            continue;
        }
        checked += 1;
        let t = &inst.map;
        let class_of = union_find_classes(&s);
        for x in 0..t.len() {
            if class_of[x] != class_of[t.apply(x)] {
                continue;
            }
            let mut z = x;
            for _ in 0..=t.len() {
                z = t.apply(z);
            }
            if t.apply(z) != z {
                return fail(format!("seed {}: orbit of {x} does not converge", inst.seed));
            }
        }
        let fixed = t.fixed_points();
        for &a in &fixed {
            for &b in &fixed {
                if a != b && class_of[a] == class_of[b] {
                    return fail(format!("seed {}: fixed points {a},{b} share a class", inst.seed));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(120) {
        return fail(format!("took {:.1}s, limit 120s", elapsed.as_secs_f64()));
    }
    ok(format!(
        "{count} instances per theorem, zero violations; held/premises: {}; {checked} linear symmetric instances rechecked",
        summary.join(", ")
    ))
}

fn union_find_classes(s: &Relation) -> Vec<usize> {
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let n = s.carrier_size();
    let mut parent: Vec<usize> = (0..n).collect();
    for (x, y) in s.edges() {
        let (a, b) = (find(&mut parent, x), find(&mut parent, y));
        parent[a] = b;
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

fn reduction_round_trip(seed: u64) -> Check {
    let cfg = GeneratorConfig::default();
    let (mut instances, mut reductions) = (0usize, 0usize);
    for i in 0..1000u64 {
        let inst = generate(seed.wrapping_add(i), &cfg);
        let s = rs_cover(&inst.relation);
        let (space, t) = (&inst.space, &inst.map);
        let report = verify_ai_linear_rs(space, t, &s, &inst.lambda).expect("valid input");
        if !report.premises_hold {
            continue;
        }
        instances += 1;
        let e = s_omega(&s);
        for x0 in (0..space.len()).filter(|&x| e.contains(x, t.apply(x))) {
            let reduced = match reduce_to_banach(space, t, &s, &inst.lambda, x0) {
                Ok(r) => r,
                Err(err) => return fail(format!("seed {}, start {x0}: {err}", inst.seed)),
            };
            if !reduced.banach.passed() {
                return fail(format!("seed {}: reduced instance fails the Banach principle", inst.seed));
            }
            let (rs, rt) = (&reduced.space, &reduced.restricted_map);
            for a in 0..rs.len() {
                for b in 0..rs.len() {
                    if *rs.dist(rt.apply(a), rt.apply(b)) > inst.lambda.clone() * rs.dist(a, b).clone() {
                        return fail(format!("seed {}: T|X0 is not an e-contraction", inst.seed));
                    }
                }
            }
            if orbit(t, x0).limit() != Some(reduced.reduced_limit) || reduced.reduced_limit != reduced.original_limit {
                return fail(format!("seed {}: limits differ from start {x0}", inst.seed));
            }
            reductions += 1;
        }
    }
    if reductions == 0 {
        return fail("no premise-satisfying instance was generated");
    }
    ok(format!("{instances} premise-satisfying instances, {reductions} reductions, zero exceptions"))
}

fn without(mut v: serde_json::Value, keys: &[&str]) -> serde_json::Value {
    let obj = v.as_object_mut().expect("report object");
    for k in keys {
        obj.remove(*k);
    }
    v
}

fn specializations(seed: u64) -> Check {
    let cfg = GeneratorConfig::default();
    let mut agree = 0usize;
    for i in 0..100u64 {
        let inst = generate(seed.wrapping_add(i), &cfg);
        let (space, t, lambda) = (&inst.space, &inst.map, &inst.lambda);
        let banach = verify_banach(space, t, lambda).expect("valid input");

        let epsilon = space.diameter() + rat(1, 1);
        let ed = verify_edelstein(space, t, &epsilon, lambda).expect("valid input");
        if ed.verdict() != banach.verdict() {
            return fail(format!("seed {}: edelstein {:?} vs banach {:?}", inst.seed, ed.verdict(), banach.verdict()));
        }
        let linear = verify_ai_linear_rs(space, t, &edelstein_relation(space, &epsilon).unwrap(), lambda).unwrap();
        if without(theorem_report_json(&ed), &["theorem", "instantiation"])
            != without(theorem_report_json(&linear), &["theorem"])
        {
            return fail(format!("seed {}: edelstein report differs from the linear symmetric report", inst.seed));
        }

        let mut rank: Vec<usize> = (0..space.len()).collect();
        rank.shuffle(&mut ChaCha8Rng::seed_from_u64(inst.seed));
        let total = Relation::from_fn(space.len(), |a, b| rank[a] <= rank[b]);
        let nl = verify_nieto_lopez(space, t, &total, lambda).expect("valid input");
        if nl.verdict() != banach.verdict() {
            return fail(format!("seed {}: nieto-lopez {:?} vs banach {:?}", inst.seed, nl.verdict(), banach.verdict()));
        }
        let linear = verify_ai_linear_rs(space, t, &comparability_relation(&total).unwrap(), lambda).unwrap();
        if without(theorem_report_json(&nl), &["theorem", "instantiation"])
            != without(theorem_report_json(&linear), &["theorem"])
        {
            return fail(format!("seed {}: nieto-lopez report differs from the linear symmetric report", inst.seed));
        }
        agree += 1;
    }
    ok(format!("{agree}/100 instances: identical verdicts and reports"))
}

fn bisection_root() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid.cos() - mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn numeric_cos(_: u64) -> Check {
    let root = bisection_root();
    let opts = NumericOptions { tol: 1e-12, lambda: Some(0.8415), ..NumericOptions::default() };
    let trace = match numeric_picard(catalog_map("cos").unwrap(), &[1.0], &opts) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string()),
    };
    if trace.status != NumericStatus::Converged || trace.iterations() > 100 {
        return fail(format!("{:?} after {} iterations", trace.status, trace.iterations()));
    }
    let error = (trace.last()[0] - root).abs();
    if error > 1e-9 {
        return fail(format!("limit {} is {error:e} from the root", trace.last()[0]));
    }
    let bounds = trace.bounds.as_ref().expect("bounds requested");
    for (k, bound) in bounds.iter().enumerate() {
        let true_error = (trace.iterates[k + 1][0] - root).abs();
        if *bound < true_error {
            return fail(format!("iterate {}: bound {bound:e} < error {true_error:e}", k + 1));
        }
    }
    ok(format!(
        "converged in {} iterations to {:.10}, error {error:.1e}, bound dominates at all {} iterates",
        trace.iterations(),
        trace.last()[0],
        bounds.len()
    ))
}

/// Partial sums of the extremal sequence t_{k+1} = φ(t_k).
fn partial_sums(phi: impl Fn(f64) -> f64, t0: f64, n: usize) -> Vec<f64> {
    let mut sums = Vec::with_capacity(n);
    let (mut t, mut sum) = (t0, 0.0);
    for _ in 0..n {
        sum += t;
        sums.push(sum);
        t = phi(t);
    }
    sums
}

fn admissibility(_: u64) -> Check {
    let opts = ClassifyOptions::default();
    let linear = classify_phi(&ComparisonFn::Linear(rat(9, 10)), &opts).expect("valid phi");
    let rational = classify_phi(&ComparisonFn::Catalog(CatalogFn::TOverOnePlusT), &opts).expect("valid phi");
    if (linear.matkowski, linear.browder) != (Verdict::Yes, Verdict::Yes) {
        return fail(format!("linear(0.9): {} / {}", linear.matkowski, linear.browder));
    }
    if (rational.matkowski, rational.browder) != (Verdict::Yes, Verdict::NoEvidence) {
        return fail(format!("t/(1+t): {} / {}", rational.matkowski, rational.browder));
    }
    // independent partial sums over the default horizon
    let n = opts.horizon;
    for &t0 in &opts.sample_points {
        let geo = partial_sums(|t| 0.9 * t, t0, n);
        if (geo[n - 1] - 10.0 * t0).abs() > 1e-9 * t0.max(1.0) || geo[n - 1] - geo[n / 2] > 1e-12 * t0.max(1.0) {
            return fail(format!("linear(0.9) partial sums from {t0} do not settle at {}", 10.0 * t0));
        }
        let harmonic = partial_sums(|t| t / (1.0 + t), t0, n);
        // t_k = t0 / (1 + k t0), so the sum over the second half grows like ln 2
        let tail = harmonic[n - 1] - harmonic[n / 2 - 1];
        if tail < 0.5 {
            return fail(format!("t/(1+t) partial sums from {t0} look convergent (tail {tail})"));
        }
        let last = t0 / (1.0 + (n - 1) as f64 * t0);
        if last > 1e-3 {
            return fail(format!("t/(1+t) iterates from {t0} do not tend to zero"));
        }
    }
    ok("linear(0.9): yes/yes, t/(1+t): yes/no-evidence; partial sums agree (geometric limit 10 t0, harmonic tail > 0.5)")
}

fn asymptoticity(seed: u64) -> Check {
    let cfg = GeneratorConfig { min_points: 1, max_points: 10 };
    let (mut asymptotic, mut both) = (0usize, 0usize);
    for i in 0..500u64 {
        let inst = generate(seed.wrapping_add(i), &cfg);
        let (space, t, r) = (&inst.space, &inst.map, &inst.relation);
        let on_r = asymptotic_report(space, t, r).strongly_asymptotic;
        let omega = s_omega(r);
        let on_omega = asymptotic_report(space, t, &omega).strongly_asymptotic;
        if on_r != on_omega {
            return fail(format!("seed {}: (d,R) {on_r} but (d,S^ω) {on_omega}", inst.seed));
        }
        if on_r {
            asymptotic += 1;
            if !fix_asingleton_check(t, r).asingleton.holds {
                return fail(format!("seed {}: asymptotic but fixed points are not R-asingleton", inst.seed));
            }
        }
        // also on a second relation drawn for the same map
        let b = random_relation(&mut ChaCha8Rng::seed_from_u64(inst.seed ^ 0xB), space.len());
        if asymptotic_report(space, t, &b).strongly_asymptotic {
            both += 1;
            if !fix_asingleton_check(t, &b).asingleton.holds {
                return fail(format!("seed {}: asymptotic but fixed points are not B-asingleton", inst.seed));
            }
        }
    }
    ok(format!("500 instances ({asymptotic} R-asymptotic, {both} B-asymptotic), zero counterexamples in both directions"))
}
