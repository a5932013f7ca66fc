//! One line per acceptance criterion. Exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vabelian::counter::RunOutcome;
use vabelian::geodesic::{BallTable, PatternCriterion};
use vabelian::growth::{classify_growth, fit_rational_series, geodesic_counts, growth_rate_estimate, Census, Growth, DEFAULT_EPSILON};
use vabelian::machine::{windowed_decomposition, Decomposition, GeodesicMachine};
use vabelian::path::{congruences_hold, parikh, CongruenceDfa, Gamma};
use vabelian::polyhedra::{AffineMap, Atom, BasicSet, PolySet};
use vabelian::shuffle::AlphabetYP;
use vabelian::{Coset, GroupSpec, Word};

const CORPUS: [(&str, &str); 4] = [
    ("Z", include_str!("../../../corpus/z.grp")),
    ("Z2", include_str!("../../../corpus/z2.grp")),
    ("Dinf", include_str!("../../../corpus/dinf.grp")),
    ("p4", include_str!("../../../corpus/p4.grp")),
];
const Z_DEC: &str = include_str!("../../../corpus/z.dec");
const DINF_DEC: &str = include_str!("../../../corpus/dinf.dec");

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn spec(text: &str) -> GroupSpec {
    GroupSpec::parse(text).expect("corpus spec parses")
}

fn corpus() -> Vec<GroupSpec> {
    CORPUS.iter().map(|(_, t)| spec(t)).collect()
}

/// Every word of weight at most `max`, shortest first.
fn words(spec: &GroupSpec, max: u64) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut i = 0;
    while i < out.len() {
        let w = out[i].clone();
        let weight = spec.word_weight(&w);
        for g in spec.gens() {
            if weight + spec.generator(g).weight <= max {
                let mut next = w.clone();
                next.push(g);
                out.push(next);
            }
        }
        i += 1;
    }
    out
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn shuffle_soundness() -> Check {
    let mut total = 0;
    for s in corpus() {
        let yp = AlphabetYP::build(&s);
        for w in words(&s, 8) {
            let (pw, trace) = yp.shuffle(&w);
            let back = yp.expand(&pw).map_err(|e| e.to_string())?;
            let shown = || format!("{}: {}", s.name(), s.format_word(&w));
            ensure(s.evaluate(&back) == s.evaluate(&w), || format!("{} evaluates differently", shown()))?;
            ensure(s.word_weight(&back) == s.word_weight(&w), || format!("{} changes weight", shown()))?;
            ensure(trace.steps.len() <= w.len() + 1, || format!("{} has a trace of {}", shown(), trace.steps.len()))?;
            total += 1;
        }
    }
    Ok(format!("{total} words"))
}

fn criterion_equivalence() -> Check {
    let mut total = 0;
    let mut geodesics = 0;
    for s in corpus() {
        let yp = AlphabetYP::build(&s);
        let c = PatternCriterion::new(&yp);
        let ball = BallTable::build(&s, 8);
        for w in words(&s, 8) {
            let a = c.is_geodesic_word(&w).map_err(|e| e.to_string())?;
            let b = ball.is_geodesic(&s, &w).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{}: {} criterion {a}, oracle {b}", s.name(), s.format_word(&w)))?;
            total += 1;
            geodesics += usize::from(a);
        }
    }
    Ok(format!("{total} words, {geodesics} geodesic, 0 disagreements"))
}

fn bijection() -> Check {
    let mut total = 0;
    for s in corpus() {
        let yp = AlphabetYP::build(&s);
        let g = Gamma::new(&yp);
        for w in words(&s, 6) {
            let shown = || format!("{}: {}", s.name(), s.format_word(&w));
            let p = g.word_to_path(&w);
            let back = g.path_to_word(&p).map_err(|e| format!("{}: {e}", shown()))?;
            ensure(back == w, || format!("{} comes back as {}", shown(), s.format_word(&back)))?;
            ensure(g.word_to_path(&back) == p, || format!("{} path differs after a round trip", shown()))?;
            ensure(p.weight == s.word_weight(&w), || format!("{} path weight {}", shown(), p.weight))?;
            ensure(g.alpha_vector(&p) == yp.shuffle_only(&w), || format!("{} alpha vector differs", shown()))?;
            total += 1;
        }
    }
    Ok(format!("{total} words"))
}

fn machine_correctness() -> Check {
    let mut summary = Vec::new();
    for (i, s) in corpus().into_iter().enumerate() {
        let yp = AlphabetYP::build(&s);
        let c = PatternCriterion::new(&yp);
        let (dec, horizon, label) = match i {
            0 => (Decomposition::parse(&yp, Z_DEC), 8, "hand"),
            2 => (Decomposition::parse(&yp, DINF_DEC), 8, "hand"),
            _ => (windowed_decomposition(&c, 6), 6, "W=6"),
        };
        let dec = dec.map_err(|e| e.to_string())?;
        let basics = dec.basic_count();
        let m = GeodesicMachine::build(&yp, dec, None).map_err(|e| e.to_string())?;
        let ball = BallTable::build(&s, horizon);
        let mut n = 0;
        for w in words(&s, horizon) {
            ensure(m.in_window(&w), || format!("{}: {} outside the window", s.name(), s.format_word(&w)))?;
            let oracle = ball.is_geodesic(&s, &w).map_err(|e| e.to_string())?;
            ensure(m.accepts(&w) == oracle, || format!("{}: machine disagrees on {}", s.name(), s.format_word(&w)))?;
            n += 1;
        }
        summary.push(format!("{} {label} ({basics} basics, {n} words)", s.name()));
        if i == 0 {
            let literal = m.to_counter_machine(10_000).map_err(|e| e.to_string())?;
            let mut runs = 0;
            for w in words(&s, 4) {
                let input: Vec<usize> = w.letters().iter().map(|g| g.0 as usize).collect();
                let out = literal.run_bounded(&input, 10_000);
                ensure(out != RunOutcome::BudgetExhausted, || format!("budget exhausted on {}", s.format_word(&w)))?;
                ensure((out == RunOutcome::Accept) == m.accepts(&w), || format!("run_bounded disagrees on {}", s.format_word(&w)))?;
                runs += 1;
            }
            summary.push(format!("{runs} literal runs"));
        }
    }
    Ok(summary.join(", "))
}

fn census(s: &GroupSpec, n: u64) -> Result<vabelian::growth::GrowthTable, String> {
    let yp = AlphabetYP::build(s);
    let c = PatternCriterion::new(&yp);
    geodesic_counts(Census::Pattern(&c), n).map_err(|e| e.to_string())
}

fn growth_values() -> Check {
    let specs = corpus();
    let (z, z2, dinf) = (&specs[0], &specs[1], &specs[2]);
    for r in census(z, 12)?.rows() {
        ensure(r.cumulative == 2 * r.n + 1, || format!("Z: gamma({}) = {}", r.n, r.cumulative))?;
    }
    for r in &census(dinf, 12)?.rows()[1..] {
        ensure(r.sphere == 2, || format!("Dinf: sphere {} = {}", r.n, r.sphere))?;
    }
    let t = census(z2, 10)?;
    for r in &t.rows()[1..] {
        ensure(r.sphere == (1 << (r.n + 2)) - 4, || format!("Z2: sphere {} = {}", r.n, r.sphere))?;
    }
    // Naive: every word, kept when the ball says it is geodesic.
    let ball = BallTable::build(z2, 6);
    let mut naive = [0u64; 7];
    for w in words(z2, 6) {
        if ball.is_geodesic(z2, &w).map_err(|e| e.to_string())? {
            naive[z2.word_weight(&w) as usize] += 1;
        }
    }
    ensure(naive[..] == t.spheres()[..7], || format!("Z2 naive spheres {naive:?}"))?;
    let e = growth_rate_estimate(&t).map_err(|e| e.to_string())?;
    ensure((e.ratio_f64() - 2.0).abs() <= 0.01, || format!("Z2 ratio {}", e.ratio))?;
    Ok(format!("Z2 ratio at n = 10 is {} = {:.4}", e.ratio, e.ratio_f64()))
}

fn dichotomy() -> Check {
    let mut summary = Vec::new();
    for (s, polynomial) in corpus().iter().zip([true, false, true, false]) {
        let t = census(s, 12)?;
        let class = classify_growth(&t, DEFAULT_EPSILON);
        let ok = match class {
            Growth::Polynomial { .. } => polynomial,
            Growth::Exponential { .. } => !polynomial,
            Growth::Inconclusive => false,
        };
        ensure(ok, || format!("{}: {class:?}", s.name()))?;
        if polynomial {
            let fit = fit_rational_series(&t, 3).ok_or_else(|| format!("{}: no fit of order at most 3", s.name()))?;
            let expected: Vec<BigRational> = t.cumulative().iter().map(|&c| BigRational::from_integer(c.into())).collect();
            ensure(fit.terms(t.len()) == expected, || format!("{}: fit does not reproduce the table", s.name()))?;
            summary.push(format!("{} polynomial, order {}", s.name(), fit.order));
        } else {
            summary.push(format!("{} exponential", s.name()));
        }
    }
    Ok(summary.join(", "))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn random_atom(rng: &mut ChaCha8Rng, dim: usize) -> Atom {
    let a: Vec<BigInt> = (0..dim).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
    let b = BigInt::from(rng.gen_range(-4..=4));
    match rng.gen_range(0..3) {
        0 => Atom::eq(a, b),
        1 => Atom::gt(a, b),
        _ => Atom::cong(a, b, BigInt::from(rng.gen_range(1..=4))).expect("positive modulus"),
    }
}

fn random_set(rng: &mut ChaCha8Rng, dim: usize) -> PolySet {
    let basics = (0..rng.gen_range(0..=3))
        .map(|_| {
            let atoms = (0..rng.gen_range(0..=3)).map(|_| random_atom(rng, dim)).collect();
            BasicSet::new(dim, atoms).expect("dimensions match")
        })
        .collect();
    PolySet::new(dim, basics).expect("dimensions match")
}

fn cube_points(dim: usize, r: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-r..=r).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.iter().map(|p| ints(p)).collect()
}

fn polyhedral_algebra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let points = cube_points(3, 5);
    let small = cube_points(3, 2);
    let err = |e: vabelian::Error| e.to_string();
    for trial in 0..200 {
        let a = random_set(&mut rng, 3);
        let b = random_set(&mut rng, 3);
        let union = a.union(&b).map_err(err)?;
        let meet = a.intersect(&b).map_err(err)?;
        let diff = a.difference(&b).map_err(err)?;
        let comp = a.complement();
        let disj = a.union_disjointify(&b).map_err(err)?;
        let flat = union.disjointify();
        for z in &points {
            let (x, y) = (a.member(z).map_err(err)?, b.member(z).map_err(err)?);
            let at = || format!("set {trial} at {z:?}");
            ensure(union.member(z).map_err(err)? == (x || y), || format!("union, {}", at()))?;
            ensure(meet.member(z).map_err(err)? == (x && y), || format!("intersection, {}", at()))?;
            ensure(diff.member(z).map_err(err)? == (x && !y), || format!("difference, {}", at()))?;
            ensure(comp.member(z).map_err(err)? == !x, || format!("complement, {}", at()))?;
            for (s, want) in [(&disj, x || y), (&flat, x || y), (&comp, !x)] {
                let hits = s.basics().iter().filter(|q| q.member(z)).count();
                ensure(hits == usize::from(want), || format!("{hits} overlapping basics, {}", at()))?;
            }
        }
        let prod = a.product(&b);
        for u in &small {
            for v in &small {
                let uv = [u.clone(), v.clone()].concat();
                let want = a.member(u).map_err(err)? && b.member(v).map_err(err)?;
                ensure(prod.member(&uv).map_err(err)? == want, || format!("product, set {trial} at {uv:?}"))?;
            }
        }
    }
    for trial in 0..200 {
        let out = rng.gen_range(1..=4);
        let rows = (0..3).map(|_| (0..out).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect()).collect();
        let offset = (0..out).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
        let map = AffineMap::new(rows, offset).map_err(err)?;
        let q = random_set(&mut rng, out);
        let pre = q.preimage(&map).map_err(err)?;
        for z in &points {
            let image = map.apply(z).map_err(err)?;
            ensure(pre.member(z).map_err(err)? == q.member(&image).map_err(err)?, || format!("preimage {trial} at {z:?}"))?;
        }
    }
    Ok("200 set pairs on [-5,5]^3, products on [-2,2]^6, 200 preimages".into())
}

/// Changes one entry of `s`, returning a description and the diagnostics
/// that count as catching it. Entries touching coset 1 must trip the
/// identity checks.
fn mutations(s: &GroupSpec) -> Vec<(String, GroupSpec, &'static [&'static str])> {
    let d = s.index();
    let n = s.rank();
    let mut out = Vec::new();
    for t in 0..d {
        for i in 0..n * n {
            let mut m = s.clone();
            *m.action_mut(Coset(t)).get_mut(i / n, i % n) += 1;
            let kinds: &[&str] = if t == 0 { &["identity-action"] } else { &["determinant", "action-compatibility"] };
            out.push((format!("R_{} entry {}", t + 1, i + 1), m, kinds));
        }
    }
    for a in 0..d {
        for b in 0..d {
            let identity = a == 0 || b == 0;
            for i in 0..n {
                let mut m = s.clone();
                m.cocycle_mut(Coset(a), Coset(b))[i] += 1;
                let kinds: &[&str] = if identity { &["identity-row"] } else { &["cocycle"] };
                out.push((format!("c({}, {}) component {}", a + 1, b + 1, i + 1), m, kinds));
            }
            if d > 1 {
                let mut m = s.clone();
                let slot = m.coset_product_mut(Coset(a), Coset(b));
                *slot = Coset((slot.0 + 1) % d);
                let kinds: &[&str] =
                    if identity { &["identity-row"] } else { &["coset-table", "associativity", "action-compatibility"] };
                out.push((format!("cosetmul({}, {})", a + 1, b + 1), m, kinds));
            }
        }
    }
    out
}

fn spec_validation() -> Check {
    let mut total = 0;
    let mut names = Vec::new();
    for s in corpus() {
        ensure(s.validate().is_valid(), || format!("{} is rejected unmutated", s.name()))?;
        let ms = mutations(&s);
        for (what, m, kinds) in &ms {
            let report = m.validate();
            ensure(kinds.iter().any(|k| report.has(k)), || {
                let got: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
                format!("{}: {what} gave [{}], expected one of {kinds:?}", s.name(), got.join("; "))
            })?;
        }
        total += ms.len();
        names.push(format!("{} {}", s.name(), ms.len()));
    }
    Ok(format!("{total} mutations caught ({})", names.join(", ")))
}

fn congruence_dfa() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let systems = 40;
    for sys in 0..systems {
        let letters = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=3);
        let zetas: Vec<Vec<BigInt>> = (0..k).map(|_| (0..letters).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect()).collect();
        let thetas: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(1..=7))).collect();
        let etas: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(-6..=6))).collect();
        let dfa = CongruenceDfa::build(&zetas, &etas, &thetas, letters).map_err(|e| e.to_string())?;
        let alphabet: Vec<usize> = (0..letters).collect();
        for _ in 0..500 {
            let w: Vec<usize> = (0..rng.gen_range(0..=20)).map(|_| rng.gen_range(0..letters)).collect();
            let counts = parikh(&alphabet, &w).map_err(|e| e.to_string())?;
            let got = dfa.accepts(&w).map_err(|e| e.to_string())?;
            ensure(got == congruences_hold(&zetas, &etas, &thetas, &counts), || format!("system {sys}, word {w:?}"))?;
        }
    }
    Ok(format!("{systems} systems x 500 words"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("shuffle soundness", shuffle_soundness),
        ("geodesic criterion equals oracle", criterion_equivalence),
        ("word/path bijection", bijection),
        ("machine correctness", machine_correctness),
        ("growth values", growth_values),
        ("growth dichotomy", dichotomy),
        ("polyhedral algebra", polyhedral_algebra),
        ("group validation mutations", spec_validation),
        ("congruence DFA", congruence_dfa),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
