//! One line per acceptance criterion, at the default scale: sets of size
//! at most 3, a two-point interval and 200 seeded instances.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use froblab::cli::{gen_instance, instance_seed, run_suite, GenConfig, Instance, Role, SuiteConfig};
use froblab::fibrations::{
    audit_hypotheses, bijection_class, default_class, is_fibration, AuditSamples, FibWitness,
};
use froblab::frobenius::{self, Corruption, FrobeniusCells};
use froblab::interval::IntervalCtx;
use froblab::kernel::{self, compose, FinMap, FinSet, Value};
use froblab::mates::{
    check_pasting, compose_adj, conjugate, mate, sample_objects, Adjunction, LazyFunctor, NatCell,
};
use froblab::oracle;
use froblab::slices::{beck_chevalley, pi, pi_square_cell, AdjointTriple, SliceObj};
use froblab::structured::{
    substitution_stability_check, tf1_pullback, Square, StructAssignment, StructFib,
};
use froblab::Error;

const SEED: u64 = 20_240_611;
const RUNS: usize = 200;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn instances(n: usize, interval_size: usize) -> Vec<Instance> {
    let cfg = GenConfig {
        interval_size,
        ..GenConfig::default()
    };
    (0..n as u64).map(|k| gen_instance(instance_seed(SEED, k), &cfg)).collect()
}

struct Pair {
    ctx: IntervalCtx,
    p: FibWitness,
    q: FibWitness,
    f: FinMap,
}

fn fibration_pairs(n: usize) -> Vec<Pair> {
    instances(n, 2)
        .into_iter()
        .map(|inst| {
            let ctx = IntervalCtx::new(inst.points().clone());
            let cls = default_class();
            let p = is_fibration(inst.role(Role::P).unwrap(), &ctx, &cls).expect("generated p is a fibration");
            let q = is_fibration(inst.role(Role::Q).unwrap(), &ctx, &cls).expect("generated q is a fibration");
            Pair {
                ctx,
                p,
                q,
                f: inst.role(Role::F).unwrap().clone(),
            }
        })
        .collect()
}

fn path(ctx: &IntervalCtx, f: impl Fn(&Value) -> Value) -> Value {
    Value::table(ctx.points().iter().map(|i| (i.clone(), f(i)))).unwrap()
}

/// Every element `((t, i), e)` of `E_ε` for `r: E → Y`, and whether some
/// path `(v, i)` in `E` hits it, enumerated without the interval module.
fn first_unhit(r: &FinMap, ctx: &IntervalCtx) -> (FinSet, Option<Value>) {
    let pts = ctx.points();
    let e_paths = kernel::all_maps(pts, r.dom());
    let y_paths = kernel::all_maps(pts, r.cod());
    let mut targets = Vec::new();
    for t in &y_paths {
        for i in pts.iter() {
            let u = Value::pair(path(ctx, |j| t.apply(j).unwrap().clone()), i.clone());
            for (e, re) in r.graph() {
                if re == t.apply(i).unwrap() {
                    targets.push(Value::pair(u.clone(), e.clone()));
                }
            }
        }
    }
    let mut hit = std::collections::HashSet::new();
    for v in &e_paths {
        for i in pts.iter() {
            let rv = path(ctx, |j| r.apply(v.apply(j).unwrap()).unwrap().clone());
            hit.insert(Value::pair(Value::pair(rv, i.clone()), v.apply(i).unwrap().clone()));
        }
    }
    let missed = targets.iter().find(|t| !hit.contains(*t)).cloned();
    (FinSet::new(targets), missed)
}

fn criterion_1(pairs: &[Pair]) -> Verdict {
    let mut bad = None;
    for (k, c) in pairs.iter().enumerate() {
        let w = match frobenius::pushforward_fibration(&c.p, &c.q, &c.ctx, &default_class()) {
            Ok(w) => w,
            Err(e) => {
                bad.get_or_insert(format!("#{k}: {e}"));
                continue;
            }
        };
        let gap = w.gap_witness().map();
        let round = compose(gap, w.section()).unwrap();
        let (cod, missed) = first_unhit(w.p(), &c.ctx);
        if !round.is_identity() || gap.cod() != &cod || missed.is_some() {
            bad.get_or_insert(format!("#{k}: {missed:?}"));
        }
    }
    match bad {
        None => verdict(true, format!("{} pushforwards sectioned, gaps surjective by enumeration", pairs.len())),
        Some(w) => verdict(false, w),
    }
}

fn criterion_2(pairs: &[Pair]) -> Verdict {
    let mut bad = None;
    let mut injected = 0;
    let mut caught = 0;
    for (k, c) in pairs.iter().enumerate() {
        let q = SliceObj::new(c.q.p().clone());
        let d = FrobeniusCells::new(c.p.p(), &c.ctx)
            .and_then(|cells| cells.retract_diagram(c.p.section(), &q))
            .unwrap();
        let eqs = [
            ("tau kappa", compose(&d.tau, &d.kappa).unwrap(), FinMap::identity(d.kappa.dom())),
            (
                "tau' kappa'",
                compose(&d.tau_prime, &d.kappa_prime).unwrap(),
                FinMap::identity(d.kappa_prime.dom()),
            ),
            ("left", compose(&d.kappa, &d.outer).unwrap(), compose(&d.middle, &d.kappa_prime).unwrap()),
            ("right", compose(&d.tau, &d.middle).unwrap(), compose(&d.outer, &d.tau_prime).unwrap()),
        ];
        for (name, l, r) in eqs {
            if l != r {
                bad.get_or_insert(format!("#{k} {name}"));
            }
        }
        if k < 20 {
            for which in Corruption::ALL {
                let mut broken = d.clone();
                let damaged = if which == Corruption::Section {
                    let honest = frobenius::pushforward_fibration(&c.p, &c.q, &c.ctx, &default_class()).unwrap();
                    frobenius::swap_images(honest.section()).is_some()
                } else {
                    broken.corrupt(which)
                };
                if !damaged {
                    continue;
                }
                injected += 1;
                let err = if which == Corruption::Section {
                    frobenius::pushforward_with(&c.p, &c.q, &c.ctx, &default_class(), Some(which)).err()
                } else {
                    broken.verify().err()
                };
                if let Some(Error::VerificationFailed { .. } | Error::InvalidWitness(_)) = err {
                    caught += 1;
                }
            }
        }
    }
    let ok = bad.is_none() && injected > 0 && caught == injected;
    verdict(
        ok,
        bad.unwrap_or_else(|| format!("4 equations on {} diagrams; {caught}/{injected} injected faults caught", pairs.len())),
    )
}

fn criterion_3(pairs: &[Pair]) -> Verdict {
    for (k, c) in pairs.iter().enumerate() {
        let q = SliceObj::new(c.q.p().clone());
        let (p, ctx) = (c.p.p(), &c.ctx);
        let pairs = [
            ("kappa", frobenius::kappa(p, &q, ctx), oracle::kappa_pt(p, &q, ctx)),
            ("kappa'", frobenius::kappa_prime(p, &q, ctx), oracle::kappa_prime_pt(p, &q, ctx)),
            ("tau", frobenius::tau(&c.p, &q, ctx), oracle::tau_pt(&c.p, &q, ctx)),
            ("tau'", frobenius::tau_prime(&c.p, &q, ctx), oracle::tau_prime_pt(&c.p, &q, ctx)),
            (
                "section",
                frobenius::pushforward_fibration(&c.p, &c.q, ctx, &default_class()).map(|w| w.section().clone()),
                oracle::section_composite_pt(&c.p, &c.q, ctx),
            ),
        ];
        for (name, ours, theirs) in pairs {
            if ours.unwrap() != theirs.unwrap() {
                return verdict(false, format!("#{k} {name}"));
            }
        }
    }
    verdict(true, format!("5 maps equal graph-for-graph on {} instances", pairs.len()))
}

fn same_at(a: &NatCell, b: &NatCell, xs: &[SliceObj]) -> bool {
    xs.iter().all(|x| a.at(x).unwrap().arrow() == b.at(x).unwrap().arrow())
}

fn criterion_4() -> Verdict {
    let maps: Vec<FinMap> = instances(12, 2)
        .iter()
        .map(|i| i.role(Role::P).unwrap().clone())
        .filter(|p| !p.dom().is_empty())
        .collect();
    let (mut triangles, mut conjugates, mut pasted) = (0, 0, 0);
    let mut counterexample = None;
    for p in &maps {
        let t = AdjointTriple::of(p);
        let (sa, sx) = (p.dom().clone(), p.cod().clone());
        let (over_a, over_x) = (sample_objects(&sa, 2), sample_objects(&sx, 2));
        let adj = t.sigma_adj();
        let id_f = NatCell::identity(&adj.left);
        let unit = mate(&id_f, &Adjunction::identity(&sa), &adj, &LazyFunctor::identity(&sa), &adj.left).unwrap();
        let counit = mate(&id_f, &adj, &Adjunction::identity(&sx), &adj.left, &LazyFunctor::identity(&sx)).unwrap();
        if !(same_at(&unit, &adj.unit, &over_a) && same_at(&counit, &adj.counit, &over_x)) {
            return verdict(false, format!("units as mates at {p}"));
        }
        for a in [t.sigma_adj(), t.pi_adj()] {
            let (l, r) = if a.left.src() == &sa { (&over_a, &over_x) } else { (&over_x, &over_a) };
            if a.left_triangle_failure(l).unwrap().is_some() || a.right_triangle_failure(r).unwrap().is_some() {
                return verdict(false, format!("triangle identity at {p}"));
            }
        }
        triangles += over_a.len().min(over_x.len());
        let lu = compose_adj(&t.pi_adj(), &t.sigma_adj()).unwrap();
        let eta = conjugate(&t.mu, &Adjunction::identity(&sx), &lu).unwrap();
        let ul = compose_adj(&t.sigma_adj(), &t.pi_adj()).unwrap();
        let nu = conjugate(&t.iota, &ul, &Adjunction::identity(&sa)).unwrap();
        if !(same_at(&eta, &t.eta, &over_x) && same_at(&nu, &t.nu, &over_a)) {
            return verdict(false, format!("conjugates at {p}"));
        }
        conjugates += over_a.len().min(over_x.len());
        if counterexample.is_none() && t.iota.non_bijective_at(&over_a).unwrap().is_some() {
            counterexample = Some(p.to_string());
        }
    }
    // pasting the squares of C -r-> B -q-> A over the terminal object
    let one = FinSet::terminal();
    let probes = sample_objects(&one, 4);
    for inst in instances(12, 2) {
        let (r, q) = (inst.role(Role::Q).unwrap(), inst.role(Role::P).unwrap());
        let t_r = AdjointTriple::named("r", r);
        let t_q = AdjointTriple::named("q", q);
        let t_t = AdjointTriple::named("t", &FinMap::bang(r.dom()));
        let t_s = AdjointTriple::named("s", &FinMap::bang(r.cod()));
        let t_p = AdjointTriple::named("p", &FinMap::bang(q.cod()));
        let t_y = AdjointTriple::identity(&one);
        let t_x = AdjointTriple::identity(&one);
        let left = pi_square_cell(&t_r, &t_t, &t_s, &t_y).unwrap();
        let right = pi_square_cell(&t_q, &t_s, &t_p, &t_x).unwrap();
        let h = t_r.shriek.then(&t_q.shriek).unwrap();
        let k = t_y.shriek.then(&t_x.shriek).unwrap();
        let alpha = NatCell::identity_between(&h.then(&t_p.shriek).unwrap(), &t_t.shriek.then(&k).unwrap()).unwrap();
        let whole = mate(&alpha, &t_t.sigma_adj(), &t_p.sigma_adj(), &h, &k).unwrap();
        let lhs = [
            left.beta1.whisker_right(&t_q.shriek).unwrap(),
            right.beta1.whisker_left(&t_y.shriek).unwrap(),
        ];
        let report = check_pasting(&lhs, &[whole], &probes).unwrap();
        if !report.passed() {
            return verdict(false, format!("pasting at {r} then {q}"));
        }
        pasted += report.checked;
    }
    let enough = triangles >= 50 && conjugates >= 50 && pasted >= 50;
    match counterexample {
        Some(c) if enough => verdict(
            true,
            format!("{triangles} triangle, {conjugates} conjugate, {pasted} pasting samples; non-invertible unit at p = {c}"),
        ),
        _ => verdict(false, format!("samples {triangles}/{conjugates}/{pasted}, counterexample {counterexample:?}")),
    }
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random_map = |d: usize, c: usize, pre: (&str, &str)| {
        let (d, c) = (FinSet::atoms(pre.0, d), FinSet::atoms(pre.1, c));
        kernel::all_maps(&d, &c).choose(&mut rng).cloned()
    };
    let (mut good, mut faulty, mut wrong) = (0, 0, 0);
    let mut k = 0u64;
    while good < 100 || faulty < 20 {
        k += 1;
        let mut r = ChaCha8Rng::seed_from_u64(instance_seed(SEED, k));
        let nx = r.gen_range(1..=3);
        let (Some(p), Some(x)) = (random_map(r.gen_range(0..=3), nx, ("a", "x")), random_map(r.gen_range(0..=3), nx, ("y", "x"))) else {
            continue;
        };
        let pb = kernel::pullback(&p, &x).unwrap();
        let tp = AdjointTriple::named("p", &p);
        let tx = AdjointTriple::named("x", &x);
        if good < 100 {
            good += 1;
            let bc = beck_chevalley(&AdjointTriple::named("q", &pb.pr1), &AdjointTriple::named("s", &pb.pr2), &tp, &tx);
            let ok = bc.is_ok_and(|bc| {
                bc.left.non_bijective_at(&sample_objects(x.dom(), 2)).unwrap().is_none()
                    && bc.right.non_bijective_at(&sample_objects(p.dom(), 2)).unwrap().is_none()
            });
            wrong += usize::from(!ok);
        } else if !pb.object.is_empty() {
            // drop one point of the pullback, or double all of them
            let object = if k.is_multiple_of(2) {
                FinSet::new(pb.object.iter().skip(1).cloned())
            } else {
                pb.object.product(&FinSet::atoms("d", 2))
            };
            let via = |f: &FinMap| {
                FinMap::from_fn(object.clone(), f.cod().clone(), |e| {
                    let e = if k.is_multiple_of(2) { e } else { e.fst()? };
                    f.apply(e).cloned()
                })
                .unwrap()
            };
            faulty += 1;
            let res = beck_chevalley(&AdjointTriple::named("q", &via(&pb.pr1)), &AdjointTriple::named("s", &via(&pb.pr2)), &tp, &tx);
            wrong += usize::from(!matches!(res, Err(Error::NotAPullback { .. })));
        }
    }
    verdict(wrong == 0, format!("{good} pullbacks, {faulty} non-pullbacks, {wrong} misclassified"))
}

fn criterion_6() -> Verdict {
    let ctx = IntervalCtx::with_size(2);
    let maps: Vec<FinMap> = (0..100u64)
        .map(|k| {
            let inst = gen_instance(instance_seed(SEED ^ 6, k), &GenConfig { require_fibration: Default::default(), ..GenConfig::default() });
            inst.role(Role::P).unwrap().clone()
        })
        .collect();
    for p in &maps {
        let nu = ctx.whiskered_counit(p).unwrap();
        let j = ctx.j_iso(p).unwrap();
        if !j.arrow().is_bijective() || nu.after(&j).unwrap().arrow() != &ctx.gap(p).gap {
            return verdict(false, format!("counit at {p}"));
        }
        if !ctx.leibniz_over_i(p).unwrap().commutes() {
            return verdict(false, format!("Leibniz comparison at {p}"));
        }
    }
    for n in 0..=3 {
        let x = FinSet::atoms("x", n);
        let cat = ctx.categorical_paths(&x).unwrap();
        // evaluation through the generic point, written out directly
        let direct = FinMap::from_fn(ctx.path_space(&x), x.clone(), |e| {
            e.fst()?.lookup(e.snd()?).cloned()
        })
        .unwrap();
        let fst = FinMap::from_fn(x.product(ctx.points()), x.clone(), |e| e.fst().cloned()).unwrap();
        if compose(&cat.epsilon, &cat.path_cmp).unwrap() != direct
            || compose(&fst, &ctx.generic_eval(&x)).unwrap() != direct
        {
            return verdict(false, format!("evaluation on {x}"));
        }
    }
    verdict(true, "counit equals gap and Leibniz comparison commutes for 100 maps; evaluation factors through the generic point")
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let samples = AuditSamples::random(&mut rng, RUNS, 3);
    let surj = audit_hypotheses(&default_class(), &samples);
    let bij = audit_hypotheses(&bijection_class(), &samples);
    let bij_witness = bij.retract.witness.clone();
    let detail = format!(
        "surjections {} on (i)-(iii) over {} samples; bijections (iii) witness: {}",
        if surj.passed() { "pass" } else { "fail" },
        samples.maps.len(),
        bij_witness.as_deref().unwrap_or("none, retracts of bijections are bijections"),
    );
    verdict(surj.passed() && bij_witness.is_some(), detail)
}

fn criterion_8(pairs: &[Pair]) -> Verdict {
    let a = StructAssignment::new(default_class());
    for (k, c) in pairs.iter().take(100).enumerate() {
        let p_s = StructFib::from_witness(&c.p, froblab::structured::Provenance::Assigned("surjections"));
        let q_s = StructFib::from_witness(&c.q, froblab::structured::Provenance::Assigned("surjections"));
        let r = substitution_stability_check(&p_s, &q_s, &c.f, &c.ctx);
        if !r.passed {
            return verdict(false, format!("#{k} {} {:?}", r.detail, r.witness));
        }
        let Some(w) = a.assign(c.p.p()) else { continue };
        if tf1_pullback(&Square::identity(c.p.p()), &w).unwrap() != w {
            return verdict(false, format!("#{k} identity square"));
        }
        let upper = Square::canonical(&c.f, c.p.p()).unwrap();
        let h = kernel::pullback(&c.f, &c.f).unwrap().pr1;
        let lower = Square::canonical(&h, &upper.left).unwrap();
        let pasted = tf1_pullback(&upper.paste(&lower).unwrap(), &w).unwrap();
        let stepwise = tf1_pullback(&lower, &tf1_pullback(&upper, &w).unwrap()).unwrap();
        if pasted != stepwise {
            return verdict(false, format!("#{k} pasted square"));
        }
    }
    verdict(true, "100 substitutions commute with the operator; identity and pasted squares act correctly")
}

fn criterion_9() -> Verdict {
    for (interval_size, max_size) in [(0, 3), (1, 3), (2, 0)] {
        let cfg = SuiteConfig {
            seed: SEED,
            runs: 50,
            max_size,
            interval_size,
            ..SuiteConfig::default()
        };
        let r = run_suite("all", &cfg).unwrap();
        if !r.passed() {
            return verdict(false, r.to_human());
        }
    }
    let ctx = IntervalCtx::with_size(1);
    for inst in instances(50, 1) {
        for role in Role::ALL {
            let m = inst.role(role).unwrap();
            if !ctx.gap(m).gap.is_bijective() {
                return verdict(false, format!("gap of {m} with one point"));
            }
        }
    }
    let empty = FinMap::identity(&FinSet::empty());
    let ok = is_fibration(&empty, &IntervalCtx::with_size(2), &default_class()).is_some()
        && pi(&empty, &SliceObj::new(empty.clone())).unwrap().carrier().is_empty();
    verdict(ok, "all suites pass with |I| = 0, |I| = 1 and empty sets; one-point gaps are bijective")
}

fn criterion_10() -> Verdict {
    let cfg = SuiteConfig {
        seed: SEED,
        ..SuiteConfig::default()
    };
    let a = run_suite("all", &cfg).unwrap().to_kv();
    let b = run_suite("all", &cfg).unwrap().to_kv();
    verdict(a == b && !a.is_empty(), format!("{} report bytes identical across runs", a.len()))
}

type Criterion<'a> = Box<dyn Fn() -> Verdict + Sync + 'a>;

#[test]
fn acceptance() {
    let pairs = fibration_pairs(RUNS);
    let criteria: [(&str, Criterion<'_>); 10] = [
        ("pushforward of fibrations", Box::new(|| criterion_1(&pairs))),
        ("retract diagram", Box::new(|| criterion_2(&pairs))),
        ("oracle equivalence", Box::new(|| criterion_3(&pairs))),
        ("mates calculus", Box::new(criterion_4)),
        ("Beck-Chevalley", Box::new(criterion_5)),
        ("gap as counit and Leibniz exponential", Box::new(criterion_6)),
        ("hypothesis audit", Box::new(criterion_7)),
        ("structured substitution stability", Box::new(|| criterion_8(&pairs))),
        ("degenerate instances", Box::new(criterion_9)),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut out = std::io::stdout();
    let mut failed = Vec::new();
    let verdicts: Vec<Verdict> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|(_, run)| s.spawn(run)).collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    for (k, ((name, _), v)) in criteria.iter().zip(verdicts).enumerate() {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {:>2} {tag} {name}: {}", k + 1, v.detail).unwrap();
        if !v.passed {
            failed.push(k + 1);
        }
    }
    // the bijection class is closed under retracts, so no witness for (iii)
    // can exist; that criterion is reported as failing rather than bent
    assert_eq!(failed, vec![7], "unexpected failing criteria");
}
