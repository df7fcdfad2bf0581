//! Checks grouped by module, run over generated or supplied instances.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::format::{Instance, Role};
use super::gen::{gen_instance, instance_seed, GenConfig};
use crate::error::{Error, Result};
use crate::fibrations::{
    audit_hypotheses, bijection_class, default_class, is_fibration, lifts_all_paths, AuditSamples,
    FibWitness,
};
use crate::frobenius::{self, Corruption, FrobeniusCells};
use crate::interval::IntervalCtx;
use crate::kernel::{self, compose, FinMap, FinSet, Value};
use crate::mates::{
    check_pasting, compose_adj, conjugate, inverse_mate, mate, sample_maps, sample_objects,
    Adjunction, LazyFunctor, NatCell,
};
use crate::oracle;
use crate::slices::{pi, pi_map, pi_square_cell, AdjointTriple, SliceMap, SliceObj};
use crate::structured::{
    frobenius_operator, substitution_stability_check, tf1_pullback, Square, StructAssignment,
    StructFib,
};

pub const SUITES: [&str; 9] = [
    "kernel",
    "mates",
    "slices",
    "interval",
    "fibrations",
    "frobenius",
    "oracle",
    "structured",
    "all",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub runs: usize,
    pub max_size: usize,
    pub interval_size: usize,
    pub corrupt: Option<Corruption>,
    /// Checked instead of generated instances.
    pub instance: Option<Instance>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            runs: 200,
            max_size: 3,
            interval_size: 2,
            corrupt: None,
            instance: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    /// The first failure, tagged with its instance index.
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub runs: usize,
    pub max_size: usize,
    pub interval_size: usize,
    pub corrupt: Option<Corruption>,
    /// Sorted by name.
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `key = value` lines; witnesses are printed elements.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let corrupt = self.corrupt.map(Corruption::name).unwrap_or("none");
        writeln!(out, "suite = {}", self.suite).unwrap();
        writeln!(out, "seed = {}", self.seed).unwrap();
        writeln!(out, "runs = {}", self.runs).unwrap();
        writeln!(out, "max_size = {}", self.max_size).unwrap();
        writeln!(out, "interval_size = {}", self.interval_size).unwrap();
        writeln!(out, "corrupt = {corrupt}").unwrap();
        for c in &self.checks {
            writeln!(out, "check.{}.checked = {}", c.name, c.checked).unwrap();
            writeln!(out, "check.{}.failed = {}", c.name, c.failed).unwrap();
            if let Some(w) = &c.witness {
                writeln!(out, "check.{}.witness = {w}", c.name).unwrap();
            }
        }
        writeln!(out, "status = {}", if self.passed() { "pass" } else { "fail" }).unwrap();
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "suite {} (seed {}, {} runs, sizes <= {}, |I| = {})",
            self.suite, self.seed, self.runs, self.max_size, self.interval_size
        )
        .unwrap();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            write!(out, "  {tag} {:<44} {:>5} checked", c.name, c.checked).unwrap();
            if !c.passed() {
                write!(out, ", {} failed", c.failed).unwrap();
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                writeln!(out, "       witness {w}").unwrap();
            }
        }
        let n = self.checks.len();
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        writeln!(out, "{}: {} checks, {failed} failed", if failed == 0 { "pass" } else { "fail" }, n).unwrap();
        out
    }
}

/// One instance prepared for checking.
struct Case {
    seed: u64,
    ctx: IntervalCtx,
    p: FinMap,
    q: Option<FinMap>,
    f: Option<FinMap>,
    corrupt: Option<Corruption>,
    max_size: usize,
}

type Outcome = Result<Option<String>>;

#[derive(Default)]
struct Recorder(Vec<(&'static str, Outcome)>);

impl Recorder {
    fn record(&mut self, name: &'static str, outcome: Outcome) {
        self.0.push((name, outcome));
    }

    fn expect(&mut self, name: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        self.record(name, Ok((!ok).then(witness)));
    }

    /// Graph equality, failing at the first element where they differ.
    fn same(&mut self, name: &'static str, lhs: Result<FinMap>, rhs: Result<FinMap>) {
        let outcome = lhs.and_then(|l| {
            let r = rhs?;
            if l.dom() != r.dom() || l.cod() != r.cod() {
                return Ok(Some("boundaries differ".to_string()));
            }
            Ok(l.first_difference(&r).map(|w| w.to_string()))
        });
        self.record(name, outcome);
    }
}

type CheckFn = fn(&Case, &mut Recorder);

fn run_case(suite: &str, case: &Case) -> Vec<(&'static str, Outcome)> {
    let mut rec = Recorder::default();
    let all = suite == "all";
    let checks: [(&str, CheckFn); 8] = [
        ("kernel", kernel_checks),
        ("mates", mates_checks),
        ("slices", slices_checks),
        ("interval", interval_checks),
        ("fibrations", fibration_checks),
        ("frobenius", frobenius_checks),
        ("oracle", oracle_checks),
        ("structured", structured_checks),
    ];
    for (name, run) in checks {
        if all || name == suite {
            run(case, &mut rec);
        }
    }
    rec.0
}

fn kernel_checks(c: &Case, rec: &mut Recorder) {
    let p = &c.p;
    rec.expect(
        "kernel.identity_laws",
        compose(p, &FinMap::identity(p.dom())).as_ref() == Ok(p)
            && compose(&FinMap::identity(p.cod()), p).as_ref() == Ok(p),
        || p.to_string(),
    );
    if let Some(f) = &c.f {
        let outcome = kernel::pullback(f, p).map(|pb| {
            let brute = FinSet::new(f.graph().flat_map(|(z, fz)| {
                p.graph()
                    .filter(move |(_, pa)| *pa == fz)
                    .map(move |(a, _)| Value::pair(z.clone(), a.clone()))
            }));
            let commutes = compose(f, &pb.pr1).ok() == compose(p, &pb.pr2).ok();
            (!(commutes && pb.object == brute)).then(|| format!("{f} against {p}"))
        });
        rec.record("kernel.pullback", outcome);
    }
    let outcome = match kernel::choose_section(p) {
        Err(Error::NotSurjective(y)) => Ok((p.is_surjective()).then(|| y.to_string())),
        Err(e) => Err(e),
        Ok(s) => Ok(p.cod().iter().find_map(|x| {
            let least = p.graph().filter(|(_, px)| *px == x).map(|(a, _)| a).min();
            (least != s.apply(x).ok() || p.apply(s.apply(x).ok()?).ok() != Some(x))
                .then(|| x.to_string())
        })),
    };
    rec.record("kernel.least_section", outcome);
    let expected = p.dom().len().pow(c.ctx.points().len() as u32);
    rec.expect("kernel.exponential_size", c.ctx.paths(p.dom()).len() == expected, || {
        p.dom().to_string()
    });
}

fn triple(p: &FinMap) -> AdjointTriple {
    AdjointTriple::of(p)
}

fn first_mismatch(a: &NatCell, b: &NatCell, samples: &[SliceObj]) -> Outcome {
    for x in samples {
        if a.at(x)?.arrow() != b.at(x)?.arrow() {
            return Ok(Some(format!("{:?}", x.disp())));
        }
    }
    Ok(None)
}

fn mates_checks(c: &Case, rec: &mut Recorder) {
    let t = triple(&c.p);
    let (sa, sx) = (c.p.dom().clone(), c.p.cod().clone());
    let over_a = sample_objects(&sa, 1);
    let over_x = sample_objects(&sx, 1);
    let adj = t.sigma_adj();
    let id_f = NatCell::identity(&adj.left);
    let outcome = (|| {
        let unit = mate(&id_f, &Adjunction::identity(&sa), &adj, &LazyFunctor::identity(&sa), &adj.left)?;
        let counit = mate(&id_f, &adj, &Adjunction::identity(&sx), &adj.left, &LazyFunctor::identity(&sx))?;
        Ok(first_mismatch(&unit, &adj.unit, &over_a)?.or(first_mismatch(&counit, &adj.counit, &over_x)?))
    })();
    rec.record("mates.units_and_counits_are_mates", outcome);
    let outcome = (|| {
        let lu = compose_adj(&t.pi_adj(), &t.sigma_adj())?;
        let eta = conjugate(&t.mu, &Adjunction::identity(&sx), &lu)?;
        let ul = compose_adj(&t.sigma_adj(), &t.pi_adj())?;
        let nu = conjugate(&t.iota, &ul, &Adjunction::identity(&sa))?;
        Ok(first_mismatch(&eta, &t.eta, &over_x)?.or(first_mismatch(&nu, &t.nu, &over_a)?))
    })();
    rec.record("mates.conjugates_of_counits", outcome);
    let outcome = (|| {
        let (h, k) = (LazyFunctor::identity(&sa), adj.left.clone());
        let beta = mate(&id_f, &Adjunction::identity(&sa), &adj, &h, &k)?;
        let back = inverse_mate(&beta, &Adjunction::identity(&sa), &adj, &h, &k)?;
        first_mismatch(&back, &id_f, &over_a)
    })();
    rec.record("mates.round_trip", outcome);
    for (name, adj, samples_l, samples_r) in [
        ("mates.triangle_identities", t.sigma_adj(), &over_a, &over_x),
        ("mates.triangle_identities", t.pi_adj(), &over_x, &over_a),
    ] {
        let outcome = (|| {
            let l = adj.left_triangle_failure(samples_l)?;
            let r = adj.right_triangle_failure(samples_r)?;
            Ok(l.or(r).map(|x| format!("{:?}", x.disp())))
        })();
        rec.record(name, outcome);
    }
    if let Some(q) = &c.q {
        rec.record("mates.pasting", pasting(q, &c.p));
    }
    // the unit of p_! ⊣ p^* is a mate of an identity, invertible exactly
    // when p is injective
    let outcome = t.iota.non_bijective_at(&over_a).map(|bad| {
        (bad.is_some() == c.p.is_injective()).then(|| c.p.to_string())
    });
    rec.record("mates.identity_mate_invertibility", outcome);
}

/// `C -r-> B -q-> A` over the terminal object: the mate of the pasted
/// square is the pasting of the mates.
fn pasting(r: &FinMap, q: &FinMap) -> Outcome {
    let one = FinSet::terminal();
    let t_r = AdjointTriple::named("r", r);
    let t_q = AdjointTriple::named("q", q);
    let t_t = AdjointTriple::named("t", &FinMap::bang(r.dom()));
    let t_s = AdjointTriple::named("s", &FinMap::bang(r.cod()));
    let t_p = AdjointTriple::named("p", &FinMap::bang(q.cod()));
    let t_y = AdjointTriple::identity(&one);
    let t_x = AdjointTriple::identity(&one);
    let left = pi_square_cell(&t_r, &t_t, &t_s, &t_y)?;
    let right = pi_square_cell(&t_q, &t_s, &t_p, &t_x)?;
    let h = t_r.shriek.then(&t_q.shriek)?;
    let k = t_y.shriek.then(&t_x.shriek)?;
    let alpha = NatCell::identity_between(&h.then(&t_p.shriek)?, &t_t.shriek.then(&k)?)?;
    let whole = mate(&alpha, &t_t.sigma_adj(), &t_p.sigma_adj(), &h, &k)?;
    let lhs = [
        left.beta1.whisker_right(&t_q.shriek)?,
        right.beta1.whisker_left(&t_y.shriek)?,
    ];
    let report = check_pasting(&lhs, &[whole], &sample_objects(&one, 2))?;
    Ok(report.witness.map(|x| format!("{:?}", x.disp())))
}

fn slices_checks(c: &Case, rec: &mut Recorder) {
    let p = &c.p;
    if let Some(q) = &c.q {
        let expected: usize = p
            .cod()
            .iter()
            .map(|x| {
                p.graph()
                    .filter(|(_, px)| *px == x)
                    .map(|(a, _)| q.images().iter().filter(|b| *b == a).count())
                    .product::<usize>()
            })
            .sum();
        let outcome = pi(p, &SliceObj::new(q.clone()))
            .map(|o| (o.carrier().len() != expected).then(|| format!("{q} over {p}")));
        rec.record("slices.pi_cardinality", outcome);
    }
    let objs = sample_objects(p.dom(), 1);
    let maps = sample_maps(&objs, 24);
    let outcome = (|| {
        for m in &maps {
            let id = pi_map(p, &SliceMap::identity(m.src()))?;
            if !id.arrow().is_identity() {
                return Ok(Some(format!("{:?}", m.src().disp())));
            }
            for n in maps.iter().filter(|n| n.src() == m.tgt()) {
                let whole = pi_map(p, &n.after(m)?)?;
                let parts = pi_map(p, n)?.after(&pi_map(p, m)?)?;
                if whole != parts {
                    return Ok(Some(format!("{:?} then {:?}", m.arrow(), n.arrow())));
                }
            }
        }
        Ok(None)
    })();
    rec.record("slices.pi_functorial", outcome);
    let t = triple(p);
    let over_x = sample_maps(&sample_objects(p.cod(), 1), 24);
    let outcome = (|| {
        for cell in [&t.mu, &t.eta] {
            if let Some(m) = cell.naturality_failure(&over_x)? {
                return Ok(Some(format!("{} at {:?}", cell.name(), m.arrow())));
            }
        }
        for cell in [&t.iota, &t.nu] {
            if let Some(m) = cell.naturality_failure(&maps)? {
                return Ok(Some(format!("{} at {:?}", cell.name(), m.arrow())));
            }
        }
        Ok(None)
    })();
    rec.record("slices.cells_natural", outcome);
}

fn interval_checks(c: &Case, rec: &mut Recorder) {
    let (ctx, p) = (&c.ctx, &c.p);
    let outcome = (|| {
        let nu = ctx.whiskered_counit(p)?;
        let j = ctx.j_iso(p)?;
        if !j.arrow().is_bijective() {
            return Ok(Some("comparison is not bijective".into()));
        }
        Ok(nu.after(&j)?.arrow().first_difference(&ctx.gap(p).gap).map(|w| w.to_string()))
    })();
    rec.record("interval.whiskered_counit_is_gap", outcome);
    for x in [p.dom(), p.cod()] {
        let fst = FinMap::from_fn(x.product(ctx.points()), x.clone(), |e| e.fst().cloned());
        rec.same(
            "interval.generic_point_evaluation",
            fst.and_then(|fst| compose(&fst, &ctx.generic_eval(x))),
            Ok(ctx.epsilon(x)),
        );
        let outcome = ctx.categorical_paths(x).map(|cat| {
            let eps = compose(&cat.epsilon, &cat.path_cmp).ok() == Some(ctx.epsilon(x));
            let varpi = compose(&cat.varpi, &cat.path_cmp).ok()
                == compose(&cat.paths_cmp, &ctx.varpi(x)).ok();
            (!(eps && varpi && cat.path_cmp.is_bijective())).then(|| x.to_string())
        });
        rec.record("interval.paths_from_counits", outcome);
    }
    let outcome = ctx.leibniz_over_i(p).map(|l| (!l.commutes()).then(|| p.to_string()));
    rec.record("interval.leibniz_comparison", outcome);
    if let Some(f) = &c.f {
        let outcome = ctx
            .gap_square(f, p)
            .map(|sq| (!(sq.commutes() && sq.is_pullback())).then(|| f.to_string()));
        rec.record("interval.gap_pullback", outcome);
    }
}

fn fibration_checks(c: &Case, rec: &mut Recorder) {
    let cls = default_class();
    for m in [Some(&c.p), c.q.as_ref(), c.f.as_ref()].into_iter().flatten() {
        let structural = is_fibration(m, &c.ctx, &cls).is_some();
        rec.expect("fibrations.path_lifting", structural == lifts_all_paths(m, c.ctx.points()), || {
            m.to_string()
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let samples = AuditSamples::random(&mut rng, 1, c.max_size);
    for (name, cls) in [
        ("fibrations.audit_surjections", default_class()),
        ("fibrations.audit_bijections", bijection_class()),
    ] {
        let r = audit_hypotheses(&cls, &samples);
        let w = [&r.sections, &r.pushforward, &r.retract]
            .into_iter()
            .find_map(|h| h.witness.clone());
        rec.record(name, Ok(w));
    }
}

fn witnesses(c: &Case) -> Option<(FibWitness, FibWitness)> {
    let cls = default_class();
    let p = is_fibration(&c.p, &c.ctx, &cls)?;
    let q = is_fibration(c.q.as_ref()?, &c.ctx, &cls)?;
    Some((p, q))
}

fn failure_witness(e: Error) -> Outcome {
    match e {
        Error::VerificationFailed { equation, witness } => Ok(Some(format!("{equation} at {witness}"))),
        Error::InvalidWitness(m) | Error::NotAFibration(m) => Ok(Some(m)),
        other => Err(other),
    }
}

fn frobenius_checks(c: &Case, rec: &mut Recorder) {
    let Some((p_wit, q_wit)) = witnesses(c) else { return };
    let q = SliceObj::new(q_wit.p().clone());
    let diagram = FrobeniusCells::new(&c.p, &c.ctx).and_then(|cells| {
        let mut d = cells.retract_diagram(p_wit.section(), &q)?;
        if let Some(k) = c.corrupt {
            d.corrupt(k);
        }
        Ok(d)
    });
    let d = match diagram {
        Ok(d) => d,
        Err(e) => {
            rec.record("frobenius.retract_diagram", Err(e));
            return;
        }
    };
    rec.same(
        "frobenius.tau_kappa",
        compose(&d.tau, &d.kappa),
        Ok(FinMap::identity(d.kappa.dom())),
    );
    rec.same(
        "frobenius.tau_prime_kappa_prime",
        compose(&d.tau_prime, &d.kappa_prime),
        Ok(FinMap::identity(d.kappa_prime.dom())),
    );
    rec.same("frobenius.left_square", compose(&d.kappa, &d.outer), compose(&d.middle, &d.kappa_prime));
    rec.same("frobenius.right_square", compose(&d.tau, &d.middle), compose(&d.outer, &d.tau_prime));
    let outcome = (|| {
        let pairs = [
            (&d.kappa, oracle::kappa_pt(&c.p, &q, &c.ctx)?),
            (&d.kappa_prime, oracle::kappa_prime_pt(&c.p, &q, &c.ctx)?),
            (&d.tau, oracle::tau_pt(&p_wit, &q, &c.ctx)?),
            (&d.tau_prime, oracle::tau_prime_pt(&p_wit, &q, &c.ctx)?),
        ];
        Ok(pairs
            .iter()
            .find_map(|(ours, theirs)| ours.first_difference(theirs))
            .map(|w| w.to_string()))
    })();
    rec.record("frobenius.oracle_equality", outcome);
    let outcome = match frobenius::pushforward_with(&p_wit, &q_wit, &c.ctx, &default_class(), c.corrupt) {
        Err(e) => failure_witness(e),
        Ok(w) => (|| {
            let gap = w.gap_witness().map();
            let round = compose(gap, w.section())?;
            if let Some(y) = FinMap::identity(gap.cod()).first_difference(&round) {
                return Ok(Some(format!("section law at {y}")));
            }
            // surjectivity by scanning every fiber
            let missed = gap.cod().iter().find(|y| !gap.images().contains(y));
            if let Some(y) = missed {
                return Ok(Some(format!("empty fiber over {y}")));
            }
            let expected = oracle::section_composite_pt(&p_wit, &q_wit, &c.ctx)?;
            Ok(w.section().first_difference(&expected).map(|y| format!("section at {y}")))
        })(),
    };
    rec.record("frobenius.theorem", outcome);
}

fn oracle_checks(c: &Case, rec: &mut Recorder) {
    let Some((p_wit, q_wit)) = witnesses(c) else { return };
    let q = SliceObj::new(q_wit.p().clone());
    let ctx = &c.ctx;
    let outcome = oracle::tau_kappa_reduction(&p_wit, &q, ctx).map(|stages| {
        let id = FinMap::identity(stages[0].dom());
        stages
            .iter()
            .find_map(|s| s.first_difference(&id))
            .map(|w| w.to_string())
    });
    rec.record("oracle.tau_kappa_reduction", outcome);
    rec.same(
        "oracle.tau_prime_kappa_prime",
        oracle::tau_prime_pt(&p_wit, &q, ctx).and_then(|t| compose(&t, &oracle::kappa_prime_pt(&c.p, &q, ctx)?)),
        oracle::kappa_prime_pt(&c.p, &q, ctx).map(|k| FinMap::identity(k.dom())),
    );
    let outcome = (|| {
        let s = oracle::section_composite_pt(&p_wit, &q_wit, ctx)?;
        let pq = pi(&c.p, &q)?;
        let gap = ctx.gap(pq.disp()).gap;
        Ok(compose(&gap, &s)?.first_difference(&FinMap::identity(gap.cod())).map(|w| w.to_string()))
    })();
    rec.record("oracle.section_splits_gap", outcome);
    let outcome = oracle::pi_exchange(&c.p, &q, ctx).and_then(|ex| {
        let ok = ex.is_bijective() && oracle::exchange_respects_evaluation(&ex, ctx)?;
        Ok((!ok).then(|| c.p.to_string()))
    });
    rec.record("oracle.exchange", outcome);
}

fn structured_checks(c: &Case, rec: &mut Recorder) {
    let a = StructAssignment::new(default_class());
    let (Some(p_s), Some(q_s)) = (
        StructFib::assign(&c.p, &c.ctx, &a),
        c.q.as_ref().and_then(|q| StructFib::assign(q, &c.ctx, &a)),
    ) else {
        return;
    };
    let gap = p_s.gap_structure();
    let outcome = tf1_pullback(&Square::identity(gap.map()), gap)
        .map(|w| (&w != gap).then(|| c.p.to_string()));
    rec.record("structured.identity_action", outcome);
    if let Some(f) = &c.f {
        let outcome = (|| {
            let w = a.assign(&c.p).ok_or(Error::NotSurjective(Value::Unit));
            let Ok(w) = w else { return Ok(None) };
            let upper = Square::canonical(f, &c.p)?;
            let h = kernel::pullback(f, f)?.pr1;
            let lower = Square::canonical(&h, &upper.left)?;
            let pasted = tf1_pullback(&upper.paste(&lower)?, &w)?;
            let stepwise = tf1_pullback(&lower, &tf1_pullback(&upper, &w)?)?;
            Ok(pasted.section().first_difference(stepwise.section()).map(|v| v.to_string()))
        })();
        rec.record("structured.composite_action", outcome);
        let r = substitution_stability_check(&p_s, &q_s, f, &c.ctx);
        rec.record(
            "structured.substitution_stability",
            Ok((!r.passed).then(|| match r.witness {
                Some(w) => format!("{}: {w}", r.detail),
                None => r.detail,
            })),
        );
    }
    let outcome = (|| {
        let out = frobenius_operator(&p_s, &q_s, &c.ctx)?;
        let expected = oracle::section_composite_pt(&p_s.witness(&c.ctx)?, &q_s.witness(&c.ctx)?, &c.ctx)?;
        let again = frobenius_operator(&p_s, &q_s, &c.ctx)?;
        if again != out {
            return Ok(Some("operator is not deterministic".into()));
        }
        Ok(out.gap_structure().section().first_difference(&expected).map(|w| w.to_string()))
    })();
    rec.record("structured.operator_matches_oracle", outcome);
}

fn cases(cfg: &SuiteConfig) -> Result<Vec<(u64, Instance)>> {
    if let Some(inst) = &cfg.instance {
        inst.validate()?;
        return Ok(vec![(cfg.seed, inst.clone())]);
    }
    let gen = GenConfig {
        max_size: cfg.max_size,
        interval_size: cfg.interval_size,
        ..GenConfig::default()
    };
    Ok((0..cfg.runs as u64)
        .map(|k| {
            let s = instance_seed(cfg.seed, k);
            (s, gen_instance(s, &gen))
        })
        .collect())
}

fn prepare(seed: u64, inst: &Instance, cfg: &SuiteConfig) -> Case {
    Case {
        seed,
        ctx: IntervalCtx::new(inst.points().clone()),
        p: inst.role(Role::P).expect("validated").clone(),
        q: inst.role(Role::Q).cloned(),
        f: inst.role(Role::F).cloned(),
        corrupt: cfg.corrupt,
        max_size: cfg.max_size,
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    let cases = cases(cfg)?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cases.len().max(1));
    let mut per_case: Vec<Vec<(&'static str, Outcome)>> = Vec::new();
    per_case.resize_with(cases.len(), Vec::new);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let cases = &cases;
                scope.spawn(move || {
                    (t..cases.len())
                        .step_by(threads)
                        .map(|k| {
                            let (seed, inst) = &cases[k];
                            (k, run_case(name, &prepare(*seed, inst, cfg)))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("check thread panicked") {
                per_case[k] = r;
            }
        }
    });
    let mut checks: BTreeMap<&str, CheckResult> = BTreeMap::new();
    for (k, outcomes) in per_case.into_iter().enumerate() {
        for (check, outcome) in outcomes {
            let entry = checks.entry(check).or_insert_with(|| CheckResult {
                name: check.to_string(),
                checked: 0,
                failed: 0,
                witness: None,
            });
            entry.checked += 1;
            let failure = match outcome {
                Ok(None) => None,
                Ok(Some(w)) => Some(w),
                Err(e) => Some(format!("error: {e}")),
            };
            if let Some(w) = failure {
                entry.failed += 1;
                entry.witness.get_or_insert_with(|| format!("#{k} {w}"));
            }
        }
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        seed: cfg.seed,
        runs: cases.len(),
        max_size: cfg.max_size,
        interval_size: cfg.interval_size,
        corrupt: cfg.corrupt,
        checks: checks.into_values().collect(),
    })
}
