//! Trivial fibrations as a class of maps with chosen sections, and
//! fibrations as the maps whose gap map is a trivial fibration.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::interval::IntervalCtx;
use crate::kernel::{self, compose, FinMap, FinSet, Value};
use crate::slices::{pi_map, SliceMap, SliceObj};

type SectionFn = dyn Fn(&FinMap) -> Option<FinMap> + Send + Sync;

/// A class of maps together with a chosen section of every member.
#[derive(Clone)]
pub struct TrivFibClass {
    name: &'static str,
    section: Arc<SectionFn>,
}

impl TrivFibClass {
    pub fn new(
        name: &'static str,
        section: impl Fn(&FinMap) -> Option<FinMap> + Send + Sync + 'static,
    ) -> TrivFibClass {
        TrivFibClass {
            name,
            section: Arc::new(section),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn contains(&self, f: &FinMap) -> bool {
        (self.section)(f).is_some()
    }

    pub fn section_of(&self, f: &FinMap) -> Option<FinMap> {
        (self.section)(f)
    }

    pub fn witness(&self, f: &FinMap) -> Option<TrivFibWitness> {
        self.section_of(f)
            .and_then(|s| TrivFibWitness::new(f.clone(), s).ok())
    }
}

impl fmt::Debug for TrivFibClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrivFibClass({})", self.name)
    }
}

/// Surjections, sectioned by least preimages.
pub fn default_class() -> TrivFibClass {
    TrivFibClass::new("surjections", |f| kernel::choose_section(f).ok())
}

/// Bijections, sectioned by their inverses.
pub fn bijection_class() -> TrivFibClass {
    TrivFibClass::new("bijections", |f| f.inverse().ok())
}

/// A map with a section.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrivFibWitness {
    map: FinMap,
    section: FinMap,
}

impl TrivFibWitness {
    pub fn new(map: FinMap, section: FinMap) -> Result<TrivFibWitness> {
        let round = compose(&map, &section)
            .map_err(|e| Error::InvalidWitness(format!("section does not compose: {e}")))?;
        if !round.is_identity() {
            let at = (FinMap::identity(map.cod()))
                .first_difference(&round)
                .map(|v| v.to_string())
                .unwrap_or_default();
            return Err(Error::InvalidWitness(format!("section law fails at {at}")));
        }
        Ok(TrivFibWitness { map, section })
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn section(&self) -> &FinMap {
        &self.section
    }
}

/// A trivial-fibration witness on the gap map of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibWitness {
    p: FinMap,
    gap_witness: TrivFibWitness,
}

impl FibWitness {
    pub fn new(p: FinMap, gap_witness: TrivFibWitness, ctx: &IntervalCtx) -> Result<FibWitness> {
        if gap_witness.map != ctx.gap(&p).gap {
            return Err(Error::InvalidWitness(
                "witness is not on the gap map of p".into(),
            ));
        }
        Ok(FibWitness { p, gap_witness })
    }

    pub fn p(&self) -> &FinMap {
        &self.p
    }

    pub fn gap_witness(&self) -> &TrivFibWitness {
        &self.gap_witness
    }

    /// The chosen section of `δ⇒p`.
    pub fn section(&self) -> &FinMap {
        &self.gap_witness.section
    }
}

pub fn is_fibration(p: &FinMap, ctx: &IntervalCtx, cls: &TrivFibClass) -> Option<FibWitness> {
    let gap = ctx.gap(p).gap;
    cls.witness(&gap).map(|w| FibWitness {
        p: p.clone(),
        gap_witness: w,
    })
}

/// Path lifting checked by enumerating every path in `A` and in `X`: each
/// path in `X` with a basepoint in `A` over one of its points lifts.
pub fn lifts_all_paths(p: &FinMap, interval: &FinSet) -> bool {
    let lifts = kernel::all_maps(interval, p.dom());
    kernel::all_maps(interval, p.cod()).iter().all(|x| {
        interval.iter().all(|i| {
            let xi = x.apply(i).expect("path is total");
            p.graph().filter(|(_, px)| *px == xi).all(|(a, _)| {
                lifts.iter().any(|f| {
                    f.apply(i).ok() == Some(a)
                        && compose(p, f).map(|pf| &pf == x).unwrap_or(false)
                })
            })
        })
    })
}

/// Retract data around a center map `f: C → D`: the retract `g: C' → D'`,
/// `u: C' → C`, `v: C → C'`, `ū: D' → D`, `v̄: D → D'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractData {
    pub center: FinMap,
    pub retract: FinMap,
    pub u: FinMap,
    pub v: FinMap,
    pub ubar: FinMap,
    pub vbar: FinMap,
}

impl RetractData {
    /// Checks both identities and both squares.
    pub fn validate(&self) -> Result<()> {
        let check = |what: &str, lhs: Result<FinMap>, rhs: FinMap| -> Result<()> {
            let lhs = lhs.map_err(|e| Error::InvalidRetract(format!("{what}: {e}")))?;
            if let Some(w) = lhs.first_difference(&rhs) {
                return Err(Error::InvalidRetract(format!("{what} fails at {w}")));
            }
            Ok(())
        };
        check("v ∘ u = id", compose(&self.v, &self.u), FinMap::identity(self.retract.dom()))?;
        check(
            "v̄ ∘ ū = id",
            compose(&self.vbar, &self.ubar),
            FinMap::identity(self.retract.cod()),
        )?;
        check(
            "f ∘ u = ū ∘ g",
            compose(&self.center, &self.u),
            compose(&self.ubar, &self.retract).map_err(|e| Error::InvalidRetract(e.to_string()))?,
        )?;
        check(
            "g ∘ v = v̄ ∘ f",
            compose(&self.retract, &self.v),
            compose(&self.vbar, &self.center).map_err(|e| Error::InvalidRetract(e.to_string()))?,
        )
    }

    /// `v ∘ s ∘ ū` for a section `s` of the center.
    pub fn transfer(&self, center_section: &FinMap) -> Result<FinMap> {
        compose(&self.v, &compose(center_section, &self.ubar)?)
    }

    /// `g × K` around `g`, for a nonempty `K`.
    pub fn product_with(g: &FinMap, k: &FinSet) -> RetractData {
        let k0 = k.elements().first().expect("K is nonempty").clone();
        let times = |s: &FinSet| s.product(k);
        let center = FinMap::from_fn(times(g.dom()), times(g.cod()), |e| {
            Ok(Value::pair(g.apply(e.fst()?)?.clone(), e.snd()?.clone()))
        })
        .expect("product map");
        let incl = |s: &FinSet| {
            FinMap::from_fn(s.clone(), times(s), |e| Ok(Value::pair(e.clone(), k0.clone())))
                .expect("inclusion at k0")
        };
        let proj = |s: &FinSet| FinMap::from_fn(times(s), s.clone(), |e| e.fst().cloned()).expect("projection");
        RetractData {
            center,
            retract: g.clone(),
            u: incl(g.dom()),
            v: proj(g.dom()),
            ubar: incl(g.cod()),
            vbar: proj(g.cod()),
        }
    }

    /// `g + g` around `g`, retracted by the codiagonals.
    pub fn doubled(g: &FinMap) -> RetractData {
        let (c2, inl_c, _) = kernel::coproduct(g.dom(), g.dom());
        let (d2, inl_d, _) = kernel::coproduct(g.cod(), g.cod());
        let center = FinMap::from_fn(c2.clone(), d2.clone(), |e| {
            Ok(Value::pair(e.fst()?.clone(), g.apply(e.snd()?)?.clone()))
        })
        .expect("sum map");
        let fold = |s: &FinSet, t: &FinSet| FinMap::from_fn(s.clone(), t.clone(), |e| e.snd().cloned()).expect("codiagonal");
        RetractData {
            center,
            retract: g.clone(),
            u: inl_c,
            v: fold(&c2, g.dom()),
            ubar: inl_d,
            vbar: fold(&d2, g.cod()),
        }
    }
}

/// One hypothesis checked over samples, with the first counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub checked: usize,
    pub witness: Option<String>,
}

impl HypothesisCheck {
    fn new() -> Self {
        HypothesisCheck {
            checked: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub sections: HypothesisCheck,
    pub pushforward: HypothesisCheck,
    pub retract: HypothesisCheck,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.sections.passed() && self.pushforward.passed() && self.retract.passed()
    }
}

/// Sample data for the hypothesis audit.
#[derive(Clone, Debug, Default)]
pub struct AuditSamples {
    pub maps: Vec<FinMap>,
    pub pushforwards: Vec<(FinMap, SliceMap)>,
    pub retracts: Vec<RetractData>,
}

fn random_map<R: Rng>(rng: &mut R, dom: &FinSet, cod: &FinSet) -> Option<FinMap> {
    let maps = kernel::all_maps(dom, cod);
    maps.choose(rng).cloned()
}

fn random_set<R: Rng>(rng: &mut R, prefix: &str, max: usize) -> FinSet {
    FinSet::atoms(prefix, rng.gen_range(0..=max))
}

impl AuditSamples {
    /// `n` random samples of each kind with sets of size at most `max`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, max: usize) -> AuditSamples {
        let mut out = AuditSamples::default();
        while out.maps.len() < n {
            let (d, c) = (random_set(rng, "c", max), random_set(rng, "d", max));
            if let Some(f) = random_map(rng, &d, &c) {
                out.maps.push(f);
            }
        }
        while out.pushforwards.len() < n {
            let a = random_set(rng, "a", max);
            let x = random_set(rng, "x", max);
            let Some(p) = random_map(rng, &a, &x) else { continue };
            let (sb, se) = (random_set(rng, "b", max), random_set(rng, "e", max));
            let (Some(b1), Some(b2)) = (random_map(rng, &sb, &a), random_map(rng, &se, &a)) else {
                continue;
            };
            let (src, tgt) = (SliceObj::new(b1), SliceObj::new(b2));
            let arrows: Vec<SliceMap> = kernel::all_maps(src.carrier(), tgt.carrier())
                .into_iter()
                .filter_map(|m| SliceMap::new(src.clone(), tgt.clone(), m).ok())
                .collect();
            if let Some(r) = arrows.choose(rng) {
                out.pushforwards.push((p, r.clone()));
            }
        }
        while out.retracts.len() < n {
            let (d, c) = (random_set(rng, "c", max), random_set(rng, "d", max));
            let Some(g) = random_map(rng, &d, &c) else { continue };
            if rng.gen_bool(0.5) {
                let k = FinSet::atoms("k", rng.gen_range(1..=2));
                out.retracts.push(RetractData::product_with(&g, &k));
            } else {
                out.retracts.push(RetractData::doubled(&g));
            }
        }
        out
    }
}

/// Checks (i) chosen sections are sections, (ii) members are stable under
/// pushforward as maps between slice objects, (iii) retracts of members
/// are members.
pub fn audit_hypotheses(cls: &TrivFibClass, samples: &AuditSamples) -> AuditReport {
    let mut sections = HypothesisCheck::new();
    for f in &samples.maps {
        if let Some(s) = cls.section_of(f) {
            let ok = compose(f, &s).map(|c| c.is_identity()).unwrap_or(false);
            sections.record(ok, || format!("{f}"));
        }
    }
    let mut pushforward = HypothesisCheck::new();
    for (p, r) in &samples.pushforwards {
        if !cls.contains(r.arrow()) {
            continue;
        }
        let ok = pi_map(p, r)
            .map(|m| cls.contains(m.arrow()))
            .unwrap_or(false);
        pushforward.record(ok, || format!("p = {p}, r = {}", r.arrow()));
    }
    let mut retract = HypothesisCheck::new();
    for data in &samples.retracts {
        if data.validate().is_err() {
            continue;
        }
        let Some(s) = cls.section_of(&data.center) else { continue };
        let transferred = data.transfer(&s).ok();
        let ok = cls.contains(&data.retract)
            && transferred
                .and_then(|t| compose(&data.retract, &t).ok())
                .map(|c| c.is_identity())
                .unwrap_or(false);
        retract.record(ok, || format!("retract {} of {}", data.retract, data.center));
    }
    AuditReport {
        sections,
        pushforward,
        retract,
    }
}
