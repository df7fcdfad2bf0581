//! Pushforward of fibrations. For `p: A → X` and `q: B → A` the gap of
//! `p_* q` is exhibited as a retract of `(p^I × I)_*(δ⇒q)`:
//!
//! ```text
//! (Π_A B)^I×I  --κ'-->  Π_{A^I×I}(B^I×I)  --τ'-->  (Π_A B)^I×I
//!      |                       |                        |
//!   δ⇒p_*q          (p^I×I)_*(δ⇒q)                δ⇒p_*q
//!      v                       v                        v
//!  (Π_A B)_ε    --κ-->   Π_{A^I×I}(B_ε)   --τ-->   (Π_A B)_ε
//! ```
//!
//! Every cell here is a mate computed by [`crate::mates`]; nothing is
//! written down pointwise.

use crate::error::{Error, Result};
use crate::fibrations::{FibWitness, TrivFibClass, TrivFibWitness};
use crate::interval::IntervalCtx;
use crate::kernel::{compose, FinMap, Value};
use crate::mates::{check_pasting, NatCell, PastingReport};
use crate::slices::{
    beck_chevalley, pi, pi_map, pi_rectangle_iso, pi_square_cell, pi_triangle_iso, AdjointTriple,
    SliceMap, SliceObj,
};

/// The adjoint triples around `p` and its path-space counterparts.
#[derive(Clone, Debug)]
pub struct FrobeniusCells {
    ctx: IntervalCtx,
    p: AdjointTriple,
    eps_a: AdjointTriple,
    eps_x: AdjointTriple,
    varpi_a: AdjointTriple,
    varpi_x: AdjointTriple,
    p_space: AdjointTriple,
    kappa: NatCell,
    l6: NatCell,
    m6: NatCell,
}

impl FrobeniusCells {
    pub fn new(p: &FinMap, ctx: &IntervalCtx) -> Result<FrobeniusCells> {
        let (a, x) = (p.dom(), p.cod());
        let pt = AdjointTriple::named("p", p);
        let eps_a = AdjointTriple::named("epsA", &ctx.epsilon(a));
        let eps_x = AdjointTriple::named("epsX", &ctx.epsilon(x));
        let varpi_a = AdjointTriple::named("varpiA", &ctx.varpi(a));
        let varpi_x = AdjointTriple::named("varpiX", &ctx.varpi(x));
        let p_paths = AdjointTriple::named("pI", &ctx.path_map(p));
        let p_space = AdjointTriple::named("pIxI", &ctx.path_space_map(p));
        // ε_X^* p_* ⇒ (p^I×I)_* ε_A^*
        let kappa = pi_square_cell(&eps_a, &p_space, &pt, &eps_x)?
            .beta3
            .renamed("kappa");
        // ϖ_X^* p^I_* ⇒ (p^I×I)_* ϖ_A^*, invertible
        let l6 = beck_chevalley(&varpi_a, &p_space, &p_paths, &varpi_x)?
            .cells
            .beta3
            .renamed("L");
        // ϖ_X* (p^I×I)_* ⇒ p^I_* ϖ_A*
        let m6 = pi_rectangle_iso(&p_space, &varpi_x, &varpi_a, &p_paths)?
            .pi
            .renamed("M");
        Ok(FrobeniusCells {
            ctx: ctx.clone(),
            p: pt,
            eps_a,
            eps_x,
            varpi_a,
            varpi_x,
            p_space,
            kappa,
            l6,
            m6,
        })
    }

    pub fn ctx(&self) -> &IntervalCtx {
        &self.ctx
    }

    pub fn p(&self) -> &FinMap {
        &self.p.map
    }

    pub fn kappa_cell(&self) -> &NatCell {
        &self.kappa
    }

    pub fn l_cell(&self) -> &NatCell {
        &self.l6
    }

    pub fn m_cell(&self) -> &NatCell {
        &self.m6
    }

    fn check_over_a(&self, q: &SliceObj) -> Result<()> {
        if q.base() != self.p.map.dom() {
            return Err(Error::mismatch(format!(
                "q lives over {} but p has domain {}",
                q.base(),
                self.p.map.dom()
            )));
        }
        Ok(())
    }

    /// `p_* q`.
    pub fn pushforward(&self, q: &SliceObj) -> Result<SliceObj> {
        self.check_over_a(q)?;
        pi(&self.p.map, q)
    }

    pub fn kappa_at(&self, q: &SliceObj) -> Result<SliceMap> {
        self.check_over_a(q)?;
        self.kappa.at(q)
    }

    fn varpi_twice(&self, m: &SliceMap) -> Result<SliceMap> {
        self.varpi_x.star.map(&self.varpi_x.pi.map(m)?)
    }

    pub fn kappa_prime_at(&self, q: &SliceObj) -> Result<SliceMap> {
        let k = self.kappa_at(q)?;
        let pq = self.pushforward(q)?;
        let eq = self.eps_a.star.obj(q)?;
        let j_pq = self.ctx.j_iso(pq.disp())?;
        let j_q = self.ctx.j_iso(q.disp())?;
        let chain = [
            self.varpi_twice(&k)?,
            self.varpi_x.star.map(&self.m6.at(&eq)?)?,
            self.l6.at(&self.varpi_a.pi.obj(&eq)?)?,
            self.p_space.pi.map(&j_q.inverse()?)?,
        ];
        chain.iter().try_fold(j_pq, |acc, next| next.after(&acc))
    }

    /// `τ: (p^I×I)_* ε_A^* ⇒ ε_X^* p_*` from a section `s` of `δ⇒p`.
    pub fn tau_cell(&self, s: &FinMap) -> Result<NatCell> {
        let gap = self.ctx.gap(&self.p.map);
        if s.dom() != &gap.a_eps || s.cod() != &gap.domain_obj || compose(&gap.gap, s)? != FinMap::identity(&gap.a_eps) {
            return Err(Error::InvalidWitness("not a section of the gap of p".into()));
        }
        let a = self.p.map.dom();
        let pr1 = AdjointTriple::named("pr1", &gap.eps_star_p);
        let pr2 = AdjointTriple::named("pr2", &gap.p_star_eps);
        let st = AdjointTriple::named("s", s);
        // ε_A^* ⇒ s_* pr2^*, the square ε_A ∘ s = pr2
        let sigma = pi_square_cell(&pr2, &st, &AdjointTriple::equality(a), &self.eps_a)?
            .beta3
            .renamed("sigma");
        // (p^I×I)_* s_* ⇒ pr1_*
        let tri = pi_triangle_iso(&st, &self.p_space, &pr1)?;
        // pr1_* pr2^* ⇒ ε_X^* p_*
        let bc = beck_chevalley(&pr2, &pr1, &self.p, &self.eps_x)?;
        sigma
            .whisker_right(&self.p_space.pi)?
            .then_cell(&tri.pi.whisker_left(&pr2.star)?)?
            .then_cell(&bc.right)?
            .renamed("tau")
            .retyped(
                &self.eps_a.star.then(&self.p_space.pi)?,
                &self.p.pi.then(&self.eps_x.star)?,
            )
    }

    pub fn tau_prime_at(&self, tau: &NatCell, q: &SliceObj) -> Result<SliceMap> {
        let t = tau.at(q)?;
        let pq = self.pushforward(q)?;
        let eq = self.eps_a.star.obj(q)?;
        let j_pq = self.ctx.j_iso(pq.disp())?;
        let j_q = self.ctx.j_iso(q.disp())?;
        let chain = [
            self.l6.at(&self.varpi_a.pi.obj(&eq)?)?.inverse()?,
            self.varpi_x.star.map(&self.m6.at(&eq)?.inverse()?)?,
            self.varpi_twice(&t)?,
            j_pq.inverse()?,
        ];
        chain
            .iter()
            .try_fold(self.p_space.pi.map(&j_q)?, |acc, next| next.after(&acc))
    }

    /// The two sides of the canonical counit comparison:
    /// `(p^I×I)_* ν ∘ L ϖ_* ∘ ϖ^* M` against `ν (p^I×I)_*`, as cells
    /// `ϖ^* ϖ_* (p^I×I)_* ⇒ (p^I×I)_*`.
    pub fn counit_sides(&self) -> Result<(Vec<NatCell>, Vec<NatCell>)> {
        let lhs = vec![
            self.m6.whisker_right(&self.varpi_x.star)?,
            self.l6.whisker_left(&self.varpi_a.pi)?,
            self.varpi_a.nu.whisker_right(&self.p_space.pi)?,
        ];
        let rhs = vec![self.varpi_x.nu.whisker_left(&self.p_space.pi)?];
        Ok((lhs, rhs))
    }

    pub fn check_counit_iso(&self, samples: &[SliceObj]) -> Result<PastingReport> {
        let (lhs, rhs) = self.counit_sides()?;
        check_pasting(&lhs, &rhs, samples)
    }

    /// `(p^I×I)_*(δ⇒q)`.
    pub fn middle_vertical(&self, q: &SliceObj) -> Result<SliceMap> {
        pi_map(&self.p_space.map, &self.ctx.gap(q.disp()).as_slice_map(&self.ctx))
    }

    /// The section of `(p^I×I)_*(δ⇒q)` induced by a section `t` of `δ⇒q`.
    pub fn middle_section(&self, q: &SliceObj, t: &FinMap) -> Result<SliceMap> {
        let gap = self.ctx.gap(q.disp()).as_slice_map(&self.ctx);
        let tm = SliceMap::new(gap.tgt().clone(), gap.src().clone(), t.clone())?;
        pi_map(&self.p_space.map, &tm)
    }

    pub fn retract_diagram(&self, s: &FinMap, q: &SliceObj) -> Result<RetractDiagram> {
        let tau = self.tau_cell(s)?;
        let pq = self.pushforward(q)?;
        Ok(RetractDiagram {
            kappa_prime: self.kappa_prime_at(q)?.arrow().clone(),
            tau_prime: self.tau_prime_at(&tau, q)?.arrow().clone(),
            kappa: self.kappa_at(q)?.arrow().clone(),
            tau: tau.at(q)?.arrow().clone(),
            outer: self.ctx.gap(pq.disp()).gap,
            middle: self.middle_vertical(q)?.arrow().clone(),
        })
    }
}

/// The six maps of the retract diagram; the objects are their domains
/// and codomains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractDiagram {
    pub kappa_prime: FinMap,
    pub tau_prime: FinMap,
    pub kappa: FinMap,
    pub tau: FinMap,
    /// `δ⇒p_*q`, both the left and the right vertical.
    pub outer: FinMap,
    /// `(p^I×I)_*(δ⇒q)`.
    pub middle: FinMap,
}

/// Which map of a retract diagram to damage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corruption {
    Kappa,
    KappaPrime,
    Tau,
    TauPrime,
    Section,
}

impl Corruption {
    pub const ALL: [Corruption; 5] = [
        Corruption::Kappa,
        Corruption::KappaPrime,
        Corruption::Tau,
        Corruption::TauPrime,
        Corruption::Section,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Corruption::Kappa => "kappa",
            Corruption::KappaPrime => "kappa_prime",
            Corruption::Tau => "tau",
            Corruption::TauPrime => "tau_prime",
            Corruption::Section => "section",
        }
    }

    pub fn parse(s: &str) -> Option<Corruption> {
        Corruption::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Swaps the images of the first two domain elements with distinct
/// images. Returns `None` when the map is constant.
pub fn swap_images(f: &FinMap) -> Option<FinMap> {
    let imgs = f.images();
    let first = imgs.first()?;
    let j = imgs.iter().position(|y| y != first)?;
    let mut swapped = imgs.to_vec();
    swapped.swap(0, j);
    let mut it = swapped.into_iter();
    FinMap::from_fn(f.dom().clone(), f.cod().clone(), |_| Ok(it.next().expect("same length"))).ok()
}

fn agree(equation: &str, lhs: &FinMap, rhs: &FinMap) -> Result<()> {
    if lhs.dom() != rhs.dom() || lhs.cod() != rhs.cod() {
        return Err(Error::VerificationFailed {
            equation: format!("{equation} (boundaries)"),
            witness: lhs.dom().iter().next().cloned().unwrap_or(Value::Unit),
        });
    }
    match lhs.first_difference(rhs) {
        None => Ok(()),
        Some(witness) => Err(Error::VerificationFailed {
            equation: equation.to_string(),
            witness,
        }),
    }
}

fn seq(g: &FinMap, f: &FinMap, equation: &str) -> Result<FinMap> {
    compose(g, f).map_err(|_| Error::VerificationFailed {
        equation: format!("{equation} (composable)"),
        witness: f.dom().iter().next().cloned().unwrap_or(Value::Unit),
    })
}

impl RetractDiagram {
    pub fn corrupt(&mut self, which: Corruption) -> bool {
        let slot = match which {
            Corruption::Kappa => &mut self.kappa,
            Corruption::KappaPrime => &mut self.kappa_prime,
            Corruption::Tau => &mut self.tau,
            Corruption::TauPrime => &mut self.tau_prime,
            Corruption::Section => return false,
        };
        match swap_images(slot) {
            Some(f) => {
                *slot = f;
                true
            }
            None => false,
        }
    }

    /// Checks the two squares and the two retractions, reporting the first
    /// failing equation with an element where it fails.
    pub fn verify(&self) -> Result<()> {
        let top = seq(&self.tau_prime, &self.kappa_prime, "tau' . kappa' = id")?;
        agree("tau' . kappa' = id", &top, &FinMap::identity(self.kappa_prime.dom()))?;
        let bottom = seq(&self.tau, &self.kappa, "tau . kappa = id")?;
        agree("tau . kappa = id", &bottom, &FinMap::identity(self.kappa.dom()))?;
        let left_a = seq(&self.kappa, &self.outer, "left square")?;
        let left_b = seq(&self.middle, &self.kappa_prime, "left square")?;
        agree("left square", &left_a, &left_b)?;
        let right_a = seq(&self.tau, &self.middle, "right square")?;
        let right_b = seq(&self.outer, &self.tau_prime, "right square")?;
        agree("right square", &right_a, &right_b)
    }

    /// A section of the middle vertical transferred to the outer one.
    pub fn transfer(&self, middle_section: &FinMap) -> Result<FinMap> {
        compose(&self.tau_prime, &compose(middle_section, &self.kappa)?)
    }
}

pub fn kappa(p: &FinMap, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    Ok(FrobeniusCells::new(p, ctx)?.kappa_at(q)?.arrow().clone())
}

pub fn kappa_prime(p: &FinMap, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    Ok(FrobeniusCells::new(p, ctx)?.kappa_prime_at(q)?.arrow().clone())
}

pub fn tau(p_wit: &FibWitness, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    let cells = FrobeniusCells::new(p_wit.p(), ctx)?;
    Ok(cells.tau_cell(p_wit.section())?.at(q)?.arrow().clone())
}

pub fn tau_prime(p_wit: &FibWitness, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    let cells = FrobeniusCells::new(p_wit.p(), ctx)?;
    let tau = cells.tau_cell(p_wit.section())?;
    Ok(cells.tau_prime_at(&tau, q)?.arrow().clone())
}

/// Builds and verifies the retract diagram.
pub fn retract_diagram(p_wit: &FibWitness, q: &SliceObj, ctx: &IntervalCtx) -> Result<RetractDiagram> {
    let d = FrobeniusCells::new(p_wit.p(), ctx)?.retract_diagram(p_wit.section(), q)?;
    d.verify()?;
    Ok(d)
}

/// A fibration structure on `p_* q` from structures on `p` and on
/// `q: B → A`. The section is `τ' ∘ (p^I×I)_*(t) ∘ κ`.
pub fn pushforward_fibration(
    p_wit: &FibWitness,
    q_wit: &FibWitness,
    ctx: &IntervalCtx,
    cls: &TrivFibClass,
) -> Result<FibWitness> {
    pushforward_with(p_wit, q_wit, ctx, cls, None)
}

/// As [`pushforward_fibration`], optionally damaging one map first.
pub fn pushforward_with(
    p_wit: &FibWitness,
    q_wit: &FibWitness,
    ctx: &IntervalCtx,
    cls: &TrivFibClass,
    corruption: Option<Corruption>,
) -> Result<FibWitness> {
    if q_wit.p().cod() != p_wit.p().dom() {
        return Err(Error::mismatch("q must live over the domain of p"));
    }
    if !cls.contains(q_wit.gap_witness().map()) {
        return Err(Error::NotAFibration(format!(
            "the gap of q is not in the class {}",
            cls.name()
        )));
    }
    let cells = FrobeniusCells::new(p_wit.p(), ctx)?;
    let q = SliceObj::new(q_wit.p().clone());
    let mut d = cells.retract_diagram(p_wit.section(), &q)?;
    if let Some(c) = corruption {
        d.corrupt(c);
    }
    d.verify()?;
    let mid = cells.middle_section(&q, q_wit.section())?;
    let mut section = d.transfer(mid.arrow())?;
    if corruption == Some(Corruption::Section) {
        section = swap_images(&section).unwrap_or(section);
    }
    if !cls.contains(&d.outer) {
        return Err(Error::NotAFibration(format!(
            "the gap of p_*q is not in the class {}",
            cls.name()
        )));
    }
    let w = TrivFibWitness::new(d.outer.clone(), section)?;
    FibWitness::new(cells.pushforward(&q)?.disp().clone(), w, ctx)
}

/// The gap of `p_*q` agrees with the canonical pullback comparison used by
/// the diagram: its codomain is `ε_X^* p_* q`.
pub fn outer_matches_kappa(d: &RetractDiagram) -> bool {
    d.outer.cod() == d.kappa.dom() && d.middle.cod() == d.kappa.cod()
}
