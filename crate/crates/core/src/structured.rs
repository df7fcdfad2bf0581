//! Structured trivial fibrations and fibrations, with the functorial
//! Frobenius operator and its stability under substitution.
//!
//! A structure is a chosen section. Structures pull back along pullback
//! squares by unique lifting, which makes the assignment a discrete
//! fibration over the category of pullback squares.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fibrations::{FibWitness, RetractData, TrivFibClass, TrivFibWitness};
use crate::frobenius::FrobeniusCells;
use crate::interval::IntervalCtx;
use crate::kernel::{self, compose, FinMap, Value};
use crate::slices::{pi, pi_map, SliceMap, SliceObj};

/// A commuting square
///
/// ```text
///   P --top--> E
///   |          |
///  left      right
///   v          v
///   Z -bottom> X
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub top: FinMap,
    pub left: FinMap,
    pub bottom: FinMap,
    pub right: FinMap,
}

impl Square {
    /// The kernel pullback of `right` along `bottom`.
    pub fn canonical(bottom: &FinMap, right: &FinMap) -> Result<Square> {
        let pb = kernel::pullback(bottom, right)?;
        Ok(Square {
            top: pb.pr2,
            left: pb.pr1,
            bottom: bottom.clone(),
            right: right.clone(),
        })
    }

    pub fn identity(f: &FinMap) -> Square {
        Square {
            top: FinMap::identity(f.dom()),
            left: f.clone(),
            bottom: FinMap::identity(f.cod()),
            right: f.clone(),
        }
    }

    /// `self` stacked on top of `below`, where `below.right = self.left`.
    pub fn paste(&self, below: &Square) -> Result<Square> {
        if below.right != self.left {
            return Err(Error::mismatch("pasted squares do not share an edge"));
        }
        Ok(Square {
            top: compose(&self.top, &below.top)?,
            left: below.left.clone(),
            bottom: compose(&self.bottom, &below.bottom)?,
            right: self.right.clone(),
        })
    }

    /// The unique lift of every compatible pair `(z, y)`, failing at the
    /// first pair with none or several.
    fn lifts(&self) -> Result<HashMap<(&Value, &Value), &Value>> {
        let a = compose(&self.right, &self.top)?;
        let b = compose(&self.bottom, &self.left)?;
        if let Some(w) = a.first_difference(&b) {
            return Err(Error::NotAPullback { witness: w });
        }
        let mut out = HashMap::new();
        for (e, z) in self.left.graph() {
            let y = self.top.apply(e)?;
            if out.insert((z, y), e).is_some() {
                return Err(Error::NotAPullback {
                    witness: Value::pair(z.clone(), y.clone()),
                });
            }
        }
        for z in self.left.cod().iter() {
            let x = self.bottom.apply(z)?;
            for (y, ry) in self.right.graph() {
                if ry == x && !out.contains_key(&(z, y)) {
                    return Err(Error::NotAPullback {
                        witness: Value::pair(z.clone(), y.clone()),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Commutes, and every compatible pair lifts uniquely.
    pub fn check_pullback(&self) -> Result<()> {
        self.lifts().map(|_| ())
    }
}

/// The section of a trivial fibration structure.
pub fn tf1_section(w: &TrivFibWitness) -> FinMap {
    w.section().clone()
}

/// The structure on `square.left` induced by one on `square.right`:
/// `z ↦` the unique lift of `(z, s(bottom z))`.
pub fn tf1_pullback(square: &Square, w: &TrivFibWitness) -> Result<TrivFibWitness> {
    if &square.right != w.map() {
        return Err(Error::mismatch("square does not end in the structured map"));
    }
    let lifts = square.lifts()?;
    let s = w.section();
    let section = FinMap::from_fn(square.left.cod().clone(), square.left.dom().clone(), |z| {
        let y = s.apply(square.bottom.apply(z)?)?;
        Ok(lifts[&(z, y)].clone())
    })?;
    TrivFibWitness::new(square.left.clone(), section)
}

/// Structures chosen by a class, acted on by pullback squares.
#[derive(Clone, Debug)]
pub struct StructAssignment {
    class: TrivFibClass,
}

impl StructAssignment {
    pub fn new(class: TrivFibClass) -> StructAssignment {
        StructAssignment { class }
    }

    pub fn class(&self) -> &TrivFibClass {
        &self.class
    }

    pub fn assign(&self, f: &FinMap) -> Option<TrivFibWitness> {
        self.class.witness(f)
    }

    pub fn act(&self, square: &Square, w: &TrivFibWitness) -> Result<TrivFibWitness> {
        tf1_pullback(square, w)
    }
}

/// Where a fibration structure came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Assigned(&'static str),
    PulledBack(Box<Provenance>),
    Pushforward(Box<Provenance>, Box<Provenance>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Assigned(c) => write!(f, "assigned({c})"),
            Provenance::PulledBack(p) => write!(f, "pullback({p})"),
            Provenance::Pushforward(p, q) => write!(f, "frobenius({p}, {q})"),
        }
    }
}

/// A map with a trivial fibration structure on its gap map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructFib {
    p: FinMap,
    gap_structure: TrivFibWitness,
    provenance: Provenance,
}

impl StructFib {
    pub fn assign(p: &FinMap, ctx: &IntervalCtx, a: &StructAssignment) -> Option<StructFib> {
        let w = a.assign(&ctx.gap(p).gap)?;
        Some(StructFib {
            p: p.clone(),
            gap_structure: w,
            provenance: Provenance::Assigned(a.class().name()),
        })
    }

    pub fn from_witness(w: &FibWitness, provenance: Provenance) -> StructFib {
        StructFib {
            p: w.p().clone(),
            gap_structure: w.gap_witness().clone(),
            provenance,
        }
    }

    pub fn p(&self) -> &FinMap {
        &self.p
    }

    pub fn gap_structure(&self) -> &TrivFibWitness {
        &self.gap_structure
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn witness(&self, ctx: &IntervalCtx) -> Result<FibWitness> {
        FibWitness::new(self.p.clone(), self.gap_structure.clone(), ctx)
    }

    /// The structure on `square.left` for a pullback square ending in `p`,
    /// pulled back through the induced square of gap maps.
    pub fn pull_back_along(&self, square: &Square, ctx: &IntervalCtx) -> Result<StructFib> {
        if square.right != self.p {
            return Err(Error::mismatch("square does not end in the structured map"));
        }
        square.check_pullback()?;
        let small = ctx.gap(&square.left);
        let big = ctx.gap(&self.p);
        let on_paths = ctx.path_space_map(&square.bottom);
        let bottom = FinMap::from_fn(small.a_eps.clone(), big.a_eps.clone(), |e| {
            Ok(Value::pair(
                on_paths.apply(e.fst()?)?.clone(),
                square.top.apply(e.snd()?)?.clone(),
            ))
        })?;
        let gaps = Square {
            top: ctx.path_space_map(&square.top),
            left: small.gap,
            bottom,
            right: big.gap,
        };
        Ok(StructFib {
            p: square.left.clone(),
            gap_structure: tf1_pullback(&gaps, &self.gap_structure)?,
            provenance: Provenance::PulledBack(Box::new(self.provenance.clone())),
        })
    }

    /// The structure on the kernel pullback of `p` along `f`.
    pub fn pull_back(&self, f: &FinMap, ctx: &IntervalCtx) -> Result<StructFib> {
        self.pull_back_along(&Square::canonical(f, &self.p)?, ctx)
    }
}

/// The structure on `p_* r` for a structured `r` over `A`: the section is
/// `p_*` of the section.
pub fn tf2_pushforward(p: &FinMap, r: &SliceMap, r_wit: &TrivFibWitness) -> Result<TrivFibWitness> {
    if r.arrow() != r_wit.map() {
        return Err(Error::mismatch("witness is not on the given slice map"));
    }
    if r.base() != p.dom() {
        return Err(Error::mismatch("slice map is not over the domain of p"));
    }
    let s = SliceMap::new(r.tgt().clone(), r.src().clone(), r_wit.section().clone())
        .map_err(|e| Error::mismatch(format!("section is not a map over the base: {e}")))?;
    TrivFibWitness::new(
        pi_map(p, r)?.arrow().clone(),
        pi_map(p, &s)?.arrow().clone(),
    )
}

/// The structure on a retract of a structured map: `v ∘ s ∘ ū`.
pub fn tf3_retract(center_wit: &TrivFibWitness, data: &RetractData) -> Result<TrivFibWitness> {
    if &data.center != center_wit.map() {
        return Err(Error::InvalidRetract("center is not the structured map".into()));
    }
    data.validate()?;
    let section = data
        .transfer(center_wit.section())
        .map_err(|e| Error::InvalidRetract(e.to_string()))?;
    TrivFibWitness::new(data.retract.clone(), section)
        .map_err(|e| Error::InvalidRetract(e.to_string()))
}

/// The structure on `p_* q`: TF2 structures the middle vertical of the
/// retract diagram, TF3 carries it to the outer one.
pub fn frobenius_operator(p_s: &StructFib, q_s: &StructFib, ctx: &IntervalCtx) -> Result<StructFib> {
    if q_s.p.cod() != p_s.p.dom() {
        return Err(Error::mismatch("q must live over the domain of p"));
    }
    let q = SliceObj::new(q_s.p.clone());
    let cells = FrobeniusCells::new(&p_s.p, ctx)?;
    let d = cells.retract_diagram(p_s.gap_structure.section(), &q)?;
    d.verify()?;
    let gap_q = ctx.gap(&q_s.p).as_slice_map(ctx);
    let middle = tf2_pushforward(&ctx.path_space_map(&p_s.p), &gap_q, &q_s.gap_structure)?;
    let outer = tf3_retract(
        &middle,
        &RetractData {
            center: d.middle,
            retract: d.outer,
            u: d.kappa_prime,
            v: d.tau_prime,
            ubar: d.kappa,
            vbar: d.tau,
        },
    )?;
    Ok(StructFib {
        p: pi(&p_s.p, &q)?.disp().clone(),
        gap_structure: outer,
        provenance: Provenance::Pushforward(
            Box::new(p_s.provenance.clone()),
            Box::new(q_s.provenance.clone()),
        ),
    })
}

/// `Π_{A'} B' → Π_A B` for `A' = f^*A` and `B' = g^*B`, sending
/// `(x', [(x', a) ⇒ ((x', a), b)])` to `(f x', [a ⇒ b])`.
pub fn pi_base_change(f: &FinMap, p: &FinMap, q: &FinMap) -> Result<FinMap> {
    let pb = kernel::pullback(f, p)?;
    let q_small = kernel::pullback(&pb.pr2, q)?.pr1;
    let small = pi(&pb.pr1, &SliceObj::new(q_small))?;
    let big = pi(p, &SliceObj::new(q.clone()))?;
    FinMap::from_fn(small.carrier().clone(), big.carrier().clone(), |e| {
        let entries = e
            .snd()?
            .entries()?
            .iter()
            .map(|(a, b)| Ok((a.snd()?.clone(), b.snd()?.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::pair(f.apply(e.fst()?)?.clone(), Value::table(entries)?))
    })
}

/// Outcome of comparing the two routes around a substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub passed: bool,
    /// First element of `(Π_{A'} B')_ε` where the sections differ.
    pub witness: Option<Value>,
    pub detail: String,
}

/// Pushes forward the pulled-back structures along `f: X' → X` and
/// compares with the pullback of the pushed-forward structure.
pub fn substitution_stability_check(
    p_s: &StructFib,
    q_s: &StructFib,
    f: &FinMap,
    ctx: &IntervalCtx,
) -> StabilityReport {
    let fail = |detail: String| StabilityReport {
        passed: false,
        witness: None,
        detail,
    };
    let run = || -> Result<(StructFib, StructFib)> {
        let upstairs = Square::canonical(f, &p_s.p)?;
        let p_small = p_s.pull_back_along(&upstairs, ctx)?;
        let q_small = q_s.pull_back(&upstairs.top, ctx)?;
        let pushed_small = frobenius_operator(&p_small, &q_small, ctx)?;
        let pushed = frobenius_operator(p_s, q_s, ctx)?;
        let square = Square {
            top: pi_base_change(f, &p_s.p, &q_s.p)?,
            left: pushed_small.p.clone(),
            bottom: f.clone(),
            right: pushed.p.clone(),
        };
        Ok((pushed_small, pushed.pull_back_along(&square, ctx)?))
    };
    match run() {
        Err(e) => fail(e.to_string()),
        Ok((direct, pulled)) => {
            let (a, b) = (direct.gap_structure.section(), pulled.gap_structure.section());
            match a.first_difference(b) {
                None if direct.gap_structure == pulled.gap_structure => StabilityReport {
                    passed: true,
                    witness: None,
                    detail: "sections agree".into(),
                },
                None => fail("structured maps differ".into()),
                Some(w) => StabilityReport {
                    passed: false,
                    witness: Some(w),
                    detail: "sections differ".into(),
                },
            }
        }
    }
}
