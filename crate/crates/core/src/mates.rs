//! Functors, natural transformations and adjunctions between slice
//! categories, evaluated lazily one component at a time, together with the
//! mates correspondence.
//!
//! Functors act on elements as well as on objects: `F(m)(v)` is computed
//! from how `m` acts on elements, so a composite cell can be evaluated at a
//! single element without enumerating the intermediate objects it passes
//! through. Only the outermost component is materialized as a map.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::kernel::{self, FinMap, FinSet, Value};
use crate::slices::{SliceMap, SliceObj};

/// How a morphism acts on elements.
pub type ElemMap<'a> = &'a dyn Fn(&Value) -> Result<Value>;

type ObjFn = dyn Fn(&SliceObj) -> Result<SliceObj> + Send + Sync;
type ActFn = dyn Fn(ElemMap<'_>, &Value) -> Result<Value> + Send + Sync;
type CompFn = dyn Fn(&SliceObj) -> Result<SliceMap> + Send + Sync;
type PointFn = dyn Fn(&SliceObj, &Value) -> Result<Value> + Send + Sync;

/// A functor `E/src → E/tgt`. `act(f, v)` is `F(m)(v)` for any `m` acting
/// on elements by `f`.
#[derive(Clone)]
pub struct LazyFunctor {
    name: Arc<str>,
    src: FinSet,
    tgt: FinSet,
    obj: Arc<ObjFn>,
    act: Arc<ActFn>,
    memo: Arc<RwLock<HashMap<SliceObj, SliceObj>>>,
}

impl LazyFunctor {
    pub fn new(
        name: impl Into<String>,
        src: FinSet,
        tgt: FinSet,
        obj: impl Fn(&SliceObj) -> Result<SliceObj> + Send + Sync + 'static,
        act: impl Fn(ElemMap<'_>, &Value) -> Result<Value> + Send + Sync + 'static,
    ) -> LazyFunctor {
        LazyFunctor {
            name: name.into().into(),
            src,
            tgt,
            obj: Arc::new(obj),
            act: Arc::new(act),
            memo: Arc::default(),
        }
    }

    pub fn identity(base: &FinSet) -> LazyFunctor {
        LazyFunctor::new("Id", base.clone(), base.clone(), |x| Ok(x.clone()), |f, v| f(v))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn src(&self) -> &FinSet {
        &self.src
    }

    pub fn tgt(&self) -> &FinSet {
        &self.tgt
    }

    pub fn obj(&self, x: &SliceObj) -> Result<SliceObj> {
        if x.base() != &self.src {
            return Err(Error::mismatch(format!(
                "functor {} applied to an object over {}",
                self.name,
                x.base()
            )));
        }
        if let Some(hit) = self.memo.read().expect("memo lock").get(x) {
            return Ok(hit.clone());
        }
        let fx = (self.obj)(x)?;
        self.memo
            .write()
            .expect("memo lock")
            .insert(x.clone(), fx.clone());
        Ok(fx)
    }

    /// `F(m)(v)` where `m` acts on elements by `f`.
    pub fn act(&self, f: ElemMap<'_>, v: &Value) -> Result<Value> {
        (self.act)(f, v)
    }

    pub fn map(&self, m: &SliceMap) -> Result<SliceMap> {
        if m.base() != &self.src {
            return Err(Error::mismatch(format!(
                "functor {} applied to a map over {}",
                self.name,
                m.base()
            )));
        }
        let f = |v: &Value| m.arrow().apply(v).cloned();
        SliceMap::from_fn(self.obj(m.src())?, self.obj(m.tgt())?, |v| self.act(&f, v))
    }

    /// `self` followed by `g`, i.e. `g ∘ self`.
    pub fn then(&self, g: &LazyFunctor) -> Result<LazyFunctor> {
        if self.tgt != g.src {
            return Err(Error::mismatch(format!(
                "functors {} and {} do not compose",
                self.name, g.name
            )));
        }
        let (f1, g1) = (self.clone(), g.clone());
        let (f2, g2) = (self.clone(), g.clone());
        Ok(LazyFunctor::new(
            format!("{}{}", g.name, self.name),
            self.src.clone(),
            g.tgt.clone(),
            move |x| g1.obj(&f1.obj(x)?),
            move |f, v| g2.act(&|w| f2.act(f, w), v),
        ))
    }
}

/// `g ∘ f`.
pub fn compose_functors(g: &LazyFunctor, f: &LazyFunctor) -> Result<LazyFunctor> {
    f.then(g)
}

impl fmt::Debug for LazyFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: E/{} -> E/{}", self.name, self.src, self.tgt)
    }
}

#[derive(Clone)]
enum Components {
    /// Whole components, built one object at a time.
    Whole(Arc<CompFn>),
    /// Components given element by element.
    Pointwise(Arc<PointFn>),
}

/// A natural transformation `src ⇒ tgt`, memoized per object.
#[derive(Clone)]
pub struct NatCell {
    name: Arc<str>,
    src: LazyFunctor,
    tgt: LazyFunctor,
    comp: Components,
    memo: Arc<RwLock<HashMap<SliceObj, SliceMap>>>,
}

fn check_parallel(src: &LazyFunctor, tgt: &LazyFunctor) -> Result<()> {
    if src.src != tgt.src || src.tgt != tgt.tgt {
        return Err(Error::mismatch(format!(
            "cell between functors {} and {} with different boundaries",
            src.name, tgt.name
        )));
    }
    Ok(())
}

impl NatCell {
    pub fn new(
        name: impl Into<String>,
        src: LazyFunctor,
        tgt: LazyFunctor,
        comp: impl Fn(&SliceObj) -> Result<SliceMap> + Send + Sync + 'static,
    ) -> Result<NatCell> {
        check_parallel(&src, &tgt)?;
        Ok(NatCell {
            name: name.into().into(),
            src,
            tgt,
            comp: Components::Whole(Arc::new(comp)),
            memo: Arc::default(),
        })
    }

    /// A cell given by its value at each element `v` of `src(x)`.
    pub fn pointwise(
        name: impl Into<String>,
        src: LazyFunctor,
        tgt: LazyFunctor,
        elem: impl Fn(&SliceObj, &Value) -> Result<Value> + Send + Sync + 'static,
    ) -> Result<NatCell> {
        check_parallel(&src, &tgt)?;
        Ok(NatCell {
            name: name.into().into(),
            src,
            tgt,
            comp: Components::Pointwise(Arc::new(elem)),
            memo: Arc::default(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn src(&self) -> &LazyFunctor {
        &self.src
    }

    pub fn tgt(&self) -> &LazyFunctor {
        &self.tgt
    }

    pub fn renamed(&self, name: impl Into<String>) -> NatCell {
        NatCell {
            name: name.into().into(),
            ..self.clone()
        }
    }

    /// The component at `x`, checked to run from `src(x)` to `tgt(x)`.
    pub fn at(&self, x: &SliceObj) -> Result<SliceMap> {
        if let Some(hit) = self.memo.read().expect("memo lock").get(x) {
            return Ok(hit.clone());
        }
        let (fx, gx) = (self.src.obj(x)?, self.tgt.obj(x)?);
        let c = match &self.comp {
            Components::Whole(comp) => comp(x)?,
            Components::Pointwise(elem) => SliceMap::from_fn(fx.clone(), gx.clone(), |v| elem(x, v))?,
        };
        if c.src() != &fx || c.tgt() != &gx {
            return Err(Error::mismatch(format!(
                "component of {} at {:?} has the wrong endpoints",
                self.name, x
            )));
        }
        self.memo
            .write()
            .expect("memo lock")
            .insert(x.clone(), c.clone());
        Ok(c)
    }

    /// The component at `x` applied to one element of `src(x)`.
    pub fn elem(&self, x: &SliceObj, v: &Value) -> Result<Value> {
        if let Some(hit) = self.memo.read().expect("memo lock").get(x) {
            return hit.arrow().apply(v).cloned();
        }
        match &self.comp {
            Components::Whole(_) => self.at(x)?.arrow().apply(v).cloned(),
            Components::Pointwise(elem) => elem(x, v),
        }
    }

    pub fn identity(f: &LazyFunctor) -> NatCell {
        NatCell::pointwise(format!("id_{}", f.name), f.clone(), f.clone(), |_, v| Ok(v.clone()))
            .expect("identity cell has matching boundaries")
    }

    /// The identity cell witnessing `f = g`, checked objectwise.
    pub fn identity_between(f: &LazyFunctor, g: &LazyFunctor) -> Result<NatCell> {
        let (f1, g1) = (f.clone(), g.clone());
        let checked: Arc<RwLock<HashSet<SliceObj>>> = Arc::default();
        NatCell::pointwise(
            format!("{}={}", f.name, g.name),
            f.clone(),
            g.clone(),
            move |x, v| {
                if !checked.read().expect("check lock").contains(x) {
                    if f1.obj(x)? != g1.obj(x)? {
                        return Err(Error::mismatch(format!(
                            "{} and {} disagree at {:?}",
                            f1.name, g1.name, x
                        )));
                    }
                    checked.write().expect("check lock").insert(x.clone());
                }
                Ok(v.clone())
            },
        )
    }

    /// Vertical composite `self ∘ first`.
    pub fn after(&self, first: &NatCell) -> Result<NatCell> {
        let (a, b) = (first.clone(), self.clone());
        NatCell::pointwise(
            format!("{}.{}", self.name, first.name),
            first.src.clone(),
            self.tgt.clone(),
            move |x, v| b.elem(x, &a.elem(x, v)?),
        )
    }

    /// `self H`, the component at `x` being `self_{H x}`.
    pub fn whisker_left(&self, h: &LazyFunctor) -> Result<NatCell> {
        let (a, h1) = (self.clone(), h.clone());
        NatCell::pointwise(
            format!("{}{}", self.name, h.name),
            h.then(&self.src)?,
            h.then(&self.tgt)?,
            move |x, v| a.elem(&h1.obj(x)?, v),
        )
    }

    /// `K self`, the component at `x` being `K(self_x)`.
    pub fn whisker_right(&self, k: &LazyFunctor) -> Result<NatCell> {
        let (a, k1) = (self.clone(), k.clone());
        NatCell::pointwise(
            format!("{}{}", k.name, self.name),
            self.src.then(k)?,
            self.tgt.then(k)?,
            move |x, v| k1.act(&|w| a.elem(x, w), v),
        )
    }

    /// Componentwise inverse; fails at the first non-bijective component.
    pub fn inverse(&self) -> NatCell {
        let a = self.clone();
        NatCell::new(
            format!("{}^-1", self.name),
            self.tgt.clone(),
            self.src.clone(),
            move |x| a.at(x)?.inverse(),
        )
        .expect("inverse keeps boundaries")
    }

    /// The first sampled object at which the component is not bijective.
    pub fn non_bijective_at(&self, samples: &[SliceObj]) -> Result<Option<SliceObj>> {
        for x in samples {
            if !self.at(x)?.arrow().is_bijective() {
                return Ok(Some(x.clone()));
            }
        }
        Ok(None)
    }

    /// The first sampled map whose naturality square fails.
    pub fn naturality_failure(&self, maps: &[SliceMap]) -> Result<Option<SliceMap>> {
        for m in maps {
            let lhs = self.tgt.map(m)?.after(&self.at(m.src())?)?;
            let rhs = self.at(m.tgt())?.after(&self.src.map(m)?)?;
            if lhs != rhs {
                return Ok(Some(m.clone()));
            }
        }
        Ok(None)
    }
}

impl fmt::Debug for NatCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.name, self.src.name, self.tgt.name)
    }
}

/// `left ⊣ right` with unit `id ⇒ right left` and counit `left right ⇒ id`.
#[derive(Clone, Debug)]
pub struct Adjunction {
    pub left: LazyFunctor,
    pub right: LazyFunctor,
    pub unit: NatCell,
    pub counit: NatCell,
}

impl Adjunction {
    pub fn new(left: LazyFunctor, right: LazyFunctor, unit: NatCell, counit: NatCell) -> Result<Self> {
        if left.src != right.tgt || left.tgt != right.src {
            return Err(Error::mismatch(format!(
                "{} and {} are not opposed",
                left.name, right.name
            )));
        }
        Ok(Adjunction {
            left,
            right,
            unit,
            counit,
        })
    }

    /// The identity adjunction on `E/base`.
    pub fn identity(base: &FinSet) -> Adjunction {
        let id = LazyFunctor::identity(base);
        let cell = NatCell::identity(&id);
        Adjunction::new(id.clone(), id, cell.clone(), cell).expect("identity is self-opposed")
    }

    /// `ε F ∘ F η = id` at each sample over the source of the left adjoint.
    pub fn left_triangle_failure(&self, samples: &[SliceObj]) -> Result<Option<SliceObj>> {
        for c in samples {
            let f_eta = self.left.map(&self.unit.at(c)?)?;
            let eps_f = self.counit.at(&self.left.obj(c)?)?;
            if !eps_f.after(&f_eta)?.arrow().is_identity() {
                return Ok(Some(c.clone()));
            }
        }
        Ok(None)
    }

    /// `U ε ∘ η U = id` at each sample over the source of the right adjoint.
    pub fn right_triangle_failure(&self, samples: &[SliceObj]) -> Result<Option<SliceObj>> {
        for d in samples {
            let eta_u = self.unit.at(&self.right.obj(d)?)?;
            let u_eps = self.right.map(&self.counit.at(d)?)?;
            if !u_eps.after(&eta_u)?.arrow().is_identity() {
                return Ok(Some(d.clone()));
            }
        }
        Ok(None)
    }
}

/// `F2 F1 ⊣ U1 U2` from `F1 ⊣ U1` and `F2 ⊣ U2`.
pub fn compose_adj(first: &Adjunction, second: &Adjunction) -> Result<Adjunction> {
    let left = first.left.then(&second.left)?;
    let right = second.right.then(&first.right)?;
    // U1 η2 F1 ∘ η1
    let unit = first
        .unit
        .then_cell(&second.unit.whisker_left(&first.left)?.whisker_right(&first.right)?)?;
    // ε2 ∘ F2 ε1 U2
    let counit = first
        .counit
        .whisker_left(&second.right)?
        .whisker_right(&second.left)?
        .then_cell(&second.counit)?;
    let unit = NatCell::pointwise(
        format!("η[{}]", left.name),
        LazyFunctor::identity(left.src()),
        left.then(&right)?,
        move |x, v| unit.elem(x, v),
    )?;
    let counit = NatCell::pointwise(
        format!("ε[{}]", left.name),
        right.then(&left)?,
        LazyFunctor::identity(left.tgt()),
        move |x, v| counit.elem(x, v),
    )?;
    Adjunction::new(left, right, unit, counit)
}

impl NatCell {
    /// `next ∘ self`.
    pub fn then_cell(&self, next: &NatCell) -> Result<NatCell> {
        next.after(self)
    }

    /// Relabels the boundary functors, keeping the components.
    pub fn retyped(&self, src: &LazyFunctor, tgt: &LazyFunctor) -> Result<NatCell> {
        let a = self.clone();
        NatCell::pointwise(self.name.to_string(), src.clone(), tgt.clone(), move |x, v| {
            a.elem(x, v)
        })
    }
}

/// The mate `HU ⇒ RK` of `alpha: LH ⇒ KF` for `F ⊣ U` and `L ⊣ R`:
/// `R K ε ∘ R α U ∘ ι H U`.
pub fn mate(
    alpha: &NatCell,
    f_adj: &Adjunction,
    l_adj: &Adjunction,
    h: &LazyFunctor,
    k: &LazyFunctor,
) -> Result<NatCell> {
    let (u, r) = (&f_adj.right, &l_adj.right);
    let src = u.then(h)?;
    let tgt = k.then(r)?;
    let (alpha1, f_adj1, l_adj1, h1, k1) = (
        alpha.clone(),
        f_adj.clone(),
        l_adj.clone(),
        h.clone(),
        k.clone(),
    );
    NatCell::pointwise(
        format!("mate({})", alpha.name),
        src,
        tgt,
        move |d, v| {
            let ud = f_adj1.right.obj(d)?;
            let r = &l_adj1.right;
            let w = l_adj1.unit.elem(&h1.obj(&ud)?, v)?;
            let w = r.act(&|e| alpha1.elem(&ud, e), &w)?;
            r.act(&|e| k1.act(&|e2| f_adj1.counit.elem(d, e2), e), &w)
        },
    )
}

/// The inverse correspondence `LH ⇒ KF` from `beta: HU ⇒ RK`:
/// `ν K F ∘ L β F ∘ L H η`.
pub fn inverse_mate(
    beta: &NatCell,
    f_adj: &Adjunction,
    l_adj: &Adjunction,
    h: &LazyFunctor,
    k: &LazyFunctor,
) -> Result<NatCell> {
    let src = h.then(&l_adj.left)?;
    let tgt = f_adj.left.then(k)?;
    let (beta1, f_adj1, l_adj1, h1, k1) = (
        beta.clone(),
        f_adj.clone(),
        l_adj.clone(),
        h.clone(),
        k.clone(),
    );
    NatCell::pointwise(
        format!("imate({})", beta.name),
        src,
        tgt,
        move |c, v| {
            let fc = f_adj1.left.obj(c)?;
            let l = &l_adj1.left;
            let w = l.act(&|e| h1.act(&|e2| f_adj1.unit.elem(c, e2), e), v)?;
            let w = l.act(&|e| beta1.elem(&fc, e), &w)?;
            l_adj1.counit.elem(&k1.obj(&fc)?, &w)
        },
    )
}

/// The conjugate `U ⇒ R` of `alpha: L ⇒ F`, the mate with identity
/// horizontal functors.
pub fn conjugate(alpha: &NatCell, f_adj: &Adjunction, l_adj: &Adjunction) -> Result<NatCell> {
    let c = LazyFunctor::identity(f_adj.left.src());
    let d = LazyFunctor::identity(f_adj.left.tgt());
    let m = mate(alpha, f_adj, l_adj, &c, &d)?;
    m.renamed(format!("conj({})", alpha.name))
        .retyped(&f_adj.right, &l_adj.right)
}

/// Outcome of comparing two sequential composites of cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PastingReport {
    pub checked: usize,
    pub witness: Option<SliceObj>,
}

impl PastingReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn chain_at(cells: &[NatCell], x: &SliceObj) -> Result<SliceMap> {
    let (first, rest) = cells
        .split_first()
        .ok_or_else(|| Error::mismatch("empty composition recipe"))?;
    let mut acc = first.at(x)?;
    for c in rest {
        acc = c.at(x)?.after(&acc)?;
    }
    Ok(acc)
}

/// Compares the composites of `lhs` and `rhs`, each applied first to last,
/// on every sample. A boundary mismatch in either recipe is an error.
pub fn check_pasting(lhs: &[NatCell], rhs: &[NatCell], samples: &[SliceObj]) -> Result<PastingReport> {
    let mut checked = 0;
    for x in samples {
        let (l, r) = (chain_at(lhs, x)?, chain_at(rhs, x)?);
        checked += 1;
        if l != r {
            return Ok(PastingReport {
                checked,
                witness: Some(x.clone()),
            });
        }
    }
    Ok(PastingReport {
        checked,
        witness: None,
    })
}

/// Every slice object over `base` whose carrier is `{s0, .., s(n-1)}` for
/// some `n ≤ bound`.
pub fn sample_objects(base: &FinSet, bound: usize) -> Vec<SliceObj> {
    (0..=bound)
        .flat_map(|n| kernel::all_maps(&FinSet::atoms("s", n), base))
        .map(SliceObj::new)
        .collect()
}

/// Slice maps between sampled objects, at most `limit` of them.
pub fn sample_maps(objects: &[SliceObj], limit: usize) -> Vec<SliceMap> {
    let mut out = Vec::new();
    for x in objects {
        for y in objects {
            for arrow in kernel::all_maps(x.carrier(), y.carrier()) {
                if out.len() >= limit {
                    return out;
                }
                if let Ok(m) = SliceMap::new(x.clone(), y.clone(), arrow) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// A plain map `FinMap` viewed as a slice map over the terminal object.
pub fn over_terminal(f: &FinMap) -> SliceMap {
    SliceMap::new(
        SliceObj::over_terminal(f.dom()),
        SliceObj::over_terminal(f.cod()),
        f.clone(),
    )
    .expect("every map commutes over the terminal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{mk_map, Value};
    use crate::slices::AdjointTriple;

    fn a(n: &str) -> Value {
        Value::atom(n)
    }

    /// `a0, a1 ↦ x0` and `a2 ↦ x1`.
    fn folding() -> FinMap {
        mk_map(
            FinSet::atoms("a", 3),
            FinSet::atoms("x", 2),
            &[(a("a0"), a("x0")), (a("a1"), a("x0")), (a("a2"), a("x1"))],
        )
        .unwrap()
    }

    fn same_components(lhs: &NatCell, rhs: &NatCell, samples: &[SliceObj]) {
        for x in samples {
            assert_eq!(lhs.at(x).unwrap(), rhs.at(x).unwrap(), "at {x:?}");
        }
    }

    #[test]
    fn triangle_identities_hold() {
        let t = AdjointTriple::of(&folding());
        let over_a = sample_objects(t.map.dom(), 2);
        let over_x = sample_objects(t.map.cod(), 2);
        for adj in [t.sigma_adj(), t.pi_adj()] {
            let (c, d) = if adj.left.src() == t.map.dom() {
                (&over_a, &over_x)
            } else {
                (&over_x, &over_a)
            };
            assert_eq!(adj.left_triangle_failure(c).unwrap(), None);
            assert_eq!(adj.right_triangle_failure(d).unwrap(), None);
        }
    }

    #[test]
    fn units_and_counits_are_mates_of_identities() {
        let t = AdjointTriple::of(&folding());
        let (sa, sx) = (t.map.dom().clone(), t.map.cod().clone());
        let adj = t.sigma_adj();
        let id_f = NatCell::identity(&adj.left);
        let unit = mate(
            &id_f,
            &Adjunction::identity(&sa),
            &adj,
            &LazyFunctor::identity(&sa),
            &adj.left,
        )
        .unwrap();
        let counit = mate(
            &id_f,
            &adj,
            &Adjunction::identity(&sx),
            &adj.left,
            &LazyFunctor::identity(&sx),
        )
        .unwrap();
        same_components(&unit, &adj.unit, &sample_objects(&sa, 2));
        same_components(&counit, &adj.counit, &sample_objects(&sx, 2));
    }

    #[test]
    fn mate_round_trip() {
        let t = AdjointTriple::of(&folding());
        let adj = t.sigma_adj();
        let sa = t.map.dom().clone();
        let (h, k) = (LazyFunctor::identity(&sa), adj.left.clone());
        let alpha = NatCell::identity(&adj.left);
        let beta = mate(&alpha, &Adjunction::identity(&sa), &adj, &h, &k).unwrap();
        let back = inverse_mate(&beta, &Adjunction::identity(&sa), &adj, &h, &k).unwrap();
        same_components(&back, &alpha, &sample_objects(&sa, 2));
    }

    #[test]
    fn conjugate_of_mu_is_eta_and_iota_gives_nu() {
        let t = AdjointTriple::of(&folding());
        let (sa, sx) = (t.map.dom().clone(), t.map.cod().clone());
        let lu = compose_adj(&t.pi_adj(), &t.sigma_adj()).unwrap();
        let eta = conjugate(&t.mu, &Adjunction::identity(&sx), &lu).unwrap();
        same_components(&eta, &t.eta, &sample_objects(&sx, 2));
        let ul = compose_adj(&t.sigma_adj(), &t.pi_adj()).unwrap();
        let nu = conjugate(&t.iota, &ul, &Adjunction::identity(&sa)).unwrap();
        same_components(&nu, &t.nu, &sample_objects(&sa, 2));
    }

    #[test]
    fn conjugate_of_identity_is_identity() {
        let t = AdjointTriple::of(&folding());
        let id = NatCell::identity(&t.shriek);
        let c = conjugate(&id, &t.sigma_adj(), &t.sigma_adj()).unwrap();
        for x in sample_objects(t.map.cod(), 2) {
            assert!(c.at(&x).unwrap().arrow().is_identity());
        }
    }

    #[test]
    fn a_unit_that_is_not_invertible() {
        let t = AdjointTriple::of(&folding());
        let samples = sample_objects(t.map.dom(), 1);
        assert!(t.iota.non_bijective_at(&samples).unwrap().is_some());
    }

    #[test]
    fn counit_in_the_wrong_position_is_caught() {
        let t = AdjointTriple::of(&folding());
        let c = t.star.then(&t.shriek).unwrap();
        let inner = t.mu.whisker_right(&c).unwrap();
        let outer = t.mu.whisker_left(&c).unwrap();
        let samples = sample_objects(t.map.cod(), 1);
        let one = std::slice::from_ref(&inner);
        let report = check_pasting(one, one, &samples).unwrap();
        assert!(report.passed());
        let report = check_pasting(
            &[t.mu.whisker_right(&c).unwrap()],
            &[outer],
            &samples,
        )
        .unwrap();
        assert!(!report.passed());
        assert!(report.witness.is_some());
    }

    #[test]
    fn cells_are_natural() {
        let t = AdjointTriple::of(&folding());
        let objs = sample_objects(t.map.cod(), 2);
        let maps = sample_maps(&objs, 200);
        for cell in [&t.mu, &t.eta] {
            assert_eq!(cell.naturality_failure(&maps).unwrap(), None);
        }
        let objs = sample_objects(t.map.dom(), 2);
        let maps = sample_maps(&objs, 200);
        for cell in [&t.iota, &t.nu] {
            assert_eq!(cell.naturality_failure(&maps).unwrap(), None);
        }
    }

    #[test]
    fn identity_between_detects_disagreement() {
        let t = AdjointTriple::of(&folding());
        let id = LazyFunctor::identity(t.map.dom());
        let cell = NatCell::identity_between(&id, &t.shriek.then(&t.star).unwrap()).unwrap();
        let x = SliceObj::terminal(t.map.dom());
        assert!(matches!(cell.at(&x), Err(Error::BoundaryMismatch(_))));
    }
}
