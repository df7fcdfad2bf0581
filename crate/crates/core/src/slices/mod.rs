//! Slice categories `E/X` and the adjoint triple `p_! ⊣ p^* ⊣ p_*`.
//!
//! Objects over `X` are maps into `X`; the three functors act by composition,
//! canonical pullback and dependent product. Dependent-product elements carry
//! their base point, `(x, [a => b, ...])`, so the display map is a literal
//! projection.

mod triple;

pub use triple::{pi_triangle_iso, RectangleIsos, 
    beck_chevalley, exp_action, pi_rectangle_iso, pi_square_cell, AdjointTriple, BeckChevalley,
    SquareCells,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{self, compose, FinMap, FinSet, Value};

/// An object `q: B → X` of the slice over `X`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceObj {
    base: FinSet,
    disp: FinMap,
}

impl SliceObj {
    pub fn new(disp: FinMap) -> SliceObj {
        SliceObj {
            base: disp.cod().clone(),
            disp,
        }
    }

    /// The terminal object `id_X`.
    pub fn terminal(base: &FinSet) -> SliceObj {
        SliceObj::new(FinMap::identity(base))
    }

    /// A plain set viewed over the terminal object.
    pub fn over_terminal(set: &FinSet) -> SliceObj {
        SliceObj::new(FinMap::bang(set))
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn disp(&self) -> &FinMap {
        &self.disp
    }

    pub fn carrier(&self) -> &FinSet {
        self.disp.dom()
    }

    /// Elements of the carrier lying over `x`, ascending.
    pub fn fiber<'a>(&'a self, x: &'a Value) -> impl Iterator<Item = &'a Value> + 'a {
        self.disp.graph().filter(move |(_, y)| *y == x).map(|(b, _)| b)
    }

    fn fibers(&self) -> Vec<Vec<Value>> {
        let mut out = vec![Vec::new(); self.base.len()];
        for (b, x) in self.disp.graph() {
            out[self.base.index_of(x).expect("display lands in base")].push(b.clone());
        }
        out
    }
}

impl fmt::Debug for SliceObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.disp, self.base)
    }
}

/// A commuting triangle `tgt.disp ∘ arrow = src.disp`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SliceMap {
    src: SliceObj,
    tgt: SliceObj,
    arrow: FinMap,
}

impl SliceMap {
    pub fn new(src: SliceObj, tgt: SliceObj, arrow: FinMap) -> Result<SliceMap> {
        if src.base != tgt.base {
            return Err(Error::mismatch("slice map between different bases"));
        }
        if arrow.dom() != src.carrier() || arrow.cod() != tgt.carrier() {
            return Err(Error::mismatch(format!(
                "arrow {:?} does not match carriers {} and {}",
                arrow,
                src.carrier(),
                tgt.carrier()
            )));
        }
        let lhs = compose(&tgt.disp, &arrow)?;
        if let Some(w) = lhs.first_difference(&src.disp) {
            return Err(Error::mismatch(format!("triangle does not commute at {w}")));
        }
        Ok(SliceMap { src, tgt, arrow })
    }

    /// Builds the arrow pointwise and validates the triangle.
    pub fn from_fn(
        src: SliceObj,
        tgt: SliceObj,
        f: impl FnMut(&Value) -> Result<Value>,
    ) -> Result<SliceMap> {
        let arrow = FinMap::from_fn(src.carrier().clone(), tgt.carrier().clone(), f)?;
        SliceMap::new(src, tgt, arrow)
    }

    pub fn identity(obj: &SliceObj) -> SliceMap {
        SliceMap {
            src: obj.clone(),
            tgt: obj.clone(),
            arrow: FinMap::identity(obj.carrier()),
        }
    }

    pub fn src(&self) -> &SliceObj {
        &self.src
    }

    pub fn tgt(&self) -> &SliceObj {
        &self.tgt
    }

    pub fn arrow(&self) -> &FinMap {
        &self.arrow
    }

    pub fn base(&self) -> &FinSet {
        &self.src.base
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &SliceMap) -> Result<SliceMap> {
        if other.tgt != self.src {
            return Err(Error::mismatch(format!(
                "slice maps do not compose: {:?} vs {:?}",
                other.tgt, self.src
            )));
        }
        Ok(SliceMap {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            arrow: compose(&self.arrow, &other.arrow)?,
        })
    }

    pub fn inverse(&self) -> Result<SliceMap> {
        Ok(SliceMap {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            arrow: self.arrow.inverse()?,
        })
    }
}

impl fmt::Debug for SliceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} : {:?} => {:?}", self.arrow, self.src, self.tgt)
    }
}

fn require_base(obj: &SliceObj, base: &FinSet, what: &str) -> Result<()> {
    if obj.base() != base {
        return Err(Error::mismatch(format!(
            "{what}: object lives over {} but {} was expected",
            obj.base(),
            base
        )));
    }
    Ok(())
}

/// `p_! q = p ∘ q`.
pub fn sigma(p: &FinMap, q: &SliceObj) -> Result<SliceObj> {
    require_base(q, p.dom(), "sigma")?;
    Ok(SliceObj::new(compose(p, q.disp())?))
}

pub fn sigma_map(p: &FinMap, m: &SliceMap) -> Result<SliceMap> {
    Ok(SliceMap {
        src: sigma(p, m.src())?,
        tgt: sigma(p, m.tgt())?,
        arrow: m.arrow.clone(),
    })
}

/// `p^* x`, carrier `{(a, z) | p(a) = x(z)}` projecting to `a`.
pub fn star(p: &FinMap, x: &SliceObj) -> Result<SliceObj> {
    require_base(x, p.cod(), "star")?;
    let pb = kernel::pullback(p, x.disp())?;
    Ok(SliceObj::new(pb.pr1))
}

pub fn star_map(p: &FinMap, m: &SliceMap) -> Result<SliceMap> {
    let src = star(p, m.src())?;
    let tgt = star(p, m.tgt())?;
    SliceMap::from_fn(src, tgt, |e| star_act(&|z| m.arrow.apply(z).cloned(), e))
}

/// `p^* m` on one element `(a, z)`.
pub fn star_act(f: &dyn Fn(&Value) -> Result<Value>, e: &Value) -> Result<Value> {
    Ok(Value::pair(e.fst()?.clone(), f(e.snd()?)?))
}

/// `p_* q`: over each `x`, the sections of `q` over the fiber `p⁻¹(x)`.
pub fn pi(p: &FinMap, q: &SliceObj) -> Result<SliceObj> {
    require_base(q, p.dom(), "pi")?;
    let q_fibers = q.fibers();
    let mut elements = Vec::new();
    for x in p.cod().iter() {
        let fiber: Vec<(usize, &Value)> = p
            .graph()
            .enumerate()
            .filter(|(_, (_, px))| *px == x)
            .map(|(k, (a, _))| (k, a))
            .collect();
        // odometer over the product of the q-fibers
        if fiber.iter().any(|(k, _)| q_fibers[*k].is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; fiber.len()];
        loop {
            let entries = fiber
                .iter()
                .zip(idx.iter())
                .map(|((k, a), &j)| ((*a).clone(), q_fibers[*k][j].clone()))
                .collect();
            elements.push(Value::pair(x.clone(), Value::table_sorted(entries)));
            let mut pos = fiber.len();
            let done = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < q_fibers[fiber[pos].0].len() {
                    break false;
                }
                idx[pos] = 0;
            };
            if done {
                break;
            }
        }
    }
    let carrier = FinSet::new(elements);
    let disp = FinMap::from_fn(carrier, p.cod().clone(), |e| e.fst().cloned())?;
    Ok(SliceObj::new(disp))
}

/// `p_* m`: post-composes every section with `m`.
pub fn pi_map(p: &FinMap, m: &SliceMap) -> Result<SliceMap> {
    let src = pi(p, m.src())?;
    let tgt = pi(p, m.tgt())?;
    SliceMap::from_fn(src, tgt, |e| pi_act(&|b| m.arrow.apply(b).cloned(), e))
}

/// `p_* m` on one element `(x, t)`.
pub fn pi_act(f: &dyn Fn(&Value) -> Result<Value>, e: &Value) -> Result<Value> {
    let entries = e
        .snd()?
        .entries()?
        .iter()
        .map(|(a, b)| Ok((a.clone(), f(b)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Value::pair(e.fst()?.clone(), Value::table_sorted(entries)))
}

/// The four unit/counit transformations of `p_! ⊣ p^* ⊣ p_*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// `id ⇒ p^* p_!`
    Iota,
    /// `p_! p^* ⇒ id`
    Mu,
    /// `id ⇒ p_* p^*`
    Eta,
    /// `p^* p_* ⇒ id`
    Nu,
}

impl CellKind {
    fn name(self) -> &'static str {
        match self {
            CellKind::Iota => "iota",
            CellKind::Mu => "mu",
            CellKind::Eta => "eta",
            CellKind::Nu => "nu",
        }
    }
}

/// The component of a unit or counit of the adjoint triple of `p` at `at`.
pub fn adjunction_cell(kind: CellKind, p: &FinMap, at: &SliceObj) -> Result<SliceMap> {
    let expected = match kind {
        CellKind::Iota | CellKind::Nu => p.dom(),
        CellKind::Mu | CellKind::Eta => p.cod(),
    };
    if at.base() != expected {
        return Err(Error::KindError { kind: kind.name() });
    }
    let (src, tgt) = match kind {
        CellKind::Iota => (at.clone(), star(p, &sigma(p, at)?)?),
        CellKind::Mu => (sigma(p, &star(p, at)?)?, at.clone()),
        CellKind::Eta => (at.clone(), pi(p, &star(p, at)?)?),
        CellKind::Nu => (star(p, &pi(p, at)?)?, at.clone()),
    };
    SliceMap::from_fn(src, tgt, |v| cell_elem(kind, p, at, v))
}

/// One element of the component at `at`: `b ↦ (q(b), b)`, `(a, z) ↦ z`,
/// `z ↦ (x(z), [a => (a, z)])` and `(a, (x, t)) ↦ t(a)` respectively.
pub fn cell_elem(kind: CellKind, p: &FinMap, at: &SliceObj, v: &Value) -> Result<Value> {
    match kind {
        CellKind::Iota => Ok(Value::pair(at.disp().apply(v)?.clone(), v.clone())),
        CellKind::Mu => v.snd().cloned(),
        CellKind::Eta => {
            let x = at.disp().apply(v)?;
            let entries = p
                .graph()
                .filter(|(_, px)| *px == x)
                .map(|(a, _)| (a.clone(), Value::pair(a.clone(), v.clone())))
                .collect();
            Ok(Value::pair(x.clone(), Value::table_sorted(entries)))
        }
        CellKind::Nu => v.snd()?.snd()?.lookup(v.fst()?).cloned(),
    }
}

/// The graph of a map as a table.
pub fn table_of(f: &FinMap) -> Value {
    Value::table_sorted(f.graph().map(|(x, y)| (x.clone(), y.clone())).collect())
}

/// The plain exponential `A^I`, elements tables `I → A`.
pub fn exponential(i_obj: &FinSet, a_obj: &FinSet) -> FinSet {
    FinSet::new(kernel::all_maps(i_obj, a_obj).iter().map(table_of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::mk_map;

    fn a(n: &str) -> Value {
        Value::atom(n)
    }

    fn obj(dom: &FinSet, cod: &FinSet, imgs: &[&str]) -> SliceObj {
        let pairs: Vec<_> = dom.iter().cloned().zip(imgs.iter().map(|s| a(s))).collect();
        SliceObj::new(mk_map(dom.clone(), cod.clone(), &pairs).unwrap())
    }

    #[test]
    fn sigma_examples() {
        let sa = FinSet::atoms("a", 2);
        let q = obj(&FinSet::atoms("b", 3), &sa, &["a0", "a0", "a1"]);
        assert_eq!(sigma(&FinMap::identity(&sa), &q).unwrap(), q);
        let over1 = sigma(&FinMap::bang(&sa), &q).unwrap();
        assert_eq!(over1.carrier(), q.carrier());
        assert_eq!(over1.base(), &FinSet::terminal());
        let p = mk_map(sa.clone(), FinSet::atoms("x", 1), &[(a("a0"), a("x0")), (a("a1"), a("x0"))])
            .unwrap();
        assert_eq!(sigma(&p, &SliceObj::terminal(&sa)).unwrap().disp(), &p);
    }

    #[test]
    fn star_examples() {
        let x = FinSet::atoms("x", 2);
        let z = obj(&FinSet::atoms("z", 3), &x, &["x0", "x1", "x1"]);
        let s = star(&FinMap::identity(&x), &z).unwrap();
        assert_eq!(s.carrier().len(), 3);
        let sa = FinSet::atoms("a", 2);
        let sb = FinSet::atoms("b", 3);
        let prod = star(&FinMap::bang(&sa), &SliceObj::over_terminal(&sb)).unwrap();
        assert_eq!(prod.carrier(), &sa.product(&sb));
        let p = mk_map(sa.clone(), x.clone(), &[(a("a0"), a("x1")), (a("a1"), a("x1"))]).unwrap();
        let t = star(&p, &SliceObj::terminal(&x)).unwrap();
        assert_eq!(
            t.carrier(),
            &FinSet::new([Value::pair(a("a0"), a("x1")), Value::pair(a("a1"), a("x1"))])
        );
    }

    #[test]
    fn pi_counts_sections() {
        let sa = FinSet::atoms("a", 2);
        let q = obj(&FinSet::atoms("b", 4), &sa, &["a0", "a0", "a1", "a1"]);
        let pd = pi(&FinMap::bang(&sa), &q).unwrap();
        assert_eq!(pd.carrier().len(), 4);
        let q_gap = obj(&FinSet::atoms("b", 2), &sa, &["a0", "a0"]);
        assert!(pi(&FinMap::bang(&sa), &q_gap).unwrap().carrier().is_empty());
        let pid = pi(&FinMap::identity(&sa), &q).unwrap();
        assert_eq!(pid.carrier().len(), q.carrier().len());
    }

    #[test]
    fn pi_map_identity_and_composite() {
        let sa = FinSet::atoms("a", 2);
        let p = FinMap::bang(&sa);
        let q = obj(&FinSet::atoms("b", 3), &sa, &["a0", "a1", "a1"]);
        let id = SliceMap::identity(&q);
        let pm = pi_map(&p, &id).unwrap();
        assert!(pm.arrow().is_identity());

        let r = obj(&FinSet::atoms("c", 2), &sa, &["a0", "a1"]);
        let m = SliceMap::from_fn(r.clone(), q.clone(), |c| {
            Ok(if c == &a("c0") { a("b0") } else { a("b2") })
        })
        .unwrap();
        let n = SliceMap::from_fn(q.clone(), r.clone(), |b| {
            Ok(if b == &a("b0") { a("c0") } else { a("c1") })
        })
        .unwrap();
        let lhs = pi_map(&p, &m.after(&n).unwrap()).unwrap();
        let rhs = pi_map(&p, &m).unwrap().after(&pi_map(&p, &n).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjunction_cells_at_identity() {
        let sa = FinSet::atoms("a", 2);
        let q = obj(&FinSet::atoms("b", 3), &sa, &["a0", "a1", "a1"]);
        let nu = adjunction_cell(CellKind::Nu, &FinMap::identity(&sa), &q).unwrap();
        assert!(nu.arrow().is_bijective());
        assert!(matches!(
            adjunction_cell(CellKind::Mu, &FinMap::bang(&sa), &q),
            Err(Error::KindError { .. })
        ));
    }

    #[test]
    fn mu_over_terminal_surjectivity() {
        let sa = FinSet::atoms("a", 2);
        let p = FinMap::bang(&sa);
        let x = SliceObj::over_terminal(&FinSet::atoms("z", 2));
        assert!(adjunction_cell(CellKind::Mu, &p, &x).unwrap().arrow().is_surjective());
        let p0 = FinMap::bang(&FinSet::empty());
        assert!(!adjunction_cell(CellKind::Mu, &p0, &x).unwrap().arrow().is_surjective());
        let e = SliceObj::over_terminal(&FinSet::empty());
        assert!(adjunction_cell(CellKind::Mu, &p0, &e).unwrap().arrow().is_surjective());
    }

    #[test]
    fn triangle_identity_nu_eta() {
        let sa = FinSet::atoms("a", 3);
        let x = FinSet::atoms("x", 2);
        let p = mk_map(
            sa.clone(),
            x.clone(),
            &[(a("a0"), a("x0")), (a("a1"), a("x0")), (a("a2"), a("x1"))],
        )
        .unwrap();
        let z = obj(&FinSet::atoms("z", 3), &x, &["x0", "x1", "x1"]);
        let eta = adjunction_cell(CellKind::Eta, &p, &z).unwrap();
        let star_eta = star_map(&p, &eta).unwrap();
        let nu = adjunction_cell(CellKind::Nu, &p, &star(&p, &z).unwrap()).unwrap();
        assert!(nu.after(&star_eta).unwrap().arrow().is_identity());
    }

    #[test]
    fn exponential_sizes() {
        let sa = FinSet::atoms("a", 2);
        assert_eq!(exponential(&FinSet::empty(), &sa).len(), 1);
        assert_eq!(exponential(&FinSet::atoms("i", 1), &sa).len(), 2);
        assert_eq!(exponential(&FinSet::atoms("i", 2), &sa).len(), 4);
    }
}
