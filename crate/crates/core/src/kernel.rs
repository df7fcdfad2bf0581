//! Finite sets of canonical values and total functions between them.
//!
//! Every element of every object lives in the one universe [`Value`], and every
//! construction (products, pullbacks, exponentials, dependent products) builds
//! its elements in a fixed canonical shape. Two objects produced by different
//! code paths are therefore equal as sets, not merely isomorphic, and maps
//! between them can be compared by their graphs.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A canonical structured element.
///
/// The derived order is the global total order: `Unit < Atom < Pair < Table`,
/// atoms by name, pairs and tables lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Unit,
    Atom(Arc<str>),
    Pair(Arc<(Value, Value)>),
    /// Entries are strictly sorted by key.
    Table(Arc<[(Value, Value)]>),
}

impl Value {
    pub fn atom(name: impl AsRef<str>) -> Value {
        Value::Atom(Arc::from(name.as_ref()))
    }

    pub fn pair(first: Value, second: Value) -> Value {
        Value::Pair(Arc::new((first, second)))
    }

    /// Builds a table, sorting the entries. Duplicate keys are rejected.
    pub fn table(entries: impl IntoIterator<Item = (Value, Value)>) -> Result<Value> {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::NotTotal(format!("duplicate table key {}", w[0].0)));
        }
        Ok(Value::Table(entries.into()))
    }

    /// Builds a table from entries whose keys are already strictly sorted.
    pub(crate) fn table_sorted(entries: Vec<(Value, Value)>) -> Value {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Value::Table(entries.into())
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn fst(&self) -> Result<&Value> {
        self.as_pair()
            .map(|p| p.0)
            .ok_or_else(|| Error::Malformed(self.clone(), "expected a pair"))
    }

    pub fn snd(&self) -> Result<&Value> {
        self.as_pair()
            .map(|p| p.1)
            .ok_or_else(|| Error::Malformed(self.clone(), "expected a pair"))
    }

    pub fn entries(&self) -> Result<&[(Value, Value)]> {
        match self {
            Value::Table(t) => Ok(t),
            _ => Err(Error::Malformed(self.clone(), "expected a table")),
        }
    }

    /// Looks up `key` in a table.
    pub fn lookup(&self, key: &Value) -> Result<&Value> {
        let entries = self.entries()?;
        entries
            .binary_search_by(|e| e.0.cmp(key))
            .map(|i| &entries[i].1)
            .map_err(|_| Error::Malformed(self.clone(), "table lookup outside its keys"))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Atom(a) => f.write_str(a),
            Value::Pair(p) => write!(f, "({}, {})", p.0, p.1),
            Value::Table(t) => {
                f.write_str("[")?;
                for (k, (key, val)) in t.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{key} => {val}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite set: strictly sorted, duplicate-free.
#[derive(Clone, Eq, PartialOrd, Ord)]
pub struct FinSet(Arc<[Value]>);

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

// Sets reached through memo tables can be large; hashing the size and the
// two extreme elements keeps lookups cheap and agrees with equality.
impl Hash for FinSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.len().hash(state);
        self.0.first().hash(state);
        self.0.last().hash(state);
    }
}

impl FinSet {
    pub fn new(elements: impl IntoIterator<Item = Value>) -> FinSet {
        let mut v: Vec<Value> = elements.into_iter().collect();
        v.sort();
        v.dedup();
        FinSet(v.into())
    }

    pub fn empty() -> FinSet {
        FinSet(Arc::from(Vec::new()))
    }

    /// The terminal object `{()}`.
    pub fn terminal() -> FinSet {
        FinSet(Arc::from(vec![Value::Unit]))
    }

    /// `{prefix0, prefix1, ...}`.
    pub fn atoms(prefix: &str, n: usize) -> FinSet {
        FinSet::new((0..n).map(|k| Value::atom(format!("{prefix}{k}"))))
    }

    pub fn elements(&self) -> &[Value] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Value> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, v: &Value) -> Option<usize> {
        self.0.binary_search(v).ok()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.index_of(v).is_some()
    }

    /// Cartesian product, elements `(a, b)`.
    pub fn product(&self, other: &FinSet) -> FinSet {
        // lexicographic generation is already sorted
        FinSet(
            self.iter()
                .flat_map(|a| other.iter().map(move |b| Value::pair(a.clone(), b.clone())))
                .collect::<Vec<_>>()
                .into(),
        )
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A total function between finite sets, stored as the image of each domain
/// element in domain order.
#[derive(Clone, Eq, PartialOrd, Ord)]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    images: Arc<[Value]>,
}

impl PartialEq for FinMap {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && (Arc::ptr_eq(&self.images, &other.images) || self.images == other.images)
    }
}

impl Hash for FinMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dom.hash(state);
        self.cod.hash(state);
        self.images.first().hash(state);
    }
}

impl FinMap {
    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn images(&self) -> &[Value] {
        &self.images
    }

    /// `(x, f(x))` for every domain element, in domain order.
    pub fn graph(&self) -> impl Iterator<Item = (&Value, &Value)> {
        self.dom.iter().zip(self.images.iter())
    }

    /// Builds a map by evaluating `f` at every domain element.
    pub fn from_fn(
        dom: FinSet,
        cod: FinSet,
        mut f: impl FnMut(&Value) -> Result<Value>,
    ) -> Result<FinMap> {
        let mut images = Vec::with_capacity(dom.len());
        for x in dom.iter() {
            let y = f(x)?;
            if !cod.contains(&y) {
                return Err(Error::OutOfCodomain(y));
            }
            images.push(y);
        }
        Ok(FinMap {
            dom,
            cod,
            images: images.into(),
        })
    }

    pub fn identity(set: &FinSet) -> FinMap {
        FinMap {
            dom: set.clone(),
            cod: set.clone(),
            images: set.0.clone(),
        }
    }

    /// The unique map to the terminal object.
    pub fn bang(set: &FinSet) -> FinMap {
        FinMap {
            dom: set.clone(),
            cod: FinSet::terminal(),
            images: vec![Value::Unit; set.len()].into(),
        }
    }

    pub fn apply(&self, x: &Value) -> Result<&Value> {
        self.dom
            .index_of(x)
            .map(|k| &self.images[k])
            .ok_or_else(|| Error::mismatch(format!("{x} is not in the domain {}", self.dom)))
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && *self.images == *self.dom.0
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for y in self.images.iter() {
            if let Some(k) = self.cod.index_of(y) {
                hit[k] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen: Vec<&Value> = self.images.iter().collect();
        seen.sort();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    /// The first codomain element missed by the map, if any.
    pub fn missed_element(&self) -> Option<&Value> {
        self.cod
            .iter()
            .find(|y| !self.images.iter().any(|img| img == *y))
    }

    /// The first domain element where two parallel maps disagree.
    pub fn first_difference(&self, other: &FinMap) -> Option<Value> {
        if self.dom != other.dom {
            return self
                .dom
                .iter()
                .find(|x| !other.dom.contains(x))
                .or_else(|| other.dom.iter().find(|x| !self.dom.contains(x)))
                .cloned()
                .or(Some(Value::Unit));
        }
        self.graph()
            .zip(other.images.iter())
            .find(|((_, a), b)| a != b)
            .map(|((x, _), _)| x.clone())
            .or_else(|| (self.cod != other.cod).then_some(Value::Unit))
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Result<FinMap> {
        if !self.is_bijective() {
            let witness = self
                .missed_element()
                .cloned()
                .unwrap_or_else(|| self.dom.iter().next().cloned().unwrap_or(Value::Unit));
            return Err(Error::NotAPullback { witness });
        }
        let mut pairs: Vec<(Value, Value)> = self
            .graph()
            .map(|(x, y)| (y.clone(), x.clone()))
            .collect();
        pairs.sort();
        Ok(FinMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            images: pairs.into_iter().map(|(_, x)| x).collect::<Vec<_>>().into(),
        })
    }

    /// Replaces the codomain by a superset or equal set.
    pub fn with_cod(&self, cod: FinSet) -> Result<FinMap> {
        FinMap::from_fn(self.dom.clone(), cod, |x| self.apply(x).cloned())
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (x, y)) in self.graph().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {y}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} = {}", self.dom, self.cod, self)
    }
}

/// Validates an explicit list of assignments into a map.
pub fn mk_map(dom: FinSet, cod: FinSet, assignments: &[(Value, Value)]) -> Result<FinMap> {
    let mut images: Vec<Option<Value>> = vec![None; dom.len()];
    for (x, y) in assignments {
        let k = dom
            .index_of(x)
            .ok_or_else(|| Error::NotTotal(format!("{x} is not in the domain")))?;
        if images[k].is_some() {
            return Err(Error::NotTotal(format!("{x} is assigned twice")));
        }
        if !cod.contains(y) {
            return Err(Error::OutOfCodomain(y.clone()));
        }
        images[k] = Some(y.clone());
    }
    let images = images
        .into_iter()
        .zip(dom.iter())
        .map(|(y, x)| y.ok_or_else(|| Error::NotTotal(format!("{x} is unassigned"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(FinMap {
        dom,
        cod,
        images: images.into(),
    })
}

/// `g ∘ f`.
pub fn compose(g: &FinMap, f: &FinMap) -> Result<FinMap> {
    if f.cod != g.dom {
        return Err(Error::mismatch(format!(
            "cannot compose: codomain {} differs from domain {}",
            f.cod, g.dom
        )));
    }
    let images = f
        .images
        .iter()
        .map(|y| g.apply(y).cloned())
        .collect::<Result<Vec<_>>>()?;
    Ok(FinMap {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        images: images.into(),
    })
}

/// The canonical pullback of a cospan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub object: FinSet,
    pub pr1: FinMap,
    pub pr2: FinMap,
}

/// `P = {(a, b) | f(a) = g(b)}` with the literal projections.
pub fn pullback(f: &FinMap, g: &FinMap) -> Result<Pullback> {
    if f.cod != g.cod {
        return Err(Error::mismatch(format!(
            "pullback of a non-cospan: {} vs {}",
            f.cod, g.cod
        )));
    }
    let object = FinSet(
        f.graph()
            .flat_map(|(a, fa)| {
                g.graph()
                    .filter(move |(_, gb)| *gb == fa)
                    .map(move |(b, _)| Value::pair(a.clone(), b.clone()))
            })
            .collect::<Vec<_>>()
            .into(),
    );
    let pr1 = FinMap::from_fn(object.clone(), f.dom.clone(), |e| e.fst().cloned())?;
    let pr2 = FinMap::from_fn(object.clone(), g.dom.clone(), |e| e.snd().cloned())?;
    Ok(Pullback { object, pr1, pr2 })
}

pub fn is_surjective(f: &FinMap) -> bool {
    f.is_surjective()
}

/// The section picking the least preimage of every codomain element.
pub fn choose_section(f: &FinMap) -> Result<FinMap> {
    let mut least: Vec<Option<&Value>> = vec![None; f.cod.len()];
    // domain order is ascending, so the first hit is the least preimage
    for (x, y) in f.graph() {
        let k = f.cod.index_of(y).expect("image lies in the codomain");
        if least[k].is_none() {
            least[k] = Some(x);
        }
    }
    let images = least
        .into_iter()
        .zip(f.cod.iter())
        .map(|(x, y)| x.cloned().ok_or_else(|| Error::NotSurjective(y.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(FinMap {
        dom: f.cod.clone(),
        cod: f.dom.clone(),
        images: images.into(),
    })
}

/// Binary coproduct with tagged elements `(l, a)` and `(r, b)`.
pub fn coproduct(a: &FinSet, b: &FinSet) -> (FinSet, FinMap, FinMap) {
    let tag_l = Value::atom("l");
    let tag_r = Value::atom("r");
    let sum = FinSet::new(
        a.iter()
            .map(|x| Value::pair(tag_l.clone(), x.clone()))
            .chain(b.iter().map(|y| Value::pair(tag_r.clone(), y.clone()))),
    );
    let inl = FinMap::from_fn(a.clone(), sum.clone(), |x| {
        Ok(Value::pair(tag_l.clone(), x.clone()))
    })
    .expect("injection lands in the sum");
    let inr = FinMap::from_fn(b.clone(), sum.clone(), |y| {
        Ok(Value::pair(tag_r.clone(), y.clone()))
    })
    .expect("injection lands in the sum");
    (sum, inl, inr)
}

/// Every function `dom -> cod`, in lexicographic order of image lists.
pub fn all_maps(dom: &FinSet, cod: &FinSet) -> Vec<FinMap> {
    let n = dom.len();
    if n > 0 && cod.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(FinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            images: idx.iter().map(|&k| cod.0[k].clone()).collect::<Vec<_>>().into(),
        });
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < cod.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Value {
        Value::atom(n)
    }

    #[test]
    fn value_order_is_unit_atom_pair_table() {
        let t = Value::table([]).unwrap();
        let p = Value::pair(Value::Unit, Value::Unit);
        assert!(Value::Unit < a("z"));
        assert!(a("z") < p);
        assert!(p < t);
        assert!(a("a0") < a("a1"));
    }

    #[test]
    fn table_rejects_duplicate_keys() {
        assert!(Value::table([(a("k"), a("x")), (a("k"), a("y"))]).is_err());
        let t = Value::table([(a("k1"), a("y")), (a("k0"), a("x"))]).unwrap();
        assert_eq!(t.entries().unwrap()[0].0, a("k0"));
    }

    #[test]
    fn mk_map_singleton() {
        let f = mk_map(FinSet::atoms("a", 1), FinSet::atoms("x", 1), &[(a("a0"), a("x0"))])
            .unwrap();
        assert_eq!(f.apply(&a("a0")).unwrap(), &a("x0"));
    }

    #[test]
    fn mk_map_not_total() {
        let r = mk_map(FinSet::atoms("a", 2), FinSet::atoms("x", 1), &[(a("a0"), a("x0"))]);
        assert!(matches!(r, Err(Error::NotTotal(_))));
        let r = mk_map(
            FinSet::atoms("a", 1),
            FinSet::atoms("x", 1),
            &[(a("a0"), a("x0")), (a("a0"), a("x0"))],
        );
        assert!(matches!(r, Err(Error::NotTotal(_))));
    }

    #[test]
    fn mk_map_out_of_codomain() {
        let r = mk_map(FinSet::atoms("a", 1), FinSet::atoms("x", 1), &[(a("a0"), a("x1"))]);
        assert!(matches!(r, Err(Error::OutOfCodomain(_))));
    }

    #[test]
    fn compose_identities_and_constant() {
        let f = mk_map(
            FinSet::atoms("a", 2),
            FinSet::new([a("x")]),
            &[(a("a0"), a("x")), (a("a1"), a("x"))],
        )
        .unwrap();
        assert_eq!(compose(&FinMap::identity(f.cod()), &f).unwrap(), f);
        assert_eq!(compose(&f, &FinMap::identity(f.dom())).unwrap(), f);
        let g = mk_map(FinSet::new([a("x")]), FinSet::new([a("y0")]), &[(a("x"), a("y0"))])
            .unwrap();
        let gf = compose(&g, &f).unwrap();
        assert_eq!(gf.images(), &[a("y0"), a("y0")]);
        assert!(matches!(compose(&f, &g), Err(Error::BoundaryMismatch(_))));
    }

    #[test]
    fn pullback_examples() {
        let x = FinSet::atoms("x", 2);
        let id = FinMap::identity(&x);
        let pb = pullback(&id, &id).unwrap();
        assert_eq!(pb.object.len(), 2);
        assert!(pb.pr1.is_bijective() && pb.pr2.is_bijective());

        let (sa, sb) = (FinSet::atoms("a", 2), FinSet::atoms("b", 3));
        let pb = pullback(&FinMap::bang(&sa), &FinMap::bang(&sb)).unwrap();
        assert_eq!(pb.object, sa.product(&sb));

        let f = mk_map(sa.clone(), x.clone(), &[(a("a0"), a("x0")), (a("a1"), a("x0"))]).unwrap();
        let g = mk_map(FinSet::atoms("b", 1), x, &[(a("b0"), a("x0"))]).unwrap();
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(
            pb.object,
            FinSet::new([Value::pair(a("a0"), a("b0")), Value::pair(a("a1"), a("b0"))])
        );
    }

    #[test]
    fn surjectivity_examples() {
        assert!(FinMap::identity(&FinSet::atoms("a", 3)).is_surjective());
        let f = mk_map(FinSet::atoms("a", 1), FinSet::atoms("x", 2), &[(a("a0"), a("x0"))])
            .unwrap();
        assert!(!f.is_surjective());
        assert!(FinMap::identity(&FinSet::empty()).is_surjective());
    }

    #[test]
    fn section_examples() {
        let s = FinSet::atoms("a", 3);
        assert_eq!(choose_section(&FinMap::identity(&s)).unwrap(), FinMap::identity(&s));
        let f = mk_map(
            FinSet::atoms("a", 2),
            FinSet::new([a("x")]),
            &[(a("a1"), a("x")), (a("a0"), a("x"))],
        )
        .unwrap();
        assert_eq!(choose_section(&f).unwrap().images(), &[a("a0")]);
        let e = choose_section(&FinMap::identity(&FinSet::empty())).unwrap();
        assert!(e.dom().is_empty());
        let g = mk_map(FinSet::atoms("a", 1), FinSet::atoms("x", 2), &[(a("a0"), a("x0"))])
            .unwrap();
        assert!(matches!(choose_section(&g), Err(Error::NotSurjective(_))));
    }

    #[test]
    fn empty_set_maps() {
        let e = FinSet::empty();
        let s = FinSet::atoms("a", 2);
        assert_eq!(all_maps(&e, &s).len(), 1);
        assert_eq!(all_maps(&s, &e).len(), 0);
        assert_eq!(all_maps(&e, &e).len(), 1);
    }

    #[test]
    fn inverse_of_bijection() {
        let f = mk_map(
            FinSet::atoms("a", 2),
            FinSet::atoms("x", 2),
            &[(a("a0"), a("x1")), (a("a1"), a("x0"))],
        )
        .unwrap();
        let g = f.inverse().unwrap();
        assert!(compose(&g, &f).unwrap().is_identity());
        assert!(compose(&f, &g).unwrap().is_identity());
    }
}
