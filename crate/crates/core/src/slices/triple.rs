use crate::error::{Error, Result};
use crate::kernel::{FinMap, FinSet, Value};
use crate::mates::{compose_adj, conjugate, mate, Adjunction, ElemMap, LazyFunctor, NatCell};

use super::{cell_elem, pi, pi_act, sigma, star, star_act, CellKind, SliceMap, SliceObj};

/// `p_! ⊣ p^* ⊣ p_*` as lazy functors with their units and counits.
#[derive(Clone, Debug)]
pub struct AdjointTriple {
    pub map: FinMap,
    pub shriek: LazyFunctor,
    pub star: LazyFunctor,
    pub pi: LazyFunctor,
    pub iota: NatCell,
    pub mu: NatCell,
    pub eta: NatCell,
    pub nu: NatCell,
}

impl AdjointTriple {
    pub fn of(p: &FinMap) -> AdjointTriple {
        AdjointTriple::named("p", p)
    }

    /// The triple of an identity map; the functors are computed, not collapsed.
    pub fn identity(base: &FinSet) -> AdjointTriple {
        AdjointTriple::named("id", &FinMap::identity(base))
    }

    /// An `=` edge: identity functors and identity cells on `E/base`.
    pub fn equality(base: &FinSet) -> AdjointTriple {
        let id = LazyFunctor::identity(base);
        let cell = NatCell::identity(&id);
        AdjointTriple {
            map: FinMap::identity(base),
            shriek: id.clone(),
            star: id.clone(),
            pi: id,
            iota: cell.clone(),
            mu: cell.clone(),
            eta: cell.clone(),
            nu: cell,
        }
    }

    pub fn named(name: &str, p: &FinMap) -> AdjointTriple {
        let (a, x) = (p.dom().clone(), p.cod().clone());
        let functor = |suffix: &str,
                       src: &FinSet,
                       tgt: &FinSet,
                       obj: fn(&FinMap, &SliceObj) -> Result<SliceObj>,
                       act: fn(ElemMap<'_>, &Value) -> Result<Value>| {
            let p1 = p.clone();
            LazyFunctor::new(format!("{name}{suffix}"), src.clone(), tgt.clone(), move |o| obj(&p1, o), act)
        };
        let shriek = functor("_!", &a, &x, sigma, |f, v| f(v));
        let star_f = functor("^*", &x, &a, star, star_act);
        let pi_f = functor("_*", &a, &x, pi, pi_act);
        let cell = |kind: CellKind, src: LazyFunctor, tgt: LazyFunctor, label: &str| {
            let p1 = p.clone();
            NatCell::pointwise(format!("{label}[{name}]"), src, tgt, move |o, v| {
                cell_elem(kind, &p1, o, v)
            })
            .expect("unit and counit boundaries agree")
        };
        let id_a = LazyFunctor::identity(&a);
        let id_x = LazyFunctor::identity(&x);
        let compose = |f: &LazyFunctor, g: &LazyFunctor| f.then(g).expect("triple functors compose");
        let iota = cell(CellKind::Iota, id_a.clone(), compose(&shriek, &star_f), "iota");
        let mu = cell(CellKind::Mu, compose(&star_f, &shriek), id_x.clone(), "mu");
        let eta = cell(CellKind::Eta, id_x, compose(&star_f, &pi_f), "eta");
        let nu = cell(CellKind::Nu, compose(&pi_f, &star_f), id_a, "nu");
        AdjointTriple {
            map: p.clone(),
            shriek,
            star: star_f,
            pi: pi_f,
            iota,
            mu,
            eta,
            nu,
        }
    }

    pub fn sigma_adj(&self) -> Adjunction {
        Adjunction::new(
            self.shriek.clone(),
            self.star.clone(),
            self.iota.clone(),
            self.mu.clone(),
        )
        .expect("sigma and star are opposed")
    }

    pub fn pi_adj(&self) -> Adjunction {
        Adjunction::new(
            self.star.clone(),
            self.pi.clone(),
            self.eta.clone(),
            self.nu.clone(),
        )
        .expect("star and pi are opposed")
    }
}

/// The three mates of the identity `p_! q_! = x_! s_!` for a commuting
/// square `p ∘ q = x ∘ s`.
#[derive(Clone, Debug)]
pub struct SquareCells {
    /// `q_! s^* ⇒ p^* x_!`
    pub beta1: NatCell,
    /// `s^* x^* ⇒ q^* p^*`
    pub beta2: NatCell,
    /// `x^* p_* ⇒ s_* q^*`
    pub beta3: NatCell,
}

/// Mates of the identity for the square with top `q`, left `s`, right `p`
/// and bottom `x`.
pub fn pi_square_cell(
    q: &AdjointTriple,
    s: &AdjointTriple,
    p: &AdjointTriple,
    x: &AdjointTriple,
) -> Result<SquareCells> {
    let alpha0 = NatCell::identity_between(&q.shriek.then(&p.shriek)?, &s.shriek.then(&x.shriek)?)?;
    let beta1 = mate(&alpha0, &s.sigma_adj(), &p.sigma_adj(), &q.shriek, &x.shriek)?;
    let beta2 = mate(&beta1, &x.sigma_adj(), &q.sigma_adj(), &s.star, &p.star)?;
    let beta3 = mate(&beta2, &p.pi_adj(), &s.pi_adj(), &x.star, &q.star)?;
    Ok(SquareCells {
        beta1,
        beta2,
        beta3,
    })
}

/// The Beck–Chevalley isomorphisms of a pullback square.
#[derive(Clone, Debug)]
pub struct BeckChevalley {
    /// `p^* x_! ⇒ q_! s^*`
    pub left: NatCell,
    /// `s_* q^* ⇒ x^* p_*`
    pub right: NatCell,
    pub cells: SquareCells,
}

fn bijectivity_witness(f: &FinMap) -> Option<Value> {
    if let Some(v) = f.missed_element() {
        return Some(v.clone());
    }
    let mut seen = std::collections::HashSet::new();
    f.graph()
        .find(|(_, y)| !seen.insert((*y).clone()))
        .map(|(x, _)| x.clone())
}

/// Inverts the mates of the identity, after checking at the terminal
/// objects that the square is a pullback.
pub fn beck_chevalley(
    q: &AdjointTriple,
    s: &AdjointTriple,
    p: &AdjointTriple,
    x: &AdjointTriple,
) -> Result<BeckChevalley> {
    let cells = pi_square_cell(q, s, p, x)?;
    let probes = [
        (&cells.beta1, SliceObj::terminal(s.map.cod())),
        (&cells.beta3, SliceObj::terminal(p.map.dom())),
    ];
    for (cell, probe) in probes {
        let c = cell.at(&probe)?;
        if let Some(witness) = bijectivity_witness(c.arrow()) {
            return Err(Error::NotAPullback { witness });
        }
    }
    Ok(BeckChevalley {
        left: cells.beta1.inverse(),
        right: cells.beta3.inverse(),
        cells,
    })
}

/// The canonical comparisons attached to a commuting rectangle.
#[derive(Clone, Debug)]
pub struct RectangleIsos {
    /// `r2^* q2^* ⇒ r^* q^*`
    pub star: NatCell,
    /// `q_* r_* ⇒ q2_* r2_*`
    pub pi: NatCell,
}

fn rectangle_isos(
    sig: &Adjunction,
    sig2: &Adjunction,
    pis: &Adjunction,
    pis2: &Adjunction,
) -> Result<RectangleIsos> {
    let id = NatCell::identity_between(&sig.left, &sig2.left)?;
    let star = conjugate(&id, sig2, sig)?;
    let pi = conjugate(&star, pis, pis2)?;
    Ok(RectangleIsos { star, pi })
}

/// Comparisons for `q ∘ r = q2 ∘ r2`, obtained as conjugates of the
/// identity between the composite left adjoints.
pub fn pi_rectangle_iso(
    r: &AdjointTriple,
    q: &AdjointTriple,
    r2: &AdjointTriple,
    q2: &AdjointTriple,
) -> Result<RectangleIsos> {
    rectangle_isos(
        &compose_adj(&r.sigma_adj(), &q.sigma_adj())?,
        &compose_adj(&r2.sigma_adj(), &q2.sigma_adj())?,
        &compose_adj(&q.pi_adj(), &r.pi_adj())?,
        &compose_adj(&q2.pi_adj(), &r2.pi_adj())?,
    )
}

/// Comparisons for a triangle `q ∘ r = c`: `c^* ⇒ r^* q^*` and
/// `q_* r_* ⇒ c_*`.
pub fn pi_triangle_iso(r: &AdjointTriple, q: &AdjointTriple, c: &AdjointTriple) -> Result<RectangleIsos> {
    rectangle_isos(
        &compose_adj(&r.sigma_adj(), &q.sigma_adj())?,
        &c.sigma_adj(),
        &compose_adj(&q.pi_adj(), &r.pi_adj())?,
        &c.pi_adj(),
    )
}

/// For a map `m: b → a` over `X`, the restriction cell
/// `a_* a^* ⇒ b_* b^*` built from the unit of `m^* ⊣ m_*` and the triangle
/// comparisons for `a ∘ m = b`.
pub fn exp_action(m: &SliceMap) -> Result<NatCell> {
    let a = AdjointTriple::named("a", m.tgt().disp());
    let b = AdjointTriple::named("b", m.src().disp());
    let q = AdjointTriple::named("m", m.arrow());
    let tri = pi_triangle_iso(&q, &a, &b)?;
    let unit = q.eta.whisker_left(&a.star)?.whisker_right(&a.pi)?;
    let back = tri.star.inverse().whisker_right(&q.pi)?.whisker_right(&a.pi)?;
    let collapse = tri.pi.whisker_left(&b.star)?;
    let cell = unit.then_cell(&back)?.then_cell(&collapse)?;
    cell.renamed("restrict").retyped(&a.star.then(&a.pi)?, &b.star.then(&b.pi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{self, mk_map};
    use crate::mates::sample_objects;

    fn a(n: &str) -> Value {
        Value::atom(n)
    }

    fn folding() -> FinMap {
        mk_map(
            FinSet::atoms("a", 3),
            FinSet::atoms("x", 2),
            &[(a("a0"), a("x0")), (a("a1"), a("x0")), (a("a2"), a("x1"))],
        )
        .unwrap()
    }

    fn pullback_square(p: &FinMap, x: &FinMap) -> [AdjointTriple; 4] {
        let pb = kernel::pullback(p, x).unwrap();
        [
            AdjointTriple::named("q", &pb.pr1),
            AdjointTriple::named("s", &pb.pr2),
            AdjointTriple::named("p", p),
            AdjointTriple::named("x", x),
        ]
    }

    #[test]
    fn beck_chevalley_along_identity() {
        let p = folding();
        let [q, s, p, x] = pullback_square(&p, &FinMap::identity(p.cod()));
        let bc = beck_chevalley(&q, &s, &p, &x).unwrap();
        for y in sample_objects(s.map.cod(), 2) {
            assert!(bc.left.at(&y).unwrap().arrow().is_bijective());
        }
        for z in sample_objects(p.map.dom(), 2) {
            assert!(bc.right.at(&z).unwrap().arrow().is_bijective());
        }
    }

    #[test]
    fn beck_chevalley_generic_pullback() {
        let p = folding();
        let x = mk_map(
            FinSet::atoms("y", 3),
            p.cod().clone(),
            &[(a("y0"), a("x0")), (a("y1"), a("x0")), (a("y2"), a("x1"))],
        )
        .unwrap();
        let [q, s, p, x] = pullback_square(&p, &x);
        let bc = beck_chevalley(&q, &s, &p, &x).unwrap();
        assert_eq!(bc.right.non_bijective_at(&sample_objects(p.map.dom(), 2)).unwrap(), None);
        assert_eq!(bc.left.non_bijective_at(&sample_objects(s.map.cod(), 2)).unwrap(), None);
    }

    #[test]
    fn shrunken_square_is_not_a_pullback() {
        let p = folding();
        let x = FinMap::identity(p.cod());
        let pb = kernel::pullback(&p, &x).unwrap();
        let smaller = FinSet::new(pb.object.iter().skip(1).cloned());
        let restrict = |f: &FinMap| FinMap::from_fn(smaller.clone(), f.cod().clone(), |e| f.apply(e).cloned()).unwrap();
        let q = AdjointTriple::named("q", &restrict(&pb.pr1));
        let s = AdjointTriple::named("s", &restrict(&pb.pr2));
        let err = beck_chevalley(&q, &s, &AdjointTriple::of(&p), &AdjointTriple::named("x", &x)).unwrap_err();
        assert!(matches!(err, Error::NotAPullback { .. }));
    }

    #[test]
    fn star_comparison_is_a_non_identity_bijection() {
        let p = folding();
        let r = FinMap::identity(p.dom());
        let id_x = FinMap::identity(p.cod());
        // p ∘ id = id ∘ p
        let isos = pi_rectangle_iso(
            &AdjointTriple::named("r", &r),
            &AdjointTriple::of(&p),
            &AdjointTriple::of(&p),
            &AdjointTriple::named("id", &id_x),
        )
        .unwrap();
        let z = SliceObj::terminal(p.cod());
        let c = isos.star.at(&z).unwrap();
        assert!(c.arrow().is_bijective());
        assert_ne!(c.src(), c.tgt());
        let samples = sample_objects(p.dom(), 2);
        assert_eq!(isos.pi.non_bijective_at(&samples).unwrap(), None);
    }

    #[test]
    fn mates_of_pasted_squares_are_pasted_mates() {
        // C -r-> B -q-> A over the terminal, with identity bottom edges
        let sc = FinSet::atoms("c", 2);
        let sb = FinSet::atoms("b", 2);
        let sa = FinSet::atoms("a", 1);
        let r = mk_map(sc.clone(), sb.clone(), &[(a("c0"), a("b1")), (a("c1"), a("b1"))]).unwrap();
        let q = mk_map(sb.clone(), sa.clone(), &[(a("b0"), a("a0")), (a("b1"), a("a0"))]).unwrap();
        let one = FinSet::terminal();
        let t_r = AdjointTriple::named("r", &r);
        let t_q = AdjointTriple::named("q", &q);
        let t_t = AdjointTriple::named("t", &FinMap::bang(&sc));
        let t_s = AdjointTriple::named("s", &FinMap::bang(&sb));
        let t_p = AdjointTriple::named("p", &FinMap::bang(&sa));
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
        let samples = sample_objects(&one, 3);
        let report = crate::mates::check_pasting(&lhs, &[whole], &samples).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.checked, 4);
    }

    #[test]
    fn restriction_along_an_inclusion() {
        let sa = FinSet::atoms("a", 2);
        let inc = mk_map(FinSet::atoms("a", 1), sa.clone(), &[(a("a0"), a("a0"))]).unwrap();
        let m = SliceMap::new(
            SliceObj::over_terminal(inc.dom()),
            SliceObj::over_terminal(&sa),
            inc,
        )
        .unwrap();
        let cell = exp_action(&m).unwrap();
        let z = SliceObj::over_terminal(&FinSet::atoms("z", 2));
        let c = cell.at(&z).unwrap();
        assert_eq!(c.src().carrier().len(), 4);
        assert_eq!(c.tgt().carrier().len(), 2);
        for (src, dst) in c.arrow().graph() {
            let full = src.snd().unwrap();
            let part = dst.snd().unwrap().entries().unwrap();
            assert_eq!(part.len(), 1);
            assert_eq!(part[0].0, a("a0"));
            assert_eq!(part[0].1.snd().unwrap(), full.lookup(&a("a0")).unwrap().snd().unwrap());
        }
    }

    #[test]
    fn restriction_along_identity_is_identity() {
        let z = SliceObj::over_terminal(&FinSet::atoms("z", 2));
        let m = SliceMap::identity(&SliceObj::over_terminal(&FinSet::atoms("a", 2)));
        let c = exp_action(&m).unwrap().at(&z).unwrap();
        assert!(c.arrow().is_identity());
    }
}
