//! The interval `I`, the path space `X^I × I` with its projection `ϖ` and
//! evaluation `ε`, and the gap map `δ ⇒ p` into the pullback of `p` along
//! `ε`.
//!
//! A path is a table `I → X`; an element of the path space is `(t, i)`.

use crate::error::Result;
use crate::kernel::{self, compose, FinMap, FinSet, Value};
use crate::mates::NatCell;
use crate::slices::{self, exp_action, AdjointTriple, SliceMap, SliceObj};

#[derive(Clone, Debug)]
pub struct IntervalCtx {
    points: FinSet,
    bang: AdjointTriple,
}

impl Default for IntervalCtx {
    fn default() -> Self {
        IntervalCtx::new(FinSet::atoms("i", 2))
    }
}

impl IntervalCtx {
    pub fn new(points: FinSet) -> IntervalCtx {
        let bang = AdjointTriple::named("!", &FinMap::bang(&points));
        IntervalCtx { points, bang }
    }

    pub fn with_size(n: usize) -> IntervalCtx {
        IntervalCtx::new(FinSet::atoms("i", n))
    }

    pub fn points(&self) -> &FinSet {
        &self.points
    }

    /// `X^I`.
    pub fn paths(&self, x: &FinSet) -> FinSet {
        slices::exponential(&self.points, x)
    }

    /// `X^I × I`.
    pub fn path_space(&self, x: &FinSet) -> FinSet {
        self.paths(x).product(&self.points)
    }

    pub fn varpi(&self, x: &FinSet) -> FinMap {
        FinMap::from_fn(self.path_space(x), self.paths(x), |e| e.fst().cloned())
            .expect("projection lands in paths")
    }

    pub fn epsilon(&self, x: &FinSet) -> FinMap {
        FinMap::from_fn(self.path_space(x), x.clone(), |e| {
            e.fst()?.lookup(e.snd()?).cloned()
        })
        .expect("evaluation lands in x")
    }

    /// `f^I`, post-composition of paths.
    pub fn path_map(&self, f: &FinMap) -> FinMap {
        FinMap::from_fn(self.paths(f.dom()), self.paths(f.cod()), |t| push_path(f, t))
            .expect("post-composed paths land in paths")
    }

    /// `f^I × I`.
    pub fn path_space_map(&self, f: &FinMap) -> FinMap {
        FinMap::from_fn(self.path_space(f.dom()), self.path_space(f.cod()), |e| {
            Ok(Value::pair(push_path(f, e.fst()?)?, e.snd()?.clone()))
        })
        .expect("post-composed paths land in paths")
    }

    /// `r^I × I` as an object over `X^I × I`.
    pub fn path_obj(&self, r: &FinMap) -> SliceObj {
        SliceObj::new(self.path_space_map(r))
    }

    /// `(t, i) ↦ (t(i), i)`.
    pub fn generic_eval(&self, x: &FinSet) -> FinMap {
        FinMap::from_fn(self.path_space(x), x.product(&self.points), |e| {
            let i = e.snd()?;
            Ok(Value::pair(e.fst()?.lookup(i)?.clone(), i.clone()))
        })
        .expect("generic evaluation lands in x × I")
    }

    pub fn gap(&self, p: &FinMap) -> GapData {
        let (a, x) = (p.dom(), p.cod());
        let eps = self.epsilon(x);
        let pb = kernel::pullback(&eps, p).expect("epsilon and p share a codomain");
        let domain_obj = self.path_space(a);
        let gap = FinMap::from_fn(domain_obj.clone(), pb.object.clone(), |e| {
            let (t, i) = (e.fst()?, e.snd()?);
            Ok(Value::pair(
                Value::pair(push_path(p, t)?, i.clone()),
                t.lookup(i)?.clone(),
            ))
        })
        .expect("the gap lands in the pullback");
        GapData {
            p: p.clone(),
            domain_obj,
            a_eps: pb.object,
            gap,
            eps_star_p: pb.pr1,
            p_star_eps: pb.pr2,
        }
    }

    /// `x ↦ (ϖ_x, ε_x)` computed from the counits of `!_! ⊣ !^* ⊣ !_*`, with
    /// the comparisons from the direct representations.
    pub fn categorical_paths(&self, x: &FinSet) -> Result<CategoricalPaths> {
        let t = &self.bang;
        let obj = SliceObj::over_terminal(x);
        let varpi_cell = t.mu.whisker_left(&t.star.then(&t.pi)?)?;
        let eps_cell = t
            .nu
            .whisker_left(&t.star)?
            .whisker_right(&t.shriek)?
            .then_cell(&t.mu)?;
        let varpi = varpi_cell.at(&obj)?;
        let epsilon = eps_cell.at(&obj)?;
        let path_cmp = FinMap::from_fn(self.path_space(x), varpi.src().carrier().clone(), |e| {
            Ok(Value::pair(e.snd()?.clone(), pack_path(e.fst()?)?))
        })?;
        let paths_cmp =
            FinMap::from_fn(self.paths(x), varpi.tgt().carrier().clone(), pack_path)?;
        Ok(CategoricalPaths {
            path_cmp,
            paths_cmp,
            varpi: varpi.arrow().clone(),
            epsilon: epsilon.arrow().clone(),
        })
    }

    /// The comparison `r^I × I → ϖ^* ϖ_* ε^* r` over `X^I × I`, for `r: B → X`.
    pub fn j_iso(&self, r: &FinMap) -> Result<SliceMap> {
        let x = r.cod();
        let varpi = AdjointTriple::named("varpi", &self.varpi(x));
        let eps = AdjointTriple::named("eps", &self.epsilon(x));
        let tgt = eps
            .star
            .then(&varpi.pi)?
            .then(&varpi.star)?
            .obj(&SliceObj::new(r.clone()))?;
        let points = self.points.clone();
        let r1 = r.clone();
        SliceMap::from_fn(self.path_obj(r), tgt, move |e| {
            let (bt, i) = (e.fst()?, e.snd()?);
            let xt = push_path(&r1, bt)?;
            let entries = points
                .iter()
                .map(|j| {
                    let at = Value::pair(xt.clone(), j.clone());
                    Ok((at.clone(), Value::pair(at, bt.lookup(j)?.clone())))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Value::pair(
                Value::pair(xt.clone(), i.clone()),
                Value::pair(xt, Value::table(entries)?),
            ))
        })
    }

    /// The whiskered counit `ν ε^*` of `ϖ^* ⊣ ϖ_*` at `p`.
    pub fn whiskered_counit(&self, p: &FinMap) -> Result<SliceMap> {
        let x = p.cod();
        let varpi = AdjointTriple::named("varpi", &self.varpi(x));
        let eps = AdjointTriple::named("eps", &self.epsilon(x));
        varpi.nu.whisker_left(&eps.star)?.at(&SliceObj::new(p.clone()))
    }

    /// The Leibniz exponential of `p × I` with the diagonal, inside the
    /// slice over `I`, and its comparison with the gap of `p`.
    pub fn leibniz_over_i(&self, p: &FinMap) -> Result<LeibnizData> {
        let (a, x) = (p.dom(), p.cod());
        let sq = self.points.product(&self.points);
        let pi1 = FinMap::from_fn(sq.clone(), self.points.clone(), |e| e.fst().cloned())?;
        let diag = FinMap::from_fn(self.points.clone(), sq, |i| {
            Ok(Value::pair(i.clone(), i.clone()))
        })?;
        let generic = SliceMap::new(
            SliceObj::terminal(&self.points),
            SliceObj::new(pi1),
            diag,
        )?;
        let restrict: NatCell = exp_action(&generic)?;
        let pulled = |s: &FinSet| self.bang.star.obj(&SliceObj::over_terminal(s));
        let (a_i, x_i) = (pulled(a)?, pulled(x)?);
        let p_i = self.bang.star.map(&crate::mates::over_terminal(p))?;
        let top = restrict.at(&a_i)?;
        let bottom = restrict.at(&x_i)?;
        let left = restrict.src().map(&p_i)?;
        let right = restrict.tgt().map(&p_i)?;
        let pb = kernel::pullback(bottom.arrow(), right.arrow())?;
        let leibniz = FinMap::from_fn(top.src().carrier().clone(), pb.object.clone(), |w| {
            Ok(Value::pair(
                left.arrow().apply(w)?.clone(),
                top.arrow().apply(w)?.clone(),
            ))
        })?;
        let gap = self.gap(p);
        let dom_iso = FinMap::from_fn(
            gap.domain_obj.clone(),
            top.src().carrier().clone(),
            |e| self.spread_path(e),
        )?;
        let cod_iso = FinMap::from_fn(gap.a_eps.clone(), pb.object.clone(), |e| {
            let (u, av) = (e.fst()?, e.snd()?);
            let i = u.snd()?;
            let fiber = Value::pair(
                i.clone(),
                Value::table([(
                    i.clone(),
                    Value::pair(i.clone(), Value::pair(i.clone(), av.clone())),
                )])?,
            );
            Ok(Value::pair(self.spread_path(u)?, fiber))
        })?;
        Ok(LeibnizData {
            leibniz,
            dom_iso,
            cod_iso,
            gap,
        })
    }

    /// `(t, i) ↦ (i, [(i, j) => ((i, j), (i, t(j)))])`, a path as a section
    /// of the first projection of `I × I` over `I`.
    fn spread_path(&self, e: &Value) -> Result<Value> {
        let (t, i) = (e.fst()?, e.snd()?);
        let entries = self
            .points
            .iter()
            .map(|j| {
                let ij = Value::pair(i.clone(), j.clone());
                Ok((
                    ij.clone(),
                    Value::pair(ij, Value::pair(i.clone(), t.lookup(j)?.clone())),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::pair(i.clone(), Value::table(entries)?))
    }

    /// For a pullback `(p', g)` of `p` along `f: Y → X`, the square of
    /// gap maps `δ⇒p' → δ⇒p` with its comparison into the pullback of
    /// `A_ε` along `(X')^I × I → X^I × I`.
    pub fn gap_square(&self, f: &FinMap, p: &FinMap) -> Result<GapSquare> {
        let pb = kernel::pullback(f, p)?;
        let (p_small, g) = (pb.pr1, pb.pr2);
        let small = self.gap(&p_small);
        let big = self.gap(p);
        let top = self.path_space_map(&g);
        let bottom = FinMap::from_fn(small.a_eps.clone(), big.a_eps.clone(), |e| {
            let (u, a) = (e.fst()?, e.snd()?);
            Ok(Value::pair(
                Value::pair(push_path(f, u.fst()?)?, u.snd()?.clone()),
                g.apply(a)?.clone(),
            ))
        })?;
        Ok(GapSquare {
            pullback_map: g,
            small,
            big,
            top,
            bottom,
        })
    }
}

/// `(t, i)` post-composed with `f` on the path.
fn push_path(f: &FinMap, t: &Value) -> Result<Value> {
    let entries = t
        .entries()?
        .iter()
        .map(|(i, v)| Ok((i.clone(), f.apply(v)?.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Value::table_sorted(entries))
}

/// `t ↦ ((), [i => (i, t(i))])`, a path as a section of `!^* X` over `I`.
fn pack_path(t: &Value) -> Result<Value> {
    let entries = t
        .entries()?
        .iter()
        .map(|(i, v)| (i.clone(), Value::pair(i.clone(), v.clone())))
        .collect();
    Ok(Value::pair(Value::Unit, Value::table_sorted(entries)))
}

/// The pullback of `p` along `ε` and the map into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapData {
    pub p: FinMap,
    pub domain_obj: FinSet,
    pub a_eps: FinSet,
    pub gap: FinMap,
    pub eps_star_p: FinMap,
    pub p_star_eps: FinMap,
}

impl GapData {
    /// The gap as a map over `X^I × I`.
    pub fn as_slice_map(&self, ctx: &IntervalCtx) -> SliceMap {
        SliceMap::new(
            ctx.path_obj(&self.p),
            SliceObj::new(self.eps_star_p.clone()),
            self.gap.clone(),
        )
        .expect("the gap commutes over the path space")
    }

    /// Both legs of the outer cone factor through the gap.
    pub fn legs_commute(&self, ctx: &IntervalCtx) -> bool {
        let down = compose(&self.eps_star_p, &self.gap).ok();
        let across = compose(&self.p_star_eps, &self.gap).ok();
        down.as_ref() == Some(&ctx.path_space_map(&self.p))
            && across.as_ref() == Some(&ctx.epsilon(self.p.dom()))
    }
}

#[derive(Clone, Debug)]
pub struct CategoricalPaths {
    /// `X^I × I → !^* !_* !^* X`
    pub path_cmp: FinMap,
    /// `X^I → !_* !^* X`
    pub paths_cmp: FinMap,
    pub varpi: FinMap,
    pub epsilon: FinMap,
}

#[derive(Clone, Debug)]
pub struct LeibnizData {
    pub leibniz: FinMap,
    pub dom_iso: FinMap,
    pub cod_iso: FinMap,
    pub gap: GapData,
}

impl LeibnizData {
    /// `cod_iso ∘ gap = leibniz ∘ dom_iso` with both comparisons bijective.
    pub fn commutes(&self) -> bool {
        self.dom_iso.is_bijective()
            && self.cod_iso.is_bijective()
            && compose(&self.cod_iso, &self.gap.gap).ok() == compose(&self.leibniz, &self.dom_iso).ok()
    }
}

/// The square of gap maps induced by pulling `p` back along `f`.
#[derive(Clone, Debug)]
pub struct GapSquare {
    /// `g: A' → A`
    pub pullback_map: FinMap,
    pub small: GapData,
    pub big: GapData,
    /// `g^I × I`
    pub top: FinMap,
    /// `A'_ε → A_ε`
    pub bottom: FinMap,
}

impl GapSquare {
    pub fn commutes(&self) -> bool {
        compose(&self.big.gap, &self.top).ok() == compose(&self.bottom, &self.small.gap).ok()
    }

    /// The comparison from `A'^I × I` to the pullback of the big gap along
    /// the bottom edge is a bijection.
    pub fn is_pullback(&self) -> bool {
        let Ok(pb) = kernel::pullback(&self.big.gap, &self.bottom) else {
            return false;
        };
        let cmp = FinMap::from_fn(self.small.domain_obj.clone(), pb.object, |e| {
            Ok(Value::pair(
                self.top.apply(e)?.clone(),
                self.small.gap.apply(e)?.clone(),
            ))
        });
        cmp.map(|c| c.is_bijective()).unwrap_or(false)
    }
}
