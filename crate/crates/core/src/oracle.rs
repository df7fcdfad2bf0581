//! The retract diagram written out pointwise, as lambda terms evaluated on
//! elements. Shares no code with the mates machinery, so agreement with
//! [`crate::frobenius`] is evidence rather than tautology.
//!
//! Context variables `x : I → X` and `i : I` are read off each element:
//! every element over the path space starts with `u = (x, i)`.

use crate::error::{Error, Result};
use crate::fibrations::FibWitness;
use crate::interval::IntervalCtx;
use crate::kernel::{compose, FinMap, FinSet, Value};
use crate::slices::{pi, star, SliceObj};

fn fiber<'a>(p: &'a FinMap, x: &'a Value) -> impl Iterator<Item = &'a Value> + 'a {
    p.graph().filter(move |(_, px)| *px == x).map(|(a, _)| a)
}

fn table(entries: Vec<(Value, Value)>) -> Result<Value> {
    Value::table(entries)
}

fn require_over(p: &FinMap, q: &SliceObj) -> Result<()> {
    if q.base() != p.dom() {
        return Err(Error::mismatch("q must live over the domain of p"));
    }
    Ok(())
}

/// The sets and maps every formula needs.
struct Frame {
    ctx: IntervalCtx,
    p: FinMap,
    q: SliceObj,
    pq: SliceObj,
    p_space: FinMap,
}

impl Frame {
    fn new(p: &FinMap, q: &SliceObj, ctx: &IntervalCtx) -> Result<Frame> {
        require_over(p, q)?;
        Ok(Frame {
            ctx: ctx.clone(),
            p: p.clone(),
            q: q.clone(),
            pq: pi(p, q)?,
            p_space: ctx.path_space_map(p),
        })
    }

    /// `(Π_A B)_ε`
    fn pq_eps(&self) -> Result<FinSet> {
        Ok(star(&self.ctx.epsilon(self.p.cod()), &self.pq)?.carrier().clone())
    }

    /// `Π_{A^I×I}(B_ε)`
    fn pi_b_eps(&self) -> Result<FinSet> {
        let b_eps = star(&self.ctx.epsilon(self.p.dom()), &self.q)?;
        Ok(pi(&self.p_space, &b_eps)?.carrier().clone())
    }

    /// `(Π_A B)^I × I`
    fn pq_paths(&self) -> FinSet {
        self.ctx.path_space(self.pq.carrier())
    }

    /// `Π_{A^I×I}(B^I×I)`
    fn pi_b_paths(&self) -> Result<FinSet> {
        Ok(pi(&self.p_space, &self.ctx.path_obj(self.q.disp()))?.carrier().clone())
    }

    /// The points `(ā, i)` of `A^I × I` over `u = (x, i)`.
    fn lifts<'a>(&'a self, u: &'a Value) -> impl Iterator<Item = &'a Value> + 'a {
        fiber(&self.p_space, u)
    }
}

/// `κ(w) = λā̄. w(ā̄(i))`.
pub fn kappa_pt(p: &FinMap, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    let fr = Frame::new(p, q, ctx)?;
    FinMap::from_fn(fr.pq_eps()?, fr.pi_b_eps()?, |e| {
        let (u, w) = (e.fst()?, e.snd()?.snd()?);
        let i = u.snd()?;
        let entries = fr
            .lifts(u)
            .map(|abar| {
                let b = w.lookup(abar.fst()?.lookup(i)?)?;
                Ok((abar.clone(), Value::pair(abar.clone(), b.clone())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::pair(u.clone(), table(entries)?))
    })
}

/// `κ'(v) = λā̄ λj. v(j, ā̄(j))`.
pub fn kappa_prime_pt(p: &FinMap, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    let fr = Frame::new(p, q, ctx)?;
    FinMap::from_fn(fr.pq_paths(), fr.pi_b_paths()?, |e| {
        let (vt, i) = (e.fst()?, e.snd()?);
        let xt = table(
            vt.entries()?
                .iter()
                .map(|(j, v)| Ok((j.clone(), v.fst()?.clone())))
                .collect::<Result<_>>()?,
        )?;
        let u = Value::pair(xt, i.clone());
        let entries = fr
            .lifts(&u)
            .map(|abar| {
                let at = abar.fst()?;
                let bt = table(
                    vt.entries()?
                        .iter()
                        .map(|(j, v)| Ok((j.clone(), v.snd()?.lookup(at.lookup(j)?)?.clone())))
                        .collect::<Result<_>>()?,
                )?;
                Ok((abar.clone(), Value::pair(bt, i.clone())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::pair(u, table(entries)?))
    })
}

/// `s` at the point `a` over `x(j)`, in context `(x, j)`.
fn lift(s: &FinMap, xt: &Value, j: &Value, a: &Value) -> Result<Value> {
    s.apply(&Value::pair(Value::pair(xt.clone(), j.clone()), a.clone()))
        .cloned()
}

/// `τ(g) = λa. g(s(a))`.
pub fn tau_pt(p_wit: &FibWitness, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    let fr = Frame::new(p_wit.p(), q, ctx)?;
    let s = p_wit.section();
    FinMap::from_fn(fr.pi_b_eps()?, fr.pq_eps()?, |e| {
        let (u, g) = (e.fst()?, e.snd()?);
        let (xt, i) = (u.fst()?, u.snd()?);
        let x = xt.lookup(i)?;
        let entries = fiber(&fr.p, x)
            .map(|a| {
                // only the path of s(a) is used; the point is i again
                let path = lift(s, xt, i, a)?.fst()?.clone();
                let b = g.lookup(&Value::pair(path, i.clone()))?.snd()?;
                Ok((a.clone(), b.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::pair(u.clone(), Value::pair(x.clone(), table(entries)?)))
    })
}

/// `τ'(f) = λj λā. f(s(ā), j)`, applying `s` with `i` replaced by `j`.
pub fn tau_prime_pt(p_wit: &FibWitness, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    let fr = Frame::new(p_wit.p(), q, ctx)?;
    let s = p_wit.section();
    FinMap::from_fn(fr.pi_b_paths()?, fr.pq_paths(), |e| {
        let (u, f) = (e.fst()?, e.snd()?);
        let (xt, i) = (u.fst()?, u.snd()?);
        let vt = ctx
            .points()
            .iter()
            .map(|j| {
                let x = xt.lookup(j)?;
                let entries = fiber(&fr.p, x)
                    .map(|a| {
                        let path = lift(s, xt, j, a)?.fst()?.clone();
                        let bt = f.lookup(&Value::pair(path, i.clone()))?.fst()?;
                        Ok((a.clone(), bt.lookup(j)?.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((j.clone(), Value::pair(x.clone(), table(entries)?)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::pair(table(vt)?, i.clone()))
    })
}

/// `λj λā. t(w(s(ā)(i)))(j)`, the section of `δ⇒p_*q` built from sections
/// `s` of `δ⇒p` and `t` of `δ⇒q`.
pub fn section_composite_pt(p_wit: &FibWitness, q_wit: &FibWitness, ctx: &IntervalCtx) -> Result<FinMap> {
    let q = SliceObj::new(q_wit.p().clone());
    let fr = Frame::new(p_wit.p(), &q, ctx)?;
    let (s, t) = (p_wit.section(), q_wit.section());
    FinMap::from_fn(fr.pq_eps()?, fr.pq_paths(), |e| {
        let (u, w) = (e.fst()?, e.snd()?.snd()?);
        let (xt, i) = (u.fst()?, u.snd()?);
        let vt = ctx
            .points()
            .iter()
            .map(|j| {
                let x = xt.lookup(j)?;
                let entries = fiber(&fr.p, x)
                    .map(|a| {
                        let path = lift(s, xt, j, a)?.fst()?.clone();
                        let abar = Value::pair(path.clone(), i.clone());
                        let b = w.lookup(path.lookup(i)?)?;
                        let bt = t.apply(&Value::pair(abar, b.clone()))?.fst()?;
                        Ok((a.clone(), bt.lookup(j)?.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((j.clone(), Value::pair(x.clone(), table(entries)?)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::pair(table(vt)?, i.clone()))
    })
}

/// The stages of the calculation `τ ∘ κ = id`, each as an endomap of
/// `(Π_A B)_ε`:
/// the composite of graphs, `λa. (λā̄. w(ā̄(i)))(s(a))`, `λa. w(s(a)(i))`
/// and `λa. w(a)`.
pub fn tau_kappa_reduction(p_wit: &FibWitness, q: &SliceObj, ctx: &IntervalCtx) -> Result<Vec<FinMap>> {
    let fr = Frame::new(p_wit.p(), q, ctx)?;
    let s = p_wit.section();
    let k = kappa_pt(p_wit.p(), q, ctx)?;
    let composite = compose(&tau_pt(p_wit, q, ctx)?, &k)?;
    let dom = fr.pq_eps()?;
    let stage = |body: &dyn Fn(&Value, &Value, &Value, &Value) -> Result<Value>| {
        FinMap::from_fn(dom.clone(), dom.clone(), |e| {
            let u = e.fst()?;
            let (xt, i) = (u.fst()?, u.snd()?);
            let x = xt.lookup(i)?;
            let entries = fiber(&fr.p, x)
                .map(|a| Ok((a.clone(), body(e, xt, i, a)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Value::pair(u.clone(), Value::pair(x.clone(), table(entries)?)))
        })
    };
    let applied = stage(&|e, xt, i, a| {
        let g = k.apply(e)?.snd()?;
        let path = lift(s, xt, i, a)?.fst()?.clone();
        Ok(g.lookup(&Value::pair(path, i.clone()))?.snd()?.clone())
    })?;
    let reduced = stage(&|e, xt, i, a| {
        let w = e.snd()?.snd()?;
        let path = lift(s, xt, i, a)?.fst()?.clone();
        Ok(w.lookup(path.lookup(i)?)?.clone())
    })?;
    let substituted = stage(&|e, _, _, a| Ok(e.snd()?.snd()?.lookup(a)?.clone()))?;
    Ok(vec![composite, applied, reduced, substituted])
}

/// The bijection exchanging `Π_j Π_ā̄` for `Π_ā̄ Π_j`, from
/// `ϖ^* ϖ_* (p^I×I)_* ε^* q` to `(p^I×I)_* ϖ^* ϖ_* ε^* q`.
pub fn pi_exchange(p: &FinMap, q: &SliceObj, ctx: &IntervalCtx) -> Result<FinMap> {
    let fr = Frame::new(p, q, ctx)?;
    let (a, x) = (p.dom(), p.cod());
    let (varpi_a, varpi_x) = (ctx.varpi(a), ctx.varpi(x));
    let b_eps = star(&ctx.epsilon(a), q)?;
    let src = star(&varpi_x, &pi(&varpi_x, &pi(&fr.p_space, &b_eps)?)?)?;
    let tgt = pi(&fr.p_space, &star(&varpi_a, &pi(&varpi_a, &b_eps)?)?)?;
    FinMap::from_fn(src.carrier().clone(), tgt.carrier().clone(), |e| {
        let (u, outer) = (e.fst()?, e.snd()?);
        let (xt, big) = (outer.fst()?, outer.snd()?);
        let entries = fr
            .lifts(u)
            .map(|abar| {
                let at = abar.fst()?;
                let inner = ctx
                    .points()
                    .iter()
                    .map(|j| {
                        let key = Value::pair(at.clone(), j.clone());
                        let slot = big.lookup(&Value::pair(xt.clone(), j.clone()))?.snd()?;
                        Ok((key.clone(), slot.lookup(&key)?.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let z = Value::pair(at.clone(), table(inner)?);
                Ok((abar.clone(), Value::pair(abar.clone(), z)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::pair(u.clone(), table(entries)?))
    })
}

/// Evaluation at `((ā, j), ...)` agrees on both sides of the exchange, for
/// every element; by extensionality this pins the exchange down uniquely.
pub fn exchange_respects_evaluation(ex: &FinMap, ctx: &IntervalCtx) -> Result<bool> {
    for (e, img) in ex.graph() {
        let (xt, big) = (e.snd()?.fst()?, e.snd()?.snd()?);
        for (abar, z) in img.snd()?.entries()? {
            let at = abar.fst()?;
            for j in ctx.points().iter() {
                let key = Value::pair(at.clone(), j.clone());
                let lhs = big.lookup(&Value::pair(xt.clone(), j.clone()))?.snd()?.lookup(&key)?;
                let rhs = z.snd()?.snd()?.lookup(&key)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
