//! Left-continuous step distance distributions.
//!
//! A `StepFunction` with jumps `(u_1,p_1), ..., (u_n,p_n)` (thresholds and
//! levels both strictly increasing, levels in `(0,1]`) is the function that is
//! `0` on `[0,u_1]`, `p_j` on `(u_j, u_{j+1}]` and `p_n` beyond `u_n`,
//! including at infinity.

use std::fmt;

use super::{Ext, Rational, TNorm};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFunction {
    jumps: Vec<(Rational, Rational)>,
}

impl StepFunction {
    /// The zero function.
    pub fn bottom() -> Self {
        StepFunction { jumps: Vec::new() }
    }

    /// The tensor unit `k`, which is also the top element.
    pub fn unit() -> Self {
        StepFunction { jumps: vec![(Rational::zero(), Rational::one())] }
    }

    /// The single-jump function `π_(u,p)`.
    pub fn pi(u: Rational, p: Rational) -> Result<Self> {
        Self::normalize([(u, p)])
    }

    /// Canonical form of the pointwise supremum of the `π_(u,p)`.
    pub fn normalize(raw: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let raw: Vec<_> = raw.into_iter().collect();
        for (u, p) in &raw {
            if u.is_negative() {
                return Err(Error::Range(format!("negative threshold {u}")));
            }
            if p.is_negative() || *p > Rational::one() {
                return Err(Error::Range(format!("level {p} outside [0,1]")));
            }
        }
        Ok(Self::normalize_unchecked(raw))
    }

    pub(crate) fn normalize_unchecked(mut raw: Vec<(Rational, Rational)>) -> Self {
        raw.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut jumps: Vec<(Rational, Rational)> = Vec::with_capacity(raw.len());
        for (u, p) in raw {
            let floor = jumps.last().map(|j| j.1.clone()).unwrap_or_else(Rational::zero);
            if p > floor {
                jumps.push((u, p));
            }
        }
        StepFunction { jumps }
    }

    pub fn jumps(&self) -> &[(Rational, Rational)] {
        &self.jumps
    }

    pub fn is_bottom(&self) -> bool {
        self.jumps.is_empty()
    }

    /// The value at infinity, i.e. the highest level.
    pub fn top_level(&self) -> Rational {
        self.jumps.last().map(|j| j.1.clone()).unwrap_or_else(Rational::zero)
    }

    /// Value at a finite point `t >= 0`.
    pub fn eval_at(&self, t: &Rational) -> Rational {
        self.jumps
            .iter()
            .take_while(|(u, _)| u < t)
            .last()
            .map(|j| j.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Value at `t ∈ [0,∞]`.
    pub fn eval(&self, t: &Ext) -> Result<Rational> {
        match t {
            Ext::PosInf => Ok(self.top_level()),
            Ext::Fin(r) if !r.is_negative() => Ok(self.eval_at(r)),
            _ => Err(Error::Range(format!("evaluation point {t} outside [0,inf]"))),
        }
    }

    /// The limit from the right at `t`, the value on `(t, t+ε)`.
    pub fn right_limit(&self, t: &Rational) -> Rational {
        self.jumps
            .iter()
            .take_while(|(u, _)| u <= t)
            .last()
            .map(|j| j.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn le(&self, other: &Self) -> bool {
        self.jumps.iter().all(|(u, p)| *p <= other.right_limit(u))
    }

    fn pointwise(&self, other: &Self, pick: impl Fn(Rational, Rational) -> Rational) -> Self {
        let mut cuts: Vec<Rational> =
            self.jumps.iter().chain(other.jumps.iter()).map(|j| j.0.clone()).collect();
        cuts.sort();
        cuts.dedup();
        let raw = cuts
            .into_iter()
            .map(|c| {
                let level = pick(self.right_limit(&c), other.right_limit(&c));
                (c, level)
            })
            .collect();
        Self::normalize_unchecked(raw)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.pointwise(other, Rational::max)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.pointwise(other, Rational::min)
    }

    /// Convolution `(φ⊗ψ)(t) = sup_{r+s≤t} φ(r) & ψ(s)`.
    pub fn tensor(&self, other: &Self, tnorm: TNorm) -> Self {
        let mut raw = Vec::with_capacity(self.jumps.len() * other.jumps.len());
        for (u, p) in &self.jumps {
            for (v, q) in &other.jumps {
                raw.push((u + v, tnorm.apply(p, q)));
            }
        }
        Self::normalize_unchecked(raw)
    }

    /// Residual `φ ⊸ χ`, the largest `ψ` with `φ ⊗ ψ ≤ χ`.
    ///
    /// With `g(s) = min_i p_i ⊸ χ(u_i + s)⁺` the residual is the left-continuous
    /// regularisation of `g`, which only changes at `s = w_j - u_i`.
    pub fn lhom(&self, chi: &Self, tnorm: TNorm) -> Self {
        if self.jumps.is_empty() {
            return Self::unit();
        }
        let mut cuts = vec![Rational::zero()];
        for (u, _) in &self.jumps {
            for (w, _) in &chi.jumps {
                let s = w - u;
                if !s.is_negative() {
                    cuts.push(s);
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        let raw = cuts
            .into_iter()
            .map(|s| {
                let g = self
                    .jumps
                    .iter()
                    .map(|(u, p)| tnorm.residual(p, &chi.right_limit(&(u + &s))))
                    .min()
                    .expect("non-empty");
                (s, g)
            })
            .collect();
        Self::normalize_unchecked(raw)
    }

    /// Parses `[(u1,p1),(u2,p2),...]`; the list need not be canonical.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Range(format!("step function `{s}`: {m}"));
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("expected [...]"))?
            .trim();
        let mut raw = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let r = rest.strip_prefix('(').ok_or_else(|| bad("expected ("))?;
            let close = r.find(')').ok_or_else(|| bad("missing )"))?;
            let (u, p) = r[..close].split_once(',').ok_or_else(|| bad("expected (u,p)"))?;
            let u: Rational = u.trim().parse().map_err(|_| bad("bad threshold"))?;
            let p: Rational = p.trim().parse().map_err(|_| bad("bad level"))?;
            raw.push((u, p));
            rest = r[close + 1..].trim_start();
            if let Some(r2) = rest.strip_prefix(',') {
                rest = r2.trim_start();
                if rest.is_empty() {
                    return Err(bad("trailing comma"));
                }
            } else if !rest.is_empty() {
                return Err(bad("expected ,"));
            }
        }
        Self::normalize(raw)
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (u, p)) in self.jumps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({u},{p})")?;
        }
        write!(f, "]")
    }
}
