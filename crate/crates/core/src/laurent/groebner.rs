//! Buchberger's algorithm over the rationals with optional cofactor
//! tracking.
//!
//! Pairs are processed by the normal selection strategy (smallest lcm
//! degree first, ties by index), with Buchberger's product and chain
//! criteria. The returned basis is reduced, so it is unique for a given
//! ideal and order.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::base::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic, variable 0 largest.
    GrevLex,
    /// Pure lexicographic, variable 0 largest.
    Lex,
    /// Elimination order: grevlex on the first `k` variables, ties broken
    /// by grevlex on the remaining ones.
    Block(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Block(k) => {
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
            }
        }
    }
}

/// Resource limits for Gröbner computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_spairs: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_spairs: 1_000_000,
        }
    }
}

pub type Mono = Vec<u32>;

/// Polynomial over the rationals; terms sorted descending in the ring's
/// monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: Vec<(Mono, Rational)>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_div(b: &[u32], a: &[u32]) -> Mono {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn degree(a: &[u32]) -> u64 {
    a.iter().map(|&e| e as u64).sum()
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: vec![(vec![0; nvars], c)],
        }
    }

    /// Builds from unsorted terms, combining duplicates.
    pub fn from_terms(mut terms: Vec<(Mono, Rational)>, ord: MonomialOrder) -> Self {
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut out: Vec<(Mono, Rational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    pub fn add(&self, other: &Poly, ord: MonomialOrder) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match ord.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    /// `c * x^shift * self`; monomial orders are multiplicative, so the
    /// result stays sorted.
    pub fn mul_term(&self, shift: &[u32], c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (mono_mul(m, shift), d * c))
                .collect(),
        }
    }

    /// `self - c * x^shift * g`
    fn sub_mul_term(&self, g: &Poly, shift: &[u32], c: &Rational, ord: MonomialOrder) -> Poly {
        self.add(&g.mul_term(shift, &-c), ord)
    }

    pub fn mul(&self, other: &Poly, ord: MonomialOrder) -> Poly {
        let mut acc = Poly::zero();
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c), ord);
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lc().recip())
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(m, _)| degree(m)).max().unwrap_or(0)
    }
}

/// Division of `f` by `divisors`: returns (remainder, quotients). The
/// remainder has no term divisible by a leading monomial of a divisor.
pub fn reduce_full(f: &Poly, divisors: &[Poly], ord: MonomialOrder, want_quotients: bool) -> (Poly, Vec<Poly>) {
    let mut quot: Vec<Vec<(Mono, Rational)>> = vec![Vec::new(); divisors.len()];
    let mut p = f.clone();
    let mut rem: Vec<(Mono, Rational)> = Vec::new();
    while !p.is_zero() {
        let (m, c) = p.terms[0].clone();
        let hit = divisors
            .iter()
            .position(|g| !g.is_zero() && divides(g.lm(), &m));
        match hit {
            Some(k) => {
                let g = &divisors[k];
                let shift = mono_div(&m, g.lm());
                let q = &c / g.lc();
                p = p.sub_mul_term(g, &shift, &q, ord);
                if want_quotients {
                    quot[k].push((shift, q));
                }
            }
            None => {
                rem.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    let quots = quot
        .into_iter()
        .map(|t| Poly::from_terms(t, ord))
        .collect();
    (Poly { terms: rem }, quots)
}

/// A reduced Gröbner basis, optionally with each element written as a
/// combination of the input generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    ngens: usize,
    polys: Vec<Poly>,
    reps: Option<Vec<Vec<Poly>>>,
    spairs: u64,
}

fn combine(reps: &[Vec<Poly>], quots: &[Poly], base: Option<&Vec<Poly>>, ngens: usize, ord: MonomialOrder) -> Vec<Poly> {
    let mut out = base.cloned().unwrap_or_else(|| vec![Poly::zero(); ngens]);
    for (q, rep) in quots.iter().zip(reps) {
        if q.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(rep) {
            if !r.is_zero() {
                *o = o.add(&r.mul(q, ord).scale(&-Rational::one()), ord);
            }
        }
    }
    out
}

impl GroebnerBasis {
    pub fn compute(gens: &[Poly], nvars: usize, order: MonomialOrder, track: bool, budget: Budget) -> Result<Self> {
        let ngens = gens.len();
        let mut polys: Vec<Poly> = Vec::new();
        let mut reps: Vec<Vec<Poly>> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let inv = g.lc().recip();
            polys.push(g.scale(&inv));
            if track {
                let mut r = vec![Poly::zero(); ngens];
                r[i] = Poly::constant(nvars, inv);
                reps.push(r);
            }
        }

        let mut pending: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
        let mut pending_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for j in 0..polys.len() {
            for i in 0..j {
                let d = degree(&lcm(polys[i].lm(), polys[j].lm()));
                pending.insert((d, j, i));
                pending_pairs.insert((i, j));
            }
        }

        let mut spairs = 0u64;
        while let Some(&(d, j, i)) = pending.iter().next() {
            pending.remove(&(d, j, i));
            pending_pairs.remove(&(i, j));
            let (li, lj) = (polys[i].lm().to_vec(), polys[j].lm().to_vec());
            let l = lcm(&li, &lj);
            // Product criterion.
            if l == mono_mul(&li, &lj) {
                continue;
            }
            // Chain criterion.
            let chain = (0..polys.len()).any(|k| {
                k != i
                    && k != j
                    && divides(polys[k].lm(), &l)
                    && !pending_pairs.contains(&(i.min(k), i.max(k)))
                    && !pending_pairs.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            spairs += 1;
            if spairs > budget.max_spairs {
                return Err(Error::Budget(format!(
                    "more than {} S-polynomial reductions",
                    budget.max_spairs
                )));
            }
            let si = mono_div(&l, &li);
            let sj = mono_div(&l, &lj);
            let s = polys[i]
                .mul_term(&si, &Rational::one())
                .sub_mul_term(&polys[j], &sj, &Rational::one(), order);
            let (r, quots) = reduce_full(&s, &polys, order, track);
            if r.is_zero() {
                continue;
            }
            let inv = r.lc().recip();
            let new = r.scale(&inv);
            if track {
                let mut srep = vec![Poly::zero(); ngens];
                for (k, shift, sign) in [(i, &si, Rational::one()), (j, &sj, -Rational::one())] {
                    for (o, rk) in srep.iter_mut().zip(&reps[k]) {
                        if !rk.is_zero() {
                            *o = o.add(&rk.mul_term(shift, &sign), order);
                        }
                    }
                }
                let rrep = combine(&reps, &quots, Some(&srep), ngens, order);
                reps.push(rrep.iter().map(|p| p.scale(&inv)).collect());
            }
            let n = polys.len();
            polys.push(new);
            for k in 0..n {
                let d = degree(&lcm(polys[k].lm(), polys[n].lm()));
                pending.insert((d, n, k));
                pending_pairs.insert((k, n));
            }
        }

        let mut gb = GroebnerBasis {
            nvars,
            order,
            ngens,
            polys,
            reps: track.then_some(reps),
            spairs,
        };
        gb.interreduce();
        Ok(gb)
    }

    fn interreduce(&mut self) {
        let n = self.polys.len();
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..n {
            let redundant = (0..n).any(|j| {
                j != i
                    && divides(self.polys[j].lm(), self.polys[i].lm())
                    && (self.polys[j].lm() != self.polys[i].lm() || j < i)
            });
            if !redundant {
                keep.push(i);
            }
        }
        let mut polys: Vec<Poly> = keep.iter().map(|&i| self.polys[i].clone()).collect();
        let mut reps: Option<Vec<Vec<Poly>>> = self
            .reps
            .as_ref()
            .map(|r| keep.iter().map(|&i| r[i].clone()).collect());
        for k in 0..polys.len() {
            let others: Vec<Poly> = polys
                .iter()
                .enumerate()
                .map(|(j, p)| if j == k { Poly::zero() } else { p.clone() })
                .collect();
            let (r, quots) = reduce_full(&polys[k], &others, self.order, reps.is_some());
            let inv = r.lc().recip();
            if let Some(reps) = reps.as_mut() {
                let nr = combine(reps, &quots, Some(&reps[k]), self.ngens, self.order);
                reps[k] = nr.iter().map(|p| p.scale(&inv)).collect();
            }
            polys[k] = r.scale(&inv);
        }
        // Descending by leading monomial for a canonical presentation.
        let mut idx: Vec<usize> = (0..polys.len()).collect();
        idx.sort_by(|&a, &b| self.order.cmp(polys[b].lm(), polys[a].lm()));
        self.polys = idx.iter().map(|&i| polys[i].clone()).collect();
        self.reps = reps.map(|r| idx.iter().map(|&i| r[i].clone()).collect());
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn spairs_reduced(&self) -> u64 {
        self.spairs
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].lm().iter().all(|&e| e == 0)
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        reduce_full(f, &self.polys, self.order, false).0
    }

    /// Remainder of `f` and, when the basis tracks representations,
    /// cofactors `c_i` with `f - remainder = sum c_i * gens[i]`.
    pub fn reduce(&self, f: &Poly) -> (Poly, Option<Vec<Poly>>) {
        let (r, quots) = reduce_full(f, &self.polys, self.order, self.reps.is_some());
        let cof = self.reps.as_ref().map(|reps| {
            let neg = combine(reps, &quots, None, self.ngens, self.order);
            neg.iter().map(|p| p.scale(&-Rational::one())).collect()
        });
        (r, cof)
    }
}
